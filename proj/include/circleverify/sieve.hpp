// sieve.hpp
// PrimeTable: segmented sieve of Eratosthenes over odd numbers with packed
// bits (1 bit per odd integer, 2 special-cased), plus the von Mangoldt
// weight Lambda(n) with exact prime-power detection, and a checksummed
// binary dump/load of the primality array.
//
// Encoding: bit i <-> odd number 2i+1; bit 0 (the number 1) is cleared.
// After construction the table is immutable; all queries are read-only.

#pragma once

#include <algorithm>
#include <cstring>
#include <istream>
#include <ostream>
#include <vector>

#include "circleverify/common.hpp"

namespace circleverify {

class PrimeTable {
public:
    PrimeTable() = default;

    uint64_t limit() const { return limit_; }
    const std::vector<uint64_t>& primes() const { return primes_; }
    const std::vector<uint64_t>& bit_words() const { return bits_; }

    bool is_prime(uint64_t n) const {
        if (n > limit_)
            throw std::out_of_range("PrimeTable::is_prime: n=" + std::to_string(n) +
                                    " exceeds table limit " + std::to_string(limit_));
        if (n < 3) return n == 2;
        if ((n & 1) == 0) return false;
        uint64_t i = (n - 1) / 2;
        return (bits_[i >> 6] >> (i & 63)) & 1;
    }

    // Binary format, little-endian:
    //   "CVPT" | u32 version | u64 limit | packed odd-bit words | u64 FNV-1a
    // The checksum covers everything before it.
    void dump(std::ostream& out) const {
        std::vector<unsigned char> buf;
        buf.reserve(16 + bits_.size() * 8);
        append_bytes(buf, "CVPT", 4);
        append_u32(buf, kFormatVersion);
        append_u64(buf, limit_);
        for (uint64_t w : bits_) append_u64(buf, w);
        uint64_t checksum = fnv1a64(buf.data(), buf.size());
        append_u64(buf, checksum);
        out.write(reinterpret_cast<const char*>(buf.data()),
                  static_cast<std::streamsize>(buf.size()));
    }

    static PrimeTable load(std::istream& in) {
        std::vector<unsigned char> buf((std::istreambuf_iterator<char>(in)),
                                       std::istreambuf_iterator<char>());
        if (buf.size() < 24 || std::memcmp(buf.data(), "CVPT", 4) != 0)
            throw std::invalid_argument("PrimeTable::load: bad magic or truncated file");
        uint64_t stored = read_u64(buf.data() + buf.size() - 8);
        if (fnv1a64(buf.data(), buf.size() - 8) != stored)
            throw std::invalid_argument("PrimeTable::load: checksum mismatch");
        uint32_t version = read_u32(buf.data() + 4);
        if (version != kFormatVersion)
            throw std::invalid_argument("PrimeTable::load: unsupported version " +
                                        std::to_string(version));
        PrimeTable t;
        t.limit_ = read_u64(buf.data() + 8);
        size_t nwords = (buf.size() - 24) / 8;
        if (nwords != word_count(t.limit_))
            throw std::invalid_argument("PrimeTable::load: payload size inconsistent with limit");
        t.bits_.resize(nwords);
        for (size_t i = 0; i < nwords; ++i) t.bits_[i] = read_u64(buf.data() + 16 + 8 * i);
        t.collect_primes();
        return t;
    }

private:
    static constexpr uint32_t kFormatVersion = 1;

    static size_t word_count(uint64_t limit) {
        uint64_t nbits = limit >= 1 ? (limit + 1) / 2 : 0;  // odd numbers <= limit
        return static_cast<size_t>((nbits + 63) / 64);
    }

    void clear_bit(uint64_t n) {  // n odd
        uint64_t i = (n - 1) / 2;
        bits_[i >> 6] &= ~(uint64_t{1} << (i & 63));
    }

    void collect_primes() {
        primes_.clear();
        if (limit_ >= 2) primes_.push_back(2);
        for (uint64_t n = 3; n <= limit_; n += 2) {
            uint64_t i = (n - 1) / 2;
            if ((bits_[i >> 6] >> (i & 63)) & 1) primes_.push_back(n);
        }
    }

    static void append_bytes(std::vector<unsigned char>& buf, const char* p, size_t k) {
        buf.insert(buf.end(), p, p + k);
    }
    static void append_u32(std::vector<unsigned char>& buf, uint32_t v) {
        for (int i = 0; i < 4; ++i) buf.push_back(static_cast<unsigned char>(v >> (8 * i)));
    }
    static void append_u64(std::vector<unsigned char>& buf, uint64_t v) {
        for (int i = 0; i < 8; ++i) buf.push_back(static_cast<unsigned char>(v >> (8 * i)));
    }
    static uint32_t read_u32(const unsigned char* p) {
        uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(p[i]) << (8 * i);
        return v;
    }
    static uint64_t read_u64(const unsigned char* p) {
        uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(p[i]) << (8 * i);
        return v;
    }

    uint64_t limit_ = 0;
    std::vector<uint64_t> bits_;
    std::vector<uint64_t> primes_;

    friend PrimeTable build_prime_table(uint64_t, size_t);
};

// Builds the table by sieving odd numbers in cache-sized blocks. The result
// is bit-identical for every segment size (tested), so the size is purely a
// locality knob.
inline PrimeTable build_prime_table(uint64_t limit, size_t segment_bytes = size_t{1} << 18) {
    if (limit < 2) throw std::invalid_argument("build_prime_table: limit must be >= 2");
    if (segment_bytes < 64) segment_bytes = 64;

    PrimeTable t;
    t.limit_ = limit;
    t.bits_.assign(PrimeTable::word_count(limit), ~uint64_t{0});
    t.clear_bit(1);

    // Base primes up to sqrt(limit) by a plain odd sieve.
    uint64_t root = isqrt(limit);
    std::vector<uint64_t> base;
    {
        std::vector<char> mark(root + 1, 1);
        for (uint64_t p = 3; p * p <= root; p += 2)
            if (mark[p])
                for (uint64_t m = p * p; m <= root; m += 2 * p) mark[m] = 0;
        for (uint64_t p = 3; p <= root; p += 2)
            if (mark[p]) base.push_back(p);
    }

    // Sieve the packed bit array one block of words at a time.
    size_t words_per_segment = std::max<size_t>(segment_bytes / 8, 1);
    size_t nwords = t.bits_.size();
    for (size_t w0 = 0; w0 < nwords; w0 += words_per_segment) {
        size_t w1 = std::min(w0 + words_per_segment, nwords);
        uint64_t lo = 2 * (uint64_t{w0} * 64) + 1;       // first odd number in block
        uint64_t hi = 2 * (uint64_t{w1} * 64 - 1) + 1;   // last odd number in block
        if (hi > limit) hi = limit | 1;
        for (uint64_t p : base) {
            if (p * p > hi) break;
            uint64_t start = std::max(p * p, ((lo + p - 1) / p) * p);
            if ((start & 1) == 0) start += p;  // odd multiples only
            for (uint64_t m = start; m <= hi && m >= start; m += 2 * p) t.clear_bit(m);
        }
    }
    // Bits beyond `limit` in the last word are meaningless; clear them so
    // dumps are canonical.
    uint64_t nbits = (limit + 1) / 2;
    if (nbits % 64 != 0) t.bits_.back() &= (uint64_t{1} << (nbits % 64)) - 1;

    t.collect_primes();
    return t;
}

// Lambda(n) = log p when n = p^k (p prime, k >= 1), else 0. Prime powers are
// detected by exact integer k-th roots, never by rounding floating-point
// roots.
inline double von_mangoldt(const PrimeTable& table, uint64_t n) {
    if (n < 2 || n > table.limit())
        throw std::out_of_range("von_mangoldt: n=" + std::to_string(n) +
                                " outside [2, " + std::to_string(table.limit()) + "]");
    if (table.is_prime(n)) return std::log(static_cast<double>(n));
    for (unsigned k = 2; (uint64_t{1} << k) <= n; ++k) {
        uint64_t r = ikroot(n, k);
        if (pow_sat(r, k) == n && table.is_prime(r))
            return std::log(static_cast<double>(r));
    }
    return 0.0;
}

}  // namespace circleverify
