// fft.hpp
// Iterative radix-2 complex FFT for power-of-two sizes, with a per-call
// twiddle table computed from cos/sin (no cumulative rotation drift).

#pragma once

#include <vector>

#include "circleverify/common.hpp"

namespace circleverify {

inline size_t next_pow2(size_t n) {
    size_t m = 1;
    while (m < n) m <<= 1;
    return m;
}

inline void fft_inplace(std::vector<cdouble>& a, bool inverse) {
    const size_t n = a.size();
    if (n <= 1) return;
    if ((n & (n - 1)) != 0)
        throw std::invalid_argument("fft_inplace: size must be a power of two");

    for (size_t i = 1, j = 0; i < n; ++i) {
        size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }

    std::vector<cdouble> twiddle(n / 2);
    const double sign = inverse ? 1.0 : -1.0;
    for (size_t k = 0; k < n / 2; ++k) {
        double t = sign * kTwoPi * static_cast<double>(k) / static_cast<double>(n);
        twiddle[k] = {std::cos(t), std::sin(t)};
    }

    for (size_t len = 2; len <= n; len <<= 1) {
        size_t step = n / len;
        for (size_t i = 0; i < n; i += len) {
            for (size_t k = 0; k < len / 2; ++k) {
                cdouble u = a[i + k];
                cdouble v = a[i + k + len / 2] * twiddle[k * step];
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
            }
        }
    }

    if (inverse) {
        double inv = 1.0 / static_cast<double>(n);
        for (auto& x : a) x *= inv;
    }
}

// c = a (*) b, linear convolution via FFT; result size a.size()+b.size()-1
inline std::vector<cdouble> fft_convolve(std::vector<cdouble> a, std::vector<cdouble> b) {
    size_t out = a.size() + b.size() - 1;
    size_t m = next_pow2(out);
    a.resize(m);
    b.resize(m);
    fft_inplace(a, false);
    fft_inplace(b, false);
    for (size_t i = 0; i < m; ++i) a[i] *= b[i];
    fft_inplace(a, true);
    a.resize(out);
    return a;
}

}  // namespace circleverify
