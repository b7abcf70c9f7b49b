#pragma once

// Radix-2 FFT and real-signal Fourier analysis on uniform periodic grids.
// For smooth periodic data the trapezoid/DFT coefficients are spectrally
// accurate, which is the precision backbone of the geometry modules.

#include <complex>
#include <cstddef>
#include <vector>

#include "caustic/errors.hpp"

namespace caustic {

inline bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

// In-place iterative Cooley-Tukey, decimation in time. sign=-1 forward.
inline void fft_inplace(std::vector<std::complex<double>>& a, int sign) {
    const std::size_t n = a.size();
    if (!is_pow2(n)) throw domain_error("fft size must be a power of two");
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    const double pi = 3.14159265358979323846264338327950288;
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = sign * 2 * pi / static_cast<double>(len);
        const std::complex<double> wl(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t j = 0; j < len / 2; ++j) {
                const std::complex<double> u = a[i + j];
                const std::complex<double> v = a[i + j + len / 2] * w;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
                w *= wl;
            }
        }
    }
    if (sign > 0) {
        for (auto& z : a) z /= static_cast<double>(n);
    }
}

// Real Fourier coefficients of samples f(2*pi*i/N), i = 0..N-1:
//   f ~ mean + sum_{k=1}^{K} a_k cos(k t) + b_k sin(k t).
struct RealSpectrum {
    double mean = 0;
    std::vector<double> a;  // cosine, index k-1
    std::vector<double> b;  // sine, index k-1
    int harmonics() const { return static_cast<int>(a.size()); }
};

inline RealSpectrum analyze_real(const std::vector<double>& samples, int K) {
    const std::size_t n = samples.size();
    if (!is_pow2(n)) throw domain_error("sample count must be a power of two");
    if (K < 0 || static_cast<std::size_t>(2 * K) >= n)
        throw domain_error("requested harmonics exceed Nyquist");
    std::vector<std::complex<double>> buf(n);
    for (std::size_t i = 0; i < n; ++i) buf[i] = samples[i];
    fft_inplace(buf, -1);
    RealSpectrum s;
    s.mean = buf[0].real() / static_cast<double>(n);
    s.a.resize(K);
    s.b.resize(K);
    for (int k = 1; k <= K; ++k) {
        s.a[k - 1] = 2.0 * buf[k].real() / static_cast<double>(n);
        s.b[k - 1] = -2.0 * buf[k].imag() / static_cast<double>(n);
    }
    return s;
}

}  // namespace caustic
