#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace reperio {

using cplx = std::complex<double>;

namespace detail {

inline bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// In-place iterative radix-2 Cooley-Tukey. n must be a power of two.
inline void fft_pow2(std::vector<cplx>& a, bool inverse) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    const double pi = 3.14159265358979323846264338327950288;
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = (inverse ? 2.0 : -2.0) * pi / static_cast<double>(len);
        const cplx wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            cplx w(1.0, 0.0);
            for (std::size_t j = 0; j < len / 2; ++j) {
                const cplx u = a[i + j];
                const cplx v = a[i + j + len / 2] * w;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
    if (inverse) {
        for (auto& x : a) x /= static_cast<double>(n);
    }
}

}  // namespace detail

// DFT of arbitrary length: radix-2 when n is a power of two, otherwise
// Bluestein's chirp-z reduction onto a power-of-two convolution.
inline std::vector<cplx> fft(std::vector<cplx> a, bool inverse = false) {
    const std::size_t n = a.size();
    if (n == 0) throw std::invalid_argument("fft: empty input");
    if (n == 1) return a;
    if (detail::is_pow2(n)) {
        detail::fft_pow2(a, inverse);
        return a;
    }
    const double pi = 3.14159265358979323846264338327950288;
    const double sign = inverse ? 1.0 : -1.0;
    // chirp[k] = exp(sign*i*pi*k^2/n); k^2 taken mod 2n to keep the argument small
    std::vector<cplx> chirp(n);
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t k2 = static_cast<std::size_t>((static_cast<unsigned long long>(k) * k) % (2 * n));
        const double ang = sign * pi * static_cast<double>(k2) / static_cast<double>(n);
        chirp[k] = cplx(std::cos(ang), std::sin(ang));
    }
    std::size_t m = 1;
    while (m < 2 * n - 1) m <<= 1;
    std::vector<cplx> u(m, cplx(0.0, 0.0)), v(m, cplx(0.0, 0.0));
    for (std::size_t k = 0; k < n; ++k) u[k] = a[k] * chirp[k];
    for (std::size_t k = 0; k < n; ++k) {
        v[k] = std::conj(chirp[k]);
        if (k != 0) v[m - k] = std::conj(chirp[k]);
    }
    detail::fft_pow2(u, false);
    detail::fft_pow2(v, false);
    for (std::size_t k = 0; k < m; ++k) u[k] *= v[k];
    detail::fft_pow2(u, true);
    std::vector<cplx> out(n);
    for (std::size_t k = 0; k < n; ++k) out[k] = u[k] * chirp[k];
    if (inverse) {
        for (auto& x : out) x /= static_cast<double>(n);
    }
    return out;
}

inline std::vector<cplx> ifft(std::vector<cplx> a) { return fft(std::move(a), true); }

// DFT of a real signal, optionally zero-padded to n_bins >= x.size().
inline std::vector<cplx> fft_real(const std::vector<double>& x, std::size_t n_bins = 0) {
    if (n_bins == 0) n_bins = x.size();
    if (n_bins < x.size()) throw std::invalid_argument("fft_real: n_bins < signal length");
    std::vector<cplx> a(n_bins, cplx(0.0, 0.0));
    for (std::size_t i = 0; i < x.size(); ++i) a[i] = cplx(x[i], 0.0);
    return fft(std::move(a));
}

}  // namespace reperio
