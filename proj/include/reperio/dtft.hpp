#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

namespace reperio {

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kTwoPi = 2.0 * kPi;

// Threshold for the removable singularity of the Dirichlet-style closed
// forms below: at omega = 2*pi*k the quotient sin(n*w/2)/sin(w/2) is replaced
// by its limit, which keeps both functions exact at DFT bins.
inline constexpr double kSingularSin = 1e-12;

// Closed form of sum_{t=1..T} e^{-i w t}. Limit T at w = 0 (mod 2*pi).
inline std::complex<double> dtft_U(int T, double omega) {
    if (T < 1) throw std::invalid_argument("dtft_U: T must be >= 1");
    const double half = 0.5 * omega;
    if (std::abs(std::sin(half)) < kSingularSin) {
        return {static_cast<double>(T), 0.0};
    }
    const double mag = std::sin(static_cast<double>(T) * half) / std::sin(half);
    const double phase = -omega * (static_cast<double>(T) + 1.0) / 2.0;
    return std::polar(mag, phase);
}

// Closed form of sum_{t=s..s+L-1} e^{-i w t}. Limit L at w = 0 (mod 2*pi).
inline std::complex<double> dtft_W(int s, int L, double omega) {
    if (s < 1) throw std::invalid_argument("dtft_W: s must be >= 1");
    if (L < 1) throw std::invalid_argument("dtft_W: L must be >= 1");
    const double half = 0.5 * omega;
    if (std::abs(std::sin(half)) < kSingularSin) {
        return {static_cast<double>(L), 0.0};
    }
    const double mag = std::sin(static_cast<double>(L) * half) / std::sin(half);
    const double phase = -omega * (2.0 * s + L - 1.0) / 2.0;
    return std::polar(mag, phase);
}

// One-sided spectrum sampled on an ascending frequency grid.
struct Spectrum {
    std::vector<double> freqs_hz;
    std::vector<double> magnitudes;
    std::vector<std::complex<double>> complex_values;

    Spectrum(std::vector<double> f, std::vector<std::complex<double>> v)
        : freqs_hz(std::move(f)), complex_values(std::move(v)) {
        if (freqs_hz.size() != complex_values.size())
            throw std::invalid_argument("Spectrum: freqs/values size mismatch");
        for (std::size_t k = 1; k < freqs_hz.size(); ++k) {
            if (!(freqs_hz[k] > freqs_hz[k - 1]))
                throw std::invalid_argument("Spectrum: freqs must be strictly increasing");
        }
        magnitudes.reserve(complex_values.size());
        for (const auto& c : complex_values) magnitudes.push_back(std::abs(c));
    }
};

}  // namespace reperio
