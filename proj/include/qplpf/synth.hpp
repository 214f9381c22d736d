#pragma once

#include <cstdint>
#include <vector>

#include "qplpf/types.hpp"

namespace qplpf {

/// Counter-style generator behind all pseudo-randomness in this project:
/// the k-th draw is a fixed mix of (seed + (k+1) * 0x9E3779B97F4A7C15),
/// so sequences are reproducible across platforms and languages.
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1), 53-bit resolution.
    double next_double() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }
};

/// Linear FM chirp sin((2*pi/5) * t * (t+1)) sampled at fs from 0 to t_end
/// inclusive. Instantaneous frequency (2t+1)/5 Hz stays below fs/2 for the
/// defaults (max 4.2 Hz vs 25 Hz), so the default sampling is alias-free.
SampleSeries lfm_chirp(double fs = 50.0, double t_end = 10.0);

/// sin(2*pi*(i mod p)/p): repeats are bit-identical, so every phase class
/// holds exactly n_periods equal samples.
SampleSeries periodic_sine(std::size_t period_samples, std::size_t n_periods);

/// Gaussian(0, sigma^2) samples via Box-Muller over SplitMix64. The pair
/// (g1, g2) = sqrt(-2 ln(1-u1)) * (cos, sin)(2*pi*u2) consumes two draws.
std::vector<double> awgn(std::size_t n, const NoiseSpec& spec);

/// sigma for a target SNR in dB, with SNR = mean signal power / noise variance.
double snr_to_sigma(double snr_db, double signal_power);

/// sin(2*pi*(a*x + b*y + c/2*(x^2+y^2))): a phase-warped, genuinely
/// quasiperiodic 2-D pattern (exactly doubly periodic when c = 0).
GridImage warped_sine_image(int width, int height, double a, double b, double c);

double mean_power(const std::vector<double>& values);

} // namespace qplpf
