#pragma once

/**
 * f^-k colored noise synthesis and spectral-slope verification.
 *
 * Generation: uniform samples in [-0.5, 0.5] are transformed to the
 * frequency domain, each positive-frequency bin j is scaled by j^(-k/2), the
 * DC bin is zeroed, and the inverse transform of the Hermitian spectrum gives
 * a real series whose power spectrum falls off as f^-k.
 *
 * The base samples come from std::mt19937_64 seeded with NoiseSpec::seed:
 * each 64-bit draw x becomes (x >> 11) * 2^-53 - 0.5. Both the engine and the
 * conversion are fully specified, so a seed reproduces the same series on any
 * conforming standard library.
 */

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "velplane/quantifiers.hpp"

namespace velplane {

inline constexpr std::size_t kMinNoiseLength = 1024;
inline constexpr double kMaxNoiseExponent = 4.0;

struct NoiseSpec {
    double exponent = 0.0;  // k, in [0, 4]
    std::size_t length = 65536;
    std::uint64_t seed = 0;
};

// Uniform [-0.5, 0.5) samples from the documented generator.
std::vector<double> uniform_noise(std::size_t length, std::uint64_t seed);

std::vector<double> generate_fk_noise(const NoiseSpec& spec);

struct Periodogram {
    std::vector<double> frequencies;  // bin index j = 1 .. length/2
    std::vector<double> power;        // |X_j|^2 / length
};

Periodogram periodogram(std::span<const double> series);

// The fit uses bins 1 .. (1 - top_exclusion) * length/2, narrowed to a band
// `decades` wide centred (geometrically) on that range.
struct SlopeBand {
    double decades = 2.0;
    double top_exclusion = 0.10;
};

struct SlopeFit {
    double slope = 0.0;  // d ln P / d ln f, i.e. -k for f^-k noise
    double intercept = 0.0;
    double r_squared = 0.0;
    std::size_t bins = 0;
    // Largest residual exceeds the median residual by more than ln(1e4):
    // a line spectrum, not a power law.
    bool line_dominated = false;

    bool reliable() const { return !line_dominated; }
};

// Least-squares fit of ln power against ln frequency. Throws InputError
// "zero variance" on a constant series and ValidationError when the series
// is shorter than 1024 samples.
SlopeFit spectral_slope(std::span<const double> series, const SlopeBand& band = {});

// One plane point per exponent. Every exponent filters the same base white
// noise (one seed), so the ladder differs only in the spectral filter.
std::vector<PlanePoint> reference_ladder(std::span<const double> exponents, std::size_t length,
                                         std::uint64_t seed, int dimension, int delay = 1);

}  // namespace velplane
