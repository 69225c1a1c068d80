#pragma once

/**
 * Bandt-Pompe symbolization.
 *
 * A window of D samples (taken with delay tau) is replaced by its rank
 * vector: ranks[i] is the position of sample i in ascending order. Equal
 * samples are ranked by time, the earlier one receiving the lower rank, so
 * a constant window maps to the identity pattern 0,1,...,D-1.
 *
 * Each of the D! rank vectors has a canonical index, its Lehmer code, which
 * is 0 for the identity and D!-1 for the reversed pattern.
 */

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace velplane {

inline constexpr int kMinDimension = 2;
inline constexpr int kMaxDimension = 9;

std::uint64_t factorial(int n);

class OrdinalPattern {
public:
    // Throws ValidationError unless ranks is a permutation of 0..D-1, 2 <= D <= 9.
    explicit OrdinalPattern(std::vector<int> ranks);

    static OrdinalPattern from_index(int dimension, std::uint64_t index);

    int dimension() const { return static_cast<int>(ranks_.size()); }
    const std::vector<int>& ranks() const { return ranks_; }
    std::uint64_t index() const;

    // Rank digits in chronological order, e.g. "0123" or "3210".
    std::string label() const;

    bool operator==(const OrdinalPattern&) const = default;

private:
    std::vector<int> ranks_;
};

// Rank vector of a window (stable tie rule). Throws ValidationError on a
// non-finite sample or when window.size() != dimension.
OrdinalPattern pattern_of_window(std::span<const double> window, int dimension);

// Same as pattern_of_window(window, window.size()).
OrdinalPattern pattern_of_window(std::span<const double> window);

class OrdinalDistribution {
public:
    OrdinalDistribution(int dimension, int delay, std::vector<std::uint64_t> counts);

    int dimension() const { return dimension_; }
    int delay() const { return delay_; }
    std::size_t cells() const { return counts_.size(); }
    const std::vector<std::uint64_t>& counts() const { return counts_; }
    std::uint64_t total_windows() const { return total_; }

    // p(pi) = counts[pi] / total_windows, indexed by Lehmer code.
    std::vector<double> probabilities() const;
    double probability(std::uint64_t index) const;

    // False when fewer than 100 * D! windows were counted; the estimate is
    // still returned but callers should warn.
    bool sampling_adequate() const;

    bool operator==(const OrdinalDistribution&) const = default;

private:
    int dimension_;
    int delay_;
    std::vector<std::uint64_t> counts_;
    std::uint64_t total_ = 0;
};

// Counts ordinal patterns over all M - (D-1)*tau overlapping windows.
// Throws ValidationError when D is outside [2, 9], tau < 1, the series is
// shorter than (D-1)*tau + 1, or a sample is non-finite.
OrdinalDistribution ordinal_distribution(std::span<const double> series, int dimension, int delay = 1);

}  // namespace velplane
