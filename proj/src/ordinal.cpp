#include "velplane/ordinal.hpp"

#include <array>
#include <cmath>
#include <numeric>
#include <string>

#include "velplane/errors.hpp"

namespace velplane {

namespace {

void check_dimension(int dimension) {
    if (dimension < kMinDimension || dimension > kMaxDimension) {
        throw ValidationError("embedding dimension must be in [2, 9], got " + std::to_string(dimension));
    }
}

// Stable ranks of D samples read at x[0], x[stride], ..., x[(D-1)*stride].
template <typename Ranks>
void rank_window(const double* x, std::size_t stride, int dimension, Ranks& ranks) {
    for (int i = 0; i < dimension; ++i) {
        const double xi = x[i * stride];
        int r = 0;
        for (int j = 0; j < dimension; ++j) {
            const double xj = x[j * stride];
            if (xj < xi || (xj == xi && j < i)) ++r;
        }
        ranks[i] = r;
    }
}

template <typename Ranks>
std::uint64_t lehmer_code(const Ranks& ranks, int dimension) {
    std::uint64_t code = 0;
    for (int i = 0; i < dimension; ++i) {
        std::uint64_t smaller = 0;
        for (int j = i + 1; j < dimension; ++j) {
            if (ranks[j] < ranks[i]) ++smaller;
        }
        code = code * static_cast<std::uint64_t>(dimension - i) + smaller;
    }
    return code;
}

}  // namespace

std::uint64_t factorial(int n) {
    std::uint64_t f = 1;
    for (int i = 2; i <= n; ++i) f *= static_cast<std::uint64_t>(i);
    return f;
}

OrdinalPattern::OrdinalPattern(std::vector<int> ranks) : ranks_(std::move(ranks)) {
    const int d = static_cast<int>(ranks_.size());
    check_dimension(d);
    std::array<bool, kMaxDimension> seen{};
    for (int r : ranks_) {
        if (r < 0 || r >= d || seen[r]) {
            throw ValidationError("rank vector is not a permutation of 0..D-1");
        }
        seen[r] = true;
    }
}

OrdinalPattern OrdinalPattern::from_index(int dimension, std::uint64_t index) {
    check_dimension(dimension);
    if (index >= factorial(dimension)) {
        throw ValidationError("pattern index out of range");
    }
    // Peel factorial-base digits, least significant last.
    std::vector<int> digits(dimension);
    for (int i = dimension - 1; i >= 0; --i) {
        const auto base = static_cast<std::uint64_t>(dimension - i);
        digits[i] = static_cast<int>(index % base);
        index /= base;
    }
    std::vector<int> available(dimension);
    std::iota(available.begin(), available.end(), 0);
    std::vector<int> ranks(dimension);
    for (int i = 0; i < dimension; ++i) {
        ranks[i] = available[digits[i]];
        available.erase(available.begin() + digits[i]);
    }
    return OrdinalPattern(std::move(ranks));
}

std::uint64_t OrdinalPattern::index() const {
    return lehmer_code(ranks_, dimension());
}

std::string OrdinalPattern::label() const {
    std::string s;
    s.reserve(ranks_.size());
    for (int r : ranks_) s.push_back(static_cast<char>('0' + r));
    return s;
}

OrdinalPattern pattern_of_window(std::span<const double> window, int dimension) {
    check_dimension(dimension);
    if (window.size() != static_cast<std::size_t>(dimension)) {
        throw ValidationError("window length mismatch");
    }
    for (double v : window) {
        if (!std::isfinite(v)) throw ValidationError("non-finite sample");
    }
    std::vector<int> ranks(dimension);
    rank_window(window.data(), 1, dimension, ranks);
    return OrdinalPattern(std::move(ranks));
}

OrdinalPattern pattern_of_window(std::span<const double> window) {
    return pattern_of_window(window, static_cast<int>(window.size()));
}

OrdinalDistribution::OrdinalDistribution(int dimension, int delay, std::vector<std::uint64_t> counts)
    : dimension_(dimension), delay_(delay), counts_(std::move(counts)) {
    check_dimension(dimension);
    if (delay < 1) throw ValidationError("embedding delay must be >= 1");
    if (counts_.size() != factorial(dimension)) {
        throw ValidationError("ordinal distribution needs D! cells");
    }
    total_ = std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0});
    if (total_ == 0) throw ValidationError("ordinal distribution has no windows");
}

std::vector<double> OrdinalDistribution::probabilities() const {
    std::vector<double> p(counts_.size());
    const double total = static_cast<double>(total_);
    for (std::size_t i = 0; i < counts_.size(); ++i) {
        p[i] = static_cast<double>(counts_[i]) / total;
    }
    return p;
}

double OrdinalDistribution::probability(std::uint64_t index) const {
    return static_cast<double>(counts_.at(index)) / static_cast<double>(total_);
}

bool OrdinalDistribution::sampling_adequate() const {
    return total_ >= 100 * factorial(dimension_);
}

OrdinalDistribution ordinal_distribution(std::span<const double> series, int dimension, int delay) {
    check_dimension(dimension);
    if (delay < 1) throw ValidationError("embedding delay must be >= 1");
    const std::size_t span = static_cast<std::size_t>(dimension - 1) * static_cast<std::size_t>(delay);
    if (series.size() < span + 1) {
        throw ValidationError("series too short: need at least (D-1)*tau+1 = " + std::to_string(span + 1) +
                              " samples, got " + std::to_string(series.size()));
    }
    for (double v : series) {
        if (!std::isfinite(v)) throw ValidationError("non-finite sample");
    }

    std::vector<std::uint64_t> counts(factorial(dimension), 0);
    std::array<int, kMaxDimension> ranks{};
    const std::size_t windows = series.size() - span;
    const auto stride = static_cast<std::size_t>(delay);
    for (std::size_t s = 0; s < windows; ++s) {
        rank_window(series.data() + s, stride, dimension, ranks);
        ++counts[lehmer_code(ranks, dimension)];
    }
    return OrdinalDistribution(dimension, delay, std::move(counts));
}

}  // namespace velplane
