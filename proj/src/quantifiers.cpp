#include "velplane/quantifiers.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>

#include "velplane/errors.hpp"

namespace velplane {

namespace {

double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

double entropy_of(std::span<const double> p) {
    double s = 0.0;
    for (double v : p) s -= xlogx(v);
    return s;
}

double js_divergence_to_uniform(std::span<const double> p) {
    const double n = static_cast<double>(p.size());
    const double pe = 1.0 / n;
    double mixed = 0.0;
    for (double v : p) mixed -= xlogx(0.5 * (v + pe));
    return mixed - 0.5 * entropy_of(p) - 0.5 * std::log(n);
}

void check_cells(std::size_t cells) {
    if (cells < 2) throw ValidationError("distribution needs at least 2 cells");
}

// Extremal family: one cell with probability p, (nonzero-1) cells sharing
// 1-p equally, the remaining cells zero. Returns (H, C) in closed form.
struct FamilyPoint {
    double entropy;
    double complexity;
};

FamilyPoint family_point(std::size_t cells, double q0, std::size_t nonzero, double p) {
    const double n = static_cast<double>(cells);
    const double rest_cells = static_cast<double>(nonzero - 1);
    const double q = rest_cells > 0 ? (1.0 - p) / rest_cells : 0.0;
    const double s = -xlogx(p) - rest_cells * xlogx(q);
    const double pe = 1.0 / n;
    const double zeros = static_cast<double>(cells - nonzero);
    const double mixed = -xlogx(0.5 * (p + pe)) - rest_cells * xlogx(0.5 * (q + pe)) - zeros * xlogx(0.5 * pe);
    const double log_n = std::log(n);
    const double h = std::clamp(s / log_n, 0.0, 1.0);
    const double q_js = std::clamp(q0 * (mixed - 0.5 * s - 0.5 * log_n), 0.0, 1.0);
    return {h, h * q_js};
}

// Solves family_point(cells, nonzero, p).entropy == target for p in [lo, hi],
// where entropy is monotone in p (increasing when `increasing`).
double solve_family(std::size_t cells, double q0, std::size_t nonzero, double target, double lo, double hi, bool increasing) {
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double h = family_point(cells, q0, nonzero, mid).entropy;
        if ((h < target) == increasing) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

void check_entropy(double entropy) {
    if (!(entropy >= 0.0 && entropy <= 1.0)) {
        throw ValidationError("normalized entropy must lie in [0, 1]");
    }
}

}  // namespace

ProbabilityDistribution::ProbabilityDistribution(std::vector<double> p) : p_(std::move(p)) {
    if (p_.empty()) throw ValidationError("empty probability distribution");
    double sum = 0.0;
    for (double v : p_) {
        if (!std::isfinite(v)) throw ValidationError("non-finite probability");
        if (v < 0.0) throw ValidationError("negative probability");
        sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
        throw ValidationError("probabilities must sum to 1");
    }
}

ProbabilityDistribution ProbabilityDistribution::uniform(std::size_t cells) {
    check_cells(cells);
    return ProbabilityDistribution(std::vector<double>(cells, 1.0 / static_cast<double>(cells)));
}

ProbabilityDistribution ProbabilityDistribution::one_hot(std::size_t cells, std::size_t hot) {
    check_cells(cells);
    if (hot >= cells) throw ValidationError("one-hot cell out of range");
    std::vector<double> p(cells, 0.0);
    p[hot] = 1.0;
    return ProbabilityDistribution(std::move(p));
}

ProbabilityDistribution ProbabilityDistribution::from(const OrdinalDistribution& dist) {
    return ProbabilityDistribution(dist.probabilities());
}

double shannon_entropy(const ProbabilityDistribution& p) {
    return entropy_of(p.values());
}

double normalized_entropy(const ProbabilityDistribution& p) {
    check_cells(p.size());
    const double h = shannon_entropy(p) / std::log(static_cast<double>(p.size()));
    return std::clamp(h, 0.0, 1.0);
}

double disequilibrium_normalizer(std::size_t cells) {
    check_cells(cells);
    static std::mutex mutex;
    static std::map<std::size_t, double> cache;
    std::lock_guard lock(mutex);
    if (auto it = cache.find(cells); it != cache.end()) return it->second;
    std::vector<double> delta(cells, 0.0);
    delta[0] = 1.0;
    const double q0 = 1.0 / js_divergence_to_uniform(delta);
    cache.emplace(cells, q0);
    return q0;
}

double jensen_shannon_disequilibrium(const ProbabilityDistribution& p) {
    check_cells(p.size());
    const double q = disequilibrium_normalizer(p.size()) * js_divergence_to_uniform(p.values());
    return std::clamp(q, 0.0, 1.0);
}

double statistical_complexity(const ProbabilityDistribution& p) {
    return normalized_entropy(p) * jensen_shannon_disequilibrium(p);
}

PlanePoint plane_point(const OrdinalDistribution& dist, std::string label) {
    const auto p = ProbabilityDistribution::from(dist);
    const double h = normalized_entropy(p);
    const double q = jensen_shannon_disequilibrium(p);
    return {std::move(label), h, h * q, dist.dimension(), dist.delay(), dist.total_windows()};
}

double minimum_complexity(std::size_t cells, double entropy) {
    check_cells(cells);
    check_entropy(entropy);
    if (entropy == 0.0 || entropy == 1.0) return 0.0;
    const double n = static_cast<double>(cells);
    // Entropy decreases from 1 to 0 as p goes from 1/N to 1.
    const double q0 = disequilibrium_normalizer(cells);
    const double p = solve_family(cells, q0, cells, entropy, 1.0 / n, 1.0, false);
    return family_point(cells, q0, cells, p).complexity;
}

double maximum_complexity(std::size_t cells, double entropy) {
    check_cells(cells);
    check_entropy(entropy);
    if (entropy == 0.0 || entropy == 1.0) return 0.0;
    const double log_n = std::log(static_cast<double>(cells));
    // With `nonzero` occupied cells the family spans
    // H in [ln(nonzero-1), ln(nonzero)] / ln N; pick the piece(s) covering H.
    const double level = std::exp(entropy * log_n);
    const auto guess = static_cast<std::size_t>(std::clamp(std::ceil(level), 2.0, static_cast<double>(cells)));
    const double q0 = disequilibrium_normalizer(cells);
    double best = 0.0;
    for (std::size_t nonzero = std::max<std::size_t>(2, guess - 1); nonzero <= std::min(cells, guess + 1); ++nonzero) {
        const double lo_h = std::log(static_cast<double>(nonzero - 1)) / log_n;
        const double hi_h = std::log(static_cast<double>(nonzero)) / log_n;
        if (entropy < lo_h - 1e-15 || entropy > hi_h + 1e-15) continue;
        const double p = solve_family(cells, q0, nonzero, entropy, 0.0, 1.0 / static_cast<double>(nonzero), true);
        best = std::max(best, family_point(cells, q0, nonzero, p).complexity);
    }
    return best;
}

std::pair<BoundaryCurve, BoundaryCurve> boundary_curves(std::size_t cells, int resolution) {
    check_cells(cells);
    if (resolution < 64) throw ValidationError("boundary resolution must be >= 64");

    std::vector<double> grid;
    grid.reserve(static_cast<std::size_t>(resolution));
    for (int i = 0; i < resolution; ++i) {
        grid.push_back(static_cast<double>(i) / static_cast<double>(resolution - 1));
    }

    std::vector<double> max_grid = grid;
    // Cusps of the maximum curve, where the number of occupied cells changes.
    if (cells - 2 <= static_cast<std::size_t>(resolution)) {
        const double log_n = std::log(static_cast<double>(cells));
        for (std::size_t k = 2; k < cells; ++k) {
            max_grid.push_back(std::log(static_cast<double>(k)) / log_n);
        }
        std::sort(max_grid.begin(), max_grid.end());
        max_grid.erase(std::unique(max_grid.begin(), max_grid.end()), max_grid.end());
    }

    BoundaryCurve lower{BoundaryKind::Minimum, cells, {}};
    BoundaryCurve upper{BoundaryKind::Maximum, cells, {}};
    lower.samples.reserve(grid.size());
    upper.samples.reserve(max_grid.size());
    for (double h : grid) lower.samples.push_back({h, minimum_complexity(cells, h)});
    for (double h : max_grid) upper.samples.push_back({h, maximum_complexity(cells, h)});
    return {std::move(lower), std::move(upper)};
}

bool within_boundaries(double entropy, double complexity, std::size_t cells, double tol) {
    if (!std::isfinite(entropy) || !std::isfinite(complexity)) return false;
    if (entropy < -tol || entropy > 1.0 + tol) return false;
    const double h = std::clamp(entropy, 0.0, 1.0);
    return complexity >= minimum_complexity(cells, h) - tol && complexity <= maximum_complexity(cells, h) + tol;
}

}  // namespace velplane
