#pragma once

/**
 * Information quantifiers over a discrete probability distribution and the
 * complexity-entropy plane.
 *
 *   S[P]      = -sum p ln p                       (0 ln 0 = 0)
 *   H[P]      = S[P] / ln N
 *   Q[P]      = Q0 * ( S[(P+Pe)/2] - S[P]/2 - S[Pe]/2 )
 *   C[P]      = H[P] * Q[P]
 *
 * Pe is the uniform distribution over the same N cells and Q0 normalizes Q
 * so that a one-hot distribution reaches 1.
 */

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "velplane/ordinal.hpp"

namespace velplane {

// Non-negative finite probabilities summing to 1 within 1e-9.
class ProbabilityDistribution {
public:
    explicit ProbabilityDistribution(std::vector<double> p);

    static ProbabilityDistribution uniform(std::size_t cells);
    static ProbabilityDistribution one_hot(std::size_t cells, std::size_t hot = 0);
    static ProbabilityDistribution from(const OrdinalDistribution& dist);

    std::size_t size() const { return p_.size(); }
    std::span<const double> values() const { return p_; }
    double operator[](std::size_t i) const { return p_[i]; }

private:
    std::vector<double> p_;
};

double shannon_entropy(const ProbabilityDistribution& p);
double normalized_entropy(const ProbabilityDistribution& p);

// Q0 for N cells: 1 / J[delta, Pe]. Computed once per N and cached.
double disequilibrium_normalizer(std::size_t cells);

double jensen_shannon_disequilibrium(const ProbabilityDistribution& p);
double statistical_complexity(const ProbabilityDistribution& p);

struct PlanePoint {
    std::string label;
    double entropy = 0.0;     // normalized permutation entropy H
    double complexity = 0.0;  // statistical complexity C
    int dimension = 0;
    int delay = 0;
    std::uint64_t windows = 0;
};

PlanePoint plane_point(const OrdinalDistribution& dist, std::string label);

enum class BoundaryKind { Minimum, Maximum };

struct BoundarySample {
    double entropy;
    double complexity;
};

struct BoundaryCurve {
    BoundaryKind kind;
    std::size_t cells;
    std::vector<BoundarySample> samples;  // strictly increasing entropy, from (0,0) to (1,0)
};

// Complexity of the minimum and maximum boundary at a given normalized
// entropy, evaluated by solving the extremal one-parameter families for H.
double minimum_complexity(std::size_t cells, double entropy);
double maximum_complexity(std::size_t cells, double entropy);

// Sampled boundaries for plotting. Requires cells >= 2 and resolution >= 64.
std::pair<BoundaryCurve, BoundaryCurve> boundary_curves(std::size_t cells, int resolution = 1024);

// True when the point lies between the boundaries for `cells`, within tol.
bool within_boundaries(double entropy, double complexity, std::size_t cells, double tol = 1e-9);

}  // namespace velplane
