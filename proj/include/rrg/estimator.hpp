#pragma once

// Stored (P~, Y~) estimates over every degree state reachable from a root
// spec by a bounded number of edge decrements, their refinement by the P / Y
// maps, the perturbation contraction measurement, and the product-form joint
// estimate.

#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include "rrg/graph.hpp"
#include "rrg/operators.hpp"

namespace rrg {

inline constexpr int kEstimatorMaxDepth = 12;

struct StateEstimates {
    int level = 0;            // number of edge decrements below the root
    std::vector<double> p;    // p[a*n + b]
    std::vector<double> y;    // y[(a*n + b)*n + c]
};

class EstimatePair {
public:
    using value_type = double;
    using StateMap = std::map<std::vector<int>, StateEstimates>;

    // Materializes every state within `depth` decrements; all values start at 0.
    EstimatePair(DegreeSpec root, int d, int depth);

    const DegreeSpec& root() const { return root_; }
    int nominal_degree() const { return d_; }
    int depth() const { return depth_; }
    int vertex_count() const { return root_.vertex_count(); }
    std::size_t state_count() const { return states_.size(); }
    const StateMap& states() const { return states_; }
    StateMap& states() { return states_; }

    DegreeSpec spec_of(const std::vector<int>& degrees) const { return DegreeSpec(degrees, root_.allowed); }

    double P(const DegreeSpec& st, Vertex a, Vertex b) const;
    double Y(const DegreeSpec& st, Vertex a, Vertex b, Vertex c) const;
    bool positive(const DegreeSpec& st, Vertex a, Vertex b) const { return P(st, a, b) > 0.0; }

    StateEstimates& at(const std::vector<int>& degrees);
    const StateEstimates& at(const std::vector<int>& degrees) const;
    bool has_state(const std::vector<int>& degrees) const { return states_.count(degrees) != 0; }

    std::size_t p_index(Vertex a, Vertex b) const;
    std::size_t y_index(Vertex a, Vertex b, Vertex c) const;

    // Keeps only states at level <= depth.
    EstimatePair truncated(int depth) const;

private:
    DegreeSpec root_;
    int d_ = 0;
    int depth_ = 0;
    StateMap states_;
};

// Initial guesses on every materialized state:
//   P~(ab)  = (n-1) d(a) d(b) / (d |A(a)| |A(b)|)
//   Y~(abc) = (n-1)^2 d(a) d(b) (d(b)-1) d(c) / (d^2 |A(a)| |A(b)| (|A(b)|-1) |A(c)|)
EstimatePair initial_estimates(const DegreeSpec& root, int d, int depth);
EstimatePair initial_estimates(int n, int d, int depth);

// Exact oracle values on every materialized state (n <= 10).
EstimatePair oracle_estimates(const DegreeSpec& root, int d, int depth, ExactOracle& oracle);

struct IterationStats {
    std::size_t degenerate = 0;  // entries set to NaN because a denominator vanished
};

// Applies (P, Y) `rounds` times; each round drops the two deepest levels.
EstimatePair iterate(const EstimatePair& est, int rounds, IterationStats* stats = nullptr);

// Iterates while the depth budget allows and the largest change on the
// surviving states exceeds tol. Returns the number of rounds applied.
int iterate_until_stable(EstimatePair& est, double tol = 1e-12);

// Largest |x1/x2 - 1| over allowed P entries and cherry Y entries shared by
// both estimates at level <= max_level; NaN entries and zero references skipped.
double max_relative_deviation(const EstimatePair& est1, const EstimatePair& est2, int max_level);

struct ContractionReport {
    double xi_before = 0.0;
    double xi_after = 0.0;
    double p = 0.0;
    double ratio = 0.0;         // xi_after / (p xi_before)
    double contraction = 0.0;   // xi_after / xi_before
};

// One refinement of both estimates, deviations measured before and after.
// p is d/(n-1) for the root's nominal degree.
ContractionReport contraction_measure(const EstimatePair& est1, const EstimatePair& est2);

// Multiplies every allowed entry by (1 + rel) or (1 - rel) with a fair coin,
// using one coin for P(ab), P(ba) and one for Y(abc), Y(cba).
EstimatePair perturbed(const EstimatePair& est, double rel, std::mt19937_64& rng, bool touch_p = true,
                       bool touch_y = true);

// (d/n)^|B| (1 - d/n)^|C|.
double joint_estimate(int n, int d, const ConstraintSet& constraints);

}  // namespace rrg
