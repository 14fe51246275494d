#include "rrg/estimator.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace rrg {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double relative_deviation(double x, double ref) {
    if (std::isnan(x) || std::isnan(ref)) return 0.0;
    if (x == ref) return 0.0;
    return std::abs(x - ref) / std::max(std::abs(ref), 1e-300);
}

}  // namespace

EstimatePair::EstimatePair(DegreeSpec root, int d, int depth) : root_(std::move(root)), d_(d), depth_(depth) {
    if (depth < 0 || depth > kEstimatorMaxDepth)
        throw PreconditionError("estimate depth must lie in [0, " + std::to_string(kEstimatorMaxDepth) + "]");
    if (d < 0) throw PreconditionError("nominal degree must be nonnegative");
    const int n = root_.vertex_count();
    const auto pairs = root_.allowed.to_vector();
    const auto fresh = [n](int level) {
        StateEstimates s;
        s.level = level;
        s.p.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0.0);
        s.y.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0.0);
        return s;
    };
    states_.emplace(root_.degrees, fresh(0));
    std::vector<std::vector<int>> frontier{root_.degrees};
    for (int level = 1; level <= depth; ++level) {
        std::vector<std::vector<int>> next;
        for (const auto& degs : frontier) {
            for (auto e : pairs) {
                if (degs[static_cast<std::size_t>(e.u)] < 1 || degs[static_cast<std::size_t>(e.v)] < 1) continue;
                std::vector<int> child = degs;
                --child[static_cast<std::size_t>(e.u)];
                --child[static_cast<std::size_t>(e.v)];
                if (states_.emplace(child, fresh(level)).second) next.push_back(std::move(child));
            }
        }
        frontier = std::move(next);
    }
}

std::size_t EstimatePair::p_index(Vertex a, Vertex b) const {
    return static_cast<std::size_t>(a) * static_cast<std::size_t>(vertex_count()) + static_cast<std::size_t>(b);
}

std::size_t EstimatePair::y_index(Vertex a, Vertex b, Vertex c) const {
    const auto n = static_cast<std::size_t>(vertex_count());
    return (static_cast<std::size_t>(a) * n + static_cast<std::size_t>(b)) * n + static_cast<std::size_t>(c);
}

StateEstimates& EstimatePair::at(const std::vector<int>& degrees) {
    auto it = states_.find(degrees);
    if (it == states_.end()) throw PreconditionError("estimate requested on a state that was not materialized");
    return it->second;
}

const StateEstimates& EstimatePair::at(const std::vector<int>& degrees) const {
    auto it = states_.find(degrees);
    if (it == states_.end()) throw PreconditionError("estimate requested on a state that was not materialized");
    return it->second;
}

double EstimatePair::P(const DegreeSpec& st, Vertex a, Vertex b) const {
    if (!root_.allowed.contains(a, b)) return 0.0;
    return at(st.degrees).p[p_index(a, b)];
}

double EstimatePair::Y(const DegreeSpec& st, Vertex a, Vertex b, Vertex c) const {
    if (a == c || !root_.allowed.contains(a, b) || !root_.allowed.contains(b, c)) return 0.0;
    return at(st.degrees).y[y_index(a, b, c)];
}

EstimatePair EstimatePair::truncated(int depth) const {
    if (depth < 0 || depth > depth_) throw PreconditionError("cannot truncate to a deeper level");
    EstimatePair out = *this;
    out.depth_ = depth;
    for (auto it = out.states_.begin(); it != out.states_.end();) {
        if (it->second.level > depth)
            it = out.states_.erase(it);
        else
            ++it;
    }
    return out;
}

EstimatePair initial_estimates(const DegreeSpec& root, int d, int depth) {
    EstimatePair est(root, d, depth);
    const int n = root.vertex_count();
    std::vector<double> width(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) width[static_cast<std::size_t>(v)] = root.allowed_degree(v);
    const double scale = n - 1.0;

    for (auto& [degs, s] : est.states()) {
        const auto deg = [&](Vertex v) { return static_cast<double>(degs[static_cast<std::size_t>(v)]); };
        const auto w = [&](Vertex v) { return width[static_cast<std::size_t>(v)]; };
        for (Vertex b = 0; b < n; ++b) {
            const auto nbrs = root.allowed_neighbors(b);
            for (Vertex a : nbrs) {
                const double den = d * w(a) * w(b);
                s.p[est.p_index(a, b)] = den > 0 ? scale * deg(a) * deg(b) / den : 0.0;
            }
            for (Vertex a : nbrs)
                for (Vertex c : nbrs) {
                    if (a == c) continue;
                    const double den = static_cast<double>(d) * d * w(a) * w(b) * (w(b) - 1) * w(c);
                    s.y[est.y_index(a, b, c)] =
                        den > 0 ? scale * scale * deg(a) * deg(b) * (deg(b) - 1) * deg(c) / den : 0.0;
                }
        }
    }
    return est;
}

EstimatePair initial_estimates(int n, int d, int depth) {
    return initial_estimates(DegreeSpec::regular(n, d), d, depth);
}

EstimatePair oracle_estimates(const DegreeSpec& root, int d, int depth, ExactOracle& oracle) {
    EstimatePair est(root, d, depth);
    const int n = root.vertex_count();
    for (auto& [degs, s] : est.states()) {
        const DegreeSpec st = est.spec_of(degs);
        if (oracle.count(st) == 0) {
            std::fill(s.p.begin(), s.p.end(), kNaN);
            std::fill(s.y.begin(), s.y.end(), kNaN);
            continue;
        }
        for (Vertex b = 0; b < n; ++b) {
            const auto nbrs = root.allowed_neighbors(b);
            for (Vertex a : nbrs) s.p[est.p_index(a, b)] = to_double(oracle.edge_probability(st, a, b));
            for (Vertex a : nbrs)
                for (Vertex c : nbrs)
                    if (a != c) s.y[est.y_index(a, b, c)] = to_double(oracle.cherry_probability(st, a, b, c));
        }
    }
    return est;
}

EstimatePair iterate(const EstimatePair& est, int rounds, IterationStats* stats) {
    if (rounds < 0) throw PreconditionError("rounds must be nonnegative");
    if (est.depth() < 2 * rounds)
        throw PreconditionError("depth exhausted: " + std::to_string(rounds) + " rounds need depth >= " +
                                std::to_string(2 * rounds));
    EstimatePair cur = est;
    const int n = est.vertex_count();
    const DegreeSpec& root = est.root();

    for (int round = 0; round < rounds; ++round) {
        const int depth = cur.depth();
        // Refined P on every state whose successors are materialized.
        std::map<std::vector<int>, std::vector<double>> fresh_p;
        for (const auto& [degs, s] : cur.states()) {
            if (s.level > depth - 1) continue;
            const DegreeSpec st = cur.spec_of(degs);
            std::vector<double> p(s.p.size(), 0.0);
            for (Vertex b = 0; b < n; ++b)
                for (Vertex a : root.allowed_neighbors(b)) {
                    const double old = s.p[cur.p_index(a, b)];
                    double value = 0.0;
                    if (std::isnan(old)) {
                        value = kNaN;
                    } else if (old > 0.0) {
                        try {
                            value = op_P(cur, st, a, b);
                        } catch (const DegenerateError&) {
                            value = kNaN;
                            if (stats) ++stats->degenerate;
                        }
                    }
                    p[cur.p_index(a, b)] = value;
                }
            fresh_p.emplace(degs, std::move(p));
        }

        EstimatePair next = cur.truncated(depth - 2);
        for (auto& [degs, s] : next.states()) {
            const DegreeSpec st = next.spec_of(degs);
            const auto& p_here = fresh_p.at(degs);
            s.p = p_here;
            for (Vertex b = 0; b < n; ++b) {
                const auto nbrs = root.allowed_neighbors(b);
                for (Vertex a : nbrs)
                    for (Vertex c : nbrs) {
                        if (a == c) continue;
                        const double p_ab = p_here[cur.p_index(a, b)];
                        double value = 0.0;
                        if (std::isnan(p_ab)) {
                            value = kNaN;
                        } else if (p_ab > 0.0 && st.degrees[static_cast<std::size_t>(a)] > 0 &&
                                   st.degrees[static_cast<std::size_t>(b)] > 0) {
                            const DegreeSpec after = st.decremented(a, b);
                            const auto& p_next = fresh_p.at(after.degrees);
                            try {
                                value = cherry_combine<double>(p_ab, p_next[cur.p_index(b, c)],
                                                               cur.Y(after, a, b, c), p_next[cur.p_index(a, b)]);
                            } catch (const DegenerateError&) {
                                value = kNaN;
                                if (stats) ++stats->degenerate;
                            }
                        }
                        s.y[cur.y_index(a, b, c)] = value;
                    }
            }
        }
        cur = std::move(next);
    }
    return cur;
}

int iterate_until_stable(EstimatePair& est, double tol) {
    int rounds = 0;
    while (est.depth() >= 2) {
        EstimatePair next = iterate(est, 1);
        const double change = max_relative_deviation(next, est, next.depth());
        est = std::move(next);
        ++rounds;
        if (change < tol) break;
    }
    return rounds;
}

double max_relative_deviation(const EstimatePair& est1, const EstimatePair& est2, int max_level) {
    const int n = est1.vertex_count();
    if (est2.vertex_count() != n) throw PreconditionError("estimates live on different vertex sets");
    const DegreeSpec& root = est1.root();
    double xi = 0.0;
    for (const auto& [degs, s1] : est1.states()) {
        if (s1.level > max_level || !est2.has_state(degs)) continue;
        const auto& s2 = est2.at(degs);
        for (Vertex b = 0; b < n; ++b) {
            const auto nbrs = root.allowed_neighbors(b);
            for (Vertex a : nbrs) {
                const auto i = est1.p_index(a, b);
                xi = std::max(xi, relative_deviation(s1.p[i], s2.p[i]));
            }
            for (Vertex a : nbrs)
                for (Vertex c : nbrs) {
                    if (a == c) continue;
                    const auto i = est1.y_index(a, b, c);
                    xi = std::max(xi, relative_deviation(s1.y[i], s2.y[i]));
                }
        }
    }
    return xi;
}

ContractionReport contraction_measure(const EstimatePair& est1, const EstimatePair& est2) {
    if (est1.root() != est2.root() || est1.depth() != est2.depth())
        throw PreconditionError("contraction needs estimates on the same root and depth");
    if (est1.depth() < 2) throw PreconditionError("contraction needs depth >= 2");
    const int n = est1.vertex_count();
    ContractionReport r;
    r.p = n > 1 ? static_cast<double>(est1.nominal_degree()) / (n - 1) : 0.0;
    r.xi_before = max_relative_deviation(est1, est2, est1.depth());
    const EstimatePair after1 = iterate(est1, 1);
    const EstimatePair after2 = iterate(est2, 1);
    r.xi_after = max_relative_deviation(after1, after2, after1.depth());
    if (r.xi_before > 0.0) {
        r.contraction = r.xi_after / r.xi_before;
        r.ratio = r.p > 0.0 ? r.contraction / r.p : std::numeric_limits<double>::infinity();
    }
    return r;
}

EstimatePair perturbed(const EstimatePair& est, double rel, std::mt19937_64& rng, bool touch_p, bool touch_y) {
    EstimatePair out = est;
    std::bernoulli_distribution coin(0.5);
    const int n = est.vertex_count();
    const DegreeSpec& root = est.root();
    for (auto& [degs, s] : out.states()) {
        for (Vertex b = 0; b < n; ++b) {
            const auto nbrs = root.allowed_neighbors(b);
            if (touch_p)
                for (Vertex a : nbrs) {
                    if (a > b) continue;
                    const double f = coin(rng) ? 1.0 + rel : 1.0 - rel;
                    s.p[out.p_index(a, b)] *= f;
                    s.p[out.p_index(b, a)] *= f;
                }
            if (touch_y)
                for (Vertex a : nbrs)
                    for (Vertex c : nbrs) {
                        if (a >= c) continue;
                        const double f = coin(rng) ? 1.0 + rel : 1.0 - rel;
                        s.y[out.y_index(a, b, c)] *= f;
                        s.y[out.y_index(c, b, a)] *= f;
                    }
        }
    }
    return out;
}

double joint_estimate(int n, int d, const ConstraintSet& constraints) {
    if (n < 1) throw PreconditionError("joint estimate needs n >= 1");
    const double q = static_cast<double>(d) / n;
    return std::pow(q, static_cast<double>(constraints.required_in.size())) *
           std::pow(1.0 - q, static_cast<double>(constraints.required_out.size()));
}

}  // namespace rrg
