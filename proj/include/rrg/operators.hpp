#pragma once

// The B / P / Y maps written once over any source of (P, Y) values. A source
// supplies P(state, a, b), Y(state, a, b, c) and positive(state, b, c); the
// state is a DegreeSpec whose allowed set stays fixed through decrements.
//
// Plugging in exact oracle values turns these into the recursive identities;
// plugging in stored estimates gives one refinement step.

#include <cmath>
#include <concepts>

#include "rrg/graph.hpp"
#include "rrg/oracle.hpp"

namespace rrg {

template <class S>
concept EstimateSource = requires(const S& s, const DegreeSpec& st, Vertex v) {
    typename S::value_type;
    { s.P(st, v, v) } -> std::convertible_to<typename S::value_type>;
    { s.Y(st, v, v, v) } -> std::convertible_to<typename S::value_type>;
    { s.positive(st, v, v) } -> std::convertible_to<bool>;
};

inline constexpr double kDenominatorGuard = 1e-9;

inline bool degenerate(double x) { return !(std::abs(x) >= kDenominatorGuard); }
inline bool degenerate(const Rational& x) { return x == 0; }

// Expected number of edges at a that cannot be switched over to b.
template <EstimateSource S>
typename S::value_type op_B(const S& src, const DegreeSpec& st, Vertex a, Vertex b) {
    using T = typename S::value_type;
    T sum(0);
    for (Vertex c : st.allowed_neighbors(a)) {
        if (!st.allowed.contains(c, b))
            sum += src.P(st, a, c);
        else
            sum += src.Y(st, a, c, b);
    }
    return sum;
}

template <EstimateSource S>
typename S::value_type op_P(const S& src, const DegreeSpec& st, Vertex a, Vertex b) {
    using T = typename S::value_type;
    const auto deg = [&](Vertex v) { return st.degrees[static_cast<std::size_t>(v)]; };
    if (deg(a) == 0 || deg(b) == 0) return T(0);

    const DegreeSpec s_ab = st.decremented(a, b);
    const T keep_ab = T(1) - src.P(s_ab, a, b);
    if (degenerate(keep_ab)) throw DegenerateError("1 - P(ab) vanishes on the decremented state");

    T total(0);
    for (Vertex c : st.allowed_neighbors(b)) {
        if (!src.positive(st, b, c)) continue;
        if (c == a) {
            total += T(1);
            continue;
        }
        const DegreeSpec s_bc = st.decremented(b, c);
        const T num = T(deg(c)) - op_B(src, s_ab, c, a);
        const T den = T(deg(a)) - op_B(src, s_bc, a, c);
        if (degenerate(den)) throw DegenerateError("switching denominator vanishes");
        total += (num / den) * ((T(1) - src.P(s_bc, b, c)) / keep_ab);
    }
    if (degenerate(total)) throw DegenerateError("ratio sum vanishes");
    return T(deg(b)) / total;
}

// P(ab) (P'(bc) - Y'(abc)) / (1 - P'(ab)) with primes on d - e_a - e_b.
template <class T>
T cherry_combine(const T& p_ab, const T& p_bc_next, const T& y_next, const T& p_ab_next) {
    const T keep = T(1) - p_ab_next;
    if (degenerate(keep)) throw DegenerateError("1 - P(ab) vanishes on the decremented state");
    return p_ab * (p_bc_next - y_next) / keep;
}

// The cherry identity evaluated with the source's own P values.
template <EstimateSource S>
typename S::value_type recursive_y(const S& src, const DegreeSpec& st, Vertex a, Vertex b, Vertex c) {
    using T = typename S::value_type;
    if (!src.positive(st, a, b)) return T(0);
    const DegreeSpec next = st.decremented(a, b);
    return cherry_combine<T>(src.P(st, a, b), src.P(next, b, c), src.Y(next, a, b, c), src.P(next, a, b));
}

// The Y operator: refined P values for the P terms, the source Y for the rest.
template <EstimateSource S>
typename S::value_type op_Y(const S& src, const DegreeSpec& st, Vertex a, Vertex b, Vertex c) {
    using T = typename S::value_type;
    const auto& d = st.degrees;
    if (d[static_cast<std::size_t>(a)] == 0 || d[static_cast<std::size_t>(b)] == 0) return T(0);
    const DegreeSpec next = st.decremented(a, b);
    return cherry_combine<T>(op_P(src, st, a, b), op_P(src, next, b, c), src.Y(next, a, b, c), op_P(src, next, a, b));
}

// Exact values served lazily from an oracle.
template <class T>
class OracleSource {
public:
    using value_type = T;

    explicit OracleSource(ExactOracle& oracle) : oracle_(&oracle) {}

    T P(const DegreeSpec& st, Vertex a, Vertex b) const {
        if (!st.allowed.contains(a, b)) return T(0);
        return convert(oracle_->edge_probability(st, a, b));
    }
    T Y(const DegreeSpec& st, Vertex a, Vertex b, Vertex c) const {
        if (a == c || !st.allowed.contains(a, b) || !st.allowed.contains(b, c)) return T(0);
        return convert(oracle_->cherry_probability(st, a, b, c));
    }
    bool positive(const DegreeSpec& st, Vertex a, Vertex b) const {
        return st.allowed.contains(a, b) && oracle_->edge_probability(st, a, b) > 0;
    }

private:
    static T convert(const Rational& q) {
        if constexpr (std::is_same_v<T, Rational>)
            return q;
        else
            return static_cast<T>(q);
    }

    ExactOracle* oracle_;
};

}  // namespace rrg
