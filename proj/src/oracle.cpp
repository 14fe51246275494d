#include "rrg/oracle.hpp"

#include <bit>
#include <string>

namespace rrg {

namespace {

// Drops every pair touching a saturated vertex so equal subproblems share a key.
template <class State>
void normalize(State& s) {
    std::uint16_t live = 0;
    for (int v = 0; v < s.n; ++v)
        if (s.deg[v] > 0) live |= static_cast<std::uint16_t>(1U << v);
    for (int v = 0; v < s.n; ++v) s.rows[v] = (s.deg[v] > 0) ? static_cast<std::uint16_t>(s.rows[v] & live) : 0;
}

template <class State>
bool feasible(const State& s) {
    int total = 0;
    for (int v = 0; v < s.n; ++v) {
        if (std::popcount(static_cast<unsigned>(s.rows[v])) < s.deg[v]) return false;
        total += s.deg[v];
    }
    return total % 2 == 0;
}

// Calls f(chosen) for every subset of `pool` with exactly k bits.
template <class F>
void for_each_subset(std::uint16_t pool, int k, F&& f) {
    if (k == 0) {
        f(std::uint16_t{0});
        return;
    }
    const int size = std::popcount(static_cast<unsigned>(pool));
    if (size < k) return;
    // Gosper-style walk over k-subsets of the positions in `pool`.
    std::array<int, 16> pos{};
    int m = 0;
    for (int i = 0; i < 16; ++i)
        if ((pool >> i) & 1U) pos[static_cast<std::size_t>(m++)] = i;
    unsigned comb = (1U << k) - 1;
    const unsigned limit = 1U << size;
    while (comb < limit) {
        std::uint16_t chosen = 0;
        for (int i = 0; i < size; ++i)
            if ((comb >> i) & 1U) chosen |= static_cast<std::uint16_t>(1U << pos[static_cast<std::size_t>(i)]);
        f(chosen);
        const unsigned low = comb & (~comb + 1);
        const unsigned ripple = comb + low;
        comb = (((ripple ^ comb) >> 2) / low) | ripple;
    }
}

void check_vertex(const DegreeSpec& spec, Vertex v) {
    if (v < 0 || v >= spec.vertex_count()) throw PreconditionError("vertex " + std::to_string(v) + " out of range");
}

// Applies every constraint; returns false on degree underflow.
bool apply_constraints(DegreeSpec& spec, const ConstraintSet& constraints) {
    for (auto e : constraints.required_in) {
        if (!spec.allowed.contains(e)) throw PreconditionError("constraint edge not in the allowed set");
        if (spec.degrees[static_cast<std::size_t>(e.u)] < 1 || spec.degrees[static_cast<std::size_t>(e.v)] < 1)
            return false;
        spec = condition(spec, e, true);
    }
    for (auto e : constraints.required_out) {
        if (!spec.allowed.contains(e)) throw PreconditionError("constraint edge not in the allowed set");
        spec = condition(spec, e, false);
    }
    return true;
}

}  // namespace

ExactOracle::ExactOracle(int max_vertices) : max_vertices_(max_vertices) {
    if (max_vertices < 1 || max_vertices > kOracleMaxVertices)
        throw PreconditionError("oracle vertex cap must lie in [1, " + std::to_string(kOracleMaxVertices) + "]");
}

ExactOracle::State ExactOracle::load(const DegreeSpec& spec) const {
    const int n = spec.vertex_count();
    if (n > max_vertices_)
        throw BudgetError("exact enumeration limited to n <= " + std::to_string(max_vertices_) + " (got " + std::to_string(n) + ")");
    State s;
    s.n = n;
    for (int v = 0; v < n; ++v) {
        s.deg[v] = static_cast<std::uint8_t>(spec.degrees[static_cast<std::size_t>(v)]);
        for (int u = 0; u < n; ++u)
            if (u != v && spec.allowed.contains(EdgeKey(u, v))) s.rows[v] |= static_cast<std::uint16_t>(1U << u);
    }
    return s;
}

std::uint64_t ExactOracle::count_state(State s) {
    normalize(s);
    int v = 0;
    while (v < s.n && s.deg[v] == 0) ++v;
    if (v == s.n) return 1;
    if (!feasible(s)) return 0;

    Key key{0, static_cast<std::uint64_t>(s.n) << 40};
    int bit = 0;
    for (int i = 0; i < s.n; ++i) {
        key.hi |= static_cast<std::uint64_t>(s.deg[i]) << (4 * i);
        for (int j = i + 1; j < s.n; ++j, ++bit)
            if ((s.rows[i] >> j) & 1U) key.lo |= std::uint64_t{1} << bit;
    }
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;

    std::uint64_t total = 0;
    for_each_subset(s.rows[v], s.deg[v], [&](std::uint16_t chosen) {
        State next = s;
        next.deg[v] = 0;
        for (int u = 0; u < s.n; ++u)
            if ((chosen >> u) & 1U) --next.deg[u];
        total += count_state(next);
    });
    memo_.emplace(key, total);
    return total;
}

void ExactOracle::walk_state(State s, std::array<std::uint32_t, kOracleMaxVertices>& adj,
                             const std::function<void(AdjacencyRows)>& visit) {
    normalize(s);
    int v = 0;
    while (v < s.n && s.deg[v] == 0) ++v;
    if (v == s.n) {
        visit(AdjacencyRows(adj.data(), static_cast<std::size_t>(s.n)));
        return;
    }
    for_each_subset(s.rows[v], s.deg[v], [&](std::uint16_t chosen) {
        State next = s;
        next.deg[v] = 0;
        for (int u = 0; u < s.n; ++u)
            if ((chosen >> u) & 1U) --next.deg[u];
        if (count_state(next) == 0) return;
        for (int u = 0; u < s.n; ++u)
            if ((chosen >> u) & 1U) {
                adj[static_cast<std::size_t>(v)] |= 1U << u;
                adj[static_cast<std::size_t>(u)] |= 1U << v;
            }
        walk_state(next, adj, visit);
        for (int u = 0; u < s.n; ++u)
            if ((chosen >> u) & 1U) {
                adj[static_cast<std::size_t>(v)] &= ~(1U << u);
                adj[static_cast<std::size_t>(u)] &= ~(1U << v);
            }
    });
}

void ExactOracle::require_nonempty(std::uint64_t total) const {
    if (total == 0) throw EmptyClassError("the graph class is empty");
}

std::uint64_t ExactOracle::count(const DegreeSpec& spec) {
    return count_state(load(spec));
}

BigInt ExactOracle::count_graphs(const DegreeSpec& spec) {
    return BigInt(count(spec));
}

Rational ExactOracle::edge_probability(const DegreeSpec& spec, Vertex a, Vertex b) {
    check_vertex(spec, a);
    check_vertex(spec, b);
    const EdgeKey e(a, b);
    if (!spec.allowed.contains(e)) throw PreconditionError("edge is not in the allowed set");
    const auto total = count(spec);
    require_nonempty(total);
    if (spec.degrees[static_cast<std::size_t>(a)] < 1 || spec.degrees[static_cast<std::size_t>(b)] < 1) return Rational(0);
    return Rational(BigInt(count(condition(spec, e, true))), BigInt(total));
}

Rational ExactOracle::cherry_probability(const DegreeSpec& spec, Vertex a, Vertex b, Vertex c) {
    check_vertex(spec, a);
    check_vertex(spec, b);
    check_vertex(spec, c);
    if (a == c) throw PreconditionError("cherry needs three distinct vertices");
    const EdgeKey ab(a, b);
    const EdgeKey bc(b, c);
    if (!spec.allowed.contains(ab) || !spec.allowed.contains(bc))
        throw PreconditionError("cherry edge is not in the allowed set");
    const auto total = count(spec);
    require_nonempty(total);
    const auto& d = spec.degrees;
    if (d[static_cast<std::size_t>(a)] < 1 || d[static_cast<std::size_t>(b)] < 2 || d[static_cast<std::size_t>(c)] < 1)
        return Rational(0);
    const DegreeSpec inner = condition(condition(spec, ab, true), bc, true);
    return Rational(BigInt(count(inner)), BigInt(total));
}

Rational ExactOracle::joint_probability(const DegreeSpec& spec, const ConstraintSet& constraints) {
    const auto total = count(spec);
    require_nonempty(total);
    DegreeSpec inner = spec;
    if (!apply_constraints(inner, constraints)) return Rational(0);
    return Rational(BigInt(count(inner)), BigInt(total));
}

ConditionalTable ExactOracle::conditional_table(const DegreeSpec& spec, std::span<const EdgeKey> edges,
                                                EdgeKey target) {
    const int t = static_cast<int>(edges.size());
    if (t > kOracleMaxCubeDim) throw BudgetError("conditional table limited to " + std::to_string(kOracleMaxCubeDim) + " edges");
    if (!spec.allowed.contains(target)) throw PreconditionError("target edge is not in the allowed set");
    for (int i = 0; i < t; ++i) {
        if (!spec.allowed.contains(edges[static_cast<std::size_t>(i)]))
            throw PreconditionError("conditioning edge is not in the allowed set");
        if (edges[static_cast<std::size_t>(i)] == target) throw PreconditionError("target repeats a conditioning edge");
        for (int j = 0; j < i; ++j)
            if (edges[static_cast<std::size_t>(i)] == edges[static_cast<std::size_t>(j)])
                throw PreconditionError("conditioning edges must be distinct");
    }
    load(spec);

    ConditionalTable table;
    table.edges.assign(edges.begin(), edges.end());
    table.target = target;
    const std::size_t points = std::size_t{1} << t;
    table.values.assign(points, Rational(0));
    table.defined.assign(points, 0);
    for (std::size_t x = 0; x < points; ++x) {
        ConstraintSet pattern;
        for (int i = 0; i < t; ++i)
            ((x >> i) & 1U ? pattern.required_in : pattern.required_out).insert(edges[static_cast<std::size_t>(i)]);
        DegreeSpec inner = spec;
        if (!apply_constraints(inner, pattern)) continue;
        const auto base = count(inner);
        if (base == 0) continue;
        table.defined[x] = 1;
        if (inner.degrees[static_cast<std::size_t>(target.u)] < 1 || inner.degrees[static_cast<std::size_t>(target.v)] < 1)
            continue;
        table.values[x] = Rational(BigInt(count(condition(inner, target, true))), BigInt(base));
    }
    return table;
}

Rational ExactOracle::unswitchable_expectation(const DegreeSpec& spec, Vertex a, Vertex b) {
    check_vertex(spec, a);
    check_vertex(spec, b);
    const auto total = count(spec);
    require_nonempty(total);
    std::uint32_t blocked = 0;
    for (int c = 0; c < spec.vertex_count(); ++c)
        if (!spec.allowed.contains(c, b)) blocked |= 1U << c;
    std::uint64_t sum = 0;
    for_each_graph(spec, [&](AdjacencyRows rows) {
        const std::uint32_t hits = rows[static_cast<std::size_t>(a)] & (blocked | rows[static_cast<std::size_t>(b)]);
        sum += static_cast<std::uint64_t>(std::popcount(hits));
    });
    return Rational(BigInt(sum), BigInt(total));
}

std::vector<Rational> ExactOracle::unswitchable_table(const DegreeSpec& spec) {
    const int n = spec.vertex_count();
    const auto total = count(spec);
    require_nonempty(total);
    std::vector<std::uint32_t> blocked(static_cast<std::size_t>(n), 0);
    for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
            if (!spec.allowed.contains(c, b)) blocked[static_cast<std::size_t>(b)] |= 1U << c;
    std::vector<std::uint64_t> sums(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0);
    for_each_graph(spec, [&](AdjacencyRows rows) {
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                sums[static_cast<std::size_t>(a * n + b)] += static_cast<std::uint64_t>(
                    std::popcount(rows[static_cast<std::size_t>(a)] &
                                  (blocked[static_cast<std::size_t>(b)] | rows[static_cast<std::size_t>(b)])));
    });
    std::vector<Rational> out;
    out.reserve(sums.size());
    for (auto s : sums) out.emplace_back(BigInt(s), BigInt(total));
    return out;
}

void ExactOracle::for_each_graph(const DegreeSpec& spec, const std::function<void(AdjacencyRows)>& visit) {
    const State s = load(spec);
    if (count_state(s) == 0) return;
    std::array<std::uint32_t, kOracleMaxVertices> adj{};
    walk_state(s, adj, visit);
}

ExactOracle& default_oracle() {
    thread_local ExactOracle oracle;
    return oracle;
}

BigInt count_graphs(const DegreeSpec& spec) { return default_oracle().count_graphs(spec); }

Rational edge_probability(const DegreeSpec& spec, Vertex a, Vertex b) {
    return default_oracle().edge_probability(spec, a, b);
}

Rational cherry_probability(const DegreeSpec& spec, Vertex a, Vertex b, Vertex c) {
    return default_oracle().cherry_probability(spec, a, b, c);
}

Rational joint_probability(const DegreeSpec& spec, const ConstraintSet& constraints) {
    return default_oracle().joint_probability(spec, constraints);
}

ConditionalTable conditional_table(const DegreeSpec& spec, std::span<const EdgeKey> edges, EdgeKey target) {
    return default_oracle().conditional_table(spec, edges, target);
}

double to_double(const Rational& q) {
    return static_cast<double>(q);
}

std::string to_string(const Rational& q) {
    return numerator(q).str() + "/" + denominator(q).str();
}

}  // namespace rrg
