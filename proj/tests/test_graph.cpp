#include <doctest.h>

#include <random>
#include <sstream>

#include "rrg/graph.hpp"
#include "support.hpp"

using namespace rrg;

namespace {

std::vector<EdgeKey> k4_cycle() { return {EdgeKey(0, 1), EdgeKey(1, 2), EdgeKey(2, 3), EdgeKey(0, 3)}; }

// Independent audit of a constructed graph.
bool audit(const SimpleGraph& g, int d, const ConstraintSet& c) {
    for (int v = 0; v < g.vertex_count(); ++v) {
        int deg = 0;
        for (int u = 0; u < g.vertex_count(); ++u)
            if (u != v && g.has_edge(u, v)) ++deg;
        if (deg != d) return false;
    }
    for (auto e : c.required_in)
        if (!g.has_edge(e)) return false;
    for (auto e : c.required_out)
        if (g.has_edge(e)) return false;
    return true;
}

}  // namespace

TEST_CASE("edge keys are canonical and reject loops") {
    const EdgeKey e(5, 2);
    CHECK(e.u == 2);
    CHECK(e.v == 5);
    CHECK(e == EdgeKey(2, 5));
    CHECK_THROWS_AS(EdgeKey(3, 3), PreconditionError);
    CHECK(e.other(2) == 5);
    CHECK(e.shares_endpoint(EdgeKey(5, 7)));
    CHECK_FALSE(e.shares_endpoint(EdgeKey(0, 1)));
}

TEST_CASE("pair sets iterate in sorted order") {
    PairSet s(5);
    s.insert(EdgeKey(3, 4));
    s.insert(EdgeKey(0, 2));
    s.insert(EdgeKey(1, 3));
    const auto v = s.to_vector();
    REQUIRE(v.size() == 3);
    CHECK(v[0] == EdgeKey(0, 2));
    CHECK(v[2] == EdgeKey(3, 4));
    CHECK(s.degree(3) == 2);
    s.erase(EdgeKey(1, 3));
    CHECK_FALSE(s.contains(1, 3));
    CHECK(PairSet::complete(6).size() == 15);
}

TEST_CASE("conditioning on a present edge decrements both endpoints") {
    const DegreeSpec spec = DegreeSpec::regular(4, 2);
    const DegreeSpec in = condition(spec, EdgeKey(0, 1), true);
    CHECK(in.degrees == std::vector<int>{1, 1, 2, 2});
    CHECK(in.allowed.size() == 5);
    CHECK_FALSE(in.allowed.contains(0, 1));

    const DegreeSpec out = condition(spec, EdgeKey(0, 1), false);
    CHECK(out.degrees == spec.degrees);
    CHECK(out.allowed.size() == 5);

    CHECK_THROWS_AS(condition(in, EdgeKey(0, 1), true), PreconditionError);
    const DegreeSpec zero = DegreeSpec::regular(4, 0);
    CHECK_THROWS_AS(condition(zero, EdgeKey(0, 1), true), PreconditionError);
}

TEST_CASE("conditioning on disjoint edges commutes") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 4 + static_cast<int>(rng() % 5);
        const DegreeSpec spec = DegreeSpec::regular(n, 2);
        const auto pairs = spec.allowed.to_vector();
        const EdgeKey e1 = pairs[rng() % pairs.size()];
        EdgeKey e2 = pairs[rng() % pairs.size()];
        if (e1 == e2) continue;
        const bool p1 = rng() & 1U;
        const bool p2 = rng() & 1U;
        CHECK(condition(condition(spec, e1, p1), e2, p2) == condition(condition(spec, e2, p2), e1, p1));
    }
}

TEST_CASE("ball membership") {
    DegreeSpec spec = DegreeSpec::regular(6, 3);
    CHECK(spec.in_ball(3, 0));
    spec = spec.decremented(0, 1);
    CHECK_FALSE(spec.in_ball(3, 0));
    CHECK(spec.in_ball(3, 1));
    CHECK_FALSE(DegreeSpec::regular(6, 3).in_ball(2, 5));
}

TEST_CASE("switching the 4-cycle gives the other 4-cycles") {
    const auto cycle = k4_cycle();
    const SimpleGraph g(4, cycle);
    const SimpleGraph h = perform_switching(g, {EdgeKey(0, 1), EdgeKey(2, 3)}, {EdgeKey(0, 2), EdgeKey(1, 3)});
    CHECK(h.is_regular(2));
    CHECK(h.has_edge(0, 2));
    CHECK(h.has_edge(1, 3));
    CHECK_FALSE(h.has_edge(0, 1));
    // The three labeled 4-cycles are the three 2-regular graphs on 4 vertices.
    const auto all = testing::brute_force_graphs(DegreeSpec::regular(4, 2));
    CHECK(all.size() == 3);
    const auto h_edges = h.edges();
    testing::EdgeSet hs(h_edges.begin(), h_edges.end());
    testing::EdgeSet gs(cycle.begin(), cycle.end());
    CHECK(hs != gs);
    CHECK(std::find(all.begin(), all.end(), hs) != all.end());
}

TEST_CASE("switching rejects bad patterns") {
    const SimpleGraph path(4, std::vector<EdgeKey>{EdgeKey(0, 1), EdgeKey(2, 3)});
    const SimpleGraph s = perform_switching(path, {EdgeKey(0, 1), EdgeKey(2, 3)}, {EdgeKey(0, 2), EdgeKey(1, 3)});
    CHECK(s.degree_sequence() == path.degree_sequence());

    const SimpleGraph g(4, k4_cycle());
    CHECK_THROWS_AS(perform_switching(g, {EdgeKey(0, 1), EdgeKey(2, 3)}, {EdgeKey(1, 2), EdgeKey(0, 3)}),
                    PreconditionError);
    CHECK_THROWS_AS(perform_switching(g, {EdgeKey(0, 1), EdgeKey(1, 2)}, {EdgeKey(0, 2), EdgeKey(1, 3)}),
                    PreconditionError);
    CHECK_THROWS_AS(perform_switching(g, {EdgeKey(0, 2), EdgeKey(1, 3)}, {EdgeKey(0, 1), EdgeKey(2, 3)}),
                    PreconditionError);
}

TEST_CASE("random switchings preserve degrees") {
    std::mt19937_64 rng(3);
    SimpleGraph g = circulant_regular(20, 4);
    int applied = 0;
    for (int step = 0; step < 2000; ++step) {
        const auto edges = g.edges();
        const EdgeKey a = edges[rng() % edges.size()];
        const EdgeKey b = edges[rng() % edges.size()];
        if (a.shares_endpoint(b)) continue;
        const EdgeKey x(a.u, b.u);
        const EdgeKey y(a.v, b.v);
        if (g.has_edge(x) || g.has_edge(y)) continue;
        g = perform_switching(g, {a, b}, {x, y});
        ++applied;
        REQUIRE(g.is_regular(4));
    }
    CHECK(applied > 100);
}

TEST_CASE("circulant graphs are regular") {
    for (int n = 2; n <= 15; ++n)
        for (int d = 0; d < n; ++d) {
            if ((n * d) % 2) {
                CHECK_THROWS_AS(circulant_regular(n, d), PreconditionError);
                continue;
            }
            const SimpleGraph g = circulant_regular(n, d);
            CHECK(g.is_regular(d));
            CHECK(g.edge_count() == static_cast<std::size_t>(n * d / 2));
        }
}

TEST_CASE("constrained construction passes an independent audit") {
    const ConstraintSet a({EdgeKey(0, 1)}, {});
    CHECK(audit(build_constrained_regular(12, 3, a), 3, a));
    const ConstraintSet b({}, {EdgeKey(0, 1)});
    CHECK(audit(build_constrained_regular(12, 3, b), 3, b));
    const ConstraintSet c({EdgeKey(0, 1)}, {EdgeKey(2, 3), EdgeKey(4, 5)});
    CHECK(audit(build_constrained_regular(20, 6, c), 6, c));
    CHECK_THROWS_AS(build_constrained_regular(16, 6, c), PreconditionError);
    CHECK(audit(build_constrained_regular(10, 4, ConstraintSet{}), 4, ConstraintSet{}));
}

TEST_CASE("constrained construction over random constraint sets") {
    std::mt19937_64 rng(21);
    int built = 0;
    for (int trial = 0; trial < 300; ++trial) {
        const int k = 1 + static_cast<int>(rng() % 3);
        const int d = 2 * k + static_cast<int>(rng() % 3);
        const int n = d + 1 + 4 * k + static_cast<int>(rng() % 8) + (d + 2);
        if ((n * d) % 2) continue;
        std::set<EdgeKey> in;
        std::set<EdgeKey> out;
        while (static_cast<int>(in.size() + out.size()) < k) {
            const int u = static_cast<int>(rng() % n);
            const int v = static_cast<int>(rng() % n);
            if (u == v) continue;
            const EdgeKey e(u, v);
            if (in.count(e) || out.count(e)) continue;
            (rng() & 1U ? in : out).insert(e);
        }
        const ConstraintSet c(in, out);
        REQUIRE(audit(build_constrained_regular(n, d, c), d, c));
        ++built;
    }
    CHECK(built > 100);
}

TEST_CASE("constrained construction preconditions") {
    CHECK_THROWS_AS(build_constrained_regular(12, 1, ConstraintSet({EdgeKey(0, 1)}, {})), PreconditionError);
    CHECK_THROWS_AS(build_constrained_regular(7, 3, ConstraintSet{}), PreconditionError);
    CHECK_THROWS_AS(build_constrained_regular(8, 4, ConstraintSet({EdgeKey(0, 1)}, {})), PreconditionError);
    CHECK_THROWS_AS(ConstraintSet({EdgeKey(0, 1)}, {EdgeKey(0, 1)}), PreconditionError);
}

TEST_CASE("edge list round trip") {
    const SimpleGraph g = circulant_regular(10, 3);
    std::stringstream ss;
    write_edge_list(ss, g);
    CHECK(read_edge_list(ss) == g);

    std::stringstream bad("4 2\n0 1\n1 2\n");
    CHECK_THROWS_AS(read_edge_list(bad), PreconditionError);
    std::stringstream empty("");
    CHECK_THROWS_AS(read_edge_list(empty), PreconditionError);
}

TEST_CASE("complement of a regular graph") {
    const SimpleGraph g = circulant_regular(9, 4);
    const SimpleGraph h = g.complement();
    CHECK(h.is_regular(4));
    for (int u = 0; u < 9; ++u)
        for (int v = u + 1; v < 9; ++v) CHECK(g.has_edge(u, v) != h.has_edge(u, v));
}
