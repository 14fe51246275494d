#include <doctest.h>

#include <random>

#include "rrg/oracle.hpp"
#include "support.hpp"

using namespace rrg;
using testing::brute_force_graphs;
using testing::brute_probability;
using testing::frac;

TEST_CASE("graph counts on four vertices") {
    ExactOracle o;
    CHECK(o.count(DegreeSpec::regular(4, 1)) == 3);
    CHECK(o.count(DegreeSpec::regular(4, 2)) == 3);
    const std::vector<EdgeKey> missing{EdgeKey(0, 1)};
    CHECK(o.count(DegreeSpec::regular(4, 2, missing)) == 1);
    CHECK(o.count(DegreeSpec::regular(4, 3)) == 1);
    CHECK(o.count(DegreeSpec::regular(4, 0)) == 1);
    CHECK(o.count_graphs(DegreeSpec::regular(8, 3)) == 19355);
}

TEST_CASE("counts agree with subset enumeration") {
    std::mt19937_64 rng(7);
    ExactOracle o;
    for (int trial = 0; trial < 150; ++trial) {
        const int n = 3 + static_cast<int>(rng() % 4);
        std::vector<int> degs(static_cast<std::size_t>(n));
        for (auto& x : degs) x = static_cast<int>(rng() % n);
        const auto missing = testing::random_missing(n, 3, rng);
        PairSet allowed = PairSet::complete(n);
        for (auto e : missing) allowed.erase(e);
        const DegreeSpec spec(degs, allowed);
        CHECK(o.count(spec) == brute_force_graphs(spec).size());
    }
}

TEST_CASE("edge and cherry probabilities") {
    ExactOracle o;
    const DegreeSpec d1 = DegreeSpec::regular(4, 1);
    const DegreeSpec d2 = DegreeSpec::regular(4, 2);
    CHECK(o.edge_probability(d1, 0, 1) == frac(1, 3));
    CHECK(o.edge_probability(d2, 2, 3) == frac(2, 3));
    CHECK(o.cherry_probability(d2, 0, 1, 2) == frac(1, 3));
    CHECK(o.cherry_probability(d1, 0, 1, 2) == 0);
    CHECK(o.edge_probability(DegreeSpec::regular(5, 0), 0, 1) == 0);
    CHECK(to_string(o.edge_probability(d2, 0, 1)) == "2/3");
    CHECK_THROWS_AS(o.cherry_probability(d2, 0, 1, 0), PreconditionError);
    const std::vector<EdgeKey> missing{EdgeKey(0, 1)};
    CHECK_THROWS_AS(o.edge_probability(DegreeSpec::regular(4, 2, missing), 0, 1), PreconditionError);
}

TEST_CASE("empty classes and size caps are reported") {
    ExactOracle o;
    CHECK_THROWS_AS(o.edge_probability(DegreeSpec::regular(5, 1), 0, 1), EmptyClassError);
    CHECK_THROWS_AS(o.count(DegreeSpec::regular(11, 2)), BudgetError);
    CHECK_THROWS_AS(ExactOracle(11), PreconditionError);
}

TEST_CASE("probabilities agree with subset enumeration") {
    std::mt19937_64 rng(9);
    ExactOracle o;
    int checked = 0;
    for (int trial = 0; trial < 80; ++trial) {
        const int n = 4 + static_cast<int>(rng() % 3);
        const int d = 1 + static_cast<int>(rng() % 3);
        if ((n * d) % 2) continue;
        const auto missing = testing::random_missing(n, 2, rng);
        const DegreeSpec spec = DegreeSpec::regular(n, d, missing);
        const auto graphs = brute_force_graphs(spec);
        if (graphs.empty()) continue;
        for (auto e : spec.allowed.to_vector()) CHECK(o.edge_probability(spec, e.u, e.v) == brute_probability(graphs, {e}));
        for (int b = 0; b < n; ++b) {
            const auto nb = spec.allowed_neighbors(b);
            for (int a : nb)
                for (int c : nb) {
                    if (a == c) continue;
                    CHECK(o.cherry_probability(spec, a, b, c) ==
                          brute_probability(graphs, {EdgeKey(a, b), EdgeKey(b, c)}));
                }
        }
        ++checked;
    }
    CHECK(checked > 20);
}

TEST_CASE("joint probabilities") {
    ExactOracle o;
    const DegreeSpec d2 = DegreeSpec::regular(4, 2);
    CHECK(o.joint_probability(d2, ConstraintSet({EdgeKey(0, 1)}, {EdgeKey(0, 2)})) == frac(1, 3));
    CHECK(o.joint_probability(d2, ConstraintSet({EdgeKey(0, 1)}, {EdgeKey(2, 3)})) == 0);
    CHECK(o.joint_probability(d2, ConstraintSet{}) == 1);
    CHECK(o.joint_probability(d2, ConstraintSet({EdgeKey(1, 2)}, {})) == o.edge_probability(d2, 1, 2));
}

TEST_CASE("chain rule for joint probabilities") {
    std::mt19937_64 rng(4);
    ExactOracle o;
    for (int trial = 0; trial < 60; ++trial) {
        const int n = 5 + static_cast<int>(rng() % 3);
        const int d = 2;
        const DegreeSpec spec = DegreeSpec::regular(n, d);
        auto pairs = spec.allowed.to_vector();
        std::shuffle(pairs.begin(), pairs.end(), rng);
        std::set<EdgeKey> in;
        std::set<EdgeKey> out;
        std::vector<std::pair<EdgeKey, bool>> order;
        for (int i = 0; i < 3; ++i) {
            const bool present = rng() & 1U;
            (present ? in : out).insert(pairs[static_cast<std::size_t>(i)]);
            order.emplace_back(pairs[static_cast<std::size_t>(i)], present);
        }
        const Rational joint = o.joint_probability(spec, ConstraintSet(in, out));
        // Telescoping product along a random order of the constraints.
        std::shuffle(order.begin(), order.end(), rng);
        Rational product = 1;
        DegreeSpec cur = spec;
        bool zero = false;
        for (auto [e, present] : order) {
            if (o.count(cur) == 0) {
                zero = true;
                break;
            }
            const Rational p = o.edge_probability(cur, e.u, e.v);
            const Rational step = present ? p : 1 - p;
            if (step == 0) {
                zero = true;
                break;
            }
            product *= step;
            cur = condition(cur, e, present);
        }
        CHECK(joint == (zero ? Rational(0) : product));
    }
}

TEST_CASE("conditional tables") {
    ExactOracle o;
    const std::vector<EdgeKey> one{EdgeKey(0, 1)};
    const ConditionalTable t2 = o.conditional_table(DegreeSpec::regular(4, 2), one, EdgeKey(2, 3));
    REQUIRE(t2.values.size() == 2);
    CHECK(t2.defined[0]);
    CHECK(t2.defined[1]);
    CHECK(t2.values[1] == 1);
    CHECK(t2.values[0] == 0);

    const ConditionalTable t1 = o.conditional_table(DegreeSpec::regular(4, 1), one, EdgeKey(2, 3));
    CHECK(t1.defined[1]);
    CHECK(t1.values[1] == 1);

    const ConditionalTable t0 = o.conditional_table(DegreeSpec::regular(4, 2), {}, EdgeKey(2, 3));
    REQUIRE(t0.values.size() == 1);
    CHECK(t0.values[0] == frac(2, 3));
}

TEST_CASE("conditional tables agree with subset enumeration") {
    std::mt19937_64 rng(5);
    ExactOracle o;
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 5 + static_cast<int>(rng() % 2);
        const DegreeSpec spec = DegreeSpec::regular(n, 2);
        auto pairs = spec.allowed.to_vector();
        std::shuffle(pairs.begin(), pairs.end(), rng);
        const std::vector<EdgeKey> edges(pairs.begin(), pairs.begin() + 3);
        const EdgeKey target = pairs[3];
        const auto table = o.conditional_table(spec, edges, target);
        const auto graphs = brute_force_graphs(spec);
        for (std::uint32_t x = 0; x < 8; ++x) {
            testing::EdgeSet in;
            testing::EdgeSet out;
            for (int i = 0; i < 3; ++i) (x >> i & 1U ? in : out).insert(edges[static_cast<std::size_t>(i)]);
            const Rational cond = brute_probability(graphs, in, out);
            REQUIRE(static_cast<bool>(table.defined[x]) == (cond > 0));
            if (cond == 0) continue;
            in.insert(target);
            CHECK(table.values[x] == brute_probability(graphs, in, out) / cond);
        }
    }
}

TEST_CASE("degree identity sums edge probabilities to the degree") {
    std::mt19937_64 rng(8);
    ExactOracle o;
    for (int trial = 0; trial < 60; ++trial) {
        const int n = 4 + static_cast<int>(rng() % 5);
        const int d = 1 + static_cast<int>(rng() % 3);
        if ((n * d) % 2 || d >= n) continue;
        const auto missing = testing::random_missing(n, 2, rng);
        const DegreeSpec spec = DegreeSpec::regular(n, d, missing);
        if (o.count(spec) == 0) continue;
        for (int b = 0; b < n; ++b) {
            Rational sum = 0;
            for (int c : spec.allowed_neighbors(b)) sum += o.edge_probability(spec, b, c);
            CHECK(sum == d);
        }
    }
}

TEST_CASE("complement duality of counts") {
    ExactOracle o;
    for (int n = 2; n <= 9; ++n)
        for (int d = 0; d < n; ++d) {
            if ((n * d) % 2 || (n * (n - 1 - d)) % 2) continue;
            CHECK(o.count(DegreeSpec::regular(n, d)) == o.count(DegreeSpec::regular(n, n - 1 - d)));
        }
}

TEST_CASE("cherry identity through conditioning") {
    ExactOracle o;
    const DegreeSpec spec = DegreeSpec::regular(7, 2);
    const Rational y = o.cherry_probability(spec, 0, 1, 2);
    const DegreeSpec cond = condition(spec, EdgeKey(0, 1), true);
    CHECK(y == o.edge_probability(spec, 0, 1) * o.edge_probability(cond, 1, 2));
}

TEST_CASE("unswitchable table agrees with per-pair expectation and subset enumeration") {
    ExactOracle o;
    const std::vector<EdgeKey> missing{EdgeKey(0, 2)};
    const DegreeSpec spec = DegreeSpec::regular(6, 2, missing);
    const auto table = o.unswitchable_table(spec);
    const auto graphs = brute_force_graphs(spec);
    for (int a = 0; a < 6; ++a)
        for (int b = 0; b < 6; ++b) {
            if (a == b) continue;
            Rational total = 0;
            for (const auto& g : graphs)
                for (auto e : g) {
                    if (!e.touches(a)) continue;
                    const int c = e.other(a);
                    if (c == b || !spec.allowed.contains(c, b) || g.count(EdgeKey(c, b))) total += 1;
                }
            total /= static_cast<long>(graphs.size());
            CHECK(table[static_cast<std::size_t>(a * 6 + b)] == total);
            CHECK(o.unswitchable_expectation(spec, a, b) == total);
        }
}

TEST_CASE("graph visitor yields each graph once") {
    ExactOracle o;
    const DegreeSpec spec = DegreeSpec::regular(6, 3);
    std::set<std::vector<std::uint32_t>> seen;
    o.for_each_graph(spec, [&](AdjacencyRows rows) { seen.emplace(rows.begin(), rows.end()); });
    CHECK(seen.size() == brute_force_graphs(spec).size());
}
