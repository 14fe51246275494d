#include <doctest.h>

#include <cmath>
#include <random>

#include "rrg/estimator.hpp"
#include "rrg/operators.hpp"
#include "support.hpp"

using namespace rrg;

namespace {

struct ConstantSource {
    using value_type = double;
    double p;
    double y;

    double P(const DegreeSpec& st, Vertex a, Vertex b) const { return st.allowed.contains(a, b) ? p : 0.0; }
    double Y(const DegreeSpec& st, Vertex a, Vertex b, Vertex c) const {
        return a != c && st.allowed.contains(a, b) && st.allowed.contains(b, c) ? y : 0.0;
    }
    bool positive(const DegreeSpec& st, Vertex a, Vertex b) const { return P(st, a, b) > 0.0; }
};

double rel(double x, double ref) { return std::abs(x - ref) / std::max(std::abs(ref), 1e-300); }

}  // namespace

TEST_CASE("B with constant estimates") {
    for (int n = 4; n <= 9; ++n) {
        const DegreeSpec spec = DegreeSpec::regular(n, 2);
        const ConstantSource src{0.3, 0.09};
        CHECK(op_B(src, spec, 0, 1) == doctest::Approx(0.3 + (n - 2) * 0.09));
    }
    PairSet none(4);
    const DegreeSpec isolated({0, 0, 0, 0}, none);
    CHECK(op_B(ConstantSource{0.3, 0.09}, isolated, 0, 1) == 0.0);
}

TEST_CASE("operators fed exact values reproduce them") {
    ExactOracle o;
    const OracleSource<Rational> exact(o);
    const DegreeSpec d2 = DegreeSpec::regular(4, 2);
    CHECK(op_P(exact, d2, 0, 1) == testing::frac(2, 3));
    CHECK_THROWS_AS(op_Y(exact, d2, 0, 1, 2), EmptyClassError);
    const DegreeSpec d6 = DegreeSpec::regular(6, 2);
    CHECK(op_Y(exact, d6, 0, 1, 2) == o.cherry_probability(d6, 0, 1, 2));
    const auto table = o.unswitchable_table(d2);
    CHECK(op_B(exact, d2, 0, 1) == table[1]);

    const DegreeSpec d1 = DegreeSpec::regular(6, 1);
    CHECK(op_Y(exact, d1, 0, 1, 2) == 0);
    CHECK(std::abs(op_Y(OracleSource<double>(o), d1, 0, 1, 2)) <= 1e-10);

    const OracleSource<double> approx(o);
    for (int a = 0; a < 6; ++a)
        for (int b = 0; b < 6; ++b)
            if (a != b) CHECK(rel(op_P(approx, d6, a, b), to_double(o.edge_probability(d6, a, b))) <= 1e-10);
}

TEST_CASE("operators on random specs with exact inputs") {
    std::mt19937_64 rng(12);
    ExactOracle o;
    for (int trial = 0; trial < 25; ++trial) {
        const int n = 5 + static_cast<int>(rng() % 3);
        const int d = 2;
        const auto missing = testing::random_missing(n, 2, rng);
        const DegreeSpec spec = DegreeSpec::regular(n, d, missing);
        if (o.count(spec) == 0) continue;
        const OracleSource<Rational> exact(o);
        for (int b = 0; b < n; ++b) {
            // Degree identity: the refined P values around b sum to d(b).
            Rational sum = 0;
            bool ok = true;
            for (int c : spec.allowed_neighbors(b)) {
                if (o.edge_probability(spec, b, c) == 0) continue;
                try {
                    sum += op_P(exact, spec, c, b);
                } catch (const DegenerateError&) {
                    ok = false;
                }
            }
            if (ok) CHECK(sum == d);
        }
    }
}

TEST_CASE("symmetric root gives symmetric outputs") {
    const DegreeSpec root = DegreeSpec::regular(7, 2);
    const EstimatePair est = initial_estimates(root, 2, 2);
    const double p01 = op_P(est, root, 0, 1);
    for (int a = 0; a < 7; ++a)
        for (int b = 0; b < 7; ++b)
            if (a != b) CHECK(op_P(est, root, a, b) == doctest::Approx(p01).epsilon(1e-12));
    CHECK(op_Y(est, root, 0, 1, 2) == doctest::Approx(op_Y(est, root, 2, 1, 0)).epsilon(1e-12));
}

TEST_CASE("initial estimates") {
    for (int n = 3; n <= 9; ++n)
        for (int d = 1; d < n; ++d) {
            if ((n * d) % 2) continue;
            const DegreeSpec root = DegreeSpec::regular(n, d);
            const EstimatePair est = initial_estimates(root, d, 0);
            CHECK(est.P(root, 0, 1) == static_cast<double>(d) / (n - 1));
        }
    const DegreeSpec root = DegreeSpec::regular(4, 2);
    const EstimatePair est = initial_estimates(root, 2, 2);
    CHECK(est.Y(root, 0, 1, 2) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(est.P(root, 0, 1) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    const DegreeSpec below = root.decremented(0, 1);
    // (n-1) d(a) d(b) / (d |A(a)| |A(b)|) with d(0) = 1, d(2) = 2.
    CHECK(est.P(below, 0, 2) == doctest::Approx(3.0 * 1 * 2 / (2.0 * 3 * 3)));
    CHECK(est.state_count() > 1);
    CHECK_THROWS_AS(initial_estimates(root, 2, 13), PreconditionError);
}

TEST_CASE("oracle estimates are a fixed point") {
    ExactOracle o;
    for (int n : {6, 7}) {
        const DegreeSpec root = DegreeSpec::regular(n, 2);
        const EstimatePair ex = oracle_estimates(root, 2, 4, o);
        IterationStats stats;
        const EstimatePair once = iterate(ex, 1, &stats);
        CHECK(once.depth() == 2);
        CHECK(max_relative_deviation(once, ex, once.depth()) <= 1e-10);
    }
    const std::vector<EdgeKey> missing{EdgeKey(0, 1), EdgeKey(2, 5)};
    const DegreeSpec root = DegreeSpec::regular(7, 2, missing);
    const EstimatePair ex = oracle_estimates(root, 2, 4, o);
    CHECK(max_relative_deviation(iterate(ex, 2), ex, 0) <= 1e-10);
}

TEST_CASE("iteration bookkeeping") {
    const EstimatePair est = initial_estimates(6, 2, 4);
    const EstimatePair same = iterate(est, 0);
    CHECK(same.depth() == 4);
    CHECK(max_relative_deviation(same, est, 4) == 0.0);
    CHECK_THROWS_AS(iterate(est, 3), PreconditionError);
    EstimatePair moving = est;
    const int rounds = iterate_until_stable(moving);
    CHECK(rounds >= 1);
    CHECK(rounds <= 2);
    CHECK(moving.depth() == 4 - 2 * rounds);
}

TEST_CASE("one refinement reduces the root error of an inexact start") {
    ExactOracle o;
    for (auto [n, d] : {std::pair{6, 2}, std::pair{7, 2}, std::pair{6, 3}, std::pair{8, 3}}) {
        for (const auto& missing : {std::vector<EdgeKey>{EdgeKey(0, 1)}, std::vector<EdgeKey>{EdgeKey(0, 1), EdgeKey(2, 3)}}) {
            const DegreeSpec root = DegreeSpec::regular(n, d, missing);
            const EstimatePair ex = oracle_estimates(root, d, 2, o);
            const EstimatePair start = initial_estimates(root, d, 2);
            const double before = max_relative_deviation(start, ex, 0);
            const double after = max_relative_deviation(iterate(start, 1), ex, 0);
            CAPTURE(n);
            CAPTURE(d);
            CHECK(before > 0.0);
            CHECK(after < before);
        }
    }
}

TEST_CASE("root error is non-increasing over three refinements for degree-2 specs with missing pairs") {
    ExactOracle o;
    for (int n : {6, 7}) {
        for (const auto& missing : {std::vector<EdgeKey>{EdgeKey(0, 1)}, std::vector<EdgeKey>{EdgeKey(0, 1), EdgeKey(2, 3)}}) {
            const DegreeSpec root = DegreeSpec::regular(n, 2, missing);
            const EstimatePair ex = oracle_estimates(root, 2, 6, o);
            EstimatePair est = initial_estimates(root, 2, 6);
            double prev = max_relative_deviation(est, ex, 0);
            for (int round = 0; round < 3; ++round) {
                est = iterate(est, 1);
                const double err = max_relative_deviation(est, ex, 0);
                CHECK(err <= prev);
                prev = err;
            }
        }
    }
}

TEST_CASE("first estimate bound on oracle probabilities") {
    std::mt19937_64 rng(14);
    ExactOracle o;
    for (int trial = 0; trial < 40; ++trial) {
        const int n = 6 + static_cast<int>(rng() % 3);
        const int d = 2 + static_cast<int>(rng() % 2);
        if ((n * d) % 2) continue;
        const auto missing = testing::random_missing(n, 2, rng);
        const DegreeSpec spec = DegreeSpec::regular(n, d, missing);
        if (o.count(spec) == 0) continue;
        const double c = static_cast<double>(d) / n;
        for (auto e : spec.allowed.to_vector())
            CHECK(to_double(o.edge_probability(spec, e.u, e.v)) <= (1 + 4 * c) * d / n);
    }
}

TEST_CASE("contraction measurement") {
    const EstimatePair base = initial_estimates(DegreeSpec::regular(8, 3), 3, 2);
    const ContractionReport same = contraction_measure(base, base);
    CHECK(same.xi_before == 0.0);
    CHECK(same.xi_after == 0.0);

    std::mt19937_64 rng(15);
    for (int trial = 0; trial < 5; ++trial) {
        const ContractionReport both = contraction_measure(base, perturbed(base, 0.01, rng));
        CHECK(both.xi_before >= 0.01 / 1.01 - 1e-12);
        CHECK(both.xi_before <= 0.01 / 0.99 + 1e-12);
        CHECK(std::isfinite(both.ratio));
        CHECK(both.p == doctest::Approx(3.0 / 7.0));
        const ContractionReport y_only = contraction_measure(base, perturbed(base, 0.01, rng, false, true));
        CHECK(std::isfinite(y_only.ratio));
        CHECK(y_only.contraction < both.contraction + 1.0);
    }
    CHECK_THROWS_AS(contraction_measure(base, initial_estimates(DegreeSpec::regular(8, 3), 3, 4)), PreconditionError);
}

TEST_CASE("joint estimate") {
    CHECK(joint_estimate(8, 3, ConstraintSet{}) == 1.0);
    CHECK(joint_estimate(8, 3, ConstraintSet({EdgeKey(0, 1)}, {})) == doctest::Approx(0.375));
    CHECK(joint_estimate(8, 3, ConstraintSet({}, {EdgeKey(0, 1)})) == doctest::Approx(0.625));
    ExactOracle o;
    const DegreeSpec spec = DegreeSpec::regular(8, 3);
    CHECK(o.joint_probability(spec, ConstraintSet({EdgeKey(0, 1)}, {})) == testing::frac(3, 7));
    CHECK(o.joint_probability(spec, ConstraintSet({}, {EdgeKey(0, 1)})) == testing::frac(4, 7));
}
