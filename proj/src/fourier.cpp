#include "rrg/fourier.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <random>
#include <string>

namespace rrg {

namespace {

void check_dim(int t) {
    if (t < 0 || t > kCubeMaxDim)
        throw BudgetError("cube dimension must lie in [0, " + std::to_string(kCubeMaxDim) + "], got " + std::to_string(t));
}

std::size_t points(int t) { return std::size_t{1} << t; }

double log_add(double x, double y) {
    if (x == -std::numeric_limits<double>::infinity()) return y;
    if (y == -std::numeric_limits<double>::infinity()) return x;
    const double hi = std::max(x, y);
    return hi + std::log1p(std::exp(std::min(x, y) - hi));
}

double log_choose(int n, int k) {
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

// k * log(a), with 0 * log(0) = 0.
double log_pow(double a, int k) {
    if (k == 0) return 0.0;
    return k * std::log(a);
}

}  // namespace

BooleanTable::BooleanTable(int dim, std::vector<double> vals) : t(dim), values(std::move(vals)) {
    check_dim(t);
    if (values.size() != points(t)) throw PreconditionError("table length must be 2^t");
}

BooleanTable BooleanTable::constant(int t, double value) {
    check_dim(t);
    return BooleanTable(t, std::vector<double>(points(t), value));
}

FourierCoeffs::FourierCoeffs(int dim, std::vector<double> c) : t(dim), coeff(std::move(c)) {
    check_dim(t);
    if (coeff.size() != points(t)) throw PreconditionError("coefficient vector length must be 2^t");
}

FourierCoeffs FourierCoeffs::constant(int t, double value) {
    check_dim(t);
    std::vector<double> c(points(t), 0.0);
    c[0] = value;
    return FourierCoeffs(t, std::move(c));
}

double FourierCoeffs::max_abs(bool skip_empty) const {
    double m = 0.0;
    for (std::size_t s = skip_empty ? 1 : 0; s < coeff.size(); ++s) m = std::max(m, std::abs(coeff[s]));
    return m;
}

FourierCoeffs transform(const BooleanTable& f) {
    check_dim(f.t);
    std::vector<double> c = f.values;
    for (int i = 0; i < f.t; ++i) {
        const std::size_t bit = std::size_t{1} << i;
        for (std::size_t s = 0; s < c.size(); ++s)
            if (s & bit) c[s] -= c[s ^ bit];
    }
    return FourierCoeffs(f.t, std::move(c));
}

BooleanTable to_table(const FourierCoeffs& c) {
    check_dim(c.t);
    std::vector<double> v = c.coeff;
    for (int i = 0; i < c.t; ++i) {
        const std::size_t bit = std::size_t{1} << i;
        for (std::size_t s = 0; s < v.size(); ++s)
            if (s & bit) v[s] += v[s ^ bit];
    }
    return BooleanTable(c.t, std::move(v));
}

double evaluate(const FourierCoeffs& c, std::uint32_t x) {
    if (x >= points(c.t)) throw PreconditionError("point outside the cube");
    double sum = c.coeff[0];
    for (std::uint32_t s = x; s != 0; s = (s - 1) & x) sum += c.coeff[s];
    return sum;
}

FourierCoeffs product_coeffs(const FourierCoeffs& f, const FourierCoeffs& g) {
    if (f.t != g.t) throw PreconditionError("dimension mismatch in product");
    const std::size_t size = points(f.t);
    std::vector<double> out(size, 0.0);
    for (std::size_t s = 0; s < size; ++s) {
        double sum = 0.0;
        // S1 ranges over subsets of S; S2 must contain S \ S1 and may add any D within S1.
        for (std::size_t s1 = s;; s1 = (s1 - 1) & s) {
            const double fs1 = f.coeff[s1];
            if (fs1 != 0.0) {
                const std::size_t rest = s ^ s1;
                for (std::size_t d = s1;; d = (d - 1) & s1) {
                    sum += fs1 * g.coeff[rest | d];
                    if (d == 0) break;
                }
            }
            if (s1 == 0) break;
        }
        out[s] = sum;
    }
    return FourierCoeffs(f.t, std::move(out));
}

FourierCoeffs reciprocal_coeffs(const FourierCoeffs& f, int max_terms, double tol) {
    if (max_terms < 1) throw PreconditionError("max_terms must be positive");
    const double f0 = f.coeff[0];
    if (std::abs(f0) < 1e-300) throw DegenerateError("f(0) vanishes; cannot normalize");

    FourierCoeffs h = f;
    for (auto& x : h.coeff) x = -x / f0;
    h.coeff[0] = 0.0;  // h = 1 - f/f(0)

    const BooleanTable values = to_table(h);
    double sup = 0.0;
    for (double v : values.values) sup = std::max(sup, std::abs(v));
    if (!(sup < 1.0)) throw DegenerateError("series diverges: sup|1 - f/f(0)| = " + std::to_string(sup));

    FourierCoeffs sum = FourierCoeffs::constant(f.t, 1.0);
    FourierCoeffs term = sum;
    for (int i = 1; i <= max_terms; ++i) {
        term = product_coeffs(term, h);
        for (std::size_t s = 0; s < sum.coeff.size(); ++s) sum.coeff[s] += term.coeff[s];
        if (term.max_abs() < tol) break;
    }
    for (auto& x : sum.coeff) x /= f0;
    return sum;
}

double LemmaSum1Result::ratio() const {
    if (log_lhs == log_rhs_unit) return 1.0;
    return std::exp(log_lhs - log_rhs_unit);
}

bool LemmaSum1Result::holds() const {
    if (log_lhs == -std::numeric_limits<double>::infinity()) return true;
    return log_lhs <= std::log(2.0) + log_rhs_unit + 1e-12;
}

LemmaSum1Result lemma_sum_1(int n, int m, double a) {
    if (n < 1) throw PreconditionError("lemma_sum_1 needs n >= 1");
    if (m < 0 || m > n) throw PreconditionError("lemma_sum_1 needs 0 <= m <= n");
    const double threshold = std::pow(static_cast<double>(n), -5.0) / 8192.0;
    if (!(a >= 0.0) || a > threshold * (1.0 + 1e-12))
        throw PreconditionError("lemma_sum_1 needs 0 <= a <= n^-5/8192");
    double lhs = -std::numeric_limits<double>::infinity();
    for (int k = 0; k <= n; ++k) {
        const int e = m + k;
        if (a == 0.0 && e > 0) continue;
        lhs = log_add(lhs, log_choose(n, k) + std::lgamma(4.0 * e + 1.0) + log_pow(a, e));
    }
    double rhs = -std::numeric_limits<double>::infinity();
    if (!(a == 0.0 && m > 0)) rhs = std::lgamma(4.0 * m + 1.0) + log_pow(a, m);
    return {lhs, rhs};
}

LemmaSum2Result lemma_sum_2(int n) {
    if (n < 1 || n > 12) throw BudgetError("lemma_sum_2 enumerates compositions for 1 <= n <= 12");
    std::vector<BigInt> fact(static_cast<std::size_t>(4 * n + 1));
    fact[0] = 1;
    for (std::size_t i = 1; i < fact.size(); ++i) fact[i] = fact[i - 1] * static_cast<unsigned>(i);

    LemmaSum2Result out{0, fact[static_cast<std::size_t>(4 * n)], 0, 0.0};
    // Bit j of `cuts` splits between positions j+1 and j+2.
    const std::uint32_t count = 1U << (n - 1);
    for (std::uint32_t cuts = 0; cuts < count; ++cuts) {
        BigInt term = fact[static_cast<std::size_t>(n)];
        int run = 1;
        for (int j = 0; j < n; ++j) {
            const bool split = (j == n - 1) || ((cuts >> j) & 1U);
            if (!split) {
                ++run;
                continue;
            }
            term *= fact[static_cast<std::size_t>(4 * run)];
            term /= fact[static_cast<std::size_t>(run)];
            run = 1;
        }
        out.sum += term;
        ++out.compositions;
    }
    out.ratio = static_cast<double>(Rational(out.sum, out.unit));
    return out;
}

double log_envelope(int s, double a, double b) {
    return std::lgamma(4.0 * s + 1.0) + s * std::log(a) + std::log(b);
}

BoundPropagationReport check_bound_propagation(int trials, int t, double a, double b, std::uint64_t seed) {
    if (t < 1 || t > 8) throw PreconditionError("bound propagation check needs 1 <= t <= 8");
    if (!(a > 0.0) || !(b > 0.0) || b > 1.0) throw PreconditionError("need a > 0 and 0 < b <= 1");
    if (trials < 0) throw PreconditionError("trials must be nonnegative");

    BoundPropagationReport report;
    report.trials = trials;
    report.t = t;
    report.a = a;
    report.b = b;

    const std::size_t size = points(t);
    std::vector<double> envelope(size);
    for (std::size_t s = 1; s < size; ++s) envelope[s] = std::exp(log_envelope(std::popcount(s), a, b));

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    auto draw = [&] {
        FourierCoeffs c = FourierCoeffs::constant(t, 1.0);
        for (std::size_t s = 1; s < size; ++s) c.coeff[s] = unit(rng) * envelope[s];
        return c;
    };
    auto worst = [&](const FourierCoeffs& c) {
        double r = 0.0;
        for (std::size_t s = 1; s < size; ++s) r = std::max(r, std::abs(c.coeff[s]) / envelope[s]);
        return r;
    };

    for (int i = 0; i < trials; ++i) {
        const FourierCoeffs f = draw();
        const FourierCoeffs g = draw();
        report.max_product_ratio = std::max(report.max_product_ratio, worst(product_coeffs(f, g)));
        try {
            report.max_reciprocal_ratio = std::max(report.max_reciprocal_ratio, worst(reciprocal_coeffs(f)));
        } catch (const DegenerateError&) {
            ++report.reciprocal_failures;
        }
    }
    return report;
}

}  // namespace rrg
