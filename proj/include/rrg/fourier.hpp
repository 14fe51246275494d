#pragma once

// Real functions on {0,1}^t in the monomial basis: f(x) = sum_T c_T prod_{i in T} x_i.
// This is NOT the +-1 character basis; c_T here is the coefficient of the
// plain product of the 0/1 coordinates in T. Points and subsets are bitmasks
// (bit i-1 <-> coordinate i).

#include <cstdint>
#include <vector>

#include "rrg/oracle.hpp"

namespace rrg {

inline constexpr int kCubeMaxDim = 20;

struct BooleanTable {
    int t = 0;
    std::vector<double> values;

    BooleanTable() = default;
    BooleanTable(int t, std::vector<double> values);
    static BooleanTable constant(int t, double value);
};

struct FourierCoeffs {
    int t = 0;
    std::vector<double> coeff;

    FourierCoeffs() = default;
    FourierCoeffs(int t, std::vector<double> coeff);
    static FourierCoeffs constant(int t, double value);

    double max_abs(bool skip_empty = false) const;
};

// Moebius inversion over the subset lattice, O(t 2^t).
FourierCoeffs transform(const BooleanTable& f);
// Zeta transform: tabulates the polynomial on every point.
BooleanTable to_table(const FourierCoeffs& c);
double evaluate(const FourierCoeffs& c, std::uint32_t x);

// Coefficients of the pointwise product via covering pairs S1 u S2 = S.
FourierCoeffs product_coeffs(const FourierCoeffs& f, const FourierCoeffs& g);

// 1/f by normalizing with f(0) and summing the series sum_i (1 - f/f(0))^i.
// Requires sup_x |1 - f(x)/f(0)| < 1.
FourierCoeffs reciprocal_coeffs(const FourierCoeffs& f, int max_terms = 64, double tol = 1e-12);

struct LemmaSum1Result {
    double log_lhs;
    double log_rhs_unit;

    double ratio() const;
    bool holds() const;  // lhs <= 2 * rhs_unit
};

// sum_k C(n,k) (4(m+k))! a^(m+k) against (4m)! a^m, in log space.
// Requires a <= n^-5 / 8192.
LemmaSum1Result lemma_sum_1(int n, int m, double a);

struct LemmaSum2Result {
    BigInt sum;
    BigInt unit;  // (4n)!
    std::uint64_t compositions;
    double ratio;
};

// Exhaustive sum over compositions s_1 + ... + s_k = n of
// multinomial(n; s) * prod (4 s_i)!. Requires 1 <= n <= 12.
LemmaSum2Result lemma_sum_2(int n);

struct BoundPropagationReport {
    int trials = 0;
    int t = 0;
    double a = 0.0;
    double b = 0.0;
    double max_product_ratio = 0.0;
    double max_reciprocal_ratio = 0.0;
    int reciprocal_failures = 0;
};

// Random f, g with f(0) = g(0) = 1 and |c_S| <= (4|S|)! a^|S| b; reports the
// largest |c_S(out)| / ((4|S|)! a^|S| b) seen for f*g and 1/f.
BoundPropagationReport check_bound_propagation(int trials, int t, double a, double b, std::uint64_t seed);

// Log of (4s)! a^s b; the per-subset envelope used above.
double log_envelope(int s, double a, double b);

}  // namespace rrg
