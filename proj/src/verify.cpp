#include "rrg/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <sstream>

#include "rrg/estimator.hpp"
#include "rrg/fourier.hpp"
#include "rrg/operators.hpp"
#include "rrg/oracle.hpp"
#include "rrg/spectral.hpp"
#include "rrg/walks.hpp"

namespace rrg {

namespace {

std::string describe(std::initializer_list<std::pair<const char*, double>> items) {
    std::ostringstream os;
    os.precision(4);
    bool first = true;
    for (const auto& [key, value] : items) {
        if (!first) os << ' ';
        first = false;
        os << key << '=';
        if (value == std::floor(value) && std::abs(value) < 1e15)
            os << static_cast<long long>(value);
        else
            os << value;
    }
    return os.str();
}

// Relative error with an exact-zero reference treated absolutely.
double rel_error(double value, double reference) {
    if (reference == 0.0) return std::abs(value) <= 1e-12 ? 0.0 : std::abs(value);
    return std::abs(value - reference) / std::abs(reference);
}

std::vector<EdgeKey> all_pairs(int n) {
    std::vector<EdgeKey> out;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) out.emplace_back(u, v);
    return out;
}

std::vector<std::vector<EdgeKey>> missing_sets(int n, int max_missing) {
    const auto pairs = all_pairs(n);
    std::vector<std::vector<EdgeKey>> out{{}};
    if (max_missing >= 1)
        for (auto e : pairs) out.push_back({e});
    if (max_missing >= 2)
        for (std::size_t i = 0; i < pairs.size(); ++i)
            for (std::size_t j = i + 1; j < pairs.size(); ++j) out.push_back({pairs[i], pairs[j]});
    return out;
}

struct IdentityTally {
    std::size_t specs = 0;
    std::size_t empty_specs = 0;
    std::size_t checked = 0;
    std::size_t skipped = 0;
    std::size_t failures = 0;
    double worst = 0.0;

    void record(double err) {
        ++checked;
        worst = std::max(worst, err);
        if (!(err <= 1e-10)) ++failures;
    }
};

void check_spec_identities(const DegreeSpec& spec, ExactOracle& oracle, IdentityTally& tally) {
    const int n = spec.vertex_count();
    if (oracle.count(spec) == 0) {
        ++tally.empty_specs;
        return;
    }
    ++tally.specs;
    const OracleSource<double> src(oracle);

    const std::vector<Rational> b_table = oracle.unswitchable_table(spec);
    for (Vertex a = 0; a < n; ++a)
        for (Vertex b = 0; b < n; ++b) {
            if (a == b) continue;
            tally.record(rel_error(op_B(src, spec, a, b), to_double(b_table[static_cast<std::size_t>(a * n + b)])));
        }

    for (Vertex a = 0; a < n; ++a)
        for (Vertex b : spec.allowed_neighbors(a)) {
            const Rational exact = oracle.edge_probability(spec, a, b);
            if (exact == 0) {
                ++tally.skipped;
                continue;
            }
            try {
                tally.record(rel_error(op_P(src, spec, a, b), to_double(exact)));
            } catch (const DegenerateError&) {
                ++tally.skipped;
            }
            for (Vertex c : spec.allowed_neighbors(b)) {
                if (c == a) continue;
                const double y_exact = to_double(oracle.cherry_probability(spec, a, b, c));
                try {
                    tally.record(rel_error(recursive_y(src, spec, a, b, c), y_exact));
                } catch (const DegenerateError&) {
                    ++tally.skipped;
                }
            }
        }
}

template <class F>
CriterionResult timed(int id, F&& body) {
    const auto start = std::chrono::steady_clock::now();
    CriterionResult r;
    try {
        r = body();
    } catch (const std::exception& e) {
        r.passed = false;
        r.detail = std::string("error: ") + e.what();
    }
    r.id = id;
    r.name = criterion_name(id);
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

double median(std::vector<double> v) {
    if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::sort(v.begin(), v.end());
    const std::size_t mid = v.size() / 2;
    return v.size() % 2 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

}  // namespace

std::string criterion_name(int id) {
    switch (id) {
        case 1: return "oracle fixed point of the B/P/Y recursions";
        case 2: return "initial estimate exact at the symmetric root";
        case 3: return "cube expansion equals direct walk expectation";
        case 4: return "cube transform round trip, product and reciprocal";
        case 5: return "factorial-weighted sum lemmas";
        case 6: return "walk codeword round trip and class counting bound";
        case 7: return "walk contribution and aggregate trace bounds";
        case 8: return "spectral ratio window, complement duality, sampler uniformity";
        case 9: return "contraction of perturbed estimates";
        default: throw PreconditionError("unknown criterion " + std::to_string(id));
    }
}

CriterionResult check_oracle_fixed_point(const VerifyOptions&) {
    IdentityTally tally;
    for (int n = 2; n <= 8; ++n)
        for (int d = 1; d <= 3; ++d) {
            if (d > n - 1 || (n * d) % 2 != 0) continue;
            for (const auto& missing : missing_sets(n, 2)) {
                ExactOracle oracle(n);
                check_spec_identities(DegreeSpec::regular(n, d, missing), oracle, tally);
            }
        }
    CriterionResult r;
    r.passed = tally.failures == 0 && tally.checked > 0;
    r.detail = describe({{"specs", double(tally.specs)},
                         {"empty_specs", double(tally.empty_specs)},
                         {"identities", double(tally.checked)},
                         {"skipped_degenerate", double(tally.skipped)},
                         {"failures", double(tally.failures)},
                         {"max_rel_err", tally.worst},
                         {"tol", 1e-10}});
    return r;
}

CriterionResult check_initial_exactness(const VerifyOptions&) {
    std::size_t cases = 0;
    std::size_t failures = 0;
    for (int n = 2; n <= 8; ++n)
        for (int d = 1; d <= n - 1; ++d) {
            if ((n * d) % 2 != 0) continue;
            ExactOracle oracle(n);
            const DegreeSpec root = DegreeSpec::regular(n, d);
            const EstimatePair est = initial_estimates(root, d, 0);
            const Rational formula = Rational(BigInt(n - 1) * d * d, BigInt(d) * (n - 1) * (n - 1));
            const Rational exact = oracle.edge_probability(root, 0, 1);
            const double as_double = static_cast<double>(d) / (n - 1);
            ++cases;
            if (formula != exact || est.P(root, 0, 1) != as_double || est.P(root, n - 1, n - 2) != as_double)
                ++failures;
        }
    CriterionResult r;
    r.passed = failures == 0 && cases > 0;
    r.detail = describe({{"root_specs", double(cases)}, {"mismatches", double(failures)}, {"tol", 0.0}});
    return r;
}

CriterionResult check_chi_expansion(const VerifyOptions&) {
    std::size_t sequences = 0;
    std::size_t failures = 0;
    double worst = 0.0;
    for (int n = 3; n <= 6; ++n)
        for (int d = 1; d <= 2; ++d) {
            if ((n * d) % 2 != 0) continue;
            ExactOracle oracle(n);
            const DegreeSpec spec = DegreeSpec::regular(n, d);
            const double p = static_cast<double>(d) / (n - 1);
            const auto pairs = all_pairs(n);
            std::vector<EdgeKey> seq;
            const std::function<void()> extend = [&]() {
                std::map<EdgeKey, int> mult;
                for (auto e : seq) mult[e] = 1;
                const double direct = edge_product_expectation(mult, spec, p, oracle);
                const double expanded = chi_expansion_sum(seq, spec, p, oracle);
                const double err = std::abs(expanded - direct) / std::max(std::abs(direct), 1e-300);
                const double abs_err = std::abs(expanded - direct);
                ++sequences;
                const double measured = std::abs(direct) > 1e-12 ? err : abs_err;
                worst = std::max(worst, measured);
                if (!(measured <= 1e-10)) ++failures;
                if (seq.size() == 3) return;
                for (auto e : pairs) {
                    if (std::find(seq.begin(), seq.end(), e) != seq.end()) continue;
                    seq.push_back(e);
                    extend();
                    seq.pop_back();
                }
            };
            extend();
        }
    CriterionResult r;
    r.passed = failures == 0;
    r.detail = describe({{"sequences", double(sequences)},
                         {"failures", double(failures)},
                         {"max_rel_err", worst},
                         {"tol", 1e-10}});
    return r;
}

CriterionResult check_fourier_identities(const VerifyOptions& options) {
    std::mt19937_64 rng(options.seed);
    std::uniform_int_distribution<int> dim(0, 8);
    std::uniform_real_distribution<double> value(-1.0, 1.0);
    std::uniform_real_distribution<double> base(0.5, 2.0);
    const int trials = 1200;
    double worst_round = 0.0;
    double worst_product = 0.0;
    double worst_reciprocal = 0.0;
    for (int trial = 0; trial < trials; ++trial) {
        const int t = dim(rng);
        const std::size_t size = std::size_t{1} << t;
        std::vector<double> fv(size);
        std::vector<double> gv(size);
        for (auto& x : fv) x = value(rng);
        for (auto& x : gv) x = value(rng);
        const BooleanTable f(t, fv);
        const BooleanTable g(t, gv);
        const FourierCoeffs cf = transform(f);
        const FourierCoeffs cg = transform(g);

        const BooleanTable back = to_table(cf);
        for (std::size_t x = 0; x < size; ++x)
            worst_round = std::max(worst_round, std::abs(back.values[x] - fv[x]));

        std::vector<double> prod(size);
        for (std::size_t x = 0; x < size; ++x) prod[x] = fv[x] * gv[x];
        const FourierCoeffs direct = transform(BooleanTable(t, prod));
        const FourierCoeffs via = product_coeffs(cf, cg);
        const double scale_p = std::max(1.0, direct.max_abs());
        for (std::size_t s = 0; s < size; ++s)
            worst_product = std::max(worst_product, std::abs(direct.coeff[s] - via.coeff[s]) / scale_p);

        // Positive function within a factor (1 +- 0.6) of its value at 0.
        const double f0 = base(rng);
        std::vector<double> hv(size);
        for (std::size_t x = 0; x < size; ++x) hv[x] = x == 0 ? f0 : f0 * (1.0 + 0.6 * value(rng));
        std::vector<double> inv(size);
        for (std::size_t x = 0; x < size; ++x) inv[x] = 1.0 / hv[x];
        const FourierCoeffs inv_direct = transform(BooleanTable(t, inv));
        const FourierCoeffs inv_series = reciprocal_coeffs(transform(BooleanTable(t, hv)), 200, 1e-15);
        const double scale_r = std::max(1.0, inv_direct.max_abs());
        for (std::size_t s = 0; s < size; ++s)
            worst_reciprocal =
                std::max(worst_reciprocal, std::abs(inv_direct.coeff[s] - inv_series.coeff[s]) / scale_r);
    }
    CriterionResult r;
    r.passed = worst_round <= 1e-10 && worst_product <= 1e-10 && worst_reciprocal <= 1e-10;
    r.detail = describe({{"functions", double(trials)},
                         {"round_trip_err", worst_round},
                         {"product_err", worst_product},
                         {"reciprocal_err", worst_reciprocal},
                         {"tol", 1e-10}});
    return r;
}

CriterionResult check_fourier_lemmas(const VerifyOptions&) {
    std::size_t cases = 0;
    std::size_t failures = 0;
    double worst_first = 0.0;
    for (int n = 1; n <= 12; ++n) {
        const double a = 0.5 * std::pow(static_cast<double>(n), -5.0) / 4096.0;
        for (int m = 0; m <= n; ++m) {
            const LemmaSum1Result res = lemma_sum_1(n, m, a);
            ++cases;
            worst_first = std::max(worst_first, res.ratio());
            if (!res.holds()) ++failures;
        }
    }
    constexpr double kSecondBound = 2.0;
    double worst_second = 0.0;
    int worst_at = 0;
    for (int n = 1; n <= 12; ++n) {
        const LemmaSum2Result res = lemma_sum_2(n);
        if (res.ratio > worst_second) {
            worst_second = res.ratio;
            worst_at = n;
        }
    }
    CriterionResult r;
    r.passed = failures == 0 && worst_second <= kSecondBound;
    r.detail = describe({{"first_cases", double(cases)},
                         {"first_failures", double(failures)},
                         {"first_max_ratio", worst_first},
                         {"first_limit", 2.0},
                         {"second_max_ratio", worst_second},
                         {"second_argmax_n", double(worst_at)},
                         {"second_limit", kSecondBound}});
    return r;
}

CriterionResult check_walk_machinery(const VerifyOptions&) {
    std::size_t walks = 0;
    std::size_t round_trip_failures = 0;
    for (int n = 2; n <= 5; ++n)
        for (int k = 2; k <= 6; ++k)
            enumerate_closed_walks(n, k, [&](const Walk& w) {
                ++walks;
                try {
                    if (!(decode(encode(w), discovery_order(w)) == w)) ++round_trip_failures;
                } catch (const DegenerateError&) {
                    ++round_trip_failures;
                }
            });
    std::size_t classes = 0;
    std::size_t bound_failures = 0;
    double worst = 0.0;
    for (int n = 2; n <= 5; ++n)
        for (int k = 2; k <= 6; ++k)
            for (const auto& [params, count] : count_by_params(n, k)) {
                ++classes;
                const double ratio = std::exp(std::log(static_cast<double>(count)) - enumeration_bound(n, params));
                worst = std::max(worst, ratio);
                if (!(ratio <= 1.0 + 1e-12)) ++bound_failures;
            }
    CriterionResult r;
    r.passed = round_trip_failures == 0 && bound_failures == 0 && walks > 0;
    r.detail = describe({{"walks", double(walks)},
                         {"round_trip_failures", double(round_trip_failures)},
                         {"classes", double(classes)},
                         {"bound_failures", double(bound_failures)},
                         {"worst_count_over_bound", worst}});
    return r;
}

CriterionResult check_contribution_bounds(const VerifyOptions& options) {
    const int n = 6;
    const int d = 2;
    const double p = static_cast<double>(d) / (n - 1);
    const DegreeSpec spec = DegreeSpec::regular(n, d);
    ExactOracle oracle(n);
    std::map<std::map<EdgeKey, int>, double> cache;
    std::size_t walks = 0;
    std::size_t walk_failures = 0;
    double worst_walk = 0.0;
    for (int k = 2; k <= 6; ++k)
        enumerate_closed_walks(n, k, [&](const Walk& w) {
            ++walks;
            const auto mult = edge_multiplicities(w);
            auto it = cache.find(mult);
            if (it == cache.end()) it = cache.emplace(mult, edge_product_expectation(mult, spec, p, oracle)).first;
            const double m = std::abs(it->second);
            if (m == 0.0) return;
            const double ratio = std::exp(std::log(m) - contribution_bound(classify(w), n, d));
            worst_walk = std::max(worst_walk, ratio);
            if (!(ratio <= 10.0)) ++walk_failures;
        });

    std::size_t grid_failures = 0;
    std::size_t points = 0;
    double worst_grid = -std::numeric_limits<double>::infinity();
    const std::vector<int> ks{4, 6, 8};
    for (int gn : {50, 100, 200})
        for (int gd : {6, 10, 20}) {
            const auto est = mc_trace(gn, gd, ks, 200, derive_seed(options.seed, gn * 1000 + gd), {}, options.jobs);
            for (const auto& e : est) {
                ++points;
                const double gap = std::log(e.mean) - aggregate_trace_bound(gn, gd, e.k);
                worst_grid = std::max(worst_grid, gap);
                if (!(gap <= 0.0)) ++grid_failures;
            }
        }
    CriterionResult r;
    r.passed = walk_failures == 0 && grid_failures == 0;
    r.detail = describe({{"walks", double(walks)},
                         {"multisets", double(cache.size())},
                         {"walk_failures", double(walk_failures)},
                         {"worst_M_over_bound", worst_walk},
                         {"walk_limit", 10.0},
                         {"grid_points", double(points)},
                         {"grid_failures", double(grid_failures)},
                         {"worst_log_trace_minus_bound", worst_grid}});
    return r;
}

CriterionResult check_spectral_window(const VerifyOptions& options) {
    std::ostringstream detail;
    detail.precision(4);
    bool ok = true;
    for (auto [n, d] : {std::pair{1000, 100}, std::pair{1000, 300}, std::pair{2000, 100}}) {
        const RatioStats st = theorem_ratio(n, d, 20, derive_seed(options.seed, n + d), {}, options.jobs);
        const bool in = st.mean >= 0.9 && st.mean <= 1.1;
        ok = ok && in;
        detail << "ratio(" << n << ',' << d << ")=" << st.mean << (in ? "" : "!") << ' ';
    }

    double worst_dual = 0.0;
    std::vector<SimpleGraph> dual_inputs{circulant_regular(4, 2), circulant_regular(4, 3),
                                         sample_regular(50, 7, derive_seed(options.seed, 50)),
                                         sample_regular(51, 6, derive_seed(options.seed, 51)),
                                         sample_regular(200, 20, derive_seed(options.seed, 200))};
    for (const auto& g : dual_inputs) worst_dual = std::max(worst_dual, complement_duality_check(g).max_deviation);
    const bool dual_ok = worst_dual <= 1e-6;
    ok = ok && dual_ok;
    detail << "duality_max_dev=" << worst_dual << ' ';

    SamplerOptions pairing;
    pairing.method = SamplerMethod::pairing_rejection;
    double min_p = 1.0;
    int tests = 0;
    for (int n = 4; n <= 6; ++n)
        for (int d = 1; d <= n - 1; ++d) {
            if ((n * d) % 2 != 0) continue;
            const ChiSquareReport chi = sampler_chi_square(n, d, 3000, derive_seed(options.seed, 100 * n + d), pairing);
            ++tests;
            if (chi.dof > 0) min_p = std::min(min_p, chi.p_value);
        }
    const bool chi_ok = min_p >= 0.001;
    ok = ok && chi_ok;
    detail << "chi_square_tests=" << tests << " min_p=" << min_p << " alpha=0.001";

    CriterionResult r;
    r.passed = ok;
    r.detail = detail.str();
    return r;
}

CriterionResult check_contraction(const VerifyOptions& options) {
    const int n = 8;
    const int d = 3;
    const int trials = 100;
    std::mt19937_64 rng(options.seed);
    const auto pairs = all_pairs(n);
    std::vector<double> ratios;
    std::vector<std::vector<double>> by_missing(3);
    std::size_t above_one = 0;
    double p = 0.0;
    for (int trial = 0; trial < trials; ++trial) {
        std::vector<EdgeKey> missing;
        const int count = static_cast<int>(rng() % 3);
        while (static_cast<int>(missing.size()) < count) {
            const EdgeKey e = pairs[rng() % pairs.size()];
            if (std::find(missing.begin(), missing.end(), e) == missing.end()) missing.push_back(e);
        }
        const EstimatePair base = initial_estimates(DegreeSpec::regular(n, d, missing), d, 2);
        const EstimatePair other = perturbed(base, 0.01, rng);
        const ContractionReport rep = contraction_measure(base, other);
        p = rep.p;
        ratios.push_back(rep.contraction);
        by_missing[static_cast<std::size_t>(count)].push_back(rep.contraction);
        if (!(rep.contraction <= 1.0)) ++above_one;
    }
    std::vector<double> sorted = ratios;
    std::sort(sorted.begin(), sorted.end());
    const double med = median(ratios);
    CriterionResult r;
    r.passed = above_one == 0 && med <= 2.0 * p;
    r.detail = describe({{"trials", double(trials)},
                         {"above_one", double(above_one)},
                         {"min", sorted.front()},
                         {"q25", sorted[sorted.size() / 4]},
                         {"median", med},
                         {"q75", sorted[3 * sorted.size() / 4]},
                         {"max", sorted.back()},
                         {"limit_2p", 2.0 * p},
                         {"median_missing0", median(by_missing[0])},
                         {"median_missing1", median(by_missing[1])},
                         {"median_missing2", median(by_missing[2])}});
    return r;
}

CriterionResult run_criterion(int id, const VerifyOptions& options) {
    switch (id) {
        case 1: return timed(id, [&] { return check_oracle_fixed_point(options); });
        case 2: return timed(id, [&] { return check_initial_exactness(options); });
        case 3: return timed(id, [&] { return check_chi_expansion(options); });
        case 4: return timed(id, [&] { return check_fourier_identities(options); });
        case 5: return timed(id, [&] { return check_fourier_lemmas(options); });
        case 6: return timed(id, [&] { return check_walk_machinery(options); });
        case 7: return timed(id, [&] { return check_contribution_bounds(options); });
        case 8: return timed(id, [&] { return check_spectral_window(options); });
        case 9: return timed(id, [&] { return check_contraction(options); });
        default: throw PreconditionError("unknown criterion " + std::to_string(id));
    }
}

std::vector<CriterionResult> run_criteria(const std::vector<int>& ids, const VerifyOptions& options,
                                          const std::function<void(const CriterionResult&)>& report) {
    std::vector<int> todo = ids;
    if (todo.empty())
        for (int i = 1; i <= kCriterionCount; ++i) todo.push_back(i);
    for (int id : todo) criterion_name(id);
    std::vector<CriterionResult> out;
    for (int id : todo) {
        out.push_back(run_criterion(id, options));
        if (report) report(out.back());
    }
    return out;
}

std::string format_result(const CriterionResult& r) {
    std::ostringstream os;
    os.precision(3);
    os << (r.passed ? "PASS" : "FAIL") << "  [" << r.id << "] " << r.name << " | " << r.detail << " | "
       << std::fixed << r.seconds << "s";
    return os.str();
}

}  // namespace rrg
