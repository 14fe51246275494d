#include "rrg/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numeric>

#include <Eigen/Dense>
#include <boost/math/distributions/chi_squared.hpp>

#include "rrg/oracle.hpp"
#include "rrg/parallel.hpp"

namespace rrg {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void check_regular_params(int n, int d) {
    if (n < 1) throw PreconditionError("need n >= 1");
    if (d < 0 || d > n - 1) throw PreconditionError("need 0 <= d <= n-1");
    if ((static_cast<long long>(n) * d) % 2 != 0) throw PreconditionError("nd must be even");
}

double centering(int n, int d) { return n > 1 ? static_cast<double>(d) / (n - 1) : 0.0; }

Eigen::MatrixXd adjacency(const SimpleGraph& g) {
    const int n = g.vertex_count();
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (auto e : g.edges()) {
        a(e.u, e.v) = 1.0;
        a(e.v, e.u) = 1.0;
    }
    return a;
}

SimpleGraph pairing_sample(int n, int d, std::mt19937_64& rng, std::uint64_t max_attempts) {
    std::vector<Vertex> points(static_cast<std::size_t>(n) * static_cast<std::size_t>(d));
    for (std::size_t i = 0; i < points.size(); ++i) points[i] = static_cast<Vertex>(i / static_cast<std::size_t>(d));
    for (std::uint64_t attempt = 0; attempt < max_attempts; ++attempt) {
        std::shuffle(points.begin(), points.end(), rng);
        SimpleGraph g(n);
        bool simple = true;
        for (std::size_t i = 0; i + 1 < points.size() && simple; i += 2) {
            const Vertex a = points[i];
            const Vertex b = points[i + 1];
            if (a == b || g.has_edge(a, b))
                simple = false;
            else
                g.add_edge(EdgeKey(a, b));
        }
        if (simple) return g;
    }
    throw BudgetError("pairing rejection exceeded " + std::to_string(max_attempts) + " attempts");
}

SamplerMethod resolve(SamplerMethod m, int d) {
    if (m != SamplerMethod::automatic) return m;
    return (d * d - 1) / 4.0 <= 8.0 ? SamplerMethod::pairing_rejection : SamplerMethod::switch_chain;
}

double integrate(const std::function<double(double)>& f, double lo, double hi, int steps = 400) {
    const double h = (hi - lo) / steps;
    double sum = 0.0;
    for (int i = 0; i < steps; ++i) sum += f(lo + (i + 0.5) * h);
    return sum * h;
}

}  // namespace

SamplerMethod parse_sampler(const std::string& name) {
    if (name == "pairing" || name == "pairing-rejection") return SamplerMethod::pairing_rejection;
    if (name == "switch" || name == "switch-chain") return SamplerMethod::switch_chain;
    if (name == "auto" || name == "automatic") return SamplerMethod::automatic;
    throw PreconditionError("unknown sampler '" + name + "' (pairing-rejection, switch-chain, auto)");
}

std::string to_string(SamplerMethod m) {
    switch (m) {
        case SamplerMethod::pairing_rejection: return "pairing-rejection";
        case SamplerMethod::switch_chain: return "switch-chain";
        case SamplerMethod::automatic: return "auto";
    }
    return "auto";
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

SwitchChain::SwitchChain(int n, int d, std::uint64_t seed, const SamplerOptions& options)
    : n_(n), d_(d), options_(options), rng_(seed) {
    check_regular_params(n, d);
    g_ = circulant_regular(n, d);
    for (auto e : g_.edges()) edges_.emplace_back(e.u, e.v);
    run(static_cast<std::uint64_t>(options_.burn_in_factor * n * d));
}

std::uint64_t SwitchChain::run(std::uint64_t count) {
    if (edges_.size() < 2) return 0;
    std::uniform_int_distribution<std::size_t> pick(0, edges_.size() - 1);
    std::uint64_t accepted = 0;
    for (std::uint64_t step = 0; step < count; ++step) {
        const std::size_t i = pick(rng_);
        const std::size_t j = pick(rng_);
        if (i == j) continue;
        auto [a, b] = edges_[i];
        auto [c, d] = edges_[j];
        if (rng_() & 1U) std::swap(c, d);
        if (a == c || a == d || b == c || b == d) continue;
        if (g_.has_edge(a, c) || g_.has_edge(b, d)) continue;
        g_.remove_edge(EdgeKey(a, b));
        g_.remove_edge(EdgeKey(c, d));
        g_.add_edge(EdgeKey(a, c));
        g_.add_edge(EdgeKey(b, d));
        edges_[i] = {a, c};
        edges_[j] = {b, d};
        ++accepted;
    }
    return accepted;
}

const SimpleGraph& SwitchChain::next() {
    run(static_cast<std::uint64_t>(options_.gap_factor * n_ * d_));
    return g_;
}

SimpleGraph sample_regular(int n, int d, std::uint64_t seed, const SamplerOptions& options) {
    check_regular_params(n, d);
    if (resolve(options.method, d) == SamplerMethod::pairing_rejection) {
        std::mt19937_64 rng(seed);
        return pairing_sample(n, d, rng, options.max_attempts);
    }
    return SwitchChain(n, d, seed, options).graph();
}

double theorem_scale(int n, int d) {
    if (n < 1) throw PreconditionError("need n >= 1");
    return 2.0 * std::sqrt(static_cast<double>(d) * (n - d) / n);
}

SpectrumResult eigenvalues(const SimpleGraph& g) {
    const int n = g.vertex_count();
    if (n > 5000) throw BudgetError("dense eigensolver limited to n <= 5000");
    SpectrumResult r;
    r.ratio = kNaN;
    r.d = -1;
    if (n == 0) return r;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(adjacency(g), Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw DegenerateError("eigensolver did not converge");
    const Eigen::VectorXd& ev = solver.eigenvalues();
    r.eigenvalues.assign(ev.data(), ev.data() + n);
    std::reverse(r.eigenvalues.begin(), r.eigenvalues.end());
    if (n >= 2) r.lambda = std::max(std::abs(r.eigenvalues[1]), std::abs(r.eigenvalues.back()));
    if (g.is_regular(g.degree(0))) {
        r.d = g.degree(0);
        const double scale = theorem_scale(n, r.d);
        if (scale > 0.0) r.ratio = r.lambda / scale;
    }
    return r;
}

double eigen_residual(const SimpleGraph& g) {
    const Eigen::MatrixXd a = adjacency(g);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a);
    if (solver.info() != Eigen::Success) throw DegenerateError("eigensolver did not converge");
    double worst = 0.0;
    for (int i = 0; i < a.rows(); ++i) {
        const Eigen::VectorXd v = solver.eigenvectors().col(i);
        worst = std::max(worst, (a * v - solver.eigenvalues()(i) * v).norm() / v.norm());
    }
    return worst;
}

double shifted_trace_power(const SpectrumResult& s, int n, int k) {
    if (k < 0 || k % 2 != 0) throw PreconditionError("shifted trace needs an even power k >= 0");
    if (s.d < 0) throw PreconditionError("shifted trace needs a regular graph");
    const double p = centering(n, s.d);
    double sum = 0.0;
    for (std::size_t i = 1; i < s.eigenvalues.size(); ++i) sum += std::pow(s.eigenvalues[i] + p, k);
    return sum;
}

double shifted_trace_power(const SimpleGraph& g, int k) {
    return shifted_trace_power(eigenvalues(g), g.vertex_count(), k);
}

double shifted_trace_direct(const SimpleGraph& g, int k) {
    const int n = g.vertex_count();
    if (n > 50) throw BudgetError("direct powering limited to n <= 50");
    if (k < 0) throw PreconditionError("power must be nonnegative");
    if (n == 0) return 0.0;
    const int d = g.regular_degree();
    const double p = centering(n, d);
    const Eigen::MatrixXd m = adjacency(g) - p * Eigen::MatrixXd::Ones(n, n) + p * Eigen::MatrixXd::Identity(n, n);
    Eigen::MatrixXd power = Eigen::MatrixXd::Identity(n, n);
    for (int i = 0; i < k; ++i) power = power * m;
    return power.trace();
}

double shifted_frobenius(int n, int d) {
    const double p = centering(n, d);
    const double ordered_edges = static_cast<double>(n) * d;
    return ordered_edges * (1.0 - p) * (1.0 - p) + (static_cast<double>(n) * (n - 1) - ordered_edges) * p * p;
}

double shifted_ones_residual(const SimpleGraph& g) {
    const int n = g.vertex_count();
    if (n == 0) return 0.0;
    const double p = centering(n, g.regular_degree());
    const Eigen::MatrixXd m = adjacency(g) - p * Eigen::MatrixXd::Ones(n, n) + p * Eigen::MatrixXd::Identity(n, n);
    return (m * Eigen::VectorXd::Ones(n)).norm();
}

std::vector<TraceEstimate> mc_trace(int n, int d, const std::vector<int>& ks, int samples, std::uint64_t seed,
                                    const SamplerOptions& options, int jobs) {
    check_regular_params(n, d);
    if (samples < 1) throw PreconditionError("need at least one sample");
    for (int k : ks)
        if (k < 0 || k % 2 != 0) throw PreconditionError("trace powers must be even and nonnegative");
    std::vector<std::vector<double>> values(ks.size(), std::vector<double>(static_cast<std::size_t>(samples)));
    parallel_for(static_cast<std::size_t>(samples), jobs, [&](std::size_t i) {
        const SpectrumResult s = eigenvalues(sample_regular(n, d, derive_seed(seed, i), options));
        for (std::size_t j = 0; j < ks.size(); ++j) values[j][i] = shifted_trace_power(s, n, ks[j]);
    });
    std::vector<TraceEstimate> out;
    for (std::size_t j = 0; j < ks.size(); ++j) {
        const auto& v = values[j];
        TraceEstimate est;
        est.k = ks[j];
        est.samples = samples;
        est.mean = std::accumulate(v.begin(), v.end(), 0.0) / samples;
        if (samples > 1) {
            double ss = 0.0;
            for (double x : v) ss += (x - est.mean) * (x - est.mean);
            est.stderr_ = std::sqrt(ss / (samples - 1) / samples);
        }
        out.push_back(est);
    }
    return out;
}

TraceEstimate mc_trace(int n, int d, int k, int samples, std::uint64_t seed, const SamplerOptions& options,
                       int jobs) {
    return mc_trace(n, d, std::vector<int>{k}, samples, seed, options, jobs).front();
}

RatioStats theorem_ratio(int n, int d, int samples, std::uint64_t seed, const SamplerOptions& options, int jobs) {
    check_regular_params(n, d);
    if (samples < 1) throw PreconditionError("need at least one sample");
    RatioStats r;
    r.ratios.resize(static_cast<std::size_t>(samples));
    r.lambdas.resize(static_cast<std::size_t>(samples));
    parallel_for(static_cast<std::size_t>(samples), jobs, [&](std::size_t i) {
        const SpectrumResult s = eigenvalues(sample_regular(n, d, derive_seed(seed, i), options));
        r.ratios[i] = s.ratio;
        r.lambdas[i] = s.lambda;
    });
    r.mean = std::accumulate(r.ratios.begin(), r.ratios.end(), 0.0) / samples;
    r.min = *std::min_element(r.ratios.begin(), r.ratios.end());
    r.max = *std::max_element(r.ratios.begin(), r.ratios.end());
    double ss = 0.0;
    for (double x : r.ratios) ss += (x - r.mean) * (x - r.mean);
    r.stddev = samples > 1 ? std::sqrt(ss / (samples - 1)) : 0.0;
    return r;
}

double semicircle_density(double x) {
    return std::abs(x) < 1.0 ? (2.0 / M_PI) * std::sqrt(1.0 - x * x) : 0.0;
}

double mckay_density(double lambda, int d) {
    if (d < 2) return 0.0;
    const double edge = 4.0 * (d - 1);
    if (lambda * lambda >= edge) return 0.0;
    return d * std::sqrt(edge - lambda * lambda) / (2.0 * M_PI * (static_cast<double>(d) * d - lambda * lambda));
}

DensityReport density_compare(int n, int d, int samples, std::uint64_t seed, int bins, const SamplerOptions& options,
                              int jobs) {
    check_regular_params(n, d);
    if (bins < 1 || samples < 1) throw PreconditionError("need bins >= 1 and samples >= 1");
    const double scale = theorem_scale(n, d);
    if (!(scale > 0.0)) throw PreconditionError("density comparison needs 0 < d < n");
    std::vector<std::vector<double>> per_sample(static_cast<std::size_t>(samples));
    parallel_for(static_cast<std::size_t>(samples), jobs, [&](std::size_t i) {
        const SpectrumResult s = eigenvalues(sample_regular(n, d, derive_seed(seed, i), options));
        per_sample[i].assign(s.eigenvalues.begin() + 1, s.eigenvalues.end());
    });

    const double lo = -1.5;
    const double hi = 1.5;
    const double width = (hi - lo) / bins;
    DensityReport rep;
    rep.bin_edges.resize(static_cast<std::size_t>(bins) + 1);
    for (int i = 0; i <= bins; ++i) rep.bin_edges[static_cast<std::size_t>(i)] = lo + i * width;
    rep.empirical.assign(static_cast<std::size_t>(bins), 0.0);
    for (const auto& v : per_sample)
        for (double lambda : v) {
            const double x = lambda / scale;
            ++rep.eigenvalue_count;
            const int b = static_cast<int>(std::floor((x - lo) / width));
            if (b < 0 || b >= bins)
                rep.outside += 1.0;
            else
                rep.empirical[static_cast<std::size_t>(b)] += 1.0;
        }
    const double total = static_cast<double>(rep.eigenvalue_count);
    for (auto& m : rep.empirical) m /= total;
    rep.outside /= total;

    double semi_mass = 0.0;
    double mckay_mass = 0.0;
    double tv_semi = rep.outside;
    double tv_mckay = rep.outside;
    for (int b = 0; b < bins; ++b) {
        const double a0 = rep.bin_edges[static_cast<std::size_t>(b)];
        const double a1 = rep.bin_edges[static_cast<std::size_t>(b) + 1];
        const double ms = integrate(semicircle_density, a0, a1);
        const double mm = integrate([&](double x) { return scale * mckay_density(x * scale, d); }, a0, a1);
        rep.semicircle.push_back(ms);
        rep.mckay.push_back(mm);
        semi_mass += ms;
        mckay_mass += mm;
        tv_semi += std::abs(rep.empirical[static_cast<std::size_t>(b)] - ms);
        tv_mckay += std::abs(rep.empirical[static_cast<std::size_t>(b)] - mm);
    }
    rep.tv_semicircle = 0.5 * (tv_semi + std::max(0.0, 1.0 - semi_mass));
    rep.tv_mckay = d >= 2 ? 0.5 * (tv_mckay + std::max(0.0, 1.0 - mckay_mass)) : kNaN;
    return rep;
}

DualityReport complement_duality_check(const SimpleGraph& g, double tol) {
    const int n = g.vertex_count();
    g.regular_degree();
    DualityReport rep;
    if (n < 2) {
        rep.passed = true;
        return rep;
    }
    const SpectrumResult s = eigenvalues(g);
    const SpectrumResult c = eigenvalues(g.complement());
    std::vector<double> mapped;
    for (std::size_t i = 1; i < s.eigenvalues.size(); ++i) mapped.push_back(-1.0 - s.eigenvalues[i]);
    std::sort(mapped.begin(), mapped.end(), std::greater<>());
    for (std::size_t i = 1; i < c.eigenvalues.size(); ++i)
        rep.max_deviation = std::max(rep.max_deviation, std::abs(mapped[i - 1] - c.eigenvalues[i]));
    rep.passed = rep.max_deviation <= tol;
    return rep;
}

ChiSquareReport sampler_chi_square(int n, int d, int samples, std::uint64_t seed, const SamplerOptions& options) {
    check_regular_params(n, d);
    if (n > 6) throw BudgetError("sampler chi-square enumerates classes only for n <= 6");
    if (samples < 1) throw PreconditionError("need at least one sample");
    auto key_of_rows = [n](AdjacencyRows rows) {
        std::uint32_t key = 0;
        int bit = 0;
        for (int u = 0; u < n; ++u)
            for (int v = u + 1; v < n; ++v, ++bit)
                if ((rows[static_cast<std::size_t>(u)] >> v) & 1U) key |= 1U << bit;
        return key;
    };
    std::map<std::uint32_t, std::size_t> index;
    ExactOracle oracle(6);
    oracle.for_each_graph(DegreeSpec::regular(n, d), [&](AdjacencyRows rows) {
        index.emplace(key_of_rows(rows), index.size());
    });

    std::vector<double> observed(index.size(), 0.0);
    for (int i = 0; i < samples; ++i) {
        const SimpleGraph g = sample_regular(n, d, derive_seed(seed, static_cast<std::uint64_t>(i)), options);
        std::uint32_t key = 0;
        int bit = 0;
        for (int u = 0; u < n; ++u)
            for (int v = u + 1; v < n; ++v, ++bit)
                if (g.has_edge(u, v)) key |= 1U << bit;
        observed[index.at(key)] += 1.0;
    }
    ChiSquareReport rep;
    rep.classes = index.size();
    rep.samples = samples;
    const double expected = static_cast<double>(samples) / static_cast<double>(rep.classes);
    for (double o : observed) rep.statistic += (o - expected) * (o - expected) / expected;
    rep.dof = static_cast<int>(rep.classes) - 1;
    if (rep.dof > 0) {
        boost::math::chi_squared dist(rep.dof);
        rep.p_value = boost::math::cdf(boost::math::complement(dist, rep.statistic));
    }
    return rep;
}

}  // namespace rrg
