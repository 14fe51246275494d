#pragma once

// Sampling d-regular graphs, dense adjacency spectra, the shifted trace
// sum_{i>=2} (lambda_i + p)^k with p = d/(n-1), Monte Carlo over samples, and
// comparisons against the semicircle / Kesten-McKay densities.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "rrg/graph.hpp"

namespace rrg {

enum class SamplerMethod {
    pairing_rejection,  // configuration pairing, rejected until simple: exactly uniform
    switch_chain,       // edge-switch Markov chain from a circulant start: approximately uniform
    automatic,          // pairing when its expected attempt count is small, else the chain
};

SamplerMethod parse_sampler(const std::string& name);
std::string to_string(SamplerMethod m);

struct SamplerOptions {
    SamplerMethod method = SamplerMethod::automatic;
    std::uint64_t max_attempts = 1000000;  // pairing retries
    double burn_in_factor = 100.0;         // switches = factor * n * d
    double gap_factor = 10.0;
};

// Independent per-index seed derived from a base seed (splitmix64).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

SimpleGraph sample_regular(int n, int d, std::uint64_t seed, const SamplerOptions& options = {});

// Edge-switch chain over d-regular graphs on n vertices.
class SwitchChain {
public:
    SwitchChain(int n, int d, std::uint64_t seed, const SamplerOptions& options = {});

    // Attempts `count` switches; returns how many were accepted.
    std::uint64_t run(std::uint64_t count);
    // Advances by the sampling gap and returns the current graph.
    const SimpleGraph& next();
    const SimpleGraph& graph() const { return g_; }

private:
    int n_;
    int d_;
    SamplerOptions options_;
    std::mt19937_64 rng_;
    SimpleGraph g_;
    std::vector<std::pair<Vertex, Vertex>> edges_;
};

struct SpectrumResult {
    std::vector<double> eigenvalues;  // descending
    double lambda = 0.0;              // max(|lambda_2|, |lambda_n|)
    double ratio = 0.0;               // lambda / (2 sqrt(d(n-d)/n)); NaN when undefined
    int d = 0;
};

// 2 sqrt(d(n-d)/n).
double theorem_scale(int n, int d);

// Dense symmetric solve; the ratio uses the common degree of a regular graph.
SpectrumResult eigenvalues(const SimpleGraph& g);

// max ||A v - lambda v|| / ||v|| over all eigenpairs (full eigenvector solve).
double eigen_residual(const SimpleGraph& g);

double shifted_trace_power(const SpectrumResult& s, int n, int k);
double shifted_trace_power(const SimpleGraph& g, int k);
// tr (A - pJ + pI)^k by repeated multiplication; n <= 50.
double shifted_trace_direct(const SimpleGraph& g, int k);
// ||A - pJ + pI||_F^2 for a d-regular graph: nd (1-p)^2 + (n(n-1) - nd) p^2.
double shifted_frobenius(int n, int d);
// ||(A - pJ + pI) 1||_2.
double shifted_ones_residual(const SimpleGraph& g);

struct TraceEstimate {
    int k = 0;
    double mean = 0.0;
    double stderr_ = 0.0;
    int samples = 0;
};

// Sample i uses derive_seed(seed, i); results do not depend on `jobs`.
std::vector<TraceEstimate> mc_trace(int n, int d, const std::vector<int>& ks, int samples, std::uint64_t seed,
                                    const SamplerOptions& options = {}, int jobs = 1);
TraceEstimate mc_trace(int n, int d, int k, int samples, std::uint64_t seed, const SamplerOptions& options = {},
                       int jobs = 1);

struct RatioStats {
    std::vector<double> ratios;
    std::vector<double> lambdas;
    double mean = 0.0;
    double min = 0.0;
    double max = 0.0;
    double stddev = 0.0;
};

RatioStats theorem_ratio(int n, int d, int samples, std::uint64_t seed, const SamplerOptions& options = {},
                         int jobs = 1);

double semicircle_density(double x);
// Kesten-McKay density of the adjacency spectrum of a d-regular graph.
double mckay_density(double lambda, int d);

struct DensityReport {
    std::vector<double> bin_edges;
    std::vector<double> empirical;   // mass per bin
    std::vector<double> semicircle;  // mass per bin
    std::vector<double> mckay;       // mass per bin
    double outside = 0.0;            // empirical mass outside the binned range
    double tv_semicircle = 0.0;
    double tv_mckay = 0.0;
    std::size_t eigenvalue_count = 0;
};

// Nontrivial eigenvalues over `samples` graphs, scaled by 1/theorem_scale.
DensityReport density_compare(int n, int d, int samples, std::uint64_t seed, int bins = 60,
                              const SamplerOptions& options = {}, int jobs = 1);

struct DualityReport {
    double max_deviation = 0.0;
    bool passed = false;
};

// Nontrivial spectra of G and its complement agree under lambda -> -1 - lambda.
DualityReport complement_duality_check(const SimpleGraph& g, double tol = 1e-6);

struct ChiSquareReport {
    std::size_t classes = 0;
    int samples = 0;
    double statistic = 0.0;
    int dof = 0;
    double p_value = 1.0;
};

// Frequencies of every labeled graph in G_{n,d} (n <= 6) against uniform.
ChiSquareReport sampler_chi_square(int n, int d, int samples, std::uint64_t seed, const SamplerOptions& options = {});

}  // namespace rrg
