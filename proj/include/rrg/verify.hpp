#pragma once

// The acceptance battery: nine checks, each returning a pass flag plus a
// one-line summary of what was measured.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace rrg {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

struct VerifyOptions {
    std::uint64_t seed = 20241019;
    int jobs = 1;
};

inline constexpr int kCriterionCount = 9;

std::string criterion_name(int id);
CriterionResult run_criterion(int id, const VerifyOptions& options = {});

// Runs the listed criteria (all when empty), reporting each as it finishes.
std::vector<CriterionResult> run_criteria(const std::vector<int>& ids, const VerifyOptions& options,
                                          const std::function<void(const CriterionResult&)>& report = {});

std::string format_result(const CriterionResult& r);

// Individual criteria.
CriterionResult check_oracle_fixed_point(const VerifyOptions& options);
CriterionResult check_initial_exactness(const VerifyOptions& options);
CriterionResult check_chi_expansion(const VerifyOptions& options);
CriterionResult check_fourier_identities(const VerifyOptions& options);
CriterionResult check_fourier_lemmas(const VerifyOptions& options);
CriterionResult check_walk_machinery(const VerifyOptions& options);
CriterionResult check_contribution_bounds(const VerifyOptions& options);
CriterionResult check_spectral_window(const VerifyOptions& options);
CriterionResult check_contraction(const VerifyOptions& options);

}  // namespace rrg
