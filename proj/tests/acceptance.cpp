#include <cstdlib>
#include <iostream>
#include <numeric>
#include <vector>

#include "rrg/verify.hpp"

int main(int argc, char** argv) {
    rrg::VerifyOptions options;
    if (argc > 1) options.seed = std::strtoull(argv[1], nullptr, 10);
    std::vector<int> ids(rrg::kCriterionCount);
    std::iota(ids.begin(), ids.end(), 1);
    int failed = 0;
    rrg::run_criteria(ids, options, [&](const rrg::CriterionResult& r) {
        std::cout << rrg::format_result(r) << std::endl;
        if (!r.passed) ++failed;
    });
    std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria FAILED") << std::endl;
    return failed == 0 ? 0 : 1;
}
