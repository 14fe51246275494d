#pragma once

// Closed non-lazy walks on K_n: enumeration, the (k, t, t2, m, b, r)
// classification, the +/-/neutral codeword with condensation, exact walk
// contributions E prod (1_e - p) from the oracle, the conditional-expectation
// expansion of the same quantity, and the counting / contribution bounds.

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <vector>

#include "rrg/graph.hpp"
#include "rrg/oracle.hpp"

namespace rrg {

struct Walk {
    std::vector<Vertex> vertices;  // v_0, ..., v_k with v_k = v_0

    Walk() = default;
    explicit Walk(std::vector<Vertex> vs);

    int length() const { return static_cast<int>(vertices.size()) - 1; }
    EdgeKey step(int i) const { return EdgeKey(vertices[static_cast<std::size_t>(i)], vertices[static_cast<std::size_t>(i + 1)]); }
    bool operator==(const Walk&) const = default;
};

struct WalkParams {
    int k = 0;
    int t = 0;   // edges traversed exactly once
    int t2 = 0;  // distinct edges traversed at least twice
    int m = 0;   // returns to previously discovered vertices
    int b = 0;   // distinct vertices
    int r = 0;   // counted returns made along once-traversed edges

    auto operator<=>(const WalkParams&) const = default;
};

enum class ReturnRule {
    // A step opening a new edge counts when it lands on an already discovered
    // vertex, except the step opening the walk's last new edge when it lands
    // on an endpoint of the first edge.
    first_traversal,
    // Over the distinct edges in order of first use, edge i counts when it
    // shares an endpoint with some edge j < i - 1, (i, j) != (last, 1).
    strict_incidence,
};

WalkParams classify(const Walk& w, ReturnRule rule = ReturnRule::first_traversal);

// Multiplicity of every distinct undirected edge of the walk.
std::map<EdgeKey, int> edge_multiplicities(const Walk& w);

inline constexpr std::uint64_t kDefaultWalkBudget = 1679616;  // 6^8

// Visits every closed non-lazy walk of length k on K_n once, in lexicographic
// order. Throws BudgetError when n^k exceeds the budget.
void enumerate_closed_walks(int n, int k, const std::function<void(const Walk&)>& visit,
                            std::uint64_t budget = kDefaultWalkBudget);
std::uint64_t closed_walk_count(int n, int k);  // (n-1)^k + (-1)^k (n-1)

std::map<WalkParams, std::uint64_t> count_by_params(int n, int k, ReturnRule rule = ReturnRule::first_traversal,
                                                    std::uint64_t budget = kDefaultWalkBudget);

struct CodeSymbol {
    enum class Kind : std::uint8_t { plus, minus, neutral };
    Kind kind;
    Vertex vertex = -1;  // landing vertex for neutral steps

    bool operator==(const CodeSymbol&) const = default;
};

struct Codeword {
    std::vector<CodeSymbol> symbols;
    // One entry per maximal run of '-' left after cancelling "+-" pairs: the
    // vertex where that run ends.
    std::vector<Vertex> extra_vertices;

    int neutral_count() const;
};

Codeword encode(const Walk& w);
// Vertices in order of discovery, starting with v_0.
std::vector<Vertex> discovery_order(const Walk& w);
// Rebuilds the walk; throws DegenerateError when the codeword is inconsistent.
Walk decode(const Codeword& c, std::span<const Vertex> discovered);

// log of n^b C(k, x) 2^x b^y, x = 2b-2-t+r, y = 2k-4b+4+2t-2r; -inf for empty classes.
double enumeration_bound(int n, const WalkParams& params);

// E prod over steps of (1_{e in G} - p), summed over every presence pattern
// of the distinct edges with exact joint probabilities.
double walk_contribution(const Walk& w, const DegreeSpec& spec, double p, ExactOracle& oracle);
double edge_product_expectation(const std::map<EdgeKey, int>& multiplicity, const DegreeSpec& spec, double p,
                                ExactOracle& oracle);

// The same expectation for a sequence of distinct edges (each used once),
// built from conditional tables and their cube coefficients. Masked cube
// points take the unconditioned edge probability. Requires t <= 10.
double chi_expansion_sum(std::span<const EdgeKey> edges, const DegreeSpec& spec, double p, ExactOracle& oracle);

// log of 2 k^(2m) [p(1-p)]^(t2 + t/2) n^(-t/2), p = d/(n-1).
double contribution_bound(const WalkParams& params, int n, int d);

// log of 2 (k+1)^2 n [4 n p (1-p)]^(k/2), p = d/(n-1).
double aggregate_trace_bound(int n, int d, int k);

}  // namespace rrg
