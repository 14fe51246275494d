#pragma once

// Exact ground truth on G_{d,A} for small n: graph counts, edge / cherry /
// joint probabilities as reduced rationals, conditional tables over ordered
// edge lists, and an explicit graph enumerator.

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "rrg/graph.hpp"

namespace rrg {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline constexpr int kOracleMaxVertices = 10;
inline constexpr int kOracleMaxCubeDim = 12;

struct ConditionalTable {
    std::vector<EdgeKey> edges;
    EdgeKey target{0, 1};
    // Indexed by the cube point x with bit i-1 set iff edges[i-1] is present.
    std::vector<Rational> values;
    std::vector<char> defined;

    int dimension() const { return static_cast<int>(edges.size()); }
};

// Adjacency rows of one enumerated graph: bit u of rows[v] is set iff v ~ u.
using AdjacencyRows = std::span<const std::uint32_t>;

// Memoizing oracle. One instance per thread; the memo is not synchronized.
class ExactOracle {
public:
    explicit ExactOracle(int max_vertices = kOracleMaxVertices);

    BigInt count_graphs(const DegreeSpec& spec);
    // Same count as a machine integer (always fits: N <= 2^45 for n <= 10).
    std::uint64_t count(const DegreeSpec& spec);

    Rational edge_probability(const DegreeSpec& spec, Vertex a, Vertex b);
    Rational cherry_probability(const DegreeSpec& spec, Vertex a, Vertex b, Vertex c);
    Rational joint_probability(const DegreeSpec& spec, const ConstraintSet& constraints);
    ConditionalTable conditional_table(const DegreeSpec& spec,
                                       std::span<const EdgeKey> edges, EdgeKey target);

    // Expected number of neighbors c of a with {c,b} either disallowed or an
    // edge, obtained by walking every graph of the class.
    Rational unswitchable_expectation(const DegreeSpec& spec, Vertex a, Vertex b);
    // The same quantity for every ordered pair from a single pass; entry a*n + b.
    std::vector<Rational> unswitchable_table(const DegreeSpec& spec);

    // Calls `visit` once per graph in G_{d,A}, in a fixed order.
    void for_each_graph(const DegreeSpec& spec, const std::function<void(AdjacencyRows)>& visit);

    std::size_t memo_size() const { return memo_.size(); }
    void clear() { memo_.clear(); }

private:
    struct Key {
        std::uint64_t lo;
        std::uint64_t hi;
        bool operator==(const Key&) const = default;
    };
    struct KeyHash {
        std::size_t operator()(const Key& k) const noexcept {
            return static_cast<std::size_t>(k.lo * 0x9e3779b97f4a7c15ULL ^ (k.hi + (k.lo >> 29)));
        }
    };
    struct State {
        int n = 0;
        std::array<std::uint8_t, kOracleMaxVertices> deg{};
        std::array<std::uint16_t, kOracleMaxVertices> rows{};
    };

    State load(const DegreeSpec& spec) const;
    std::uint64_t count_state(State s);
    void walk_state(State s, std::array<std::uint32_t, kOracleMaxVertices>& adj,
                    const std::function<void(AdjacencyRows)>& visit);
    void require_nonempty(std::uint64_t total) const;

    int max_vertices_;
    std::unordered_map<Key, std::uint64_t, KeyHash> memo_;
};

// Thread-local default oracle used by the free-function interface.
ExactOracle& default_oracle();

BigInt count_graphs(const DegreeSpec& spec);
Rational edge_probability(const DegreeSpec& spec, Vertex a, Vertex b);
Rational cherry_probability(const DegreeSpec& spec, Vertex a, Vertex b, Vertex c);
Rational joint_probability(const DegreeSpec& spec, const ConstraintSet& constraints);
ConditionalTable conditional_table(const DegreeSpec& spec, std::span<const EdgeKey> edges, EdgeKey target);

double to_double(const Rational& q);
std::string to_string(const Rational& q);

}  // namespace rrg
