#pragma once

// Graph and constraint data model: edge keys, allowed-pair sets, degree
// specifications (d, A), simple graphs, the conditioning transform, the
// degree-preserving switching, and the constructive existence procedure for
// regular graphs with prescribed present/absent edges.

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <set>
#include <span>
#include <utility>
#include <vector>

#include "rrg/errors.hpp"

namespace rrg {

using Vertex = int;

// Unordered pair {u, v} stored canonically with u < v.
struct EdgeKey {
    Vertex u;
    Vertex v;

    EdgeKey(Vertex a, Vertex b);

    bool touches(Vertex x) const { return u == x || v == x; }
    Vertex other(Vertex x) const { return x == u ? v : u; }
    bool shares_endpoint(const EdgeKey& e) const {
        return touches(e.u) || touches(e.v);
    }

    auto operator<=>(const EdgeKey&) const = default;
};

// A set of unordered vertex pairs on n labeled vertices, stored as a bitset
// over the lexicographically ordered pairs. Iteration is in sorted order.
class PairSet {
public:
    PairSet() = default;
    explicit PairSet(int n);

    static PairSet complete(int n);

    int vertex_count() const { return n_; }
    bool contains(EdgeKey e) const;
    bool contains(Vertex a, Vertex b) const;
    void insert(EdgeKey e);
    void erase(EdgeKey e);
    std::size_t size() const;

    std::vector<EdgeKey> to_vector() const;
    std::vector<Vertex> neighbors(Vertex v) const;
    int degree(Vertex v) const;

    const std::vector<std::uint64_t>& words() const { return words_; }

    auto operator<=>(const PairSet&) const = default;

private:
    std::size_t index(EdgeKey e) const;
    void check(EdgeKey e) const;

    int n_ = 0;
    std::vector<std::uint64_t> words_;
};

// The pair (d, A) indexing the uniform graph class G_{d,A}: a target degree
// per vertex plus the set of pairs that may carry an edge.
struct DegreeSpec {
    std::vector<int> degrees;
    PairSet allowed;

    DegreeSpec() = default;
    DegreeSpec(std::vector<int> degrees, PairSet allowed);

    // All degrees d, every pair allowed except `missing`.
    static DegreeSpec regular(int n, int d, std::span<const EdgeKey> missing = {});

    int vertex_count() const { return static_cast<int>(degrees.size()); }
    int degree_sum() const;

    std::vector<Vertex> allowed_neighbors(Vertex v) const { return allowed.neighbors(v); }
    int allowed_degree(Vertex v) const { return allowed.degree(v); }

    // Membership in B_t(n, d): all entries <= d and sum >= dn - 2t.
    bool in_ball(int d, int t) const;

    // d - e_a - e_b with the allowed set unchanged.
    DegreeSpec decremented(Vertex a, Vertex b) const;

    auto operator<=>(const DegreeSpec&) const = default;
};

// Required-present (B) and required-absent (C) edge sets; disjoint.
struct ConstraintSet {
    std::set<EdgeKey> required_in;
    std::set<EdgeKey> required_out;

    ConstraintSet() = default;
    ConstraintSet(std::set<EdgeKey> in, std::set<EdgeKey> out);

    std::size_t size() const { return required_in.size() + required_out.size(); }
};

// Undirected simple graph on n labeled vertices with O(1) adjacency queries.
class SimpleGraph {
public:
    explicit SimpleGraph(int n = 0);
    SimpleGraph(int n, std::span<const EdgeKey> edges);

    int vertex_count() const { return n_; }
    std::size_t edge_count() const { return edge_count_; }

    bool has_edge(Vertex a, Vertex b) const;
    bool has_edge(EdgeKey e) const { return has_edge(e.u, e.v); }
    void add_edge(EdgeKey e);
    void remove_edge(EdgeKey e);

    int degree(Vertex v) const { return degree_[static_cast<std::size_t>(v)]; }
    const std::vector<int>& degree_sequence() const { return degree_; }
    bool is_regular(int d) const;
    // Common degree if every vertex has the same degree.
    int regular_degree() const;

    std::vector<EdgeKey> edges() const;
    std::vector<Vertex> neighbors(Vertex v) const;
    SimpleGraph complement() const;

    bool operator==(const SimpleGraph& other) const {
        return n_ == other.n_ && bits_ == other.bits_;
    }

private:
    void check(Vertex v) const;
    std::uint64_t& word(Vertex a, Vertex b);
    std::uint64_t word(Vertex a, Vertex b) const;

    int n_ = 0;
    std::size_t row_words_ = 0;
    std::size_t edge_count_ = 0;
    std::vector<std::uint64_t> bits_;
    std::vector<int> degree_;
};

// Conditioning on e present yields (d - e_a - e_b, A \ {e}); on e absent
// yields (d, A \ {e}).
DegreeSpec condition(const DegreeSpec& spec, EdgeKey e, bool present);

// Replaces {v1,v2},{v3,v4} by {v1,v3},{v2,v4} (any consistent labeling of the
// four distinct endpoints). Degrees are unchanged.
SimpleGraph perform_switching(const SimpleGraph& g,
                              std::pair<EdgeKey, EdgeKey> removed,
                              std::pair<EdgeKey, EdgeKey> added);

// Circulant d-regular graph on n vertices: i ~ i +- 1..floor(d/2), plus the
// antipode i + n/2 when d is odd. Requires d < n and nd even.
SimpleGraph circulant_regular(int n, int d);

// A d-regular graph containing every edge of `required_in` and none of
// `required_out`, built as clique(V1) + circulant(V2) followed by one
// switching per forbidden edge against a greedy matching in V2.
// Requires 2|B u C| <= d, 4|B u C| <= n - d - 1, nd even.
SimpleGraph build_constrained_regular(int n, int d, const ConstraintSet& constraints);

// Plain-text edge list: header "n d", then one "u v" pair per line.
void write_edge_list(std::ostream& os, const SimpleGraph& g);
SimpleGraph read_edge_list(std::istream& is);

}  // namespace rrg
