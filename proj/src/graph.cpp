#include "rrg/graph.hpp"

#include <algorithm>
#include <bit>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>

namespace rrg {

namespace {

std::string edge_str(EdgeKey e) {
    return "{" + std::to_string(e.u) + "," + std::to_string(e.v) + "}";
}

}  // namespace

EdgeKey::EdgeKey(Vertex a, Vertex b) : u(std::min(a, b)), v(std::max(a, b)) {
    if (a == b) throw PreconditionError("self-loop {" + std::to_string(a) + "," + std::to_string(b) + "}");
    if (u < 0) throw PreconditionError("negative vertex index");
}

// ---------------------------------------------------------------- PairSet

PairSet::PairSet(int n) : n_(n) {
    if (n < 0) throw PreconditionError("negative vertex count");
    const auto pairs = static_cast<std::size_t>(n) * static_cast<std::size_t>(std::max(n - 1, 0)) / 2;
    words_.assign((pairs + 63) / 64, 0);
}

PairSet PairSet::complete(int n) {
    PairSet s(n);
    const auto pairs = static_cast<std::size_t>(n) * static_cast<std::size_t>(std::max(n - 1, 0)) / 2;
    for (std::size_t i = 0; i < pairs; ++i) s.words_[i / 64] |= std::uint64_t{1} << (i % 64);
    return s;
}

void PairSet::check(EdgeKey e) const {
    if (e.v >= n_) throw PreconditionError("edge " + edge_str(e) + " outside vertex range");
}

std::size_t PairSet::index(EdgeKey e) const {
    const auto n = static_cast<std::size_t>(n_);
    const auto u = static_cast<std::size_t>(e.u);
    const auto v = static_cast<std::size_t>(e.v);
    return u * n - u * (u + 1) / 2 + (v - u - 1);
}

bool PairSet::contains(EdgeKey e) const {
    if (e.v >= n_) return false;
    const auto i = index(e);
    return (words_[i / 64] >> (i % 64)) & 1U;
}

bool PairSet::contains(Vertex a, Vertex b) const {
    return a != b && contains(EdgeKey(a, b));
}

void PairSet::insert(EdgeKey e) {
    check(e);
    const auto i = index(e);
    words_[i / 64] |= std::uint64_t{1} << (i % 64);
}

void PairSet::erase(EdgeKey e) {
    check(e);
    const auto i = index(e);
    words_[i / 64] &= ~(std::uint64_t{1} << (i % 64));
}

std::size_t PairSet::size() const {
    std::size_t total = 0;
    for (auto w : words_) total += static_cast<std::size_t>(std::popcount(w));
    return total;
}

std::vector<EdgeKey> PairSet::to_vector() const {
    std::vector<EdgeKey> out;
    for (Vertex u = 0; u < n_; ++u)
        for (Vertex v = u + 1; v < n_; ++v)
            if (contains(EdgeKey(u, v))) out.emplace_back(u, v);
    return out;
}

std::vector<Vertex> PairSet::neighbors(Vertex v) const {
    std::vector<Vertex> out;
    for (Vertex u = 0; u < n_; ++u)
        if (u != v && contains(EdgeKey(u, v))) out.push_back(u);
    return out;
}

int PairSet::degree(Vertex v) const {
    int k = 0;
    for (Vertex u = 0; u < n_; ++u)
        if (u != v && contains(EdgeKey(u, v))) ++k;
    return k;
}

// ------------------------------------------------------------- DegreeSpec

DegreeSpec::DegreeSpec(std::vector<int> degs, PairSet allow)
    : degrees(std::move(degs)), allowed(std::move(allow)) {
    const int n = vertex_count();
    if (allowed.vertex_count() != n)
        throw PreconditionError("degree vector and allowed set disagree on n");
    for (int d : degrees)
        if (d < 0 || d > std::max(n - 1, 0)) throw PreconditionError("degree out of range [0, n-1]");
}

DegreeSpec DegreeSpec::regular(int n, int d, std::span<const EdgeKey> missing) {
    PairSet allowed = PairSet::complete(n);
    for (auto e : missing) allowed.erase(e);
    return DegreeSpec(std::vector<int>(static_cast<std::size_t>(n), d), std::move(allowed));
}

int DegreeSpec::degree_sum() const {
    return std::accumulate(degrees.begin(), degrees.end(), 0);
}

bool DegreeSpec::in_ball(int d, int t) const {
    for (int x : degrees)
        if (x > d) return false;
    return degree_sum() >= d * vertex_count() - 2 * t;
}

DegreeSpec DegreeSpec::decremented(Vertex a, Vertex b) const {
    DegreeSpec out = *this;
    auto& da = out.degrees.at(static_cast<std::size_t>(a));
    auto& db = out.degrees.at(static_cast<std::size_t>(b));
    if (da < 1 || db < 1) throw PreconditionError("degree underflow decrementing " + edge_str(EdgeKey(a, b)));
    --da;
    --db;
    return out;
}

ConstraintSet::ConstraintSet(std::set<EdgeKey> in, std::set<EdgeKey> out)
    : required_in(std::move(in)), required_out(std::move(out)) {
    for (const auto& e : required_in)
        if (required_out.count(e)) throw PreconditionError("edge " + edge_str(e) + " both required and forbidden");
}

// ------------------------------------------------------------ SimpleGraph

SimpleGraph::SimpleGraph(int n) : n_(n) {
    if (n < 0) throw PreconditionError("negative vertex count");
    row_words_ = (static_cast<std::size_t>(n) + 63) / 64;
    bits_.assign(row_words_ * static_cast<std::size_t>(n), 0);
    degree_.assign(static_cast<std::size_t>(n), 0);
}

SimpleGraph::SimpleGraph(int n, std::span<const EdgeKey> edges) : SimpleGraph(n) {
    for (auto e : edges) {
        if (e.v < n_ && has_edge(e)) throw PreconditionError("duplicate edge " + edge_str(e));
        add_edge(e);
    }
}

void SimpleGraph::check(Vertex v) const {
    if (v < 0 || v >= n_) throw PreconditionError("vertex " + std::to_string(v) + " out of range");
}

std::uint64_t& SimpleGraph::word(Vertex a, Vertex b) {
    return bits_[static_cast<std::size_t>(a) * row_words_ + static_cast<std::size_t>(b) / 64];
}

std::uint64_t SimpleGraph::word(Vertex a, Vertex b) const {
    return bits_[static_cast<std::size_t>(a) * row_words_ + static_cast<std::size_t>(b) / 64];
}

bool SimpleGraph::has_edge(Vertex a, Vertex b) const {
    if (a == b) return false;
    return (word(a, b) >> (static_cast<unsigned>(b) % 64)) & 1U;
}

void SimpleGraph::add_edge(EdgeKey e) {
    check(e.v);
    if (has_edge(e)) throw PreconditionError("multi-edge " + edge_str(e));
    word(e.u, e.v) |= std::uint64_t{1} << (static_cast<unsigned>(e.v) % 64);
    word(e.v, e.u) |= std::uint64_t{1} << (static_cast<unsigned>(e.u) % 64);
    ++degree_[static_cast<std::size_t>(e.u)];
    ++degree_[static_cast<std::size_t>(e.v)];
    ++edge_count_;
}

void SimpleGraph::remove_edge(EdgeKey e) {
    check(e.v);
    if (!has_edge(e)) throw PreconditionError("missing edge " + edge_str(e));
    word(e.u, e.v) &= ~(std::uint64_t{1} << (static_cast<unsigned>(e.v) % 64));
    word(e.v, e.u) &= ~(std::uint64_t{1} << (static_cast<unsigned>(e.u) % 64));
    --degree_[static_cast<std::size_t>(e.u)];
    --degree_[static_cast<std::size_t>(e.v)];
    --edge_count_;
}

bool SimpleGraph::is_regular(int d) const {
    return std::all_of(degree_.begin(), degree_.end(), [d](int x) { return x == d; });
}

int SimpleGraph::regular_degree() const {
    if (n_ == 0) return 0;
    if (!is_regular(degree_.front())) throw PreconditionError("graph is not regular");
    return degree_.front();
}

std::vector<EdgeKey> SimpleGraph::edges() const {
    std::vector<EdgeKey> out;
    out.reserve(edge_count_);
    for (Vertex u = 0; u < n_; ++u)
        for (Vertex v : neighbors(u))
            if (v > u) out.emplace_back(u, v);
    return out;
}

std::vector<Vertex> SimpleGraph::neighbors(Vertex v) const {
    check(v);
    std::vector<Vertex> out;
    out.reserve(static_cast<std::size_t>(degree(v)));
    const std::uint64_t* row = bits_.data() + static_cast<std::size_t>(v) * row_words_;
    for (std::size_t w = 0; w < row_words_; ++w) {
        std::uint64_t bits = row[w];
        while (bits) {
            const int bit = std::countr_zero(bits);
            out.push_back(static_cast<Vertex>(w * 64 + static_cast<std::size_t>(bit)));
            bits &= bits - 1;
        }
    }
    return out;
}

SimpleGraph SimpleGraph::complement() const {
    SimpleGraph out(n_);
    for (Vertex u = 0; u < n_; ++u)
        for (Vertex v = u + 1; v < n_; ++v)
            if (!has_edge(u, v)) out.add_edge(EdgeKey(u, v));
    return out;
}

// -------------------------------------------------------------- operations

DegreeSpec condition(const DegreeSpec& spec, EdgeKey e, bool present) {
    if (!spec.allowed.contains(e))
        throw PreconditionError("edge " + edge_str(e) + " is not in the allowed set");
    DegreeSpec out = present ? spec.decremented(e.u, e.v) : spec;
    out.allowed.erase(e);
    return out;
}

SimpleGraph perform_switching(const SimpleGraph& g,
                              std::pair<EdgeKey, EdgeKey> removed,
                              std::pair<EdgeKey, EdgeKey> added) {
    const auto [r1, r2] = removed;
    const auto [a1, a2] = added;
    if (r1.shares_endpoint(r2))
        throw PreconditionError("switching needs two vertex-disjoint edges to remove");
    if (a1.shares_endpoint(a2))
        throw PreconditionError("switching must add two vertex-disjoint edges");
    // Each added edge joins one endpoint of r1 to one endpoint of r2.
    for (auto e : {a1, a2}) {
        const bool crosses = (r1.touches(e.u) && r2.touches(e.v)) || (r1.touches(e.v) && r2.touches(e.u));
        if (!crosses) throw PreconditionError("added edge " + edge_str(e) + " does not follow the switching pattern");
    }
    if (!g.has_edge(r1) || !g.has_edge(r2)) throw PreconditionError("removed edges must be present");
    if (g.has_edge(a1) || g.has_edge(a2)) throw PreconditionError("switching would create a multi-edge");

    SimpleGraph out = g;
    out.remove_edge(r1);
    out.remove_edge(r2);
    out.add_edge(a1);
    out.add_edge(a2);
    return out;
}

SimpleGraph circulant_regular(int n, int d) {
    if (d < 0 || (n > 0 && d >= n) || (n == 0 && d != 0))
        throw PreconditionError("circulant needs 0 <= d < n");
    if ((n * d) % 2 != 0) throw PreconditionError("nd must be even");
    SimpleGraph g(n);
    for (Vertex i = 0; i < n; ++i) {
        for (int s = 1; s <= d / 2; ++s) {
            const Vertex j = (i + s) % n;
            if (!g.has_edge(i, j)) g.add_edge(EdgeKey(i, j));
        }
        if (d % 2 == 1) {
            const Vertex j = (i + n / 2) % n;
            if (!g.has_edge(i, j)) g.add_edge(EdgeKey(i, j));
        }
    }
    return g;
}

SimpleGraph build_constrained_regular(int n, int d, const ConstraintSet& constraints) {
    const int k = static_cast<int>(constraints.size());
    if (n < 1 || d < 0 || d >= n) throw PreconditionError("need 0 <= d < n");
    if ((n * d) % 2 != 0) throw PreconditionError("nd must be even");
    if (2 * k > d) throw PreconditionError("need 2|B u C| <= d");
    if (4 * k > n - d - 1) throw PreconditionError("need 4|B u C| <= n - d - 1");
    for (const auto* set : {&constraints.required_in, &constraints.required_out})
        for (auto e : *set)
            if (e.v >= n) throw PreconditionError("constraint edge " + edge_str(e) + " outside vertex range");

    if (k == 0) return circulant_regular(n, d);

    const int v2_size = n - d - 1;
    if (v2_size <= d)
        throw PreconditionError("n - d - 1 must exceed d so that V2 carries a d-regular graph");

    // V1: every constrained vertex, padded with the smallest remaining labels.
    std::vector<char> in_v1(static_cast<std::size_t>(n), 0);
    int v1_count = 0;
    for (const auto* set : {&constraints.required_in, &constraints.required_out})
        for (auto e : *set)
            for (Vertex x : {e.u, e.v})
                if (!in_v1[static_cast<std::size_t>(x)]) {
                    in_v1[static_cast<std::size_t>(x)] = 1;
                    ++v1_count;
                }
    for (Vertex x = 0; x < n && v1_count < d + 1; ++x)
        if (!in_v1[static_cast<std::size_t>(x)]) {
            in_v1[static_cast<std::size_t>(x)] = 1;
            ++v1_count;
        }
    std::vector<Vertex> v1;
    std::vector<Vertex> v2;
    for (Vertex x = 0; x < n; ++x) (in_v1[static_cast<std::size_t>(x)] ? v1 : v2).push_back(x);

    SimpleGraph g(n);
    for (std::size_t i = 0; i < v1.size(); ++i)
        for (std::size_t j = i + 1; j < v1.size(); ++j) g.add_edge(EdgeKey(v1[i], v1[j]));
    const SimpleGraph g2 = circulant_regular(v2_size, d);
    for (auto e : g2.edges())
        g.add_edge(EdgeKey(v2[static_cast<std::size_t>(e.u)], v2[static_cast<std::size_t>(e.v)]));

    // Greedy maximal matching in V2, scanned in sorted edge order.
    std::vector<EdgeKey> matching;
    std::vector<char> matched(static_cast<std::size_t>(n), 0);
    for (auto e : g2.edges()) {
        const Vertex x = v2[static_cast<std::size_t>(e.u)];
        const Vertex y = v2[static_cast<std::size_t>(e.v)];
        if (matched[static_cast<std::size_t>(x)] || matched[static_cast<std::size_t>(y)]) continue;
        matched[static_cast<std::size_t>(x)] = matched[static_cast<std::size_t>(y)] = 1;
        matching.emplace_back(x, y);
    }
    if (matching.size() < constraints.required_out.size())
        throw DegenerateError("greedy matching in V2 is smaller than |C|");

    std::size_t next = 0;
    for (auto c : constraints.required_out) {
        const EdgeKey m = matching[next++];
        g = perform_switching(g, {c, m}, {EdgeKey(c.u, m.u), EdgeKey(c.v, m.v)});
    }
    return g;
}

// --------------------------------------------------------------------- I/O

void write_edge_list(std::ostream& os, const SimpleGraph& g) {
    os << g.vertex_count() << ' ' << g.regular_degree() << '\n';
    for (auto e : g.edges()) os << e.u << ' ' << e.v << '\n';
}

SimpleGraph read_edge_list(std::istream& is) {
    int n = 0;
    int d = 0;
    if (!(is >> n >> d)) throw PreconditionError("edge list: missing 'n d' header");
    SimpleGraph g(n);
    Vertex a = 0;
    Vertex b = 0;
    while (is >> a >> b) {
        if (a < 0 || b < 0 || a >= n || b >= n)
            throw PreconditionError("edge list: vertex out of range in '" + std::to_string(a) + " " + std::to_string(b) + "'");
        g.add_edge(EdgeKey(a, b));
    }
    if (!is.eof()) throw PreconditionError("edge list: malformed line");
    if (!g.is_regular(d)) throw PreconditionError("edge list: graph is not " + std::to_string(d) + "-regular");
    return g;
}

}  // namespace rrg
