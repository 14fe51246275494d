#pragma once

// Test-side reference implementations and generators. Nothing here calls the
// library's counting code: graphs are found by trying every edge subset.

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <vector>

#include "rrg/graph.hpp"
#include "rrg/oracle.hpp"

namespace rrg::testing {

using EdgeSet = std::set<EdgeKey>;

// Every graph of G_{d,A} by scanning all subsets of the allowed pairs of the
// right size. Only for tiny instances (|A| <= 21).
inline std::vector<EdgeSet> brute_force_graphs(const DegreeSpec& spec) {
    const auto allowed = spec.allowed.to_vector();
    const int sum = spec.degree_sum();
    std::vector<EdgeSet> out;
    if (sum % 2 != 0 || allowed.size() > 21) return out;
    const std::size_t m = allowed.size();
    for (std::uint32_t mask = 0; mask < (1U << m); ++mask) {
        if (__builtin_popcount(mask) * 2 != sum) continue;
        std::vector<int> deg(static_cast<std::size_t>(spec.vertex_count()), 0);
        EdgeSet es;
        for (std::size_t i = 0; i < m; ++i)
            if (mask >> i & 1U) {
                ++deg[static_cast<std::size_t>(allowed[i].u)];
                ++deg[static_cast<std::size_t>(allowed[i].v)];
                es.insert(allowed[i]);
            }
        if (deg == spec.degrees) out.push_back(std::move(es));
    }
    return out;
}

inline Rational brute_probability(const std::vector<EdgeSet>& graphs, const EdgeSet& present,
                                  const EdgeSet& absent = {}) {
    std::size_t hits = 0;
    for (const auto& g : graphs) {
        bool ok = true;
        for (auto e : present) ok = ok && g.count(e);
        for (auto e : absent) ok = ok && !g.count(e);
        hits += ok;
    }
    return Rational(static_cast<long>(hits), static_cast<long>(graphs.size()));
}

// Rational from a double that is known to be a small-denominator fraction.
inline Rational frac(long p, long q) { return Rational(p, q); }

// Random subset of at most `max_missing` pairs.
inline std::vector<EdgeKey> random_missing(int n, int max_missing, std::mt19937_64& rng) {
    std::vector<EdgeKey> pairs;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) pairs.emplace_back(u, v);
    std::shuffle(pairs.begin(), pairs.end(), rng);
    const int count = static_cast<int>(rng() % static_cast<std::uint64_t>(max_missing + 1));
    pairs.erase(pairs.begin() + count, pairs.end());
    return pairs;
}

inline std::vector<double> random_values(std::size_t size, double lo, double hi, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> dist(lo, hi);
    std::vector<double> v(size);
    for (auto& x : v) x = dist(rng);
    return v;
}

// Random closed non-lazy walk of length k on n vertices (n >= 3 or k even).
inline std::vector<Vertex> random_closed_walk(int n, int k, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> pick(0, n - 1);
    for (;;) {
        std::vector<Vertex> vs{pick(rng)};
        for (int i = 1; i < k; ++i) {
            Vertex next;
            do next = pick(rng);
            while (next == vs.back());
            vs.push_back(next);
        }
        if (vs.back() == vs.front()) continue;
        vs.push_back(vs.front());
        return vs;
    }
}

}  // namespace rrg::testing
