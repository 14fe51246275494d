#include "rrg/walks.hpp"

#include <cmath>
#include <limits>
#include <queue>
#include <set>
#include <string>

#include "rrg/fourier.hpp"

namespace rrg {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_pow(double x, double e) {
    if (e == 0.0) return 0.0;
    return e * std::log(x);
}

double log_choose(int n, int k) {
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

double centering(int n, int d) {
    if (n < 2) throw PreconditionError("need n >= 2");
    if (d < 0 || d > n - 1) throw PreconditionError("need 0 <= d <= n-1");
    return static_cast<double>(d) / (n - 1);
}

struct Condensed {
    std::vector<int> partner;  // matched '+' index for a cancelled '-', else -1
    std::vector<int> run;      // run id for an uncancelled '-', else -1
    int runs = 0;
};

Condensed condense(const std::vector<CodeSymbol>& symbols) {
    using K = CodeSymbol::Kind;
    Condensed out;
    out.partner.assign(symbols.size(), -1);
    out.run.assign(symbols.size(), -1);
    std::vector<int> stack;
    std::vector<char> cancelled(symbols.size(), 0);
    for (int i = 0; i < static_cast<int>(symbols.size()); ++i) {
        if (symbols[static_cast<std::size_t>(i)].kind == K::minus && !stack.empty() &&
            symbols[static_cast<std::size_t>(stack.back())].kind == K::plus) {
            out.partner[static_cast<std::size_t>(i)] = stack.back();
            cancelled[static_cast<std::size_t>(i)] = 1;
            cancelled[static_cast<std::size_t>(stack.back())] = 1;
            stack.pop_back();
        } else {
            stack.push_back(i);
        }
    }
    bool in_run = false;
    for (int i = 0; i < static_cast<int>(symbols.size()); ++i) {
        if (cancelled[static_cast<std::size_t>(i)]) continue;
        if (symbols[static_cast<std::size_t>(i)].kind == K::minus) {
            if (!in_run) ++out.runs;
            in_run = true;
            out.run[static_cast<std::size_t>(i)] = out.runs - 1;
        } else {
            in_run = false;
        }
    }
    return out;
}

}  // namespace

Walk::Walk(std::vector<Vertex> vs) : vertices(std::move(vs)) {
    if (vertices.size() < 3) throw PreconditionError("a closed non-lazy walk needs length >= 2");
    if (vertices.front() != vertices.back()) throw PreconditionError("walk is not closed");
    for (std::size_t i = 0; i + 1 < vertices.size(); ++i) {
        if (vertices[i] < 0) throw PreconditionError("negative vertex in walk");
        if (vertices[i] == vertices[i + 1]) throw PreconditionError("walk is lazy at step " + std::to_string(i + 1));
    }
}

std::map<EdgeKey, int> edge_multiplicities(const Walk& w) {
    std::map<EdgeKey, int> mult;
    for (int i = 0; i < w.length(); ++i) ++mult[w.step(i)];
    return mult;
}

WalkParams classify(const Walk& w, ReturnRule rule) {
    const auto mult = edge_multiplicities(w);
    WalkParams p;
    p.k = w.length();
    for (const auto& [e, c] : mult) (c == 1 ? p.t : p.t2)++;
    p.b = static_cast<int>(std::set<Vertex>(w.vertices.begin(), w.vertices.end()).size());

    if (rule == ReturnRule::first_traversal) {
        std::set<Vertex> discovered{w.vertices.front()};
        std::set<EdgeKey> opened;
        std::vector<int> counted;
        int last_new = -1;
        for (int i = 0; i < p.k; ++i) {
            const EdgeKey e = w.step(i);
            const Vertex to = w.vertices[static_cast<std::size_t>(i + 1)];
            if (opened.insert(e).second) {
                last_new = i;
                if (discovered.count(to)) counted.push_back(i);
            }
            discovered.insert(to);
        }
        const EdgeKey first = w.step(0);
        for (int i : counted) {
            if (i == last_new && first.touches(w.vertices[static_cast<std::size_t>(i + 1)])) continue;
            ++p.m;
            if (mult.at(w.step(i)) == 1) ++p.r;
        }
    } else {
        std::vector<EdgeKey> order;
        std::set<EdgeKey> seen;
        for (int i = 0; i < p.k; ++i)
            if (seen.insert(w.step(i)).second) order.push_back(w.step(i));
        const int q = static_cast<int>(order.size());
        for (int i = 1; i <= q; ++i) {
            bool hit = false;
            for (int j = 1; j < i - 1 && !hit; ++j) {
                if (i == q && j == 1) continue;
                hit = order[static_cast<std::size_t>(i - 1)].shares_endpoint(order[static_cast<std::size_t>(j - 1)]);
            }
            if (hit) {
                ++p.m;
                if (mult.at(order[static_cast<std::size_t>(i - 1)]) == 1) ++p.r;
            }
        }
    }
    return p;
}

void enumerate_closed_walks(int n, int k, const std::function<void(const Walk&)>& visit, std::uint64_t budget) {
    if (n < 0 || k < 0) throw PreconditionError("need n, k >= 0");
    if (std::pow(static_cast<double>(n), k) > static_cast<double>(budget))
        throw BudgetError("walk enumeration budget exceeded: n^k = " + std::to_string(std::pow(static_cast<double>(n), k)));
    if (k < 2 || n < 2) return;
    std::vector<Vertex> vs(static_cast<std::size_t>(k + 1));
    Walk w;
    std::function<void(int)> extend = [&](int i) {
        const Vertex prev = vs[static_cast<std::size_t>(i - 1)];
        if (i == k) {
            if (prev == vs[0]) return;
            vs[static_cast<std::size_t>(k)] = vs[0];
            w.vertices = vs;
            visit(w);
            return;
        }
        for (Vertex v = 0; v < n; ++v) {
            if (v == prev) continue;
            vs[static_cast<std::size_t>(i)] = v;
            extend(i + 1);
        }
    };
    for (Vertex v0 = 0; v0 < n; ++v0) {
        vs[0] = v0;
        extend(1);
    }
}

std::uint64_t closed_walk_count(int n, int k) {
    if (n < 1 || k < 0) throw PreconditionError("need n >= 1, k >= 0");
    std::int64_t a = 1;
    for (int i = 0; i < k; ++i) a *= (n - 1);
    const std::int64_t sign = (k % 2 == 0) ? 1 : -1;
    return static_cast<std::uint64_t>(a + sign * (n - 1));
}

std::map<WalkParams, std::uint64_t> count_by_params(int n, int k, ReturnRule rule, std::uint64_t budget) {
    std::map<WalkParams, std::uint64_t> hist;
    enumerate_closed_walks(n, k, [&](const Walk& w) { ++hist[classify(w, rule)]; }, budget);
    return hist;
}

int Codeword::neutral_count() const {
    int c = 0;
    for (const auto& s : symbols)
        if (s.kind == CodeSymbol::Kind::neutral) ++c;
    return c;
}

std::vector<Vertex> discovery_order(const Walk& w) {
    std::vector<Vertex> order;
    std::set<Vertex> seen;
    for (Vertex v : w.vertices)
        if (seen.insert(v).second) order.push_back(v);
    return order;
}

Codeword encode(const Walk& w) {
    using K = CodeSymbol::Kind;
    Codeword c;
    std::set<Vertex> discovered{w.vertices.front()};
    struct Use {
        int times = 0;
        bool positive = false;
    };
    std::map<EdgeKey, Use> used;
    for (int i = 0; i < w.length(); ++i) {
        const Vertex to = w.vertices[static_cast<std::size_t>(i + 1)];
        Use& u = used[w.step(i)];
        if (!discovered.count(to)) {
            discovered.insert(to);
            u = {1, true};
            c.symbols.push_back({K::plus, -1});
        } else if (u.positive && u.times == 1) {
            u.times = 2;
            c.symbols.push_back({K::minus, -1});
        } else {
            ++u.times;
            c.symbols.push_back({K::neutral, to});
        }
    }
    const Condensed cond = condense(c.symbols);
    c.extra_vertices.assign(static_cast<std::size_t>(cond.runs), -1);
    for (std::size_t i = 0; i < c.symbols.size(); ++i)
        if (cond.run[i] >= 0) c.extra_vertices[static_cast<std::size_t>(cond.run[i])] = w.vertices[i + 1];
    return c;
}

Walk decode(const Codeword& c, std::span<const Vertex> discovered) {
    using K = CodeSymbol::Kind;
    if (discovered.empty()) throw DegenerateError("empty discovery list");
    const Condensed cond = condense(c.symbols);
    if (static_cast<std::size_t>(cond.runs) != c.extra_vertices.size())
        throw DegenerateError("codeword carries the wrong number of run endpoints");

    std::map<Vertex, std::vector<Vertex>> tree;
    auto toward = [&](Vertex from, Vertex target) {
        std::map<Vertex, Vertex> parent{{from, from}};
        std::queue<Vertex> q;
        q.push(from);
        while (!q.empty()) {
            const Vertex x = q.front();
            q.pop();
            if (x == target) break;
            for (Vertex y : tree[x])
                if (parent.emplace(y, x).second) q.push(y);
        }
        if (!parent.count(target) || target == from) throw DegenerateError("run endpoint unreachable in the discovery tree");
        Vertex step = target;
        while (parent.at(step) != from) step = parent.at(step);
        return step;
    };

    std::vector<Vertex> vs{discovered[0]};
    std::vector<std::pair<Vertex, Vertex>> plus_edge(c.symbols.size(), {-1, -1});
    std::size_t next_new = 1;
    for (std::size_t i = 0; i < c.symbols.size(); ++i) {
        const Vertex cur = vs.back();
        Vertex to = -1;
        switch (c.symbols[i].kind) {
            case K::plus:
                if (next_new >= discovered.size()) throw DegenerateError("more '+' steps than discovered vertices");
                to = discovered[next_new++];
                plus_edge[i] = {cur, to};
                tree[cur].push_back(to);
                tree[to].push_back(cur);
                break;
            case K::minus:
                if (cond.partner[i] >= 0) {
                    const auto [x, y] = plus_edge[static_cast<std::size_t>(cond.partner[i])];
                    if (y != cur) throw DegenerateError("cancelled '-' does not start where its '+' ended");
                    to = x;
                } else {
                    to = toward(cur, c.extra_vertices[static_cast<std::size_t>(cond.run[i])]);
                }
                break;
            case K::neutral:
                to = c.symbols[i].vertex;
                break;
        }
        vs.push_back(to);
    }
    try {
        return Walk(std::move(vs));
    } catch (const PreconditionError& e) {
        throw DegenerateError(std::string("decoded sequence is not a closed walk: ") + e.what());
    }
}

double enumeration_bound(int n, const WalkParams& q) {
    if (n < 1) throw PreconditionError("need n >= 1");
    if (q.b < 2) return kNegInf;
    const int x = 2 * q.b - 2 - q.t + q.r;
    const int y = 2 * q.k - 4 * q.b + 4 + 2 * q.t - 2 * q.r;
    if (x < 0 || x > q.k || y < 0) return kNegInf;
    return q.b * std::log(static_cast<double>(n)) + log_choose(q.k, x) + x * std::log(2.0) +
           log_pow(static_cast<double>(q.b), y);
}

double edge_product_expectation(const std::map<EdgeKey, int>& multiplicity, const DegreeSpec& spec, double p,
                                ExactOracle& oracle) {
    std::vector<std::pair<EdgeKey, int>> live;
    double fixed = 1.0;
    for (const auto& [e, m] : multiplicity) {
        if (spec.allowed.contains(e))
            live.emplace_back(e, m);
        else
            fixed *= std::pow(-p, m);
    }
    if (live.size() > 20) throw BudgetError("too many distinct edges for pattern summation");
    double sum = 0.0;
    const std::uint32_t patterns = 1U << live.size();
    for (std::uint32_t x = 0; x < patterns; ++x) {
        ConstraintSet cs;
        double prod = 1.0;
        for (std::size_t i = 0; i < live.size(); ++i) {
            const bool present = (x >> i) & 1U;
            (present ? cs.required_in : cs.required_out).insert(live[i].first);
            prod *= std::pow((present ? 1.0 : 0.0) - p, live[i].second);
        }
        const Rational q = oracle.joint_probability(spec, cs);
        if (q != 0) sum += to_double(q) * prod;
    }
    return fixed * sum;
}

double walk_contribution(const Walk& w, const DegreeSpec& spec, double p, ExactOracle& oracle) {
    return edge_product_expectation(edge_multiplicities(w), spec, p, oracle);
}

double chi_expansion_sum(std::span<const EdgeKey> edges, const DegreeSpec& spec, double p, ExactOracle& oracle) {
    const int t = static_cast<int>(edges.size());
    if (t > 10) throw BudgetError("expansion limited to t <= 10 edges");
    if (t == 0) return 1.0;

    std::vector<double> weight(std::size_t{1} << t, 0.0);
    weight[0] = 1.0;
    for (int j = t - 1; j >= 0; --j) {
        const EdgeKey target = edges[static_cast<std::size_t>(j)];
        const ConditionalTable table = oracle.conditional_table(spec, edges.first(static_cast<std::size_t>(j)), target);
        const double fallback = to_double(oracle.edge_probability(spec, target.u, target.v));
        std::vector<double> values(table.values.size());
        for (std::size_t x = 0; x < values.size(); ++x)
            values[x] = table.defined[x] ? to_double(table.values[x]) : fallback;
        const FourierCoeffs chi = transform(BooleanTable(j, std::move(values)));

        const std::size_t below = std::size_t{1} << j;
        std::vector<double> next(below, 0.0);
        for (std::size_t v = 0; v < 2 * below; ++v) {
            const double w = weight[v];
            if (w == 0.0) continue;
            const bool inside = (v >> j) & 1U;
            const double scale = w * (inside ? 1.0 - p : 1.0);
            const std::size_t base = v & (below - 1);
            for (std::size_t s = 0; s < below; ++s) {
                double coef = chi.coeff[s];
                if (s == 0 && !inside) coef -= p;
                next[base | s] += scale * coef;
            }
        }
        weight = std::move(next);
    }
    return weight[0];
}

double contribution_bound(const WalkParams& q, int n, int d) {
    const double p = centering(n, d);
    return std::log(2.0) + log_pow(static_cast<double>(q.k), 2.0 * q.m) + log_pow(p * (1.0 - p), q.t2 + q.t / 2.0) -
           log_pow(static_cast<double>(n), q.t / 2.0);
}

double aggregate_trace_bound(int n, int d, int k) {
    const double p = centering(n, d);
    return std::log(2.0) + 2.0 * std::log(k + 1.0) + std::log(static_cast<double>(n)) +
           log_pow(4.0 * n * p * (1.0 - p), k / 2.0);
}

}  // namespace rrg
