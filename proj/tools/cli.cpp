#include "cli.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "rrg/estimator.hpp"
#include "rrg/fourier.hpp"
#include "rrg/oracle.hpp"
#include "rrg/parallel.hpp"
#include "rrg/spectral.hpp"
#include "rrg/verify.hpp"
#include "rrg/walks.hpp"

namespace rrg {

namespace {

using nlohmann::json;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CommonOptions {
    std::uint64_t seed = 1;
    int jobs = 1;
    bool no_timestamp = false;
    std::string format = "csv";
    std::string output;
};

std::vector<int> parse_ints(const std::string& text, char sep = ',') {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, sep)) {
        try {
            std::size_t used = 0;
            out.push_back(std::stoi(part, &used));
            if (used != part.size()) throw std::invalid_argument(part);
        } catch (const std::exception&) {
            throw UsageError("expected comma-separated integers, got '" + text + "'");
        }
    }
    return out;
}

EdgeKey parse_edge(const std::string& text) {
    const auto v = parse_ints(text);
    if (v.size() != 2) throw UsageError("expected an edge 'u,v', got '" + text + "'");
    return EdgeKey(v[0], v[1]);
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw UsageError("malformed JSON in '" + path + "': " + e.what());
    }
}

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    std::ostringstream os;
    os << std::setprecision(12) << x;
    return os.str();
}

json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

// Writes rows as CSV (flushed per row) or as one JSON array at the end.
class TableWriter {
public:
    TableWriter(std::ostream& os, const CommonOptions& common, std::vector<std::string> columns)
        : os_(os), json_(common.format == "json"), columns_(std::move(columns)) {
        if (json_) return;
        if (!common.no_timestamp) os_ << "# generated " << utc_timestamp() << '\n';
    }

    void comment(const std::string& text) {
        if (json_)
            comments_.push_back(text);
        else
            os_ << "# " << text << '\n';
    }

    void header() {
        if (json_ || header_done_) return;
        for (std::size_t i = 0; i < columns_.size(); ++i) os_ << (i ? "," : "") << columns_[i];
        os_ << '\n';
        header_done_ = true;
    }

    void row(const std::vector<json>& values) {
        if (values.size() != columns_.size()) throw std::logic_error("row width mismatch");
        if (json_) {
            json obj = json::object();
            for (std::size_t i = 0; i < values.size(); ++i) obj[columns_[i]] = values[i];
            rows_.push_back(std::move(obj));
            return;
        }
        header();
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (i) os_ << ',';
            const json& v = values[i];
            if (v.is_number_float())
                os_ << format_number(v.get<double>());
            else if (v.is_null())
                os_ << "nan";
            else if (v.is_string())
                os_ << v.get<std::string>();
            else
                os_ << v.dump();
        }
        os_ << '\n';
        os_.flush();
    }

    void finish() {
        if (!json_) {
            header();
            return;
        }
        json doc = {{"rows", rows_}};
        if (!comments_.empty()) doc["notes"] = comments_;
        os_ << doc.dump(2) << '\n';
    }

private:
    std::ostream& os_;
    bool json_;
    bool header_done_ = false;
    std::vector<std::string> columns_;
    json rows_ = json::array();
    std::vector<std::string> comments_;
};

// Output sink: stdout unless --output names a file.
class Sink {
public:
    Sink(const std::string& path, std::ostream& fallback) : os_(&fallback) {
        if (path.empty()) return;
        file_ = std::make_unique<std::ofstream>(path);
        if (!*file_) throw std::runtime_error("cannot write '" + path + "'");
        os_ = file_.get();
    }
    std::ostream& stream() { return *os_; }

private:
    std::unique_ptr<std::ofstream> file_;
    std::ostream* os_;
};

void require_json(const CommonOptions& common, const char* command) {
    if (common.format != "json")
        throw UsageError(std::string(command) + " only produces JSON; drop --format or pass --format json");
}

void validate_regular(int n, int d) {
    if (n < 1 || d < 0 || d > n - 1 || (static_cast<long long>(n) * d) % 2 != 0)
        throw UsageError("infeasible (n, d) = (" + std::to_string(n) + ", " + std::to_string(d) + ")");
}

DegreeSpec spec_from(int n, int d, const std::vector<EdgeKey>& missing) {
    if (n < 1 || n > kOracleMaxVertices) throw UsageError("oracle queries need 1 <= n <= 10");
    if (d < 0 || d > n - 1) throw UsageError("need 0 <= d <= n-1");
    for (auto e : missing)
        if (e.u < 0 || e.v >= n || e.u == e.v) throw UsageError("missing edge out of range");
    return DegreeSpec::regular(n, d, missing);
}

json edge_list_json(const std::vector<EdgeKey>& edges) {
    json arr = json::array();
    for (auto e : edges) arr.push_back({e.u, e.v});
    return arr;
}

// ---------------------------------------------------------------- oracle

struct OracleArgs {
    int n = 0;
    int d = 0;
    std::vector<std::string> missing;
    std::string edge;
    std::string cherry;
};

int cmd_oracle(const OracleArgs& a, const CommonOptions& common, std::ostream& out) {
    std::vector<EdgeKey> missing;
    for (const auto& m : a.missing) missing.push_back(parse_edge(m));
    const DegreeSpec spec = spec_from(a.n, a.d, missing);
    ExactOracle oracle(a.n);
    json doc;
    doc["spec"] = {{"n", a.n}, {"d", a.d}, {"missing", edge_list_json(missing)}};
    if (!a.edge.empty() && !a.cherry.empty()) throw UsageError("pass at most one of --edge, --cherry");
    if (!a.edge.empty()) {
        const EdgeKey e = parse_edge(a.edge);
        doc["query"] = {{"kind", "edge"}, {"vertices", {e.u, e.v}}};
        doc["value"] = to_string(oracle.edge_probability(spec, e.u, e.v));
    } else if (!a.cherry.empty()) {
        const auto v = parse_ints(a.cherry);
        if (v.size() != 3) throw UsageError("expected a cherry 'a,b,c'");
        doc["query"] = {{"kind", "cherry"}, {"vertices", v}};
        doc["value"] = to_string(oracle.cherry_probability(spec, v[0], v[1], v[2]));
    } else {
        doc["query"] = {{"kind", "count"}};
        doc["value"] = oracle.count_graphs(spec).str();
    }
    (void)common;
    out << doc.dump() << '\n';
    return kExitOk;
}

// --------------------------------------------------------------- fourier

int cmd_fourier(const std::string& input, bool reciprocal, const CommonOptions& common, std::ostream& out) {
    const json doc = read_json_file(input);
    if (!doc.contains("t") || !doc.contains("values")) throw UsageError("table JSON needs fields t and values");
    const int t = doc.at("t").get<int>();
    if (t < 0 || t > kCubeMaxDim) throw UsageError("t out of range");
    const auto values = doc.at("values").get<std::vector<double>>();
    if (values.size() != (std::size_t{1} << t)) throw UsageError("values must have 2^t entries");
    FourierCoeffs c = transform(BooleanTable(t, values));
    if (reciprocal) c = reciprocal_coeffs(c);
    json res;
    res["t"] = t;
    res["basis"] = "monomial";
    res["reciprocal"] = reciprocal;
    res["coefficients"] = c.coeff;
    (void)common;
    out << res.dump() << '\n';
    return kExitOk;
}

// -------------------------------------------------------------- estimate

struct EstimateArgs {
    std::string input;
    int n = 0;
    int d = 0;
    std::vector<std::string> missing;
    std::vector<std::string> queries;
    int depth = 4;
};

int cmd_estimate(const EstimateArgs& a, std::ostream& out) {
    int n = a.n;
    int d = a.d;
    int depth = a.depth;
    std::vector<EdgeKey> missing;
    std::vector<std::vector<int>> queries;
    if (!a.input.empty()) {
        const json doc = read_json_file(a.input);
        try {
            n = doc.at("n").get<int>();
            d = doc.at("d").get<int>();
            depth = doc.value("depth", depth);
            for (const auto& e : doc.value("missing", json::array()))
                missing.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
            for (const auto& q : doc.value("queries", json::array())) queries.push_back(q.get<std::vector<int>>());
        } catch (const json::exception& e) {
            throw UsageError(std::string("bad estimate config: ") + e.what());
        }
    } else {
        for (const auto& m : a.missing) missing.push_back(parse_edge(m));
        for (const auto& q : a.queries) queries.push_back(parse_ints(q));
    }
    if (n < 2 || d < 1 || d > n - 1) throw UsageError("estimate needs n >= 2 and 1 <= d <= n-1");
    if (depth < 0 || depth > kEstimatorMaxDepth) throw UsageError("depth must be in [0, 12]");
    for (auto e : missing)
        if (e.v >= n || e.u < 0) throw UsageError("missing edge out of range");
    if (queries.empty()) queries.push_back({0, 1});
    for (const auto& q : queries) {
        if (q.size() != 2 && q.size() != 3) throw UsageError("queries are [a,b] or [a,b,c]");
        for (int v : q)
            if (v < 0 || v >= n) throw UsageError("query vertex out of range");
    }

    const DegreeSpec root = DegreeSpec::regular(n, d, missing);
    EstimatePair est = initial_estimates(root, d, depth);
    const int rounds = iterate_until_stable(est);
    std::optional<ExactOracle> oracle;
    if (n <= kOracleMaxVertices) oracle.emplace(n);

    json results = json::array();
    for (const auto& q : queries) {
        json item;
        item["query"] = q;
        item["kind"] = q.size() == 2 ? "P" : "Y";
        const double value = q.size() == 2 ? est.P(root, q[0], q[1]) : est.Y(root, q[0], q[1], q[2]);
        item["estimate"] = number_or_null(value);
        if (oracle) {
            try {
                const Rational exact = q.size() == 2 ? oracle->edge_probability(root, q[0], q[1])
                                                     : oracle->cherry_probability(root, q[0], q[1], q[2]);
                item["oracle"] = to_string(exact);
                const double ex = to_double(exact);
                item["relative_error"] = ex != 0.0 ? number_or_null(std::abs(value / ex - 1.0)) : json(nullptr);
            } catch (const EmptyClassError&) {
                item["oracle"] = nullptr;
            }
        }
        results.push_back(item);
    }
    json doc;
    doc["spec"] = {{"n", n}, {"d", d}, {"missing", edge_list_json(missing)}};
    doc["depth"] = depth;
    doc["rounds"] = rounds;
    doc["results"] = results;
    out << doc.dump() << '\n';
    return kExitOk;
}

// ----------------------------------------------------------------- walks

int cmd_walks(int n, int kmax, const std::string& rule_name, const CommonOptions& common, std::ostream& out) {
    if (n < 2 || kmax < 2) throw UsageError("walks needs n >= 2 and kmax >= 2");
    ReturnRule rule = ReturnRule::first_traversal;
    if (rule_name == "strict")
        rule = ReturnRule::strict_incidence;
    else if (rule_name != "first")
        throw UsageError("--rule is 'first' or 'strict'");
    for (int k = 2; k <= kmax; ++k)
        if (std::pow(static_cast<double>(n), k) > static_cast<double>(kDefaultWalkBudget))
            throw UsageError("n^k exceeds the enumeration budget of 6^8 walks");
    TableWriter w(out, common, {"k", "t", "t2", "m", "b", "r", "count", "bound_log", "worst_ratio"});
    w.comment("n=" + std::to_string(n));
    for (int k = 2; k <= kmax; ++k) {
        const auto classes = count_by_params(n, k, rule);
        double worst = 0.0;
        for (const auto& [p, c] : classes)
            worst = std::max(worst, std::exp(std::log(static_cast<double>(c)) - enumeration_bound(n, p)));
        for (const auto& [p, c] : classes)
            w.row({p.k, p.t, p.t2, p.m, p.b, p.r, c, enumeration_bound(n, p), worst});
    }
    w.finish();
    return kExitOk;
}

// ------------------------------------------------------- spectral family

SamplerOptions sampler_from(const std::string& name) {
    SamplerOptions o;
    try {
        o.method = parse_sampler(name);
    } catch (const PreconditionError& e) {
        throw UsageError(e.what());
    }
    return o;
}

const std::vector<std::string> kSpectralColumns{"n", "d", "k", "seed", "lambda", "ratio", "trace", "bound_log"};

int cmd_spectrum(int n, int d, int k, int samples, const std::string& sampler, const std::string& save_graph,
                 const CommonOptions& common, std::ostream& out) {
    validate_regular(n, d);
    if (k < 0 || k % 2 != 0) throw UsageError("k must be even and nonnegative");
    if (samples < 1) throw UsageError("samples must be positive");
    if (n > 5000) throw UsageError("dense spectra are limited to n <= 5000");
    const SamplerOptions opts = sampler_from(sampler);
    TableWriter w(out, common, kSpectralColumns);
    w.comment("sampler=" + to_string(opts.method) + " base_seed=" + std::to_string(common.seed));
    std::vector<SpectrumResult> results(static_cast<std::size_t>(samples));
    std::vector<SimpleGraph> first(1);
    parallel_for(results.size(), common.jobs, [&](std::size_t i) {
        SimpleGraph g = sample_regular(n, d, derive_seed(common.seed, i), opts);
        results[i] = eigenvalues(g);
        if (i == 0) first[0] = std::move(g);
    });
    const double bound = k > 0 ? aggregate_trace_bound(n, d, k) : std::nan("");
    for (std::size_t i = 0; i < results.size(); ++i) {
        const auto& s = results[i];
        w.row({n, d, k, std::to_string(derive_seed(common.seed, i)), s.lambda, number_or_null(s.ratio),
               shifted_trace_power(s, n, k), number_or_null(bound)});
    }
    w.finish();
    if (!save_graph.empty()) {
        std::ofstream g(save_graph);
        if (!g) throw std::runtime_error("cannot write '" + save_graph + "'");
        write_edge_list(g, first[0]);
    }
    return kExitOk;
}

struct Grid {
    std::vector<int> ns;
    std::vector<int> ds;
    std::vector<int> ks;
    std::vector<std::uint64_t> seeds;
    int samples = 20;
    std::string sampler = "auto";
};

Grid grid_from_json(const json& doc) {
    Grid g;
    try {
        g.ns = doc.at("n").get<std::vector<int>>();
        g.ds = doc.at("d").get<std::vector<int>>();
        g.ks = doc.at("k").get<std::vector<int>>();
        g.seeds = doc.value("seeds", std::vector<std::uint64_t>{});
        g.samples = doc.value("samples", g.samples);
        g.sampler = doc.value("sampler", g.sampler);
    } catch (const json::exception& e) {
        throw UsageError(std::string("bad grid config: ") + e.what());
    }
    return g;
}

void validate_grid(const Grid& g) {
    if (g.ns.empty() || g.ds.empty() || g.ks.empty()) throw UsageError("grid needs nonempty n, d and k lists");
    if (g.samples < 1) throw UsageError("samples must be positive");
    for (int n : g.ns) {
        if (n > 5000) throw UsageError("dense spectra are limited to n <= 5000");
        for (int d : g.ds) validate_regular(n, d);
    }
    for (int k : g.ks)
        if (k < 2 || k % 2 != 0) throw UsageError("trace powers must be even and >= 2");
    sampler_from(g.sampler);
}

int cmd_trace(Grid grid, const CommonOptions& common, std::ostream& out) {
    if (grid.seeds.empty()) grid.seeds.push_back(common.seed);
    validate_grid(grid);
    const SamplerOptions opts = sampler_from(grid.sampler);
    TableWriter w(out, common, kSpectralColumns);
    w.comment("samples=" + std::to_string(grid.samples) + " sampler=" + to_string(opts.method) +
              " lambda, ratio and trace are sample means");
    for (int n : grid.ns)
        for (int d : grid.ds)
            for (std::uint64_t seed : grid.seeds) {
                std::vector<SpectrumResult> spectra(static_cast<std::size_t>(grid.samples));
                parallel_for(spectra.size(), common.jobs, [&](std::size_t i) {
                    spectra[i] = eigenvalues(sample_regular(n, d, derive_seed(seed, i), opts));
                });
                double lambda = 0.0;
                double ratio = 0.0;
                for (const auto& s : spectra) {
                    lambda += s.lambda / grid.samples;
                    ratio += s.ratio / grid.samples;
                }
                for (int k : grid.ks) {
                    double trace = 0.0;
                    for (const auto& s : spectra) trace += shifted_trace_power(s, n, k) / grid.samples;
                    w.row({n, d, k, std::to_string(seed), lambda, number_or_null(ratio), trace,
                           aggregate_trace_bound(n, d, k)});
                }
            }
    w.finish();
    return kExitOk;
}

int cmd_density(int n, int d, int samples, int bins, const std::string& sampler, const CommonOptions& common,
                std::ostream& out) {
    validate_regular(n, d);
    if (d == 0 || d == n - 1) throw UsageError("density needs 0 < d < n-1");
    if (n > 5000) throw UsageError("dense spectra are limited to n <= 5000");
    if (samples < 1 || bins < 1) throw UsageError("samples and bins must be positive");
    const SamplerOptions opts = sampler_from(sampler);
    const DensityReport rep = density_compare(n, d, samples, common.seed, bins, opts, common.jobs);
    TableWriter w(out, common, {"n", "d", "seed", "bin_lo", "bin_hi", "empirical", "semicircle", "mckay"});
    w.comment("eigenvalues=" + std::to_string(rep.eigenvalue_count) + " outside=" + format_number(rep.outside) +
              " tv_semicircle=" + format_number(rep.tv_semicircle) + " tv_mckay=" + format_number(rep.tv_mckay));
    for (std::size_t i = 0; i < rep.empirical.size(); ++i)
        w.row({n, d, std::to_string(common.seed), rep.bin_edges[i], rep.bin_edges[i + 1], rep.empirical[i],
               rep.semicircle[i], rep.mckay[i]});
    w.finish();
    return kExitOk;
}

// ---------------------------------------------------------------- verify

int cmd_verify(const std::string& only, const CommonOptions& common, std::ostream& out) {
    std::vector<int> ids;
    if (!only.empty()) ids = parse_ints(only);
    for (int id : ids)
        if (id < 1 || id > kCriterionCount) throw UsageError("criteria are numbered 1.." + std::to_string(kCriterionCount));
    VerifyOptions vo;
    vo.seed = common.seed;
    vo.jobs = common.jobs;
    bool all = true;
    const auto results = run_criteria(ids, vo, [&](const CriterionResult& r) {
        out << format_result(r) << '\n';
        out.flush();
    });
    for (const auto& r : results) all = all && r.passed;
    out << (all ? "all criteria passed" : "some criteria FAILED") << '\n';
    return all ? kExitOk : kExitFailure;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Second-eigenvalue toolkit for random regular graphs"};
    app.require_subcommand(1);

    CommonOptions common;
    common.jobs = default_jobs();
    std::string format;
    app.add_option("--seed", common.seed, "Base random seed");
    app.add_option("--jobs", common.jobs, "Worker threads (default from RRG_JOBS)")->check(CLI::PositiveNumber);
    app.add_flag("--no-timestamp", common.no_timestamp, "Omit the timestamp header line");
    app.add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("-o,--output", common.output, "Write results to a file instead of stdout");

    OracleArgs oa;
    auto* oracle = app.add_subcommand("oracle", "Exact counts and probabilities for small n");
    oracle->add_option("--n", oa.n)->required();
    oracle->add_option("--d", oa.d)->required();
    oracle->add_option("--missing", oa.missing, "Disallowed pair 'u,v' (repeatable)");
    oracle->add_option("--edge", oa.edge, "Edge probability of 'u,v'");
    oracle->add_option("--cherry", oa.cherry, "Cherry probability of 'a,b,c'");

    std::string fourier_input;
    bool fourier_reciprocal = false;
    auto* fourier = app.add_subcommand("fourier", "Cube coefficients of a tabulated function");
    fourier->add_option("--input", fourier_input, "JSON {t, values[]}")->required();
    fourier->add_flag("--reciprocal", fourier_reciprocal, "Coefficients of 1/f instead of f");

    EstimateArgs ea;
    auto* estimate = app.add_subcommand("estimate", "Iterated P/Y estimates against the oracle");
    estimate->add_option("--input", ea.input, "JSON {n, d, missing, queries, depth}");
    estimate->add_option("--n", ea.n);
    estimate->add_option("--d", ea.d);
    estimate->add_option("--missing", ea.missing);
    estimate->add_option("--query", ea.queries, "'a,b' or 'a,b,c' (repeatable)");
    estimate->add_option("--depth", ea.depth);

    int walks_n = 4;
    int walks_k = 6;
    std::string walks_rule = "first";
    auto* walks = app.add_subcommand("walks", "Closed-walk class counts against the counting bound");
    walks->add_option("--n", walks_n);
    walks->add_option("--kmax", walks_k);
    walks->add_option("--rule", walks_rule, "Return rule: first or strict");

    int sn = 100;
    int sd = 10;
    int sk = 4;
    int ssamples = 1;
    std::string ssampler = "auto";
    std::string save_graph;
    auto* spectrum = app.add_subcommand("spectrum", "Spectra of sampled regular graphs");
    spectrum->add_option("--n", sn);
    spectrum->add_option("--d", sd);
    spectrum->add_option("--k", sk, "Even power for the shifted trace");
    spectrum->add_option("--samples", ssamples);
    spectrum->add_option("--sampler", ssampler, "pairing-rejection, switch-chain or auto");
    spectrum->add_option("--save-graph", save_graph, "Write the first sample as an edge list");

    std::string grid_path;
    Grid flag_grid;
    std::string tn;
    std::string td;
    std::string tk;
    auto* trace = app.add_subcommand("trace-experiment", "Mean shifted traces over a parameter grid");
    trace->add_option("--grid", grid_path, "JSON {n[], d[], k[], seeds[], samples, sampler}");
    trace->add_option("--n", tn, "Comma-separated n values");
    trace->add_option("--d", td, "Comma-separated d values");
    trace->add_option("--k", tk, "Comma-separated even powers");
    trace->add_option("--samples", flag_grid.samples);
    trace->add_option("--sampler", flag_grid.sampler);

    int dn = 500;
    int dd = 10;
    int dsamples = 4;
    int dbins = 60;
    std::string dsampler = "auto";
    auto* density = app.add_subcommand("density", "Histogram of scaled eigenvalues against reference densities");
    density->add_option("--n", dn);
    density->add_option("--d", dd);
    density->add_option("--samples", dsamples);
    density->add_option("--bins", dbins);
    density->add_option("--sampler", dsampler);

    std::string only;
    auto* verify = app.add_subcommand("verify", "Run the acceptance checks and print a pass/fail table");
    verify->add_option("--only", only, "Comma-separated criterion numbers");

    for (auto* sub : app.get_subcommands({})) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitUsage;
    }

    try {
        const bool tabular = !(oracle->parsed() || fourier->parsed() || estimate->parsed() || verify->parsed());
        common.format = format.empty() ? (tabular ? "csv" : "json") : format;
        if (!tabular && !verify->parsed()) require_json(common, "this subcommand");
        Sink sink(common.output, out);
        std::ostream& os = sink.stream();
        if (oracle->parsed()) return cmd_oracle(oa, common, os);
        if (fourier->parsed()) return cmd_fourier(fourier_input, fourier_reciprocal, common, os);
        if (estimate->parsed()) return cmd_estimate(ea, os);
        if (walks->parsed()) return cmd_walks(walks_n, walks_k, walks_rule, common, os);
        if (spectrum->parsed()) return cmd_spectrum(sn, sd, sk, ssamples, ssampler, save_graph, common, os);
        if (trace->parsed()) {
            Grid g = flag_grid;
            if (!grid_path.empty()) {
                g = grid_from_json(read_json_file(grid_path));
            } else {
                if (tn.empty() || td.empty() || tk.empty())
                    throw UsageError("trace-experiment needs --grid or all of --n, --d, --k");
                g.ns = parse_ints(tn);
                g.ds = parse_ints(td);
                g.ks = parse_ints(tk);
            }
            return cmd_trace(g, common, os);
        }
        if (density->parsed()) return cmd_density(dn, dd, dsamples, dbins, dsampler, common, os);
        if (verify->parsed()) return cmd_verify(only, common, os);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const PreconditionError& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitUsage;
}

}  // namespace rrg
