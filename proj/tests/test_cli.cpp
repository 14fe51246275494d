#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"

using json = nlohmann::json;

namespace {

struct Run {
    int code = 0;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "rrg");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out;
    std::ostringstream err;
    Run r;
    r.code = rrg::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

std::filesystem::path temp_file(const std::string& name, const std::string& content) {
    const auto path = std::filesystem::temp_directory_path() / ("rrg_cli_test_" + name);
    std::ofstream(path) << content;
    return path;
}

// Non-comment lines.
std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    for (std::string line; std::getline(in, line);)
        if (line.rfind("#", 0) != 0) out.push_back(line);
    return out;
}

}  // namespace

TEST_CASE("oracle subcommand") {
    const Run r = run({"oracle", "--n", "4", "--d", "2", "--edge", "0,1"});
    REQUIRE(r.code == rrg::kExitOk);
    const json doc = json::parse(r.out);
    CHECK(doc["value"] == "2/3");
    CHECK(doc["query"]["kind"] == "edge");

    const Run count = run({"oracle", "--n", "8", "--d", "3"});
    CHECK(json::parse(count.out)["value"] == "19355");

    const Run cherry = run({"oracle", "--n", "4", "--d", "2", "--cherry", "0,1,2"});
    CHECK(json::parse(cherry.out)["value"] == "1/3");

    CHECK(run({"oracle", "--n", "4", "--d", "2", "--format", "csv"}).code == rrg::kExitUsage);
    CHECK(run({"oracle", "--n", "12", "--d", "2"}).code == rrg::kExitUsage);
}

TEST_CASE("fourier subcommand") {
    const auto path = temp_file("fourier.json", R"({"t": 2, "values": [2, 2, 2, 3]})");
    const Run r = run({"fourier", "--input", path.string()});
    REQUIRE(r.code == rrg::kExitOk);
    CHECK(json::parse(r.out)["coefficients"] == json::array({2.0, 0.0, 0.0, 1.0}));

    const Run inv = run({"fourier", "--input", path.string(), "--reciprocal"});
    REQUIRE(inv.code == rrg::kExitOk);
    const auto c = json::parse(inv.out)["coefficients"];
    CHECK(c[0].get<double>() == doctest::Approx(0.5));
    CHECK(c[3].get<double>() == doctest::Approx(1.0 / 3.0 - 0.5));

    const auto bad = temp_file("fourier_bad.json", R"({"t": 2, "values": [1, 2]})");
    CHECK(run({"fourier", "--input", bad.string()}).code == rrg::kExitUsage);
    CHECK(run({"fourier", "--input", "/nonexistent/file.json"}).code == rrg::kExitUsage);
    std::filesystem::remove(path);
    std::filesystem::remove(bad);
}

TEST_CASE("estimate subcommand") {
    const Run r = run({"estimate", "--n", "6", "--d", "2", "--query", "0,1", "--query", "0,1,2"});
    REQUIRE(r.code == rrg::kExitOk);
    const json doc = json::parse(r.out);
    REQUIRE(doc["results"].size() == 2);
    CHECK(doc["results"][0]["oracle"] == "2/5");
    CHECK(doc["results"][0]["estimate"].get<double>() == doctest::Approx(0.4));
    CHECK(doc["results"][1]["relative_error"].get<double>() < 0.2);

    const auto path = temp_file("estimate.json", R"({"n": 6, "d": 2, "missing": [[0, 1]], "queries": [[2, 3]], "depth": 2})");
    const Run f = run({"estimate", "--input", path.string()});
    REQUIRE(f.code == rrg::kExitOk);
    CHECK(json::parse(f.out)["depth"] == 2);
    std::filesystem::remove(path);
}

TEST_CASE("walks subcommand writes csv") {
    const Run r = run({"walks", "--n", "4", "--kmax", "4", "--no-timestamp"});
    REQUIRE(r.code == rrg::kExitOk);
    const auto ls = lines(r.out);
    REQUIRE(ls.size() > 2);
    CHECK(ls[0] == "k,t,t2,m,b,r,count,bound_log,worst_ratio");
    CHECK(ls[1].rfind("2,0,1,0,2,0,12,", 0) == 0);
}

TEST_CASE("timestamp header and reruns") {
    const Run stamped = run({"walks", "--n", "3", "--kmax", "3"});
    CHECK(stamped.out.rfind("# generated ", 0) == 0);

    const std::vector<std::string> args{"spectrum", "--n", "20", "--d", "3", "--samples", "3", "--seed", "5", "--no-timestamp"};
    const Run a = run(args);
    const Run b = run(args);
    REQUIRE(a.code == rrg::kExitOk);
    CHECK(a.out == b.out);
    CHECK(lines(a.out).size() == 4);
    CHECK(lines(a.out)[0] == "n,d,k,seed,lambda,ratio,trace,bound_log");

    const Run json_run = run({"spectrum", "--n", "20", "--d", "3", "--samples", "2", "--format", "json", "--no-timestamp"});
    CHECK(json::parse(json_run.out)["rows"].size() == 2);
}

TEST_CASE("jobs do not change results") {
    const std::vector<std::string> base{"trace-experiment", "--n", "16,20", "--d", "3", "--k", "2,4", "--samples", "4",
                                        "--no-timestamp"};
    auto one = base;
    one.insert(one.end(), {"--jobs", "1"});
    auto two = base;
    two.insert(two.end(), {"--jobs", "2"});
    const Run a = run(one);
    const Run b = run(two);
    REQUIRE(a.code == rrg::kExitOk);
    CHECK(a.out == b.out);
    CHECK(lines(a.out).size() == 5);
}

TEST_CASE("trace experiment from a grid file") {
    const auto path = temp_file("grid.json", R"({"n": [12], "d": [3], "k": [2], "seeds": [1, 2], "samples": 3, "sampler": "pairing"})");
    const Run r = run({"trace-experiment", "--grid", path.string(), "--no-timestamp"});
    REQUIRE(r.code == rrg::kExitOk);
    CHECK(lines(r.out).size() == 3);

    const auto bad = temp_file("grid_bad.json", R"({"n": [12], "d": [3], "k": [3], "seeds": [1], "samples": 3})");
    CHECK(run({"trace-experiment", "--grid", bad.string()}).code == rrg::kExitUsage);
    std::filesystem::remove(path);
    std::filesystem::remove(bad);
}

TEST_CASE("output file and density") {
    const auto path = std::filesystem::temp_directory_path() / "rrg_cli_test_density.csv";
    const Run r = run({"density", "--n", "40", "--d", "4", "--samples", "2", "--bins", "10", "-o", path.string(),
                       "--no-timestamp"});
    REQUIRE(r.code == rrg::kExitOk);
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    const auto ls = lines(ss.str());
    CHECK(ls.size() >= 11);
    std::filesystem::remove(path);
}

TEST_CASE("usage errors exit with code 2") {
    CHECK(run({}).code == rrg::kExitUsage);
    CHECK(run({"bogus"}).code == rrg::kExitUsage);
    CHECK(run({"spectrum", "--n", "7", "--d", "3"}).code == rrg::kExitUsage);
    CHECK(run({"spectrum", "--n", "abc"}).code == rrg::kExitUsage);
    CHECK(run({"walks", "--rule", "sideways"}).code == rrg::kExitUsage);
    CHECK(run({"--jobs", "0", "walks"}).code == rrg::kExitUsage);
    CHECK(run({"verify", "--only", "12"}).code == rrg::kExitUsage);
}

TEST_CASE("verify subcommand runs selected criteria") {
    const Run r = run({"verify", "--only", "2"});
    CHECK(r.code == rrg::kExitOk);
    CHECK(r.out.find("PASS") != std::string::npos);
}
