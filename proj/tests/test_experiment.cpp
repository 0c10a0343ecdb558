#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

#include "rwsample/cli.hpp"
#include "rwsample/experiment.hpp"
#include "support.hpp"

using namespace rwsample;

namespace {

namespace fs = std::filesystem;

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("rwsample_test_" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string &name, const std::string &content) const {
        auto p = path / name;
        std::ofstream(p) << content;
        return p.string();
    }
};

struct CliResult {
    int code;
    std::string out;
    std::string err;
};

CliResult cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string &text) {
    std::vector<std::string> v;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) {
        v.push_back(l);
    }
    return v;
}

std::string graph_text(const Graph &g) {
    std::ostringstream out;
    write_edge_list(g, out);
    return out.str();
}

const char *kFiveNode = "# five-node example\n1 2\n1 3\n1 4\n1 5\n2 4\n3 4\n3 5\n";

} // namespace

TEST_CASE("stats command") {
    TempDir dir;
    auto path = dir.file("five.txt", kFiveNode);
    auto r = cli({"stats", "--dataset", path});
    REQUIRE(r.code == kExitOk);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["n"] == 5);
    CHECK(j["m"] == 7);
    CHECK(j["d_max"] == 4);
    CHECK(j["avg_degree"].get<double>() == doctest::Approx(2.8));
    CHECK(j["tvd_srw_vs_uniform"].get<double>() == doctest::Approx(4.0 / 35).epsilon(1e-12));
    CHECK(j["lcc_n"] == 5);
    CHECK(j["lcc_m"] == 7);

    auto csv = cli({"stats", "--dataset", path, "--format", "csv"});
    REQUIRE(csv.code == kExitOk);
    CHECK(lines(csv.out).at(1) == "five,5,7,4,2.8,0.114285714286,5,7");
}

TEST_CASE("stats on a disconnected graph reports the full graph and the LCC") {
    TempDir dir;
    auto path = dir.file("two.txt", "1 2\n2 3\n3 1\n3 4\n10 11\n");
    auto j = nlohmann::json::parse(cli({"stats", "--dataset", path}).out);
    CHECK(j["n"] == 6);
    CHECK(j["m"] == 5);
    CHECK(j["lcc_n"] == 4);
    CHECK(j["lcc_m"] == 4);
}

TEST_CASE("I/O and usage errors exit with code 2") {
    TempDir dir;
    auto missing = (dir.path / "nope.txt").string();
    auto r = cli({"stats", "--dataset", missing});
    CHECK(r.code == kExitUsage);
    CHECK(r.err.find(missing) != std::string::npos);

    auto bad = dir.file("bad.txt", "1 2\n3 x\n");
    r = cli({"stats", "--dataset", bad});
    CHECK(r.code == kExitUsage);
    CHECK(r.err.find("line 2") != std::string::npos);

    auto good = dir.file("five.txt", kFiveNode);
    CHECK(cli({"run", "--dataset", good, "--sampler", "srw"}).code == kExitUsage);        // no budget
    CHECK(cli({"run", "--dataset", good, "--sampler", "bogus", "--budget", "5"}).code == kExitUsage);
    CHECK(cli({"sweep-c", "--dataset", good, "--sampler", "srw", "--c-frac", "0.5", "--budget", "10"}).code ==
          kExitUsage);
    CHECK(cli({"sweep-c", "--dataset", good, "--c-frac", "1.5", "--budget", "10"}).code == kExitUsage);
    CHECK(cli({"frobnicate"}).code == kExitUsage);
    CHECK(cli({}).code == kExitUsage);
}

TEST_CASE("run command rows") {
    TempDir dir;
    auto path = dir.file("five.txt", kFiveNode);
    auto r = cli({"run", "--dataset", path, "--sampler", "wjrw", "--c", "3", "--budget", "50",
                  "--reps", "3", "--seed", "11", "--parallel", "2"});
    REQUIRE(r.code == kExitOk);
    auto ls = lines(r.out);
    REQUIRE(ls.size() == 4);
    CHECK(ls[0] == kCsvHeader);
    std::set<std::string> seeds;
    for (std::size_t i = 1; i < ls.size(); ++i) {
        std::vector<std::string> f;
        std::stringstream ss(ls[i]);
        for (std::string cell; std::getline(ss, cell, ',');) {
            f.push_back(cell);
        }
        if (ls[i].back() == ',') {
            f.push_back("");
        }
        REQUIRE(f.size() == 11);
        CHECK(f[0] == "five");
        CHECK(f[1] == "wjrw");
        CHECK(f[2] == "3");
        CHECK(f[3].empty());
        CHECK(f[4] == "50");
        CHECK(f[5] == std::to_string(i - 1));
        CHECK(f[6] == std::to_string(derive_seed(11, i - 1)));
        CHECK(std::stod(f[7]) >= 0.0);
        CHECK(std::stod(f[9]) <= 5);
        CHECK(f[10].empty());
        seeds.insert(f[6]);
    }
    CHECK(seeds.size() == 3);
}

TEST_CASE("rerun and parallelism give byte-identical output") {
    TempDir dir;
    std::mt19937_64 rng(8);
    auto path = dir.file("g.txt", graph_text(rwsample::testing::random_connected_graph(40, 0.1, rng)));
    for (const auto &cmd : {std::vector<std::string>{"sweep-budget", "--sampler", "srw", "--sampler", "rwe",
                                                     "--sampler", "gmd", "--sampler", "wjrw", "--budget",
                                                     "100", "--budget", "300"},
                            std::vector<std::string>{"sweep-c", "--c-frac", "0.2", "--c-frac", "0.6",
                                                     "--c-frac", "1.0", "--budget", "200"}}) {
        auto with = [&](std::string parallel, std::string format) {
            auto args = cmd;
            for (std::string a : {"--dataset", path.c_str(), "--reps", "7", "--seed", "5", "--parallel"}) {
                args.push_back(a);
            }
            args.push_back(parallel);
            args.push_back("--format");
            args.push_back(format);
            auto r = cli(args);
            REQUIRE(r.code == kExitOk);
            return r.out;
        };
        for (std::string format : {"csv", "json"}) {
            auto seq = with("1", format);
            CHECK(seq == with("1", format));
            CHECK(seq == with("4", format));
            CHECK(seq == with("0", format));
        }
    }
}

TEST_CASE("sweep-budget row arithmetic and aggregates") {
    std::mt19937_64 rng(9);
    auto ds = make_dataset("g", rwsample::testing::random_connected_graph(30, 0.15, rng));
    ExperimentConfig cfg;
    cfg.samplers = {SamplerKind::srw, SamplerKind::rwe, SamplerKind::gmd, SamplerKind::wjrw};
    cfg.budgets = {100, 200, 300, 400, 500};
    cfg.repetitions = 10;
    cfg.parallel = 2;
    auto rows = sweep_budget(ds, cfg);
    REQUIRE(rows.size() == 4 * 5 * 10 + 4 * 5);
    std::size_t raw = 4 * 5 * 10;
    for (std::size_t a = raw; a < rows.size(); ++a) {
        const auto &agg = rows[a];
        CHECK(agg.is_aggregate());
        double sum = 0.0;
        std::vector<double> kls;
        for (std::size_t i = 0; i < raw; ++i) {
            if (rows[i].sampler == agg.sampler && rows[i].budget == agg.budget) {
                kls.push_back(rows[i].kl);
                sum += rows[i].kl;
            }
        }
        REQUIRE(kls.size() == 10);
        double mean = sum / 10.0;
        CHECK(std::abs(agg.kl - mean) <= 1e-12 * std::max(1.0, mean));
        double ss = 0.0;
        for (double k : kls) {
            ss += (k - mean) * (k - mean);
        }
        CHECK(agg.kl_sd == doctest::Approx(std::sqrt(ss / 9.0)).epsilon(1e-10));
        CHECK(agg.log10_kl == doctest::Approx(std::log10(agg.kl)));
    }
    // Raw rows sorted by (sampler, C, alpha, budget, repetition).
    for (std::size_t i = 1; i < raw; ++i) {
        auto key = [](const ReportRow &r) {
            return std::make_tuple(int(r.sampler), r.C.value_or(0), r.alpha.value_or(0.0), r.budget,
                                   *r.repetition);
        };
        CHECK(key(rows[i - 1]) < key(rows[i]));
    }
    // Default parameters: C = floor(d_max/2), alpha = average degree of the LCC.
    for (const auto &r : rows) {
        if (r.sampler == SamplerKind::gmd || r.sampler == SamplerKind::wjrw) {
            CHECK(*r.C == ds.lcc.max_degree() / 2);
        }
        if (r.sampler == SamplerKind::rwe) {
            CHECK(*r.alpha == doctest::Approx(average_degree(ds.lcc)));
        }
        if (!r.is_aggregate()) {
            CHECK(r.unique_nodes <= static_cast<double>(r.budget));
            CHECK(r.kl >= 0.0);
        }
    }
}

TEST_CASE("sweep-c resolves fractions and binds GMD at 1.0 to MD") {
    std::mt19937_64 rng(10);
    auto ds = make_dataset("g", rwsample::testing::random_connected_graph(30, 0.2, rng));
    ExperimentConfig cfg;
    cfg.c_fractions = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
    cfg.budgets = {100};
    cfg.repetitions = 4;
    auto rows = sweep_thresholds(ds, cfg);
    CHECK(rows.size() == 2 * 10 * 4 + 2 * 10);
    const auto dmax = ds.lcc.max_degree();
    for (const auto &r : rows) {
        CHECK((r.sampler == SamplerKind::gmd || r.sampler == SamplerKind::wjrw));
    }
    CHECK(threshold_from_fraction(ds.lcc, 1.0) == dmax);
    CHECK(threshold_from_fraction(ds.lcc, 0.01) == 1);
    for (NodeId v = 0; v < ds.lcc.node_count(); ++v) {
        CHECK(transition_row(ds.lcc, WalkConfig::gmd(threshold_from_fraction(ds.lcc, 1.0)), v) ==
              transition_row(ds.lcc, WalkConfig::md(), v));
    }
}

TEST_CASE("oracle weights mode runs") {
    std::mt19937_64 rng(12);
    auto ds = make_dataset("g", rwsample::testing::random_connected_graph(20, 0.2, rng));
    ExperimentConfig cfg;
    cfg.samplers = {SamplerKind::wjrw};
    cfg.budgets = {200};
    cfg.repetitions = 3;
    cfg.weights = WeightMode::oracle;
    auto oracle = run_single(ds, cfg);
    cfg.weights = WeightMode::paper;
    auto paper = run_single(ds, cfg);
    REQUIRE(oracle.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(oracle[i].unique_nodes == paper[i].unique_nodes); // same walk, different weights
    }
}

TEST_CASE("config file supplies flags and the command line overrides it") {
    TempDir dir;
    auto data = dir.file("five.txt", kFiveNode);
    auto conf = dir.file("exp.conf", "# experiment\ndataset = " + data +
                                         "\nsampler = srw\nsampler = wjrw\nc = 3\nbudget = 40\nreps = 2\nseed = 4\n");
    auto r = cli({"sweep-budget", "--config", conf});
    REQUIRE(r.code == kExitOk);
    CHECK(lines(r.out).size() == 1 + 2 * 2 + 2);

    auto over = cli({"sweep-budget", "--config", conf, "--reps", "3", "--sampler", "gmd"});
    REQUIRE(over.code == kExitOk);
    auto ls = lines(over.out);
    CHECK(ls.size() == 1 + 3 + 1);
    CHECK(ls[1].find(",gmd,3,") != std::string::npos);

    auto explicit_flags = cli({"sweep-budget", "--dataset", data, "--sampler", "gmd", "--c", "3", "--budget",
                               "40", "--reps", "3", "--seed", "4"});
    CHECK(explicit_flags.out == over.out);
}

TEST_CASE("--out writes the file") {
    TempDir dir;
    auto data = dir.file("five.txt", kFiveNode);
    auto out = (dir.path / "rows.csv").string();
    auto r = cli({"run", "--dataset", data, "--sampler", "srw", "--budget", "20", "--reps", "2", "--out", out});
    REQUIRE(r.code == kExitOk);
    CHECK(r.out.empty());
    std::ifstream in(out);
    std::string header;
    std::getline(in, header);
    CHECK(header == kCsvHeader);
}

TEST_CASE("timing flag fills wall_millis") {
    TempDir dir;
    auto data = dir.file("five.txt", kFiveNode);
    auto r = cli({"run", "--dataset", data, "--sampler", "srw", "--budget", "20", "--reps", "1", "--timing"});
    REQUIRE(r.code == kExitOk);
    CHECK(lines(r.out).at(1).back() != ',');
}

TEST_CASE("analyze command") {
    TempDir dir;
    auto data = dir.file("five.txt", kFiveNode);
    auto r = cli({"analyze", "--dataset", data, "--sampler", "wjrw", "--sampler", "srw", "--sampler", "gmd",
                  "--c", "3"});
    REQUIRE(r.code == kExitOk);
    auto j = nlohmann::json::parse(r.out);
    auto &a = j["analyses"];
    REQUIRE(a.size() == 3);
    // Analyses follow the order of the --sampler flags.
    CHECK(a[0]["sampler"] == "wjrw");
    CHECK(a[0]["mu"].get<double>() == doctest::Approx((std::sqrt(5.0) - 1) / 6).epsilon(1e-9));
    CHECK(a[0]["eigenvalues"].size() == 5);
    CHECK(a[0]["eigenvalues"][0].size() == 2);
    CHECK(a[0]["expected_repeat_probability"].get<double>() == doctest::Approx(1.0 / 16).epsilon(1e-10));
    CHECK(a[1]["sampler"] == "srw");
    CHECK(a[1]["mu"].get<double>() == doctest::Approx((std::sqrt(7.0) - 1) / 6).epsilon(1e-9));
    CHECK(a[1]["reversibility_residual_closed_form"].get<double>() < 1e-14);
    CHECK(a[2]["sampler"] == "gmd");
    CHECK(a[2]["mu"].get<double>() == doctest::Approx(std::sqrt(2.0) / 3).epsilon(1e-9));

    auto path = dir.file("path.txt", "1 2\n2 3\n");
    auto p = nlohmann::json::parse(cli({"analyze", "--dataset", path, "--sampler", "wjrw", "--c", "3"}).out);
    double gap = std::abs(8.0 / 27 - 4.0 / 13) * 2 + std::abs(11.0 / 27 - 5.0 / 13);
    CHECK(p["analyses"][0]["stationary_l1_gap"].get<double>() == doctest::Approx(gap).epsilon(1e-9));
    CHECK(p["analyses"][0]["stationary_l1_gap"].get<double>() == doctest::Approx(16.0 / 351).epsilon(1e-9));
    CHECK(p["analyses"][0]["is_real_spectrum"].is_boolean());

    CHECK(cli({"analyze", "--dataset", data}).code == kExitUsage);
}

TEST_CASE("analyze refuses graphs over the dense cap") {
    TempDir dir;
    std::ostringstream text;
    for (int i = 0; i < 4200; ++i) {
        text << i << ' ' << i + 1 << '\n';
    }
    auto data = dir.file("long.txt", text.str());
    auto r = cli({"analyze", "--dataset", data, "--sampler", "srw"});
    CHECK(r.code == kExitUsage);
    CHECK(r.err.find("4096") != std::string::npos);
}

TEST_CASE("format_real uses 12 significant digits") {
    CHECK(format_real(1.0 / 3) == "0.333333333333");
    CHECK(format_real(2.8) == "2.8");
    CHECK(format_real(-std::numeric_limits<double>::infinity()) == "-inf");
}
