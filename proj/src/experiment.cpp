#include "rwsample/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <mutex>
#include <thread>
#include <tuple>

#include <json.hpp>

namespace rwsample {

std::string_view to_string(WeightMode mode) noexcept {
    return mode == WeightMode::paper ? "paper" : "oracle";
}

void ExperimentConfig::validate() const {
    if (repetitions < 1) {
        throw std::invalid_argument("repetitions must be at least 1");
    }
    for (auto b : budgets) {
        if (b < 1) {
            throw std::invalid_argument("budgets must be at least 1");
        }
    }
    for (auto f : c_fractions) {
        if (!(f > 0.0 && f <= 1.0)) {
            throw std::invalid_argument("C fractions must lie in (0, 1]");
        }
    }
    for (auto c : c_values) {
        if (c < 1) {
            throw std::invalid_argument("C must be at least 1");
        }
    }
    if (alpha && !(*alpha >= 0.0 && std::isfinite(*alpha))) {
        throw std::invalid_argument("alpha must be a finite nonnegative number");
    }
}

Dataset make_dataset(std::string name, Graph full) {
    Dataset ds;
    ds.name = std::move(name);
    ds.lcc = largest_connected_component(full);
    ds.full = std::move(full);
    return ds;
}

Dataset load_dataset(const std::string &path) {
    auto parsed = load_edge_list(path);
    Dataset ds = make_dataset(std::filesystem::path(path).stem().string(), std::move(parsed.graph));
    ds.ingest = parsed.report;
    return ds;
}

StatsRecord dataset_stats(const Dataset &ds) {
    return {ds.name, graph_stats(ds.full), average_degree(ds.full), ds.lcc.node_count(),
            ds.lcc.edge_count()};
}

std::uint64_t default_threshold(const Graph &g) {
    return std::max<std::uint64_t>(1, g.max_degree() / 2);
}

std::uint64_t threshold_from_fraction(const Graph &g, double fraction) {
    auto c = static_cast<std::uint64_t>(std::llround(fraction * static_cast<double>(g.max_degree())));
    return std::max<std::uint64_t>(1, c);
}

namespace {

std::vector<std::uint64_t> requested_thresholds(const ExperimentConfig &config, const Graph &g) {
    std::vector<std::uint64_t> cs = config.c_values;
    for (double f : config.c_fractions) {
        cs.push_back(threshold_from_fraction(g, f));
    }
    return cs;
}

} // namespace

std::vector<WalkConfig> resolve_walks(const ExperimentConfig &config, const Graph &lcc) {
    auto thresholds = requested_thresholds(config, lcc);
    if (thresholds.empty()) {
        thresholds.push_back(default_threshold(lcc));
    }
    std::vector<WalkConfig> walks;
    for (auto kind : config.samplers) {
        switch (kind) {
        case SamplerKind::srw:
            walks.push_back(WalkConfig::srw());
            break;
        case SamplerKind::rwe:
            walks.push_back(WalkConfig::rwe(config.alpha.value_or(average_degree(lcc))));
            break;
        case SamplerKind::md:
            walks.push_back(WalkConfig::md());
            break;
        case SamplerKind::gmd:
        case SamplerKind::wjrw:
            for (auto c : thresholds) {
                walks.push_back(kind == SamplerKind::gmd ? WalkConfig::gmd(c) : WalkConfig::wjrw(c));
            }
            break;
        }
    }
    for (auto &w : walks) {
        w.burn_in = config.burn_in;
    }
    return walks;
}

namespace {

auto row_key(const ReportRow &r) {
    return std::make_tuple(static_cast<int>(r.sampler), r.C.value_or(0), r.alpha.value_or(0.0),
                           r.budget);
}

struct Prepared {
    TransitionModel model;
    std::vector<double> weights;
};

bool same_walk(const WalkConfig &a, const WalkConfig &b) {
    return a.kind == b.kind && a.alpha == b.alpha && a.C == b.C;
}

} // namespace

std::vector<ReportRow> run_cells(const Dataset &ds, const std::vector<Cell> &cells,
                                 const ExperimentConfig &config) {
    config.validate();
    const Graph &g = ds.lcc;
    const Distribution truth = degree_distribution(g);

    // Weights depend on the walk only, so cells differing in budget share them.
    std::vector<Prepared> prepared;
    std::vector<std::size_t> cell_model(cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i) {
        auto found = std::find_if(prepared.begin(), prepared.end(), [&](const Prepared &p) {
            return same_walk(p.model.config(), cells[i].walk);
        });
        if (found == prepared.end()) {
            TransitionModel model(g, cells[i].walk);
            auto weights = config.weights == WeightMode::paper ? stationary_closed_form(model)
                                                               : stationary_numeric(model);
            prepared.push_back({std::move(model), std::move(weights)});
            found = prepared.end() - 1;
        }
        cell_model[i] = static_cast<std::size_t>(found - prepared.begin());
    }

    const std::size_t reps = config.repetitions;
    const std::size_t tasks = cells.size() * reps;
    std::vector<ReportRow> rows(tasks);

    auto run_task = [&](std::size_t task) {
        const std::size_t ci = task / reps;
        const std::size_t rep = task % reps;
        const Cell &cell = cells[ci];
        const Prepared &prep = prepared[cell_model[ci]];

        WalkConfig walk = cell.walk;
        walk.budget = cell.budget;
        walk.seed = derive_seed(config.base_seed, rep);
        TransitionModel model(g, walk);

        auto start = std::chrono::steady_clock::now();
        Trace trace = run_walk(model);
        const auto &pi = prep.weights;
        auto estimate = degree_distribution_estimate(
            trace.nodes, [&pi](NodeId v) { return pi[v]; }, g);
        auto elapsed = std::chrono::steady_clock::now() - start;

        ReportRow &row = rows[task];
        row.dataset = ds.name;
        row.sampler = walk.kind;
        row.C = walk.kind == SamplerKind::md ? std::optional<std::uint64_t>(model.threshold())
                                             : walk.C;
        row.alpha = walk.alpha;
        row.budget = walk.budget;
        row.repetition = rep;
        row.seed = walk.seed;
        row.kl = kl_divergence(truth, estimate);
        row.log10_kl = std::log10(row.kl);
        row.unique_nodes = static_cast<double>(unique_count(trace.nodes));
        if (config.timing) {
            row.wall_millis = std::chrono::duration<double, std::milli>(elapsed).count();
        }
    };

    std::size_t threads = config.parallel == 0 ? std::thread::hardware_concurrency() : config.parallel;
    threads = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(tasks, 1));
    if (threads == 1) {
        for (std::size_t t = 0; t < tasks; ++t) {
            run_task(t);
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::exception_ptr failure;
        std::mutex failure_lock;
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < threads; ++w) {
            pool.emplace_back([&] {
                for (std::size_t t = next++; t < tasks; t = next++) {
                    try {
                        run_task(t);
                    } catch (...) {
                        std::lock_guard lock(failure_lock);
                        if (!failure) {
                            failure = std::current_exception();
                        }
                        next = tasks;
                    }
                }
            });
        }
        pool.clear();
        if (failure) {
            std::rethrow_exception(failure);
        }
    }

    std::stable_sort(rows.begin(), rows.end(), [](const ReportRow &a, const ReportRow &b) {
        return std::make_tuple(row_key(a), *a.repetition) < std::make_tuple(row_key(b), *b.repetition);
    });
    return rows;
}

std::vector<ReportRow> aggregate(const std::vector<ReportRow> &rows) {
    std::vector<ReportRow> out;
    std::size_t i = 0;
    while (i < rows.size()) {
        std::size_t j = i;
        while (j < rows.size() && row_key(rows[j]) == row_key(rows[i])) {
            ++j;
        }
        if (rows[i].is_aggregate()) {
            i = j;
            continue;
        }
        const auto count = static_cast<double>(j - i);
        ReportRow agg;
        agg.dataset = rows[i].dataset;
        agg.sampler = rows[i].sampler;
        agg.C = rows[i].C;
        agg.alpha = rows[i].alpha;
        agg.budget = rows[i].budget;
        agg.count = j - i;
        double kl_sum = 0.0;
        double unique_sum = 0.0;
        double wall_sum = 0.0;
        bool timed = true;
        for (std::size_t k = i; k < j; ++k) {
            kl_sum += rows[k].kl;
            unique_sum += rows[k].unique_nodes;
            timed = timed && rows[k].wall_millis.has_value();
            wall_sum += rows[k].wall_millis.value_or(0.0);
        }
        agg.kl = kl_sum / count;
        agg.unique_nodes = unique_sum / count;
        if (timed) {
            agg.wall_millis = wall_sum / count;
        }
        if (j - i > 1) {
            double kl_ss = 0.0;
            double unique_ss = 0.0;
            for (std::size_t k = i; k < j; ++k) {
                kl_ss += (rows[k].kl - agg.kl) * (rows[k].kl - agg.kl);
                unique_ss += (rows[k].unique_nodes - agg.unique_nodes) *
                             (rows[k].unique_nodes - agg.unique_nodes);
            }
            agg.kl_sd = std::sqrt(kl_ss / (count - 1.0));
            agg.unique_sd = std::sqrt(unique_ss / (count - 1.0));
        }
        agg.log10_kl = std::log10(agg.kl);
        out.push_back(std::move(agg));
        i = j;
    }
    return out;
}

namespace {

void require(bool ok, const char *message) {
    if (!ok) {
        throw std::invalid_argument(message);
    }
}

std::vector<Cell> cross(const std::vector<WalkConfig> &walks, const std::vector<std::uint64_t> &budgets) {
    std::vector<Cell> cells;
    for (const auto &w : walks) {
        for (auto b : budgets) {
            cells.push_back({w, b});
        }
    }
    return cells;
}

} // namespace

std::vector<ReportRow> run_single(const Dataset &ds, const ExperimentConfig &config) {
    require(config.samplers.size() == 1, "run takes exactly one --sampler");
    require(config.budgets.size() == 1, "run takes exactly one --budget");
    require(config.c_values.size() + config.c_fractions.size() <= 1,
            "run takes at most one --c or --c-frac");
    return run_cells(ds, cross(resolve_walks(config, ds.lcc), config.budgets), config);
}

std::vector<ReportRow> sweep_budget(const Dataset &ds, const ExperimentConfig &config) {
    require(!config.samplers.empty(), "sweep-budget needs at least one --sampler");
    require(!config.budgets.empty(), "sweep-budget needs at least one --budget");
    auto rows = run_cells(ds, cross(resolve_walks(config, ds.lcc), config.budgets), config);
    auto agg = aggregate(rows);
    rows.insert(rows.end(), agg.begin(), agg.end());
    return rows;
}

std::vector<ReportRow> sweep_thresholds(const Dataset &ds, const ExperimentConfig &config) {
    ExperimentConfig effective = config;
    if (effective.samplers.empty()) {
        effective.samplers = {SamplerKind::gmd, SamplerKind::wjrw};
    }
    for (auto kind : effective.samplers) {
        require(kind == SamplerKind::gmd || kind == SamplerKind::wjrw,
                "sweep-c only accepts the gmd and wjrw samplers");
    }
    require(!effective.c_fractions.empty() || !effective.c_values.empty(),
            "sweep-c needs at least one --c-frac or --c");
    require(!effective.budgets.empty(), "sweep-c needs at least one --budget");
    auto rows = run_cells(ds, cross(resolve_walks(effective, ds.lcc), effective.budgets), effective);
    auto agg = aggregate(rows);
    rows.insert(rows.end(), agg.begin(), agg.end());
    return rows;
}

std::string format_real(double x) {
    if (std::isinf(x)) {
        return x > 0 ? "inf" : "-inf";
    }
    if (std::isnan(x)) {
        return "nan";
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

void write_csv(const std::vector<ReportRow> &rows, std::ostream &out) {
    out << kCsvHeader << '\n';
    for (const auto &r : rows) {
        out << r.dataset << ',' << to_string(r.sampler) << ',';
        if (r.C) {
            out << *r.C;
        }
        out << ',';
        if (r.alpha) {
            out << format_real(*r.alpha);
        }
        out << ',' << r.budget << ',';
        if (r.repetition) {
            out << *r.repetition;
        } else {
            out << "mean";
        }
        out << ',';
        if (r.seed) {
            out << *r.seed;
        }
        out << ',' << format_real(r.kl) << ',' << format_real(r.log10_kl) << ','
            << format_real(r.unique_nodes) << ',';
        if (r.wall_millis) {
            out << format_real(*r.wall_millis);
        }
        out << '\n';
    }
}

namespace {

nlohmann::json optional_json(const auto &value) {
    return value ? nlohmann::json(*value) : nlohmann::json(nullptr);
}

nlohmann::json real_json(double x) {
    return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(format_real(x));
}

} // namespace

void write_json(const std::vector<ReportRow> &rows, const ExperimentConfig &config,
                std::ostream &out) {
    nlohmann::json doc;
    doc["rng"] = std::string(kRngName);
    doc["weights"] = std::string(to_string(config.weights));
    doc["base_seed"] = config.base_seed;
    doc["repetitions"] = config.repetitions;
    doc["burn_in"] = config.burn_in;
    auto &raw = doc["rows"] = nlohmann::json::array();
    auto &agg = doc["aggregates"] = nlohmann::json::array();
    for (const auto &r : rows) {
        nlohmann::json j;
        j["dataset"] = r.dataset;
        j["sampler"] = std::string(to_string(r.sampler));
        j["C"] = optional_json(r.C);
        j["alpha"] = optional_json(r.alpha);
        j["budget"] = r.budget;
        if (r.is_aggregate()) {
            j["count"] = r.count;
            j["mean_kl"] = real_json(r.kl);
            j["sd_kl"] = real_json(r.kl_sd);
            j["log10_mean_kl"] = real_json(r.log10_kl);
            j["mean_unique_nodes"] = real_json(r.unique_nodes);
            j["sd_unique_nodes"] = real_json(r.unique_sd);
            j["mean_wall_millis"] = optional_json(r.wall_millis);
            agg.push_back(std::move(j));
        } else {
            j["repetition"] = *r.repetition;
            j["seed"] = optional_json(r.seed);
            j["kl"] = real_json(r.kl);
            j["log10_kl"] = real_json(r.log10_kl);
            j["unique_nodes"] = static_cast<std::uint64_t>(r.unique_nodes);
            j["wall_millis"] = optional_json(r.wall_millis);
            raw.push_back(std::move(j));
        }
    }
    out << doc.dump(2) << '\n';
}

void write_stats(const StatsRecord &s, OutputFormat format, std::ostream &out) {
    if (format == OutputFormat::csv) {
        out << "dataset,n,m,d_max,avg_degree,tvd_srw_vs_uniform,lcc_n,lcc_m\n"
            << s.dataset << ',' << s.full.nodes << ',' << s.full.edges << ',' << s.full.max_degree
            << ',' << format_real(s.average_degree) << ',' << format_real(s.full.tvd_srw_vs_uniform)
            << ',' << s.lcc_nodes << ',' << s.lcc_edges << '\n';
        return;
    }
    nlohmann::json j;
    j["dataset"] = s.dataset;
    j["n"] = s.full.nodes;
    j["m"] = s.full.edges;
    j["d_max"] = s.full.max_degree;
    j["avg_degree"] = s.average_degree;
    j["tvd_srw_vs_uniform"] = s.full.tvd_srw_vs_uniform;
    j["lcc_n"] = s.lcc_nodes;
    j["lcc_m"] = s.lcc_edges;
    out << j.dump(2) << '\n';
}

Analysis analyze(const Graph &g, const WalkConfig &walk, std::size_t cap) {
    Analysis a;
    a.walk = walk;
    auto matrix = dense_transition_matrix(g, walk, cap);
    TransitionModel model(g, walk);
    a.bound_threshold = model.threshold();
    a.spectrum = spectrum(matrix);
    a.closed_form = stationary_closed_form(model);
    a.numeric = stationary_numeric(model);
    a.stationary_gap = 2.0 * tvd(a.closed_form, a.numeric);
    a.expected_repeat = expected_repeat_probability(model, a.numeric);
    a.residual_closed_form = reversibility_residual(matrix, a.closed_form);
    a.residual_numeric = reversibility_residual(matrix, a.numeric);
    return a;
}

void write_analyses(const std::string &dataset, const Graph &g,
                    const std::vector<Analysis> &analyses, std::ostream &out) {
    nlohmann::json doc;
    doc["dataset"] = dataset;
    doc["n"] = g.node_count();
    doc["m"] = g.edge_count();
    std::vector<ExternalId> labels(g.labels().begin(), g.labels().end());
    doc["node_labels"] = labels;
    auto &list = doc["analyses"] = nlohmann::json::array();
    for (const auto &a : analyses) {
        nlohmann::json j;
        j["sampler"] = std::string(to_string(a.walk.kind));
        j["C"] = a.walk.kind == SamplerKind::md ? nlohmann::json(a.bound_threshold)
                                                : optional_json(a.walk.C);
        j["alpha"] = optional_json(a.walk.alpha);
        auto &eig = j["eigenvalues"] = nlohmann::json::array();
        for (const auto &z : a.spectrum.eigenvalues) {
            eig.push_back({z.real(), z.imag()});
        }
        j["mu"] = a.spectrum.mu;
        j["slem"] = a.spectrum.slem;
        j["is_real_spectrum"] = a.spectrum.is_real_spectrum;
        j["stationary_closed_form"] = a.closed_form;
        j["stationary_numeric"] = a.numeric;
        j["stationary_l1_gap"] = a.stationary_gap;
        j["expected_repeat_probability"] = a.expected_repeat;
        j["reversibility_residual_closed_form"] = a.residual_closed_form;
        j["reversibility_residual_numeric"] = a.residual_numeric;
        list.push_back(std::move(j));
    }
    out << doc.dump(2) << '\n';
}

} // namespace rwsample
