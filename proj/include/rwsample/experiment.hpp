#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "rwsample/estimation.hpp"
#include "rwsample/graph.hpp"
#include "rwsample/spectral.hpp"
#include "rwsample/walk.hpp"

namespace rwsample {

enum class WeightMode { paper, oracle };
enum class OutputFormat { csv, json };

std::string_view to_string(WeightMode mode) noexcept;

struct ExperimentConfig {
    std::string dataset_path;
    std::vector<SamplerKind> samplers;
    std::vector<std::uint64_t> budgets;
    std::vector<std::uint64_t> c_values;
    std::vector<double> c_fractions;
    std::optional<double> alpha;
    std::size_t repetitions = 100;
    std::uint64_t base_seed = 0;
    std::string output_path;
    OutputFormat format = OutputFormat::csv;
    WeightMode weights = WeightMode::paper;
    std::size_t parallel = 0; // 0: hardware concurrency
    std::uint64_t burn_in = 0;
    bool timing = false;      // wall_millis is left empty otherwise, keeping output reproducible

    void validate() const;
};

/**
 * One observation, or an aggregate over repetitions when `repetition` is
 * empty. Aggregates carry the mean in kl/unique_nodes and the sample
 * standard deviation in the *_sd fields.
 */
struct ReportRow {
    std::string dataset;
    SamplerKind sampler = SamplerKind::srw;
    std::optional<std::uint64_t> C;
    std::optional<double> alpha;
    std::uint64_t budget = 0;
    std::optional<std::size_t> repetition;
    std::optional<std::uint64_t> seed;
    double kl = 0.0;
    double log10_kl = 0.0;
    double unique_nodes = 0.0;
    std::optional<double> wall_millis;

    std::size_t count = 1;
    double kl_sd = 0.0;
    double unique_sd = 0.0;

    bool is_aggregate() const noexcept { return !repetition.has_value(); }
};

struct Dataset {
    std::string name;
    Graph full;
    Graph lcc;
    IngestReport ingest;
};

/// Loads an edge list; the name is the file stem.
Dataset load_dataset(const std::string &path);
Dataset make_dataset(std::string name, Graph full);

struct StatsRecord {
    std::string dataset;
    GraphStats full;
    double average_degree = 0.0;
    std::size_t lcc_nodes = 0;
    std::size_t lcc_edges = 0;
};

StatsRecord dataset_stats(const Dataset &ds);

/// A resolved walk (C and alpha bound) paired with a budget.
struct Cell {
    WalkConfig walk;
    std::uint64_t budget = 1;
};

/// Default C for cross-sampler comparisons: floor(d_max / 2), at least 1.
std::uint64_t default_threshold(const Graph &g);
/// C = max(1, round(fraction * d_max)).
std::uint64_t threshold_from_fraction(const Graph &g, double fraction);

/// Binds C and alpha of every sampler in the config against the dataset's LCC.
std::vector<WalkConfig> resolve_walks(const ExperimentConfig &config, const Graph &lcc);

/**
 * Runs every cell `repetitions` times. Repetition r of every cell uses
 * derive_seed(base_seed, r). Rows come back sorted by
 * (sampler, C, alpha, budget, repetition) regardless of thread count.
 */
std::vector<ReportRow> run_cells(const Dataset &ds, const std::vector<Cell> &cells,
                                 const ExperimentConfig &config);

/// Mean and sample standard deviation per (sampler, C, alpha, budget), in row order.
std::vector<ReportRow> aggregate(const std::vector<ReportRow> &rows);

std::vector<ReportRow> run_single(const Dataset &ds, const ExperimentConfig &config);
/// Raw rows followed by one aggregate row per (sampler, parameter, budget).
std::vector<ReportRow> sweep_budget(const Dataset &ds, const ExperimentConfig &config);
std::vector<ReportRow> sweep_thresholds(const Dataset &ds, const ExperimentConfig &config);

inline constexpr std::string_view kCsvHeader =
    "dataset,sampler,C,alpha,budget,repetition,seed,kl,log10_kl,unique_nodes,wall_millis";

/// Fixed-precision float text (12 significant digits).
std::string format_real(double x);

void write_csv(const std::vector<ReportRow> &rows, std::ostream &out);
void write_json(const std::vector<ReportRow> &rows, const ExperimentConfig &config,
                std::ostream &out);

void write_stats(const StatsRecord &stats, OutputFormat format, std::ostream &out);

struct Analysis {
    WalkConfig walk;
    std::uint64_t bound_threshold = 0;
    SpectrumReport spectrum;
    std::vector<double> closed_form;
    std::vector<double> numeric;
    double stationary_gap = 0.0; // l1 distance closed form vs numeric
    double expected_repeat = 0.0;
    double residual_closed_form = 0.0;
    double residual_numeric = 0.0;
};

Analysis analyze(const Graph &g, const WalkConfig &walk, std::size_t cap = kDenseCap);
void write_analyses(const std::string &dataset, const Graph &g,
                    const std::vector<Analysis> &analyses, std::ostream &out);

} // namespace rwsample
