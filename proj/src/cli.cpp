#include "rwsample/cli.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "rwsample/experiment.hpp"

namespace rwsample {

namespace {

class UsageError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    ExperimentConfig exp;
    std::vector<std::string> samplers;
    std::string weights = "paper";
    std::string format;
    std::string config_path;
};

std::string trim(const std::string &s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        return {};
    }
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

bool given_on_command_line(const std::vector<std::string> &args, const std::string &key) {
    const std::string flag = "--" + key;
    for (const auto &a : args) {
        if (a == flag || a.rfind(flag + "=", 0) == 0) {
            return true;
        }
    }
    return false;
}

/**
 * Expands a flat "key = value" config file into flags. Keys mirror the long
 * flag names; a key may repeat for repeatable flags. Any key given on the
 * command line wins over every file entry for that key.
 */
std::vector<std::string> merge_config_file(std::vector<std::string> args) {
    std::string path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            path = args[i + 1];
        } else if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
        }
    }
    if (path.empty()) {
        return args;
    }
    std::ifstream in(path);
    if (!in) {
        throw std::ios_base::failure("cannot open config file '" + path + "'");
    }
    std::vector<std::string> extra;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        line = trim(line);
        if (line.empty() || line[0] == '#') {
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw UsageError(path + ":" + std::to_string(line_no) + ": expected key = value");
        }
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key == "config" || given_on_command_line(args, key)) {
            continue;
        }
        extra.push_back("--" + key);
        extra.push_back(value);
    }
    args.insert(args.end(), extra.begin(), extra.end());
    return args;
}

void add_common(CLI::App &cmd, Options &o) {
    cmd.add_option("--dataset", o.exp.dataset_path, "edge-list file")->required();
    cmd.add_option("--out", o.exp.output_path, "output file (default: stdout)");
    cmd.add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    cmd.add_option("--config", o.config_path, "flat key = value file mirroring the flags");
}

void add_walk_options(CLI::App &cmd, Options &o) {
    cmd.add_option("--sampler", o.samplers, "srw|rwe|md|gmd|wjrw (repeatable)")
        ->check(CLI::IsMember({"srw", "rwe", "md", "gmd", "wjrw"}));
    cmd.add_option("--c", o.exp.c_values, "degree threshold C (repeatable)");
    cmd.add_option("--c-frac", o.exp.c_fractions, "C as a fraction of d_max (repeatable)");
    cmd.add_option("--alpha", o.exp.alpha, "RWE jump weight (default: average degree)");
}

void add_run_options(CLI::App &cmd, Options &o) {
    add_walk_options(cmd, o);
    cmd.add_option("--budget", o.exp.budgets, "walk length (repeatable)");
    cmd.add_option("--reps", o.exp.repetitions, "repetitions per cell")->capture_default_str();
    cmd.add_option("--seed", o.exp.base_seed, "base seed")->capture_default_str();
    cmd.add_option("--weights", o.weights, "paper or oracle stationary weights")
        ->check(CLI::IsMember({"paper", "oracle"}));
    cmd.add_option("--parallel", o.exp.parallel, "worker threads (0: all cores)");
    cmd.add_option("--burn-in", o.exp.burn_in, "steps discarded before recording");
    cmd.add_flag("--timing", o.exp.timing, "fill wall_millis (output no longer reproducible)");
}

OutputFormat resolve_format(const Options &o, OutputFormat fallback) {
    if (o.format.empty()) {
        return fallback;
    }
    return o.format == "json" ? OutputFormat::json : OutputFormat::csv;
}

void finish_config(Options &o) {
    o.exp.samplers.clear();
    for (const auto &name : o.samplers) {
        o.exp.samplers.push_back(*parse_sampler_kind(name));
    }
    o.exp.weights = o.weights == "oracle" ? WeightMode::oracle : WeightMode::paper;
    o.exp.format = resolve_format(o, OutputFormat::csv);
    try {
        o.exp.validate();
    } catch (const std::invalid_argument &e) {
        throw UsageError(e.what());
    }
}

Dataset open_dataset(const std::string &path) {
    if (!std::filesystem::exists(path)) {
        throw std::ios_base::failure("dataset file not found: '" + path + "'");
    }
    return load_dataset(path);
}

template <class Writer>
void emit(const std::string &path, std::ostream &out, Writer &&write) {
    if (path.empty()) {
        write(out);
        return;
    }
    std::ostringstream buffer;
    write(buffer);
    std::ofstream file(path, std::ios::binary);
    if (!file || !(file << buffer.str())) {
        throw std::ios_base::failure("cannot write output file '" + path + "'");
    }
}

void emit_rows(const Options &o, const std::vector<ReportRow> &rows, std::ostream &out) {
    emit(o.exp.output_path, out, [&](std::ostream &os) {
        if (o.exp.format == OutputFormat::json) {
            write_json(rows, o.exp, os);
        } else {
            write_csv(rows, os);
        }
    });
}

std::vector<WalkConfig> analysis_walks(const Options &o, const Graph &g) {
    if (o.exp.samplers.empty()) {
        throw UsageError("analyze needs at least one --sampler");
    }
    return resolve_walks(o.exp, g);
}

} // namespace

int run_cli(const std::vector<std::string> &raw_args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Random-walk graph sampling toolkit"};
    app.require_subcommand(1);
    Options o;

    auto *stats = app.add_subcommand("stats", "dataset summary (n, m, d_max, TVD, LCC size)");
    add_common(*stats, o);

    auto *run = app.add_subcommand("run", "one sampler, one budget, repeated");
    add_common(*run, o);
    add_run_options(*run, o);

    auto *sweep_b = app.add_subcommand("sweep-budget", "samplers x budgets x repetitions");
    add_common(*sweep_b, o);
    add_run_options(*sweep_b, o);

    auto *sweep_c = app.add_subcommand("sweep-c", "GMD/WJRW over C values or fractions of d_max");
    add_common(*sweep_c, o);
    add_run_options(*sweep_c, o);

    auto *analyze_cmd = app.add_subcommand("analyze", "dense spectrum and stationary diagnostics");
    add_common(*analyze_cmd, o);
    add_walk_options(*analyze_cmd, o);

    try {
        auto args = merge_config_file(raw_args);
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp &) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError &e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }

    try {
        finish_config(o);
        if (stats->parsed()) {
            auto ds = open_dataset(o.exp.dataset_path);
            auto record = dataset_stats(ds);
            emit(o.exp.output_path, out, [&](std::ostream &os) {
                write_stats(record, resolve_format(o, OutputFormat::json), os);
            });
        } else if (run->parsed()) {
            auto ds = open_dataset(o.exp.dataset_path);
            emit_rows(o, run_single(ds, o.exp), out);
        } else if (sweep_b->parsed()) {
            auto ds = open_dataset(o.exp.dataset_path);
            emit_rows(o, sweep_budget(ds, o.exp), out);
        } else if (sweep_c->parsed()) {
            auto ds = open_dataset(o.exp.dataset_path);
            emit_rows(o, sweep_thresholds(ds, o.exp), out);
        } else if (analyze_cmd->parsed()) {
            auto ds = open_dataset(o.exp.dataset_path);
            if (ds.lcc.node_count() > kDenseCap) {
                throw UsageError("analyze builds dense n x n matrices; the largest component has " +
                                 std::to_string(ds.lcc.node_count()) + " nodes (limit " +
                                 std::to_string(kDenseCap) +
                                 "). Use a smaller graph or an induced subgraph.");
            }
            std::vector<Analysis> analyses;
            for (const auto &walk : analysis_walks(o, ds.lcc)) {
                analyses.push_back(analyze(ds.lcc, walk));
            }
            emit(o.exp.output_path, out,
                 [&](std::ostream &os) { write_analyses(ds.name, ds.lcc, analyses, os); });
        }
    } catch (const UsageError &e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::ios_base::failure &e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ParseError &e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const EmptyGraphError &e) {
        err << "error: " << o.exp.dataset_path << ": " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument &e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << '\n';
        return kExitInternal;
    }
    return kExitOk;
}

} // namespace rwsample
