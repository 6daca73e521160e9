// Command line front end: one subcommand per pipeline stage plus run-all.
// Exit codes: 0 success, 1 validation error, 2 stage failure, 3 I/O failure.

#include <cstdio>
#include <exception>
#include <functional>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "disana/errors.hpp"
#include "disana/io.hpp"
#include "disana/report.hpp"

using namespace disana;

namespace {

struct CliOverrides {
    std::string config_path;
    std::optional<std::string> corpus;
    std::optional<std::string> out_dir;
    std::optional<std::string> query;
    std::optional<std::string> lang;
    std::optional<std::string> window_begin;
    std::optional<std::string> window_end;
    std::optional<double> peak_multiplier;
    std::optional<double> penalty;
    std::optional<double> alpha;
    std::optional<unsigned> seed;
};

void add_common_options(CLI::App* cmd, CliOverrides& opts) {
    cmd->add_option("-c,--config", opts.config_path, "run configuration file (JSON)")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--corpus", opts.corpus, "override the corpus path");
    cmd->add_option("--out", opts.out_dir, "override the output directory");
    cmd->add_option("--query", opts.query, "override the query keyword");
    cmd->add_option("--lang", opts.lang, "override the language tag");
    cmd->add_option("--begin", opts.window_begin, "override the window begin (ISO-8601)");
    cmd->add_option("--end", opts.window_end, "override the window end (ISO-8601)");
    cmd->add_option("--peak-multiplier", opts.peak_multiplier, "override the peak multiplier");
    cmd->add_option("--penalty", opts.penalty, "override the change point penalty");
    cmd->add_option("--alpha", opts.alpha, "override the trend significance level");
    cmd->add_option("--seed", opts.seed, "override the random seed");
}

report::RunConfig build_config(const CliOverrides& opts) {
    auto config = report::RunConfig::load(opts.config_path);
    if (opts.corpus) config.corpus_path = *opts.corpus;
    if (opts.out_dir) config.out_dir = *opts.out_dir;
    if (opts.query) config.query = *opts.query;
    if (opts.lang) config.lang = *opts.lang;
    if (opts.window_begin) {
        const auto ts = parse_timestamp(*opts.window_begin);
        if (!ts) throw ValidationError("--begin is not an ISO-8601 timestamp");
        config.window.begin = *ts;
    }
    if (opts.window_end) {
        const auto ts = parse_timestamp(*opts.window_end);
        if (!ts) throw ValidationError("--end is not an ISO-8601 timestamp");
        config.window.end = *ts;
    }
    if (opts.peak_multiplier) config.peak_multiplier = *opts.peak_multiplier;
    if (opts.penalty) config.changepoint_penalty = *opts.penalty;
    if (opts.alpha) config.alpha = *opts.alpha;
    if (opts.seed) {
        config.random_seed = *opts.seed;
        config.topic_config.random_seed = *opts.seed;
    }
    return config;
}

int run_command(const std::string& name, const CliOverrides& opts) {
    try {
        auto config = build_config(opts);
        config.validate();
        if (name == "run-all") {
            report::run(config);
            io::log_line("cli", "run complete", {{"out", config.out_dir}});
            return 0;
        }
        const std::map<std::string, std::function<void(const report::RunConfig&)>> stages{
            {"expand", report::stage_expand},       {"filter", report::stage_filter},
            {"sentiment", report::stage_sentiment}, {"topics", report::stage_topics},
            {"analyze", report::stage_analytics},   {"report", report::stage_report},
        };
        try {
            stages.at(name)(config);
        } catch (const IoError&) {
            throw;
        } catch (const std::exception& e) {
            throw StageError(name, e.what());
        }
        return 0;
    } catch (const ValidationError& e) {
        std::fprintf(stderr, "validation error: %s\n", e.what());
        return 1;
    } catch (const IoError& e) {
        std::fprintf(stderr, "I/O error: %s\n", e.what());
        return 3;
    } catch (const StageError& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"disana: discourse relevance, sentiment, topic and trend analytics"};
    app.require_subcommand(1);

    const std::pair<const char*, const char*> commands[] = {
        {"expand", "build the seed list by embedding-filtered query expansion"},
        {"filter", "select relevant documents using the cached seed list"},
        {"sentiment", "score documents and write the daily metric series"},
        {"topics", "cluster documents into topics and map themes"},
        {"analyze", "detect trends, peaks and change points; align with events"},
        {"report", "render plots and the run summary from cached stages"},
        {"run-all", "execute every stage in order"},
    };

    std::map<std::string, CliOverrides> options;
    for (const auto& [name, help] : commands) {
        auto* cmd = app.add_subcommand(name, help);
        add_common_options(cmd, options[name]);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1; // bad flags and missing files are validation errors
    }

    for (const auto& [name, help] : commands) {
        if (app.got_subcommand(name)) return run_command(name, options.at(name));
    }
    return 1;
}
