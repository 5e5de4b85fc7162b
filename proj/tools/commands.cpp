#include "commands.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <thread>

#include <CLI11.hpp>

#include "imurep/classifier.hpp"
#include "imurep/errors.hpp"
#include "imurep/evaluation.hpp"
#include "imurep/event_log.hpp"
#include "imurep/generator.hpp"
#include "imurep/ingest.hpp"
#include "imurep/templates.hpp"

namespace imurep::cli {

namespace {

namespace fs = std::filesystem;

PipelineConfig config_or_default(const std::string& path) {
    return path.empty() ? PipelineConfig{} : load_config(path);
}

std::ofstream open_out(const std::string& path) {
    std::ofstream f(path);
    if (!f) throw InputError("cannot open '" + path + "' for writing");
    return f;
}

void record_template(const std::string& in, const std::string& label, int suppress,
                     std::optional<std::size_t> pick, const std::string& out_path,
                     const std::string& config_path, std::ostream& out) {
    validate_label(label);
    const auto config = config_or_default(config_path);
    const Recording rec = load_csv(in);
    const double baseline = resolve_baseline(rec.samples, config);
    std::vector<Segment> candidates;
    for (auto& ev : segment_batch(rec.samples, rec.header.sample_rate_hz,
                                  config.segmenter(baseline))) {
        if (auto* s = std::get_if<Segment>(&ev)) candidates.push_back(std::move(*s));
    }
    if (candidates.empty()) {
        throw InputError("no motion segment found in '" + in + "'");
    }
    out << candidates.size() << " candidate segments:";
    for (const auto& s : candidates) out << ' ' << s.duration_ms << "ms";
    out << '\n';

    std::size_t chosen = 0;
    if (pick) {
        if (*pick >= candidates.size()) {
            throw InputError("--pick " + std::to_string(*pick) + " out of range (" +
                             std::to_string(candidates.size()) + " candidates)");
        }
        chosen = *pick;
    } else {
        // Median duration; ties keep time order.
        std::vector<std::size_t> order(candidates.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return candidates[a].duration_ms < candidates[b].duration_ms;
        });
        chosen = order[(order.size() - 1) / 2];
    }

    TemplateStore store;
    if (fs::exists(out_path)) store = load_templates(fs::path(out_path));
    store.add(make_template(candidates[chosen], label, suppress));
    const fs::path tmp = out_path + ".tmp";
    save_templates(store, tmp);
    fs::rename(tmp, out_path);
    out << "enrolled '" << label << "' from candidate " << chosen << " ("
        << candidates[chosen].duration_ms << "ms, " << candidates[chosen].data.size()
        << " samples) into " << out_path << '\n';
}

void run_command(const std::string& in, const std::string& templates_path,
                 const std::string& config_path, bool paced, const std::string& out_path,
                 std::ostream& out) {
    const auto config = config_or_default(config_path);
    const TemplateStore store = load_templates(fs::path(templates_path));
    const Recording rec = load_csv(in);
    Pipeline pipeline(store, rec.header.sample_rate_hz, config,
                      resolve_baseline(rec.samples, config));

    std::ofstream file;
    std::ostream* sink = &out;
    if (out_path != "-") {
        file = open_out(out_path);
        sink = &file;
    }
    write_event_log_header(*sink);
    std::vector<PipelineEvent> events;
    auto emit = [&] {
        for (const auto& e : events) *sink << format_record(to_record(e)) << '\n';
        if (paced && !events.empty()) sink->flush();
        events.clear();
    };

    const auto start = std::chrono::steady_clock::now();
    const std::int64_t t0 = rec.samples.empty() ? 0 : rec.samples.front().t_ms;
    for (const auto& s : rec.samples) {
        if (paced) {
            std::this_thread::sleep_until(start + std::chrono::milliseconds(s.t_ms - t0));
        }
        pipeline.push(s, events);
        emit();
    }
    pipeline.finish(events);
    emit();
    if (!*sink) throw InputError("failed writing event log");
}

void evaluate_command(const std::string& events_path, const std::string& truth_path,
                      std::int64_t tolerance_ms, std::ostream& out) {
    std::ifstream ev(events_path);
    if (!ev) throw InputError("cannot open event log '" + events_path + "'");
    const auto records = read_event_log(ev);
    const auto truth = load_truth(truth_path);
    const auto cm = match_events(records, truth, tolerance_ms);
    const auto report = classification_metrics(cm);
    print_report(cm, report, out);
    out << '\n';
    print_key_values(report, out);
}

void generate_command(const std::string& spec_path, const std::string& out_path,
                      const std::string& truth_path) {
    const auto session = generate(load_generator_spec(spec_path));
    save_csv(session.sample_rate_hz, session.samples, out_path);
    auto truth_out = open_out(truth_path);
    write_truth(session.truth, truth_out);
}

void metrics_oracle_command(const std::string& matrix_path, std::ostream& out) {
    const auto cm = load_matrix(matrix_path);
    const auto report = classification_metrics(cm);
    print_report(cm, report, out);
    out << '\n';
    print_key_values(report, out);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Segment, classify and count exercise repetitions in IMU streams"};
    app.require_subcommand(1);

    std::string in, label, out_path, templates, config, events, truth, spec, truth_out, matrix;
    int suppress = 0;
    std::optional<std::size_t> pick;
    bool paced = false;
    std::int64_t tolerance = kDefaultToleranceMs;

    auto* rec = app.add_subcommand("record-template", "Enroll one segment of a recording as a template");
    rec->add_option("--in", in, "Input CSV stream")->required();
    rec->add_option("--label", label, "Exercise label")->required();
    rec->add_option("--suppress", suppress, "Segments to skip after each match")
        ->check(CLI::NonNegativeNumber);
    rec->add_option("--pick", pick, "Candidate index (default: median duration)");
    rec->add_option("--out", out_path, "Template file to append to")->required();
    rec->add_option("--config", config, "Pipeline config file");

    auto* run_cmd = app.add_subcommand("run", "Run the full pipeline over a recording");
    run_cmd->add_option("--in", in, "Input CSV stream")->required();
    run_cmd->add_option("--templates", templates, "Template file")->required();
    run_cmd->add_option("--config", config, "Pipeline config file");
    run_cmd->add_flag("--paced", paced, "Replay at the sensor rate");
    run_cmd->add_option("--out", out_path, "Event log ('-' for stdout)")->required();

    auto* eval = app.add_subcommand("evaluate", "Score an event log against truth intervals");
    eval->add_option("--events", events, "Event log")->required();
    eval->add_option("--truth", truth, "Truth interval file")->required();
    eval->add_option("--tolerance-ms", tolerance, "Boundary tolerance")->check(CLI::NonNegativeNumber);

    auto* gen = app.add_subcommand("generate", "Write a synthetic session and its truth");
    gen->add_option("--spec", spec, "Generator spec (JSON)")->required();
    gen->add_option("--out", out_path, "Output CSV")->required();
    gen->add_option("--truth-out", truth_out, "Output truth intervals")->required();

    auto* oracle = app.add_subcommand("metrics-oracle", "Print metrics for a confusion matrix file");
    oracle->add_option("--matrix", matrix, "Confusion matrix file")->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return 0;
        }
        err << "error: " << e.what() << '\n';
        return e.get_exit_code() ? e.get_exit_code() : 2;
    }

    try {
        if (*rec) {
            record_template(in, label, suppress, pick, out_path, config, out);
        } else if (*run_cmd) {
            run_command(in, templates, config, paced, out_path, out);
        } else if (*eval) {
            evaluate_command(events, truth, tolerance, out);
        } else if (*gen) {
            generate_command(spec, out_path, truth_out);
        } else if (*oracle) {
            metrics_oracle_command(matrix, out);
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

}  // namespace imurep::cli
