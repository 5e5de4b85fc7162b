#include "imurep/classifier.hpp"

#include <algorithm>
#include <cmath>

#include "imurep/errors.hpp"

namespace imurep {

std::string_view reason_name(RejectReason r) noexcept {
    switch (r) {
        case RejectReason::None: return "none";
        case RejectReason::AboveThreshold: return "above-threshold";
        case RejectReason::Tie: return "tie";
        case RejectReason::TooShort: return "too-short";
        case RejectReason::LengthGate: return "length-gate";
        case RejectReason::LowEnergy: return "low-energy";
    }
    return "unknown";
}

Classification classify_segment(const Segment& segment, const TemplateStore& store,
                                const ClassifierOptions& options) {
    if (store.empty()) {
        throw ConfigError("cannot classify against an empty template store");
    }
    Classification c{segment, std::nullopt, {}, false, RejectReason::None, {}, {}};

    const bool has_variance = segment.data.size() >= 2;
    std::optional<AxisStats> seg_stats;
    if (has_variance) seg_stats = axis_stats(segment.data);

    struct Candidate {
        const Template* tmpl;
        double score;
    };
    std::vector<Candidate> admissible;
    for (const auto& t : store) {
        ScoreBreakdown b;
        b.normalized = options.dtw.normalize;
        b.raw_dtw = dtw_distance(segment.data, t.data, options.dtw);
        if (seg_stats) {
            b.weight = weight_for(*seg_stats, t.stats,
                                  t.match_weight_override.value_or(options.match_weight));
        }
        b.weighted = b.raw_dtw * b.weight;
        if (options.max_length_ratio > 0.0) {
            const double a = static_cast<double>(segment.data.size());
            const double l = static_cast<double>(t.data.size());
            b.length_gated = std::max(a, l) / std::min(a, l) > options.max_length_ratio;
        }
        if (!b.length_gated) admissible.push_back({&t, b.weighted});
        c.scores.emplace(t.label, b);
    }

    if (!has_variance) {
        c.reason = RejectReason::TooShort;
        return c;
    }
    if (options.min_segment_energy > 0.0 &&
        seg_stats->var_x + seg_stats->var_y + seg_stats->var_z < options.min_segment_energy) {
        c.reason = RejectReason::LowEnergy;
        return c;
    }
    if (admissible.empty()) {
        c.reason = RejectReason::LengthGate;
        return c;
    }

    std::stable_sort(admissible.begin(), admissible.end(),
                     [](const Candidate& a, const Candidate& b) { return a.score < b.score; });
    c.best_score = admissible[0].score;
    if (admissible.size() > 1) c.runner_up_score = admissible[1].score;

    if (admissible.size() > 1 && admissible[0].score == admissible[1].score) {
        c.reason = RejectReason::Tie;
        return c;
    }
    const Template& winner = *admissible[0].tmpl;
    const double threshold = winner.threshold_override.value_or(options.threshold);
    if (admissible[0].score > threshold) {
        c.reason = RejectReason::AboveThreshold;
        return c;
    }
    c.label = winner.label;
    return c;
}

std::optional<CountEvent> update_counts(Classification& c, CountState& state,
                                        const TemplateStore& store) {
    if (state.pending_suppression > 0) {
        --state.pending_suppression;
        c.suppressed = true;
        return std::nullopt;
    }
    if (!c.label) return std::nullopt;

    const std::string& label = *c.label;
    const int count = ++state.counts[label];
    const Template* t = store.find(label);
    state.pending_suppression = t ? t->suppress_trailing : 0;
    state.last_label = label;
    return CountEvent{label, count, c.segment.mid_ms(), c.segment.start.t_ms,
                      c.segment.end.t_ms};
}

Pipeline::Pipeline(const TemplateStore& store, double sample_rate_hz,
                   const PipelineConfig& config, double baseline)
    : store_(store), config_(config), segmenter_(sample_rate_hz, config.segmenter(baseline)) {
    validate(config_);
    if (store_.empty()) {
        throw ConfigError("the pipeline needs at least one template");
    }
    for (const auto& t : store_) state_.counts.emplace(t.label, 0);
}

void Pipeline::push(const AccelSample& sample, std::vector<PipelineEvent>& out) {
    auto events = segmenter_.push(sample);
    last_t_ = sample.t_ms;
    handle(std::move(events), out);
}

void Pipeline::finish(std::vector<PipelineEvent>& out) {
    handle(segmenter_.finish(), out);
    if (!last_t_) return;
    for (const auto& t : store_) {
        out.emplace_back(CountSummary{t.label, state_.counts[t.label], *last_t_});
    }
}

void Pipeline::handle(std::vector<SegmenterEvent>&& events, std::vector<PipelineEvent>& out) {
    for (auto& ev : events) {
        if (auto* gap = std::get_if<Discontinuity>(&ev)) {
            // A reset mid-motion must not swallow the next exercise's first rep.
            state_.pending_suppression = 0;
            out.emplace_back(*gap);
            continue;
        }
        auto& segment = std::get<Segment>(ev);
        out.emplace_back(SegmentDetected{segment});
        Classification c = classify_segment(segment, store_, config_.classifier);
        auto counted = update_counts(c, state_, store_);
        out.emplace_back(Classified{std::move(c)});
        if (counted) out.emplace_back(std::move(*counted));
    }
}

double resolve_baseline(std::span<const AccelSample> samples, const PipelineConfig& config) {
    if (config.baseline_mode == BaselineMode::Fixed || samples.empty()) {
        return config.baseline_value;
    }
    std::vector<double> norms;
    norms.reserve(samples.size());
    for (const auto& s : samples) norms.push_back(norm(s.accel));
    return median(std::move(norms));
}

std::vector<PipelineEvent> run_pipeline(std::span<const AccelSample> samples,
                                        double sample_rate_hz, const TemplateStore& store,
                                        const PipelineConfig& config) {
    Pipeline pipeline(store, sample_rate_hz, config, resolve_baseline(samples, config));
    std::vector<PipelineEvent> out;
    for (const auto& s : samples) pipeline.push(s, out);
    pipeline.finish(out);
    return out;
}

}  // namespace imurep
