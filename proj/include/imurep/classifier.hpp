#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "imurep/config.hpp"
#include "imurep/templates.hpp"

namespace imurep {

enum class RejectReason {
    None,
    AboveThreshold,  // best admissible score exceeds the effective threshold
    Tie,             // two templates share the minimum weighted score
    TooShort,        // fewer than 2 samples, variance undefined
    LengthGate,      // no template within max_length_ratio
    LowEnergy,       // below min_segment_energy
};

std::string_view reason_name(RejectReason r) noexcept;

struct Classification {
    Segment segment;
    std::optional<std::string> label;  // empty means REJECTED
    std::map<std::string, ScoreBreakdown> scores;
    bool suppressed = false;
    RejectReason reason = RejectReason::None;
    std::optional<double> best_score;       // minimum admissible weighted score
    std::optional<double> runner_up_score;  // second smallest

    bool rejected() const noexcept { return !label.has_value(); }
};

/// Scores the segment against every template and picks the strict minimum
/// weighted DTW score, subject to the effective threshold (the winning
/// template's override, else options.threshold). Throws ConfigError on an
/// empty store.
Classification classify_segment(const Segment& segment, const TemplateStore& store,
                                const ClassifierOptions& options);

struct CountEvent {
    std::string label;
    int count = 0;
    std::int64_t t_ms = 0;  // segment midpoint
    std::int64_t start_ms = 0;
    std::int64_t end_ms = 0;

    friend bool operator==(const CountEvent&, const CountEvent&) = default;
};

struct CountState {
    std::map<std::string, int> counts;
    int pending_suppression = 0;
    std::optional<std::string> last_label;
};

/// Applies one classification in time order. While suppression is pending
/// the classification is marked suppressed and nothing is counted;
/// otherwise a label increments its counter and arms suppression with that
/// template's suppress_trailing.
std::optional<CountEvent> update_counts(Classification& c, CountState& state,
                                        const TemplateStore& store);

struct SegmentDetected {
    Segment segment;
};
struct Classified {
    Classification classification;
};
struct CountSummary {
    std::string label;
    int count = 0;
    std::int64_t t_ms = 0;
};

using PipelineEvent =
    std::variant<SegmentDetected, Classified, CountEvent, Discontinuity, CountSummary>;

/// Single-threaded runtime state machine: segmenter, classifier, counter.
class Pipeline {
public:
    Pipeline(const TemplateStore& store, double sample_rate_hz, const PipelineConfig& config,
             double baseline);

    void push(const AccelSample& sample, std::vector<PipelineEvent>& out);
    /// Flushes the segmenter and appends one CountSummary per template label
    /// (nothing when no sample was ever pushed).
    void finish(std::vector<PipelineEvent>& out);

    const CountState& state() const noexcept { return state_; }

private:
    void handle(std::vector<SegmenterEvent>&& events, std::vector<PipelineEvent>& out);

    const TemplateStore& store_;
    PipelineConfig config_;
    StreamSegmenter segmenter_;
    CountState state_;
    std::optional<std::int64_t> last_t_;
};

/// Baseline the pipeline subtracts for a recorded stream: the median norm
/// in Median mode, the configured value otherwise.
double resolve_baseline(std::span<const AccelSample> samples, const PipelineConfig& config);

/// Batch convenience over a recorded stream.
std::vector<PipelineEvent> run_pipeline(std::span<const AccelSample> samples,
                                        double sample_rate_hz, const TemplateStore& store,
                                        const PipelineConfig& config);

}  // namespace imurep
