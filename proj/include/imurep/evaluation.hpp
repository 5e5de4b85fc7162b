#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "imurep/event_log.hpp"

namespace imurep {

/// Truth x predicted counts plus the two error margins: overlooked (a real
/// repetition with no prediction, per truth label) and mistook (a prediction
/// with no real repetition, per predicted label).
class ConfusionMatrix {
public:
    ConfusionMatrix() = default;
    explicit ConfusionMatrix(std::vector<std::string> labels);

    const std::vector<std::string>& labels() const noexcept { return labels_; }
    std::size_t size() const noexcept { return labels_.size(); }
    /// Index of `label`, appending it (and growing the matrix) if new.
    std::size_t ensure_label(const std::string& label);
    std::size_t index_of(const std::string& label) const;

    std::int64_t& cell(std::size_t truth, std::size_t predicted);
    std::int64_t cell(std::size_t truth, std::size_t predicted) const;
    std::int64_t& overlooked(std::size_t truth) { return overlooked_.at(truth); }
    std::int64_t overlooked(std::size_t truth) const { return overlooked_.at(truth); }
    std::int64_t& mistook(std::size_t predicted) { return mistook_.at(predicted); }
    std::int64_t mistook(std::size_t predicted) const { return mistook_.at(predicted); }

    std::int64_t total_cells() const noexcept;
    std::int64_t diagonal() const noexcept;
    std::int64_t total_overlooked() const noexcept;
    std::int64_t total_mistook() const noexcept;

    friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;

private:
    std::vector<std::string> labels_;
    std::vector<std::int64_t> cells_;  // row-major, truth x predicted
    std::vector<std::int64_t> overlooked_;
    std::vector<std::int64_t> mistook_;
};

struct Prf {
    double precision = 1.0;
    double recall = 1.0;
    double f1 = 1.0;
};

/// num/den, with the vacuous 0/0 case defined as 1.0.
double ratio_or_one(std::int64_t num, std::int64_t den) noexcept;
/// Harmonic mean; 0 when both inputs are 0.
double harmonic_mean(double a, double b) noexcept;

/// Every matched segment counts as correctly segmented, whatever its label.
Prf segmentation_metrics(const ConfusionMatrix& cm);

struct LabelMetrics {
    std::string label;
    Prf prf;
};

struct MetricsReport {
    std::vector<LabelMetrics> per_label;
    Prf micro;
    Prf segmentation;
};

MetricsReport classification_metrics(const ConfusionMatrix& cm);

struct TruthInterval {
    std::int64_t start_ms = 0;
    std::int64_t end_ms = 0;
    std::string label;

    friend bool operator==(const TruthInterval&, const TruthInterval&) = default;
};

/// Greedy time-ordered matching of COUNT records against truth repetition
/// intervals. An event falls in the interval containing its t_ms, widened by
/// tolerance_ms at both ends; containment wins over tolerance and each
/// interval takes at most one event. Throws InputError on overlapping or
/// unsorted truth.
ConfusionMatrix match_events(std::span<const EventRecord> predicted,
                             std::span<const TruthInterval> truth, std::int64_t tolerance_ms);

inline constexpr std::int64_t kDefaultToleranceMs = 250;

// "start_ms end_ms label" per line, '#' comments.
std::vector<TruthInterval> read_truth(std::istream& in);
std::vector<TruthInterval> load_truth(const std::filesystem::path& path);
void write_truth(std::span<const TruthInterval> truth, std::ostream& out);

// Matrix file:
//   labels <l1> <l2> ...
//   row <label> <n_1> ... <n_k> <overlooked>     (one per label)
//   mistook <m_1> ... <m_k>
ConfusionMatrix read_matrix(std::istream& in);
ConfusionMatrix load_matrix(const std::filesystem::path& path);
void write_matrix(const ConfusionMatrix& cm, std::ostream& out);

/// Human-readable confusion matrix and metrics table.
void print_report(const ConfusionMatrix& cm, const MetricsReport& report, std::ostream& out);
/// key=value lines, e.g. "micro.f1=0.948896".
void print_key_values(const MetricsReport& report, std::ostream& out);

}  // namespace imurep
