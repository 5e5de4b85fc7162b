#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "imurep/signal.hpp"

namespace imurep {

struct Peak {
    std::size_t index = 0;  // stream-global sample index
    std::int64_t t_ms = 0;
    double energy = 0.0;

    friend bool operator==(const Peak&, const Peak&) = default;
};

/// Raw samples in [start.index, end.index): the start peak sample is
/// included, the end peak sample belongs to the next segment.
struct Segment {
    Peak start;
    Peak end;
    TriaxialSeries data;
    std::int64_t duration_ms = 0;

    std::int64_t mid_ms() const noexcept { return start.t_ms + duration_ms / 2; }

    friend bool operator==(const Segment&, const Segment&) = default;
};

struct SegmenterConfig {
    double energy_window_s = 0.5;
    double peak_window_s = 0.25;
    double min_prominence = 0.05;  // g^2
    double baseline = 1.0;         // g, subtracted from the norm before squaring
};

/// Peak window length in samples: round(window_s * rate), bumped to the next
/// odd count. Throws InvalidWindowError when the result is below 3.
std::size_t peak_window_samples(double window_s, double rate_hz);

/// True when the center of `window` (odd length) is its strict maximum and
/// reaches `min_prominence`. Ties with any other in-window value reject.
bool is_strict_peak(std::span<const double> window, double min_prominence) noexcept;

/// Every index whose centered window of peak_window_samples() lies fully in
/// the series and whose value is the window's strict maximum. Peak
/// timestamps are derived from the index and the series rate.
std::vector<Peak> detect_peaks(const ScalarSeries& energy, double window_s,
                               double min_prominence);

/// One segment per consecutive peak pair. Peak indices address `raw`.
std::vector<Segment> extract_segments(const TriaxialSeries& raw, std::span<const Peak> peaks);

/// Emitted when consecutive timestamps are more than two sample periods apart.
struct Discontinuity {
    std::int64_t t_ms = 0;    // first sample after the gap
    std::int64_t gap_ms = 0;

    friend bool operator==(const Discontinuity&, const Discontinuity&) = default;
};

using SegmenterEvent = std::variant<Segment, Discontinuity>;

/// Reference batch path over a timestamped stream: splits at gaps, then runs
/// norm, energy, detect_peaks and extract_segments per contiguous piece.
std::vector<SegmenterEvent> segment_batch(std::span<const AccelSample> samples,
                                          double sample_rate_hz,
                                          const SegmenterConfig& config);

/// Incremental segmenter. A segment is emitted once its closing peak is
/// confirmed, i.e. peak_window/2 samples after the peak plus the right half
/// of the energy window. finish() flushes the tail with edge-clipped
/// windows, so push()+finish() over a stream reproduces segment_batch()
/// exactly.
class StreamSegmenter {
public:
    StreamSegmenter(double sample_rate_hz, SegmenterConfig config);

    std::vector<SegmenterEvent> push(const AccelSample& sample);
    std::vector<SegmenterEvent> finish();

    double sample_rate_hz() const noexcept { return rate_; }
    const SegmenterConfig& config() const noexcept { return config_; }
    /// Samples processed since construction.
    std::size_t sample_count() const noexcept { return total_; }

private:
    void advance(bool final, std::vector<SegmenterEvent>& out);
    void trim();
    void reset_piece();

    double rate_;
    SegmenterConfig config_;
    WindowExtent energy_ext_;
    std::size_t peak_half_;

    std::optional<std::int64_t> last_t_;
    std::size_t total_ = 0;

    // Current contiguous piece. Buffers hold piece-local indices
    // [base_, n_); everything before base_ has been trimmed.
    std::size_t piece_start_ = 0;
    std::size_t n_ = 0;
    std::size_t base_ = 0;
    std::vector<AccelSample> raw_;
    std::vector<double> norm_;
    std::vector<double> energy_;
    std::size_t next_energy_ = 0;
    std::size_t next_candidate_ = 0;
    std::optional<Peak> last_peak_;  // piece-local index
};

}  // namespace imurep
