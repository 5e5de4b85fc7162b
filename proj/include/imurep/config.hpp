#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "imurep/dtw.hpp"
#include "imurep/segmentation.hpp"

namespace imurep {

enum class BaselineMode { Median, Fixed };

/// Default score threshold for normalized DTW distances. Calibrated on the
/// bundled synthetic sessions as 3x the median weighted self-score of
/// same-pattern segments (see tests/test_calibration.cpp); it is an
/// engineering choice, not a measured human-data value.
inline constexpr double kDefaultThreshold = 0.25;

struct ClassifierOptions {
    double threshold = kDefaultThreshold;
    double match_weight = 0.9;
    DtwOptions dtw{};
    /// Templates whose length differs from the segment's by more than this
    /// factor are scored but cannot win. 0 disables the gate.
    double max_length_ratio = 2.0;
    /// Segments whose summed axis variance (g^2) falls below this are
    /// rejected without a label. 0 disables the gate.
    double min_segment_energy = 0.0;
};

struct PipelineConfig {
    double energy_window_s = 0.5;
    double peak_window_s = 0.25;
    double min_prominence = 0.05;
    BaselineMode baseline_mode = BaselineMode::Median;
    double baseline_value = 1.0;  // used when baseline_mode is Fixed
    ClassifierOptions classifier{};

    SegmenterConfig segmenter(double baseline) const {
        return {energy_window_s, peak_window_s, min_prominence, baseline};
    }
};

/// Validates ranges; throws ConfigError.
void validate(const PipelineConfig& config);

// key=value lines, '#' comments. Keys: energy_window_s, peak_window_s,
// min_prominence, baseline (median | <g>), threshold, match_weight,
// normalize (true|false), dtw_band, max_length_ratio, min_segment_energy.
PipelineConfig parse_config(std::istream& in);
PipelineConfig load_config(const std::filesystem::path& path);
void write_config(const PipelineConfig& config, std::ostream& out);

}  // namespace imurep
