#pragma once

#include <cstddef>
#include <string_view>

#include "imurep/signal.hpp"

namespace imurep {

struct DtwOptions {
    /// Divide the cumulative cost by the number of cells on the optimal path.
    bool normalize = true;
    /// Sakoe-Chiba style radius in samples around the length-scaled diagonal;
    /// 0 disables the constraint.
    std::size_t band = 0;
};

struct DtwResult {
    double cost = 0.0;             // cumulative cost of the optimal path
    std::size_t path_length = 0;   // cells on that path
    double distance = 0.0;         // cost, or cost / path_length when normalized
};

/// Multivariate DTW with Euclidean per-cell cost, boundary alignment and the
/// three unit step moves. Among equal-cost paths the longest one is taken,
/// which keeps the normalized distance well defined and symmetric.
DtwResult dtw(const TriaxialSeries& s, const TriaxialSeries& t, const DtwOptions& options = {});

double dtw_distance(const TriaxialSeries& s, const TriaxialSeries& t,
                    const DtwOptions& options = {});

enum class Axis { X, Y, Z };

std::string_view axis_name(Axis a) noexcept;

struct AxisStats {
    double var_x = 0.0;
    double var_y = 0.0;
    double var_z = 0.0;
    Axis dominant = Axis::X;

    friend bool operator==(const AxisStats&, const AxisStats&) = default;
};

/// Population variance per axis. The dominant axis has the greatest variance;
/// ties go to the earlier axis in X, Y, Z order. Needs at least 2 samples.
AxisStats axis_stats(const TriaxialSeries& series);

/// match_weight when both dominant axes agree, otherwise 1.0.
double weight_for(const AxisStats& segment, const AxisStats& tmpl, double match_weight);

struct ScoreBreakdown {
    double raw_dtw = 0.0;
    double weight = 1.0;
    double weighted = 0.0;
    bool normalized = true;
    /// Set when the segment/template length ratio exceeded the configured
    /// limit; such scores are reported but never win.
    bool length_gated = false;
};

}  // namespace imurep
