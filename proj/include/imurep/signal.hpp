#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace imurep {

/// Standard gravity, used to convert m/s^2 input to g.
inline constexpr double kStandardGravity = 9.80665;

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    friend bool operator==(const Vec3&, const Vec3&) = default;
};

/// One timestamped accelerometer reading, axes in g.
struct AccelSample {
    std::int64_t t_ms = 0;
    Vec3 accel;

    friend bool operator==(const AccelSample&, const AccelSample&) = default;
};

/// Uniformly sampled 3-axis sequence. Construction validates rate, length and
/// finiteness, so every instance upholds those invariants.
class TriaxialSeries {
public:
    TriaxialSeries(double sample_rate_hz, std::vector<Vec3> samples);

    double sample_rate_hz() const noexcept { return rate_; }
    std::span<const Vec3> samples() const noexcept { return samples_; }
    std::size_t size() const noexcept { return samples_.size(); }
    const Vec3& operator[](std::size_t i) const { return samples_[i]; }

    friend bool operator==(const TriaxialSeries&, const TriaxialSeries&) = default;

private:
    double rate_;
    std::vector<Vec3> samples_;
};

/// Uniformly sampled scalar sequence (norm, energy). May be empty.
struct ScalarSeries {
    double sample_rate_hz = 0.0;
    std::vector<double> values;

    std::size_t size() const noexcept { return values.size(); }
    bool empty() const noexcept { return values.empty(); }
};

double norm(const Vec3& v) noexcept;

/// Per-sample Euclidean norm ("synthetic acceleration").
ScalarSeries synthetic_norm(const TriaxialSeries& series);

/// Converts a window length in seconds to a sample count at `rate_hz`.
/// Rounds half away from zero.
std::size_t window_samples(double window_s, double rate_hz);

/// Centered-window offsets for a window of `w` samples: the window around
/// index i covers [i - left, i + right]. For even w the extra sample is on
/// the right.
struct WindowExtent {
    std::size_t left = 0;
    std::size_t right = 0;
};
WindowExtent centered_extent(std::size_t w) noexcept;

/// Mean of (norm[k] - baseline)^2 over k in [lo, hi]. Shared by the batch and
/// streaming paths so both sum in the same order.
double window_energy(std::span<const double> norm, std::size_t lo, std::size_t hi,
                     double baseline) noexcept;

/// Short-term energy: moving mean of squared baseline-removed deviations
/// over a centered window of round(window_s * rate) samples, clipped at the
/// series edges (divided by the in-window count).
ScalarSeries short_term_energy(const ScalarSeries& norm, double window_s, double baseline);

/// Median of the values; used as the resting-level baseline of a stream.
double estimate_baseline(const ScalarSeries& norm);
double median(std::vector<double> values);

}  // namespace imurep
