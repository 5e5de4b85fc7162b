#include "imurep/signal.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "imurep/errors.hpp"

namespace imurep {

namespace {

bool finite(const Vec3& v) noexcept {
    return std::isfinite(v.x) && std::isfinite(v.y) && std::isfinite(v.z);
}

}  // namespace

TriaxialSeries::TriaxialSeries(double sample_rate_hz, std::vector<Vec3> samples)
    : rate_(sample_rate_hz), samples_(std::move(samples)) {
    if (!(rate_ > 0.0) || !std::isfinite(rate_)) {
        throw InputError("sample rate must be a positive finite number");
    }
    if (samples_.empty()) {
        throw EmptySeriesError("triaxial series must hold at least one sample");
    }
    for (std::size_t i = 0; i < samples_.size(); ++i) {
        if (!finite(samples_[i])) {
            throw InputError("non-finite acceleration at sample " + std::to_string(i));
        }
    }
}

double norm(const Vec3& v) noexcept {
    return std::sqrt(v.x * v.x + v.y * v.y + v.z * v.z);
}

ScalarSeries synthetic_norm(const TriaxialSeries& series) {
    ScalarSeries out{series.sample_rate_hz(), {}};
    out.values.reserve(series.size());
    for (const auto& s : series.samples()) {
        out.values.push_back(norm(s));
    }
    return out;
}

std::size_t window_samples(double window_s, double rate_hz) {
    if (!(window_s > 0.0) || !(rate_hz > 0.0)) {
        throw InvalidWindowError("window length and sample rate must be positive");
    }
    const double w = std::round(window_s * rate_hz);
    return static_cast<std::size_t>(w);
}

WindowExtent centered_extent(std::size_t w) noexcept {
    if (w == 0) return {};
    return {(w - 1) / 2, w / 2};
}

double window_energy(std::span<const double> norm, std::size_t lo, std::size_t hi,
                     double baseline) noexcept {
    double sum = 0.0;
    for (std::size_t k = lo; k <= hi; ++k) {
        const double d = norm[k] - baseline;
        sum += d * d;
    }
    return sum / static_cast<double>(hi - lo + 1);
}

ScalarSeries short_term_energy(const ScalarSeries& norm, double window_s, double baseline) {
    if (norm.empty()) {
        throw EmptySeriesError("short-term energy of an empty series");
    }
    const std::size_t w = window_samples(window_s, norm.sample_rate_hz);
    if (w == 0) {
        throw InvalidWindowError("energy window rounds to zero samples");
    }
    const auto ext = centered_extent(w);
    const std::size_t n = norm.size();
    ScalarSeries out{norm.sample_rate_hz, std::vector<double>(n)};
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t lo = i >= ext.left ? i - ext.left : 0;
        const std::size_t hi = std::min(n - 1, i + ext.right);
        out.values[i] = window_energy(norm.values, lo, hi, baseline);
    }
    return out;
}

double median(std::vector<double> values) {
    if (values.empty()) {
        throw EmptySeriesError("median of an empty series");
    }
    const std::size_t mid = values.size() / 2;
    std::nth_element(values.begin(), values.begin() + mid, values.end());
    const double upper = values[mid];
    if (values.size() % 2 == 1) return upper;
    const double lower = *std::max_element(values.begin(), values.begin() + mid);
    return 0.5 * (lower + upper);
}

double estimate_baseline(const ScalarSeries& norm) {
    return median(norm.values);
}

}  // namespace imurep
