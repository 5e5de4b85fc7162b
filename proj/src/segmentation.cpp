#include "imurep/segmentation.hpp"

#include <algorithm>
#include <cmath>

#include "imurep/errors.hpp"

namespace imurep {

namespace {

std::int64_t index_to_ms(std::size_t index, double rate_hz) {
    return static_cast<std::int64_t>(std::llround(static_cast<double>(index) * 1000.0 / rate_hz));
}

bool is_gap(std::int64_t prev, std::int64_t cur, double rate_hz) {
    return static_cast<double>(cur - prev) > 2.0 * 1000.0 / rate_hz;
}

void check_order(const std::optional<std::int64_t>& prev, std::int64_t cur) {
    if (cur < 0) {
        throw StreamOrderError(0, "negative timestamp " + std::to_string(cur));
    }
    if (prev && cur <= *prev) {
        throw StreamOrderError(0, "timestamp " + std::to_string(cur) +
                                      " does not increase past " + std::to_string(*prev));
    }
}

Segment make_segment(const Peak& start, const Peak& end, std::vector<Vec3> data, double rate) {
    return Segment{start, end, TriaxialSeries(rate, std::move(data)), end.t_ms - start.t_ms};
}

}  // namespace

std::size_t peak_window_samples(double window_s, double rate_hz) {
    std::size_t w = window_samples(window_s, rate_hz);
    if (w % 2 == 0) ++w;
    if (w < 3) {
        throw InvalidWindowError("peak window must span at least 3 samples");
    }
    return w;
}

bool is_strict_peak(std::span<const double> window, double min_prominence) noexcept {
    const std::size_t c = window.size() / 2;
    const double v = window[c];
    if (!(v >= min_prominence)) return false;
    for (std::size_t k = 0; k < window.size(); ++k) {
        if (k != c && window[k] >= v) return false;
    }
    return true;
}

std::vector<Peak> detect_peaks(const ScalarSeries& energy, double window_s,
                               double min_prominence) {
    if (energy.empty()) {
        throw EmptySeriesError("peak detection on an empty series");
    }
    const std::size_t w = peak_window_samples(window_s, energy.sample_rate_hz);
    const std::size_t h = w / 2;
    std::vector<Peak> peaks;
    const std::span<const double> values(energy.values);
    for (std::size_t i = h; i + h < values.size(); ++i) {
        if (is_strict_peak(values.subspan(i - h, w), min_prominence)) {
            peaks.push_back({i, index_to_ms(i, energy.sample_rate_hz), values[i]});
        }
    }
    return peaks;
}

std::vector<Segment> extract_segments(const TriaxialSeries& raw, std::span<const Peak> peaks) {
    std::vector<Segment> out;
    if (peaks.size() < 2) return out;
    out.reserve(peaks.size() - 1);
    const auto samples = raw.samples();
    for (std::size_t k = 0; k + 1 < peaks.size(); ++k) {
        const Peak& a = peaks[k];
        const Peak& b = peaks[k + 1];
        if (a.index >= b.index || b.index >= raw.size()) {
            throw InputError("peaks must be sorted and index into the raw series");
        }
        out.push_back(make_segment(
            a, b, std::vector<Vec3>(samples.begin() + a.index, samples.begin() + b.index),
            raw.sample_rate_hz()));
    }
    return out;
}

std::vector<SegmenterEvent> segment_batch(std::span<const AccelSample> samples,
                                          double sample_rate_hz,
                                          const SegmenterConfig& config) {
    // Validates windows up front, like the streaming constructor.
    peak_window_samples(config.peak_window_s, sample_rate_hz);
    if (window_samples(config.energy_window_s, sample_rate_hz) == 0) {
        throw InvalidWindowError("energy window rounds to zero samples");
    }

    std::vector<SegmenterEvent> out;
    std::optional<std::int64_t> prev;
    for (const auto& s : samples) {
        check_order(prev, s.t_ms);
        prev = s.t_ms;
    }

    std::size_t begin = 0;
    while (begin < samples.size()) {
        std::size_t end = begin + 1;
        while (end < samples.size() && !is_gap(samples[end - 1].t_ms, samples[end].t_ms,
                                               sample_rate_hz)) {
            ++end;
        }
        const auto piece = samples.subspan(begin, end - begin);
        std::vector<Vec3> xyz;
        xyz.reserve(piece.size());
        for (const auto& s : piece) xyz.push_back(s.accel);
        const TriaxialSeries raw(sample_rate_hz, std::move(xyz));
        const auto energy = short_term_energy(synthetic_norm(raw), config.energy_window_s,
                                              config.baseline);
        auto peaks = detect_peaks(energy, config.peak_window_s, config.min_prominence);
        for (auto& p : peaks) p.t_ms = piece[p.index].t_ms;
        for (auto& seg : extract_segments(raw, peaks)) {
            seg.start.index += begin;
            seg.end.index += begin;
            out.emplace_back(std::move(seg));
        }
        if (end < samples.size()) {
            out.emplace_back(Discontinuity{samples[end].t_ms,
                                           samples[end].t_ms - samples[end - 1].t_ms});
        }
        begin = end;
    }
    return out;
}

StreamSegmenter::StreamSegmenter(double sample_rate_hz, SegmenterConfig config)
    : rate_(sample_rate_hz),
      config_(config),
      energy_ext_(),
      peak_half_(peak_window_samples(config.peak_window_s, sample_rate_hz) / 2) {
    const std::size_t we = window_samples(config_.energy_window_s, rate_);
    if (we == 0) {
        throw InvalidWindowError("energy window rounds to zero samples");
    }
    energy_ext_ = centered_extent(we);
}

std::vector<SegmenterEvent> StreamSegmenter::push(const AccelSample& sample) {
    check_order(last_t_, sample.t_ms);
    std::vector<SegmenterEvent> out;
    if (last_t_ && is_gap(*last_t_, sample.t_ms, rate_)) {
        advance(true, out);
        out.emplace_back(Discontinuity{sample.t_ms, sample.t_ms - *last_t_});
        reset_piece();
    }
    if (!std::isfinite(sample.accel.x) || !std::isfinite(sample.accel.y) ||
        !std::isfinite(sample.accel.z)) {
        throw InputError("non-finite acceleration at t_ms " + std::to_string(sample.t_ms));
    }
    last_t_ = sample.t_ms;
    ++total_;
    raw_.push_back(sample);
    norm_.push_back(norm(sample.accel));
    ++n_;
    advance(false, out);
    trim();
    return out;
}

std::vector<SegmenterEvent> StreamSegmenter::finish() {
    std::vector<SegmenterEvent> out;
    advance(true, out);
    reset_piece();
    return out;
}

void StreamSegmenter::advance(bool final, std::vector<SegmenterEvent>& out) {
    if (n_ == 0) return;
    const std::size_t last = n_ - 1;
    while (next_energy_ < n_ && (final || next_energy_ + energy_ext_.right <= last)) {
        const std::size_t i = next_energy_;
        const std::size_t lo = i >= energy_ext_.left ? i - energy_ext_.left : 0;
        const std::size_t hi = std::min(last, i + energy_ext_.right);
        energy_.push_back(window_energy(std::span<const double>(norm_).subspan(lo - base_),
                                        0, hi - lo, config_.baseline));
        ++next_energy_;
    }

    const std::size_t h = peak_half_;
    const std::size_t w = 2 * h + 1;
    while (next_candidate_ + h < next_energy_) {
        const std::size_t i = next_candidate_++;
        if (i < h) continue;
        const auto window = std::span<const double>(energy_).subspan(i - h - base_, w);
        if (!is_strict_peak(window, config_.min_prominence)) continue;

        const Peak here{i, raw_[i - base_].t_ms, energy_[i - base_]};
        if (last_peak_) {
            std::vector<Vec3> data;
            data.reserve(i - last_peak_->index);
            for (std::size_t k = last_peak_->index; k < i; ++k) {
                data.push_back(raw_[k - base_].accel);
            }
            Peak a = *last_peak_;
            Peak b = here;
            a.index += piece_start_;
            b.index += piece_start_;
            out.emplace_back(make_segment(a, b, std::move(data), rate_));
        }
        last_peak_ = here;
    }
}

void StreamSegmenter::trim() {
    // Oldest piece-local index any future computation can touch.
    std::size_t keep = next_energy_ >= energy_ext_.left ? next_energy_ - energy_ext_.left : 0;
    keep = std::min(keep, next_candidate_ >= peak_half_ ? next_candidate_ - peak_half_ : 0);
    if (last_peak_) keep = std::min(keep, last_peak_->index);
    if (keep <= base_ || keep - base_ < 512) return;
    const std::size_t drop = keep - base_;
    raw_.erase(raw_.begin(), raw_.begin() + static_cast<std::ptrdiff_t>(drop));
    norm_.erase(norm_.begin(), norm_.begin() + static_cast<std::ptrdiff_t>(drop));
    const std::size_t edrop = std::min(drop, energy_.size());
    energy_.erase(energy_.begin(), energy_.begin() + static_cast<std::ptrdiff_t>(edrop));
    base_ = keep;
}

void StreamSegmenter::reset_piece() {
    piece_start_ += n_;
    n_ = 0;
    base_ = 0;
    raw_.clear();
    norm_.clear();
    energy_.clear();
    next_energy_ = 0;
    next_candidate_ = 0;
    last_peak_.reset();
}

}  // namespace imurep
