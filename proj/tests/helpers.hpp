#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "imurep/classifier.hpp"
#include "imurep/generator.hpp"
#include "imurep/segmentation.hpp"
#include "imurep/templates.hpp"

namespace testing_support {

inline std::vector<imurep::Segment> segments_of(const std::vector<imurep::SegmenterEvent>& events) {
    std::vector<imurep::Segment> out;
    for (const auto& e : events) {
        if (const auto* s = std::get_if<imurep::Segment>(&e)) out.push_back(*s);
    }
    return out;
}

inline std::vector<imurep::SegmenterEvent> stream_all(const std::vector<imurep::AccelSample>& samples,
                                                      double rate,
                                                      const imurep::SegmenterConfig& config) {
    imurep::StreamSegmenter seg(rate, config);
    std::vector<imurep::SegmenterEvent> out;
    for (const auto& s : samples) {
        auto ev = seg.push(s);
        out.insert(out.end(), ev.begin(), ev.end());
    }
    auto tail = seg.finish();
    out.insert(out.end(), tail.begin(), tail.end());
    return out;
}

inline std::vector<imurep::AccelSample> uniform_samples(const std::vector<imurep::Vec3>& xyz,
                                                        double rate, std::int64_t t0 = 0) {
    std::vector<imurep::AccelSample> out;
    for (std::size_t i = 0; i < xyz.size(); ++i) {
        out.push_back({t0 + std::llround(static_cast<double>(i) * 1000.0 / rate), xyz[i]});
    }
    return out;
}

/// Single-pattern spec at the generator defaults.
inline imurep::GeneratorSpec single_pattern(const imurep::PatternSpec& p, std::uint64_t seed) {
    imurep::GeneratorSpec s;
    s.seed = seed;
    s.patterns = {p};
    return s;
}

/// Enrolls the first segment of a separately seeded recording of each
/// pattern (the base motion for multi-phase patterns) with
/// suppress_trailing = phases - 1.
inline imurep::TemplateStore enroll(const imurep::GeneratorSpec& session, std::uint64_t seed,
                                    const imurep::PipelineConfig& config, int reps = 1) {
    imurep::TemplateStore store;
    for (std::size_t i = 0; i < session.patterns.size(); ++i) {
        auto p = session.patterns[i];
        p.repetitions = reps;
        auto spec = single_pattern(p, seed + i);
        spec.sample_rate_hz = session.sample_rate_hz;
        const auto rec = imurep::generate(spec);
        const auto baseline = imurep::resolve_baseline(rec.samples, config);
        const auto segs = segments_of(
            imurep::segment_batch(rec.samples, rec.sample_rate_hz, config.segmenter(baseline)));
        if (segs.empty()) throw std::runtime_error("enrollment found no segment for " + p.label);
        store.add(imurep::make_template(segs.front(), p.label,
                                        static_cast<int>(p.phases.size()) - 1));
    }
    return store;
}

/// Doubles spread over many magnitudes, including awkward binary fractions.
inline double awkward_double(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> mant(-1.0, 1.0);
    std::uniform_int_distribution<int> expo(-30, 30);
    return std::ldexp(mant(rng), expo(rng));
}

inline imurep::TemplateStore random_store(std::mt19937_64& rng) {
    static const std::string alphabet =
        "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789-_.:+";
    std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
    imurep::TemplateStore store;
    const std::size_t n = rng() % 6;
    for (std::size_t i = 0; i < n; ++i) {
        std::string label = "t" + std::to_string(i);
        for (std::size_t k = rng() % 8; k > 0; --k) label += alphabet[pick(rng)];
        std::vector<imurep::Vec3> v(2 + rng() % 60);
        for (auto& p : v) p = {awkward_double(rng), awkward_double(rng), awkward_double(rng)};
        const double rate = 1.0 + static_cast<double>(rng() % 400) + std::ldexp(1.0, -20);
        imurep::Template t(label, imurep::TriaxialSeries(rate, v), static_cast<int>(rng() % 4));
        if (rng() % 2) t.threshold_override = std::abs(awkward_double(rng));
        if (rng() % 2) t.match_weight_override = 0.5 + std::ldexp(1.0, -3 - static_cast<int>(rng() % 40));
        store.add(std::move(t));
    }
    return store;
}

}  // namespace testing_support
