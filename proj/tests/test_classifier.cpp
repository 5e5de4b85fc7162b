#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "helpers.hpp"
#include "imurep/classifier.hpp"
#include "imurep/errors.hpp"
#include "imurep/generator.hpp"

using namespace imurep;
using namespace testing_support;

namespace {

Segment segment_from(std::vector<Vec3> v, std::int64_t t0 = 0) {
    const TriaxialSeries data(50, v);
    const std::int64_t end = t0 + static_cast<std::int64_t>(v.size()) * 20;
    return Segment{{0, t0}, {v.size(), end}, data, end - t0};
}

/// Half-sine burst of the given amplitude on top of gravity.
std::vector<Vec3> burst(const Vec3& amp, std::size_t n) {
    std::vector<Vec3> v;
    for (std::size_t i = 0; i < n; ++i) {
        const double s = std::sin(std::numbers::pi * static_cast<double>(i) / static_cast<double>(n - 1));
        v.push_back({amp.x * s, amp.y * s, 1.0 + amp.z * s});
    }
    return v;
}

Classification labeled(const std::string& label, std::int64_t t0) {
    return Classification{segment_from({{0, 0, 1}, {0, 0, 2}}, t0), label, {}, false,
                          RejectReason::None, {}, {}};
}

Classification rejected(std::int64_t t0) {
    return Classification{segment_from({{0, 0, 1}, {0, 0, 2}}, t0), std::nullopt, {}, false,
                          RejectReason::AboveThreshold, {}, {}};
}

std::vector<Classification> classifications_of(const std::vector<PipelineEvent>& events) {
    std::vector<Classification> out;
    for (const auto& e : events) {
        if (const auto* c = std::get_if<Classified>(&e)) out.push_back(c->classification);
    }
    return out;
}

}  // namespace

TEST_SUITE("classifier") {

TEST_CASE("segment identical to a template scores zero and takes its label") {
    TemplateStore store;
    store.add(Template("lift", TriaxialSeries(50, burst({0, 0, 1.0}, 40))));
    store.add(Template("swing", TriaxialSeries(50, burst({1.0, 0, 0}, 40))));
    const auto c = classify_segment(segment_from(burst({0, 0, 1.0}, 40)), store, {});
    REQUIRE(c.label);
    CHECK(*c.label == "lift");
    CHECK(c.scores.at("lift").weighted == 0.0);
    CHECK(c.scores.size() == 2);
    CHECK(c.best_score == 0.0);
    CHECK(c.runner_up_score == c.scores.at("swing").weighted);
}

TEST_CASE("dominant axis selects between burst templates") {
    TemplateStore store;
    store.add(Template("x", TriaxialSeries(50, burst({1.0, 0.1, 0.1}, 30))));
    store.add(Template("z", TriaxialSeries(50, burst({0.1, 0.1, 1.0}, 30))));
    auto sx = burst({0.9, 0.12, 0.05}, 34);
    auto sz = burst({0.05, 0.1, 1.1}, 27);
    const auto cx = classify_segment(segment_from(sx), store, {});
    const auto cz = classify_segment(segment_from(sz), store, {});
    REQUIRE(cx.label);
    REQUIRE(cz.label);
    CHECK(*cx.label == "x");
    CHECK(*cz.label == "z");
    CHECK(cx.scores.at("x").weight == 0.9);
    CHECK(cx.scores.at("z").weight == 1.0);
}

TEST_CASE("noise segment is rejected") {
    TemplateStore store;
    store.add(Template("x", TriaxialSeries(50, burst({1.0, 0.1, 0.1}, 30))));
    store.add(Template("z", TriaxialSeries(50, burst({0.1, 0.1, 1.0}, 30))));
    std::mt19937_64 rng(1);
    std::normal_distribution<double> noise(0.0, 0.05);
    std::vector<Vec3> v(30);
    for (auto& p : v) p = {noise(rng), noise(rng), 1.0 + noise(rng)};
    const auto c = classify_segment(segment_from(v), store, {});
    CHECK(c.rejected());
    CHECK(c.reason == RejectReason::AboveThreshold);
    CHECK(c.scores.size() == 2);
    CHECK(*c.best_score > kDefaultThreshold);
}

TEST_CASE("dominant-axis weight breaks equal raw scores") {
    const std::vector<Vec3> s{{0, 0, 0}, {0, 0, 1}, {0, 0, 0}};
    const std::vector<Vec3> a{{1, 0, 0}, {1, 0, 1}, {1, 0, 0}};   // s shifted on X, still Z-dominant
    const std::vector<Vec3> b{{1, 0, 0}, {-1, 0, 1}, {1, 0, 0}};  // X-dominant
    TemplateStore store;
    store.add(Template("b", TriaxialSeries(50, b)));
    store.add(Template("a", TriaxialSeries(50, a)));
    ClassifierOptions opts;
    opts.threshold = 2.0;
    const auto c = classify_segment(segment_from(s), store, opts);
    CHECK(c.scores.at("a").raw_dtw == doctest::Approx(1.0));
    CHECK(c.scores.at("b").raw_dtw == doctest::Approx(1.0));
    CHECK(c.scores.at("a").weighted == doctest::Approx(0.9));
    CHECK(c.scores.at("b").weighted == doctest::Approx(1.0));
    REQUIRE(c.label);
    CHECK(*c.label == "a");
}

TEST_CASE("exact tie is rejected") {
    const std::vector<Vec3> t{{0, 0, 1}, {0, 0, 2}, {0, 0, 1}};
    TemplateStore store;
    store.add(Template("p", TriaxialSeries(50, t)));
    store.add(Template("q", TriaxialSeries(50, t)));
    const auto c = classify_segment(segment_from(t), store, {});
    CHECK(c.rejected());
    CHECK(c.reason == RejectReason::Tie);
}

TEST_CASE("per-template threshold override") {
    TemplateStore store;
    Template t("lift", TriaxialSeries(50, burst({0, 0, 1.0}, 40)));
    t.threshold_override = 0.0;
    store.add(t);
    CHECK(classify_segment(segment_from(burst({0, 0, 1.0}, 40)), store, {}).label);
    const auto c = classify_segment(segment_from(burst({0, 0, 1.05}, 40)), store, {});
    CHECK(c.rejected());
    CHECK(c.reason == RejectReason::AboveThreshold);
}

TEST_CASE("length gate and short segments") {
    TemplateStore store;
    store.add(Template("lift", TriaxialSeries(50, burst({0, 0, 1.0}, 40))));
    const auto long_seg = classify_segment(segment_from(burst({0, 0, 1.0}, 120)), store, {});
    CHECK(long_seg.rejected());
    CHECK(long_seg.reason == RejectReason::LengthGate);
    CHECK(long_seg.scores.at("lift").length_gated);

    ClassifierOptions open;
    open.max_length_ratio = 0.0;
    CHECK(classify_segment(segment_from(burst({0, 0, 1.0}, 120)), store, open).label);

    const auto one = classify_segment(segment_from({{0, 0, 1}}), store, {});
    CHECK(one.reason == RejectReason::TooShort);
    CHECK(one.scores.size() == 1);

    CHECK_THROWS_AS(classify_segment(segment_from(burst({0, 0, 1}, 10)), TemplateStore{}, {}),
                    ConfigError);
}

TEST_CASE("minimum energy gate") {
    TemplateStore store;
    store.add(Template("lift", TriaxialSeries(50, burst({0, 0, 0.1}, 40))));
    ClassifierOptions opts;
    opts.min_segment_energy = 0.5;
    const auto c = classify_segment(segment_from(burst({0, 0, 0.1}, 40)), store, opts);
    CHECK(c.reason == RejectReason::LowEnergy);
}

TEST_CASE("suppression skips trailing segments") {
    TemplateStore store;
    store.add(Template("situp", TriaxialSeries(50, burst({1, 0, 0}, 10)), 2));
    store.add(Template("pushup", TriaxialSeries(50, burst({0, 1, 0}, 10)), 0));
    CountState state;

    auto c1 = labeled("situp", 0);
    const auto e1 = update_counts(c1, state, store);
    REQUIRE(e1);
    CHECK(e1->count == 1);
    CHECK(e1->label == "situp");
    CHECK(state.pending_suppression == 2);

    auto c2 = labeled("pushup", 100);
    CHECK(!update_counts(c2, state, store));
    CHECK(c2.suppressed);
    auto c3 = rejected(200);
    CHECK(!update_counts(c3, state, store));
    CHECK(c3.suppressed);
    CHECK(state.pending_suppression == 0);

    auto c4 = labeled("situp", 300);
    const auto e4 = update_counts(c4, state, store);
    REQUIRE(e4);
    CHECK(e4->count == 2);
    CHECK(!c4.suppressed);

    auto c5 = rejected(400);
    auto c6 = rejected(500);
    auto c7 = labeled("pushup", 600);
    update_counts(c5, state, store);
    update_counts(c6, state, store);
    const auto e7 = update_counts(c7, state, store);
    REQUIRE(e7);
    CHECK(e7->count == 1);
    CHECK(state.counts.at("situp") == 2);
    CHECK(state.pending_suppression == 0);
}

TEST_CASE("rejected segment outside suppression changes nothing") {
    TemplateStore store;
    store.add(Template("a", TriaxialSeries(50, burst({1, 0, 0}, 10)), 1));
    CountState state;
    auto c = rejected(0);
    CHECK(!update_counts(c, state, store));
    CHECK(!c.suppressed);
    CHECK(state.counts.empty());
}

TEST_CASE("stream gap clears pending suppression") {
    GeneratorSpec spec;
    spec.seed = 2;
    // Three reps of a tri-phasic motion.
    spec.patterns = {{"tri", 3.0, 3, {{1.4, 0.1, 0.6}, {0.6, 0.1, 0.5}, {0.9, 0.1, 0.3}}, 0.7, 0.05, 4.0}};
    const auto session = generate(spec);
    const PipelineConfig config;
    const auto store = enroll(spec, 500, config);
    REQUIRE(store[0].suppress_trailing == 2);

    // Drop the stream once the first count is confirmed, then resume.
    const auto full = run_pipeline(session.samples, 50, store, config);
    std::optional<std::int64_t> first_end;
    for (const auto& e : full) {
        if (const auto* c = std::get_if<CountEvent>(&e)) {
            first_end = c->end_ms;
            break;
        }
    }
    REQUIRE(first_end);
    std::vector<AccelSample> cut;
    for (const auto& s : session.samples) {
        if (s.t_ms <= *first_end + 400 || s.t_ms >= *first_end + 3000) cut.push_back(s);
    }
    Pipeline pipeline(store, 50, config, resolve_baseline(session.samples, config));
    std::vector<PipelineEvent> out;
    bool saw_gap = false;
    int pending_before = 0;
    for (const auto& s : cut) {
        pending_before = pipeline.state().pending_suppression;
        pipeline.push(s, out);
        for (const auto& e : out) {
            if (std::holds_alternative<Discontinuity>(e)) saw_gap = true;
        }
        if (saw_gap) {
            CHECK(pending_before > 0);
            CHECK(pipeline.state().pending_suppression == 0);
            break;
        }
    }
    CHECK(saw_gap);
}

TEST_CASE("pipeline invariants over generated sessions") {
    const PipelineConfig base;
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 5; ++trial) {
        const auto spec = exercise_session_spec(rng(), 3);
        const auto session = generate(spec);
        const auto store = enroll(spec, 900 + static_cast<std::uint64_t>(trial) * 10, base);
        const auto events = run_pipeline(session.samples, 50, store, base);

        // Determinism.
        CHECK(events.size() == run_pipeline(session.samples, 50, store, base).size());

        // Every labeled, unsuppressed classification is counted exactly once.
        std::size_t counted = 0, count_events = 0, summed = 0;
        for (const auto& e : events) {
            if (const auto* c = std::get_if<Classified>(&e)) {
                const auto& k = c->classification;
                if (k.label && !k.suppressed) ++counted;
                // Argmin consistency.
                if (k.label) {
                    for (const auto& [name, s] : k.scores) {
                        if (name != *k.label && !s.length_gated) {
                            CHECK(s.weighted > k.scores.at(*k.label).weighted);
                        }
                    }
                }
            }
            if (std::holds_alternative<CountEvent>(e)) ++count_events;
            if (const auto* s = std::get_if<CountSummary>(&e)) summed += static_cast<std::size_t>(s->count);
        }
        CHECK(counted == count_events);
        CHECK(summed == count_events);

        // Raising the threshold never removes a label.
        std::vector<std::optional<std::string>> prev;
        for (double th : {0.0, 0.05, 0.1, 0.25, 0.5, 1.0, 10.0}) {
            PipelineConfig cfg = base;
            cfg.classifier.threshold = th;
            const auto cls = classifications_of(run_pipeline(session.samples, 50, store, cfg));
            if (!prev.empty()) {
                REQUIRE(cls.size() == prev.size());
                for (std::size_t i = 0; i < cls.size(); ++i) {
                    if (prev[i]) CHECK(cls[i].label == prev[i]);
                }
            }
            prev.clear();
            for (const auto& c : cls) prev.push_back(c.label);
        }
    }
}

TEST_CASE("empty stream emits nothing") {
    TemplateStore store;
    store.add(Template("a", TriaxialSeries(50, burst({1, 0, 0}, 10))));
    const auto events = run_pipeline(std::vector<AccelSample>{}, 50, store, PipelineConfig{});
    CHECK(events.empty());
    CHECK_THROWS_AS(Pipeline(TemplateStore{}, 50, PipelineConfig{}, 1.0), ConfigError);
}

}
