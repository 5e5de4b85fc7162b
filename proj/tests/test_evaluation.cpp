#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "imurep/errors.hpp"
#include "imurep/evaluation.hpp"

using namespace imurep;

namespace {

ConfusionMatrix reference() {
    return load_matrix(std::filesystem::path(IMUREP_SOURCE_DIR) / "data" / "reference_confusion.txt");
}

ConfusionMatrix matrix_from(const std::string& text) {
    std::istringstream in(text);
    return read_matrix(in);
}

EventRecord count_at(std::int64_t t, const std::string& label) {
    return EventRecord{EventKind::Count, t, label, 1, std::nullopt, std::nullopt};
}

double f1_of(double p, double r) { return 2 * p * r / (p + r); }

// Published rounded percentages, and the exact fractions behind them.
struct Row {
    const char* label;
    double p_num, p_den, r_num, r_den;
    double pub_p, pub_r, pub_f1;
};

const Row kRows[] = {
    {"Running", 231, 231 + 3, 231, 237 + 3, 98.7, 96.3, 97.5},
    {"Walking", 272, 278 + 8, 272, 274 + 22, 95.1, 91.9, 93.5},
    {"Jumping", 80, 80 + 0, 80, 80 + 11, 100.0, 87.9, 93.6},
    {"Push-ups", 87, 87 + 3, 87, 87 + 7, 96.7, 92.6, 94.6},
    {"Sit-ups", 82, 84 + 2, 82, 82 + 6, 95.3, 93.2, 94.3},
};

// The published figures are rounded to 0.1 pp.
constexpr double kPublishedTolerance = 0.05 + 1e-9;

}  // namespace

TEST_SUITE("evaluation") {

TEST_CASE("reference matrix reproduces the exact fractions") {
    const auto cm = reference();
    REQUIRE(cm.size() == 5);
    const auto report = classification_metrics(cm);
    REQUIRE(report.per_label.size() == 5);
    for (std::size_t i = 0; i < 5; ++i) {
        const auto& row = kRows[i];
        const auto& m = report.per_label[i];
        CHECK(m.label == row.label);
        const double p = row.p_num / row.p_den, r = row.r_num / row.r_den;
        CHECK(m.prf.precision == doctest::Approx(p).epsilon(1e-12));
        CHECK(m.prf.recall == doctest::Approx(r).epsilon(1e-12));
        CHECK(m.prf.f1 == doctest::Approx(f1_of(p, r)).epsilon(1e-12));
    }
    // 760 matched (752 on the diagonal), 16 mistook, 49 overlooked.
    const double seg_p = 760.0 / 776.0, seg_r = 760.0 / 809.0;
    CHECK(report.segmentation.precision == doctest::Approx(seg_p).epsilon(1e-12));
    CHECK(report.segmentation.recall == doctest::Approx(seg_r).epsilon(1e-12));
    const double mic_p = 752.0 / 776.0, mic_r = 752.0 / 809.0;
    CHECK(report.micro.precision == doctest::Approx(mic_p).epsilon(1e-12));
    CHECK(report.micro.recall == doctest::Approx(mic_r).epsilon(1e-12));
    CHECK(report.micro.f1 == doctest::Approx(f1_of(mic_p, mic_r)).epsilon(1e-12));
}

TEST_CASE("reference matrix agrees with the published table") {
    const auto report = classification_metrics(reference());
    auto near = [](double v, double pub) { return std::abs(100.0 * v - pub) <= kPublishedTolerance; };
    for (std::size_t i = 0; i < 5; ++i) {
        CAPTURE(kRows[i].label);
        CHECK(near(report.per_label[i].prf.precision, kRows[i].pub_p));
        CHECK(near(report.per_label[i].prf.recall, kRows[i].pub_r));
        CHECK(near(report.per_label[i].prf.f1, kRows[i].pub_f1));
    }
    CHECK(near(report.segmentation.precision, 97.9));
    CHECK(near(report.segmentation.recall, 93.9));
    CHECK(near(report.segmentation.f1, 95.9));
    CHECK(near(report.micro.precision, 96.9));
    CHECK(near(report.micro.recall, 93.0));
    CHECK(near(report.micro.f1, 94.9));
}

TEST_CASE("degenerate matrices") {
    ConfusionMatrix empty(std::vector<std::string>{"a", "b"});
    const auto r0 = classification_metrics(empty);
    CHECK(r0.micro.precision == 1.0);
    CHECK(r0.micro.recall == 1.0);
    CHECK(r0.segmentation.f1 == 1.0);
    for (const auto& m : r0.per_label) CHECK(m.prf.f1 == 1.0);

    ConfusionMatrix diag(std::vector<std::string>{"a", "b"});
    diag.cell(0, 0) = 4;
    diag.cell(1, 1) = 9;
    const auto r1 = classification_metrics(diag);
    CHECK(r1.micro.f1 == 1.0);
    CHECK(r1.segmentation.f1 == 1.0);
    for (const auto& m : r1.per_label) CHECK(m.prf.f1 == 1.0);

    ConfusionMatrix one(std::vector<std::string>{"only"});
    one.cell(0, 0) = 3;
    one.overlooked(0) = 1;
    one.mistook(0) = 1;
    const auto r2 = classification_metrics(one);
    CHECK(r2.per_label[0].prf.precision == doctest::Approx(0.75));
    CHECK(r2.per_label[0].prf.recall == doctest::Approx(0.75));
    CHECK(r2.micro.f1 == doctest::Approx(r2.per_label[0].prf.f1));

    CHECK(harmonic_mean(0.0, 0.0) == 0.0);
    CHECK(ratio_or_one(0, 0) == 1.0);
    CHECK(ratio_or_one(0, 5) == 0.0);
}

TEST_CASE("metric invariants on random matrices") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t k = 1 + rng() % 6;
        std::vector<std::string> labels;
        for (std::size_t i = 0; i < k; ++i) labels.push_back("L" + std::to_string(i));
        ConfusionMatrix cm(labels);
        for (std::size_t i = 0; i < k; ++i) {
            for (std::size_t j = 0; j < k; ++j) cm.cell(i, j) = static_cast<std::int64_t>(rng() % 30);
            cm.overlooked(i) = static_cast<std::int64_t>(rng() % 10);
            cm.mistook(i) = static_cast<std::int64_t>(rng() % 10);
        }
        const auto r = classification_metrics(cm);
        for (const auto& m : r.per_label) {
            CHECK(m.prf.precision >= 0.0);
            CHECK(m.prf.precision <= 1.0);
            CHECK(m.prf.recall >= 0.0);
            CHECK(m.prf.recall <= 1.0);
            CHECK(m.prf.f1 <= std::max(m.prf.precision, m.prf.recall) + 1e-15);
            CHECK(m.prf.f1 >= std::min(m.prf.precision, m.prf.recall) - 1e-15);
        }
        // Correct labels never exceed matched segments.
        CHECK(r.micro.precision <= r.segmentation.precision + 1e-15);
        CHECK(r.micro.recall <= r.segmentation.recall + 1e-15);

        // Scaling every count leaves the ratios unchanged.
        ConfusionMatrix scaled = cm;
        for (std::size_t i = 0; i < k; ++i) {
            for (std::size_t j = 0; j < k; ++j) scaled.cell(i, j) *= 7;
            scaled.overlooked(i) *= 7;
            scaled.mistook(i) *= 7;
        }
        const auto rs = classification_metrics(scaled);
        CHECK(rs.micro.f1 == doctest::Approx(r.micro.f1).epsilon(1e-12));
        CHECK(rs.segmentation.f1 == doctest::Approx(r.segmentation.f1).epsilon(1e-12));

        // Relabeling permutes the per-label rows and leaves the aggregates alone.
        std::vector<std::size_t> perm(k);
        for (std::size_t i = 0; i < k; ++i) perm[i] = i;
        std::shuffle(perm.begin(), perm.end(), rng);
        std::vector<std::string> plabels(k);
        for (std::size_t i = 0; i < k; ++i) plabels[perm[i]] = labels[i];
        ConfusionMatrix permuted(plabels);
        for (std::size_t i = 0; i < k; ++i) {
            for (std::size_t j = 0; j < k; ++j) permuted.cell(perm[i], perm[j]) = cm.cell(i, j);
            permuted.overlooked(perm[i]) = cm.overlooked(i);
            permuted.mistook(perm[i]) = cm.mistook(i);
        }
        const auto rp = classification_metrics(permuted);
        CHECK(rp.micro.f1 == doctest::Approx(r.micro.f1).epsilon(1e-12));
        for (std::size_t i = 0; i < k; ++i) {
            CHECK(rp.per_label[perm[i]].label == r.per_label[i].label);
            CHECK(rp.per_label[perm[i]].prf.f1 == doctest::Approx(r.per_label[i].prf.f1).epsilon(1e-12));
        }
    }
}

TEST_CASE("matching counts against truth intervals") {
    const std::vector<TruthInterval> truth{{1000, 2000, "a"}, {2000, 3000, "a"}, {5000, 6000, "b"}};
    const std::vector<EventRecord> events{
        count_at(1500, "a"),  // inside the first interval
        count_at(3100, "a"),  // 100 ms late for the second
        count_at(4000, "b"),  // nothing within 250 ms
        {EventKind::Segment, 5500, std::nullopt, std::nullopt, std::nullopt, std::nullopt},
    };
    const auto cm = match_events(events, truth, 250);
    const auto a = cm.index_of("a"), b = cm.index_of("b");
    CHECK(cm.cell(a, a) == 2);
    CHECK(cm.mistook(b) == 1);
    CHECK(cm.overlooked(b) == 1);
    CHECK(cm.total_cells() == 2);

    // A boundary time belongs to the interval that contains it first.
    const auto edge = match_events(std::vector<EventRecord>{count_at(2000, "a")}, truth, 250);
    CHECK(edge.overlooked(0) == 1);
    CHECK(edge.diagonal() == 1);
}

TEST_CASE("containment wins over tolerance") {
    const std::vector<TruthInterval> truth{{0, 1000, "a"}, {1100, 2000, "b"}};
    const auto cm = match_events(std::vector<EventRecord>{count_at(1150, "b")}, truth, 250);
    CHECK(cm.cell(cm.index_of("b"), cm.index_of("b")) == 1);
    CHECK(cm.overlooked(cm.index_of("a")) == 1);
}

TEST_CASE("injected errors show up in the matrix") {
    std::vector<TruthInterval> truth;
    std::vector<EventRecord> events;
    const char* labels[] = {"a", "b", "c"};
    for (int i = 0; i < 30; ++i) {
        const std::string l = labels[i / 10];
        truth.push_back({i * 1000, i * 1000 + 800, l});
        events.push_back(count_at(i * 1000 + 400, l));
    }
    events[3].label = "b";   // a predicted as b
    events[15].label = "c";  // b predicted as c
    events.erase(events.begin() + 25);  // one c missed
    const auto cm = match_events(events, truth, 250);
    const auto a = cm.index_of("a"), b = cm.index_of("b"), c = cm.index_of("c");
    CHECK(cm.cell(a, a) == 9);
    CHECK(cm.cell(a, b) == 1);
    CHECK(cm.cell(b, b) == 9);
    CHECK(cm.cell(b, c) == 1);
    CHECK(cm.cell(c, c) == 9);
    CHECK(cm.overlooked(c) == 1);
    CHECK(cm.total_mistook() == 0);
    const auto r = classification_metrics(cm);
    CHECK(r.micro.precision == doctest::Approx(27.0 / 29.0));
    CHECK(r.micro.recall == doctest::Approx(27.0 / 30.0));
    CHECK(r.segmentation.precision == 1.0);
    CHECK(r.segmentation.recall == doctest::Approx(29.0 / 30.0));
}

TEST_CASE("predicted-only labels extend the matrix") {
    const std::vector<TruthInterval> truth{{0, 1000, "a"}};
    const auto cm = match_events(std::vector<EventRecord>{count_at(500, "z")}, truth, 0);
    REQUIRE(cm.size() == 2);
    CHECK(cm.labels()[1] == "z");
    CHECK(cm.cell(0, 1) == 1);
}

TEST_CASE("truth errors") {
    const std::vector<TruthInterval> overlapping{{0, 1000, "a"}, {900, 2000, "a"}};
    CHECK_THROWS_AS(match_events(std::vector<EventRecord>{}, overlapping, 250), InputError);
    const std::vector<TruthInterval> ok{{0, 1000, "a"}};
    CHECK_THROWS_AS(match_events(std::vector<EventRecord>{}, ok, -1), InputError);

    std::istringstream bad("0 1000 a\n900 2000 b\n");
    CHECK_THROWS_AS(read_truth(bad), ParseError);
    std::istringstream short_line("# comment\n0 1000\n");
    try {
        read_truth(short_line);
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
    }
}

TEST_CASE("truth and matrix round-trips") {
    const std::vector<TruthInterval> truth{{0, 1000, "a"}, {1000, 2500, "b-2"}};
    std::ostringstream out;
    write_truth(truth, out);
    std::istringstream in(out.str());
    CHECK(read_truth(in) == truth);

    const auto cm = reference();
    std::ostringstream mout;
    write_matrix(cm, mout);
    CHECK(matrix_from(mout.str()) == cm);
}

TEST_CASE("matrix parse errors") {
    CHECK_THROWS_AS(matrix_from(""), ParseError);
    CHECK_THROWS_AS(matrix_from("row a 1 0\n"), ParseError);
    CHECK_THROWS_AS(matrix_from("labels a b\nrow a 1 0\n"), ParseError);
    CHECK_THROWS_AS(matrix_from("labels a\nrow a 1 -2\n"), ParseError);
    CHECK_THROWS_AS(matrix_from("labels a\nrow a 1 0\nrow a 1 0\n"), ParseError);
    CHECK_THROWS_AS(matrix_from("labels a\nrow q 1 0\n"), ParseError);
    CHECK_THROWS_AS(matrix_from("labels a a\n"), ParseError);
    CHECK_THROWS_AS(matrix_from("labels a\nmistook 1 2\n"), ParseError);
    CHECK_THROWS_AS(matrix_from("labels a\ncolumns 1\n"), ParseError);
    CHECK(matrix_from("labels a\nrow a 2 1\nmistook 3\n").mistook(0) == 3);
}

TEST_CASE("key-value report") {
    std::ostringstream out;
    print_key_values(classification_metrics(reference()), out);
    const auto s = out.str();
    CHECK(s.find("segmentation.precision=0.979381") != std::string::npos);
    CHECK(s.find("class.Running.recall=0.962500") != std::string::npos);
    CHECK(s.find("micro.f1=") != std::string::npos);
}

}
