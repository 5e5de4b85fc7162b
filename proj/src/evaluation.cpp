#include "imurep/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>

#include "imurep/errors.hpp"
#include "imurep/numfmt.hpp"
#include "imurep/templates.hpp"

namespace imurep {

ConfusionMatrix::ConfusionMatrix(std::vector<std::string> labels) {
    for (auto& l : labels) {
        if (std::find(labels_.begin(), labels_.end(), l) != labels_.end()) {
            throw InputError("duplicate label '" + l + "' in confusion matrix");
        }
        ensure_label(l);
    }
}

std::size_t ConfusionMatrix::ensure_label(const std::string& label) {
    const auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it != labels_.end()) return static_cast<std::size_t>(it - labels_.begin());
    const std::size_t k = labels_.size();
    std::vector<std::int64_t> grown((k + 1) * (k + 1), 0);
    for (std::size_t r = 0; r < k; ++r) {
        for (std::size_t c = 0; c < k; ++c) grown[r * (k + 1) + c] = cells_[r * k + c];
    }
    cells_ = std::move(grown);
    labels_.push_back(label);
    overlooked_.push_back(0);
    mistook_.push_back(0);
    return k;
}

std::size_t ConfusionMatrix::index_of(const std::string& label) const {
    const auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) throw InputError("unknown label '" + label + "'");
    return static_cast<std::size_t>(it - labels_.begin());
}

std::int64_t& ConfusionMatrix::cell(std::size_t truth, std::size_t predicted) {
    return cells_.at(truth * labels_.size() + predicted);
}

std::int64_t ConfusionMatrix::cell(std::size_t truth, std::size_t predicted) const {
    return cells_.at(truth * labels_.size() + predicted);
}

std::int64_t ConfusionMatrix::total_cells() const noexcept {
    std::int64_t s = 0;
    for (auto v : cells_) s += v;
    return s;
}

std::int64_t ConfusionMatrix::diagonal() const noexcept {
    std::int64_t s = 0;
    for (std::size_t i = 0; i < labels_.size(); ++i) s += cells_[i * labels_.size() + i];
    return s;
}

std::int64_t ConfusionMatrix::total_overlooked() const noexcept {
    std::int64_t s = 0;
    for (auto v : overlooked_) s += v;
    return s;
}

std::int64_t ConfusionMatrix::total_mistook() const noexcept {
    std::int64_t s = 0;
    for (auto v : mistook_) s += v;
    return s;
}

double ratio_or_one(std::int64_t num, std::int64_t den) noexcept {
    if (den == 0) return 1.0;
    return static_cast<double>(num) / static_cast<double>(den);
}

double harmonic_mean(double a, double b) noexcept {
    if (a + b == 0.0) return 0.0;
    return 2.0 * a * b / (a + b);
}

namespace {

Prf make_prf(double p, double r) {
    return {p, r, harmonic_mean(p, r)};
}

}  // namespace

Prf segmentation_metrics(const ConfusionMatrix& cm) {
    const std::int64_t matched = cm.total_cells();
    return make_prf(ratio_or_one(matched, matched + cm.total_mistook()),
                    ratio_or_one(matched, matched + cm.total_overlooked()));
}

MetricsReport classification_metrics(const ConfusionMatrix& cm) {
    MetricsReport rep;
    const std::size_t k = cm.size();
    for (std::size_t i = 0; i < k; ++i) {
        std::int64_t row = 0, col = 0;
        for (std::size_t j = 0; j < k; ++j) {
            row += cm.cell(i, j);
            col += cm.cell(j, i);
        }
        const std::int64_t d = cm.cell(i, i);
        rep.per_label.push_back({cm.labels()[i],
                                 make_prf(ratio_or_one(d, col + cm.mistook(i)),
                                          ratio_or_one(d, row + cm.overlooked(i)))});
    }
    const std::int64_t d = cm.diagonal();
    const std::int64_t all = cm.total_cells();
    rep.micro = make_prf(ratio_or_one(d, all + cm.total_mistook()),
                         ratio_or_one(d, all + cm.total_overlooked()));
    rep.segmentation = segmentation_metrics(cm);
    return rep;
}

ConfusionMatrix match_events(std::span<const EventRecord> predicted,
                             std::span<const TruthInterval> truth, std::int64_t tolerance_ms) {
    if (tolerance_ms < 0) throw InputError("tolerance must be non-negative");
    ConfusionMatrix cm;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if (truth[i].end_ms < truth[i].start_ms) {
            throw InputError("truth interval ends before it starts");
        }
        if (i > 0 && truth[i].start_ms < truth[i - 1].end_ms) {
            throw InputError("truth intervals overlap or are not time-sorted");
        }
        cm.ensure_label(truth[i].label);
    }

    std::vector<const EventRecord*> events;
    for (const auto& r : predicted) {
        if (r.kind == EventKind::Count && r.label) events.push_back(&r);
    }
    std::stable_sort(events.begin(), events.end(),
                     [](const EventRecord* a, const EventRecord* b) { return a->t_ms < b->t_ms; });

    std::vector<bool> used(truth.size(), false);
    auto distance = [](const TruthInterval& iv, std::int64_t t) -> std::int64_t {
        if (t < iv.start_ms) return iv.start_ms - t;
        if (t > iv.end_ms) return t - iv.end_ms;
        return 0;
    };
    for (const EventRecord* ev : events) {
        const std::int64_t t = ev->t_ms;
        // First interval whose widened end reaches t.
        auto it = std::lower_bound(truth.begin(), truth.end(), t,
                                   [&](const TruthInterval& iv, std::int64_t v) {
                                       return iv.end_ms + tolerance_ms < v;
                                   });
        std::optional<std::size_t> best;
        std::int64_t best_dist = 0;
        for (; it != truth.end() && it->start_ms - tolerance_ms <= t; ++it) {
            const auto idx = static_cast<std::size_t>(it - truth.begin());
            if (used[idx]) continue;
            const std::int64_t dist = distance(*it, t);
            if (!best || dist < best_dist) {
                best = idx;
                best_dist = dist;
            }
        }
        const std::size_t p = cm.ensure_label(*ev->label);
        if (best) {
            used[*best] = true;
            ++cm.cell(cm.index_of(truth[*best].label), p);
        } else {
            ++cm.mistook(p);
        }
    }
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if (!used[i]) ++cm.overlooked(cm.index_of(truth[i].label));
    }
    return cm;
}

std::vector<TruthInterval> read_truth(std::istream& in) {
    std::vector<TruthInterval> out;
    std::string buf;
    std::size_t ln = 0;
    while (std::getline(in, buf)) {
        ++ln;
        const auto line = trim(buf);
        if (line.empty() || line.front() == '#') continue;
        const auto f = split_ws(line);
        if (f.size() != 3) {
            throw ParseError(ln, "truth line needs 'start_ms end_ms label'");
        }
        TruthInterval iv{parse_int(f[0], ln, "start_ms"), parse_int(f[1], ln, "end_ms"),
                         std::string(f[2])};
        if (iv.end_ms < iv.start_ms) throw ParseError(ln, "interval ends before it starts");
        if (!out.empty() && iv.start_ms < out.back().end_ms) {
            throw ParseError(ln, "truth intervals overlap or are not time-sorted");
        }
        out.push_back(std::move(iv));
    }
    return out;
}

std::vector<TruthInterval> load_truth(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open truth file '" + path.string() + "'");
    return read_truth(in);
}

void write_truth(std::span<const TruthInterval> truth, std::ostream& out) {
    out << "# start_ms end_ms label\n";
    for (const auto& iv : truth) {
        out << iv.start_ms << ' ' << iv.end_ms << ' ' << iv.label << '\n';
    }
}

ConfusionMatrix read_matrix(std::istream& in) {
    std::string buf;
    std::size_t ln = 0;
    std::optional<ConfusionMatrix> cm;
    std::vector<bool> seen_row;
    bool seen_mistook = false;
    while (std::getline(in, buf)) {
        ++ln;
        const auto line = trim(buf);
        if (line.empty() || line.front() == '#') continue;
        const auto f = split_ws(line);
        auto count_at = [&](std::size_t i) {
            const auto v = parse_int(f[i], ln, "count");
            if (v < 0) throw ParseError(ln, "counts must be non-negative");
            return v;
        };
        if (f[0] == "labels") {
            if (cm) throw ParseError(ln, "duplicate 'labels' line");
            std::vector<std::string> labels(f.begin() + 1, f.end());
            if (labels.empty()) throw ParseError(ln, "'labels' needs at least one label");
            try {
                cm.emplace(std::move(labels));
            } catch (const InputError& e) {
                throw ParseError(ln, e.what());
            }
            seen_row.assign(cm->size(), false);
            continue;
        }
        if (!cm) throw ParseError(ln, "expected 'labels' line first");
        const std::size_t k = cm->size();
        if (f[0] == "row") {
            if (f.size() != k + 3) {
                throw ParseError(ln, "row needs a label, " + std::to_string(k) +
                                         " counts and an overlooked count");
            }
            std::size_t r = 0;
            try {
                r = cm->index_of(std::string(f[1]));
            } catch (const InputError& e) {
                throw ParseError(ln, e.what());
            }
            if (seen_row[r]) throw ParseError(ln, "duplicate row for '" + std::string(f[1]) + "'");
            seen_row[r] = true;
            for (std::size_t c = 0; c < k; ++c) cm->cell(r, c) = count_at(c + 2);
            cm->overlooked(r) = count_at(k + 2);
        } else if (f[0] == "mistook") {
            if (f.size() != k + 1) {
                throw ParseError(ln, "mistook needs " + std::to_string(k) + " counts");
            }
            if (seen_mistook) throw ParseError(ln, "duplicate 'mistook' line");
            seen_mistook = true;
            for (std::size_t c = 0; c < k; ++c) cm->mistook(c) = count_at(c + 1);
        } else {
            throw ParseError(ln, "unknown matrix line '" + std::string(f[0]) + "'");
        }
    }
    if (!cm) throw ParseError(ln, "matrix file has no 'labels' line");
    return *cm;
}

ConfusionMatrix load_matrix(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open matrix file '" + path.string() + "'");
    return read_matrix(in);
}

void write_matrix(const ConfusionMatrix& cm, std::ostream& out) {
    out << "labels";
    for (const auto& l : cm.labels()) out << ' ' << l;
    out << '\n';
    for (std::size_t r = 0; r < cm.size(); ++r) {
        out << "row " << cm.labels()[r];
        for (std::size_t c = 0; c < cm.size(); ++c) out << ' ' << cm.cell(r, c);
        out << ' ' << cm.overlooked(r) << '\n';
    }
    out << "mistook";
    for (std::size_t c = 0; c < cm.size(); ++c) out << ' ' << cm.mistook(c);
    out << '\n';
}

namespace {

// Tenths of a percent, halves rounded up (0.9625 -> "96.3%").
std::string pct(double v) {
    const double tenths = std::floor(v * 1000.0 + 0.5 + 1e-9);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f%%", tenths / 10.0);
    return buf;
}

std::string pad(const std::string& s, std::size_t w) {
    return s.size() >= w ? s + ' ' : s + std::string(w - s.size(), ' ');
}

std::string fixed6(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

}  // namespace

void print_report(const ConfusionMatrix& cm, const MetricsReport& report, std::ostream& out) {
    std::size_t w = 10;
    for (const auto& l : cm.labels()) w = std::max(w, l.size() + 2);
    out << "Confusion matrix (rows: truth, columns: predicted)\n";
    out << pad("", w);
    for (const auto& l : cm.labels()) out << pad(l, w);
    out << "Overlooked\n";
    for (std::size_t r = 0; r < cm.size(); ++r) {
        out << pad(cm.labels()[r], w);
        for (std::size_t c = 0; c < cm.size(); ++c) out << pad(std::to_string(cm.cell(r, c)), w);
        out << cm.overlooked(r) << '\n';
    }
    out << pad("Mistook", w);
    for (std::size_t c = 0; c < cm.size(); ++c) out << pad(std::to_string(cm.mistook(c)), w);
    out << "\n\n";

    out << "Segmentation\n" << pad("Precision", 12) << pad("Recall", 12) << "F1-score\n";
    out << pad(pct(report.segmentation.precision), 12) << pad(pct(report.segmentation.recall), 12)
        << pct(report.segmentation.f1) << "\n\n";

    out << "Classification\n"
        << pad("Exercise", w + 4) << pad("Precision", 12) << pad("Recall", 12) << "F1-score\n";
    for (const auto& m : report.per_label) {
        out << pad(m.label, w + 4) << pad(pct(m.prf.precision), 12) << pad(pct(m.prf.recall), 12)
            << pct(m.prf.f1) << '\n';
    }
    out << pad("Micro Average", w + 4) << pad(pct(report.micro.precision), 12)
        << pad(pct(report.micro.recall), 12) << pct(report.micro.f1) << '\n';
}

void print_key_values(const MetricsReport& report, std::ostream& out) {
    auto emit = [&](const std::string& prefix, const Prf& p) {
        out << prefix << ".precision=" << fixed6(p.precision) << '\n'
            << prefix << ".recall=" << fixed6(p.recall) << '\n'
            << prefix << ".f1=" << fixed6(p.f1) << '\n';
    };
    emit("segmentation", report.segmentation);
    for (const auto& m : report.per_label) emit("class." + m.label, m.prf);
    emit("micro", report.micro);
}

}  // namespace imurep
