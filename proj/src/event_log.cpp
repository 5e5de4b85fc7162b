#include "imurep/event_log.hpp"

#include <istream>
#include <ostream>
#include <type_traits>

#include "imurep/errors.hpp"
#include "imurep/numfmt.hpp"

namespace imurep {

std::string_view kind_name(EventKind k) noexcept {
    switch (k) {
        case EventKind::Segment: return "SEGMENT";
        case EventKind::Classified: return "CLASSIFIED";
        case EventKind::Suppressed: return "SUPPRESSED";
        case EventKind::Count: return "COUNT";
        case EventKind::Discontinuity: return "DISCONTINUITY";
        case EventKind::Summary: return "SUMMARY";
    }
    return "?";
}

EventRecord to_record(const PipelineEvent& event) {
    return std::visit(
        [](const auto& e) -> EventRecord {
            using T = std::decay_t<decltype(e)>;
            EventRecord r;
            if constexpr (std::is_same_v<T, SegmentDetected>) {
                r.kind = EventKind::Segment;
                r.t_ms = e.segment.mid_ms();
            } else if constexpr (std::is_same_v<T, Classified>) {
                const auto& c = e.classification;
                r.kind = c.suppressed ? EventKind::Suppressed : EventKind::Classified;
                r.t_ms = c.segment.mid_ms();
                r.label = c.label.value_or(std::string(kRejectedLabel));
                r.winning_score = c.best_score;
                r.runner_up_score = c.runner_up_score;
            } else if constexpr (std::is_same_v<T, CountEvent>) {
                r.kind = EventKind::Count;
                r.t_ms = e.t_ms;
                r.label = e.label;
                r.count = e.count;
            } else if constexpr (std::is_same_v<T, Discontinuity>) {
                r.kind = EventKind::Discontinuity;
                r.t_ms = e.t_ms;
            } else {
                r.kind = EventKind::Summary;
                r.t_ms = e.t_ms;
                r.label = e.label;
                r.count = e.count;
            }
            return r;
        },
        event);
}

std::string format_record(const EventRecord& r) {
    std::string s(kind_name(r.kind));
    s += '\t';
    s += std::to_string(r.t_ms);
    s += '\t';
    s += r.label.value_or("-");
    s += '\t';
    s += r.count ? std::to_string(*r.count) : "-";
    s += '\t';
    s += r.winning_score ? format_double(*r.winning_score) : "-";
    s += '\t';
    s += r.runner_up_score ? format_double(*r.runner_up_score) : "-";
    return s;
}

EventRecord parse_record(std::string_view line, std::size_t ln) {
    const auto f = split(trim(line), '\t');
    if (f.size() != 6) {
        throw ParseError(ln, "event record needs 6 tab-separated fields, found " +
                                 std::to_string(f.size()));
    }
    EventRecord r;
    bool known = false;
    for (auto k : {EventKind::Segment, EventKind::Classified, EventKind::Suppressed,
                   EventKind::Count, EventKind::Discontinuity, EventKind::Summary}) {
        if (f[0] == kind_name(k)) {
            r.kind = k;
            known = true;
        }
    }
    if (!known) throw ParseError(ln, "unknown event kind '" + std::string(f[0]) + "'");
    r.t_ms = parse_int(f[1], ln, "t_ms");
    if (f[2] != "-") r.label = std::string(f[2]);
    if (f[3] != "-") r.count = parse_int(f[3], ln, "count");
    if (f[4] != "-") r.winning_score = parse_double(f[4], ln, "winning_score");
    if (f[5] != "-") r.runner_up_score = parse_double(f[5], ln, "runner_up_score");
    return r;
}

void write_event_log_header(std::ostream& out) {
    out << "# kind\tt_ms\tlabel\tcount\twinning_score\trunner_up_score\n";
}

void write_event_log(std::span<const EventRecord> records, std::ostream& out) {
    write_event_log_header(out);
    for (const auto& r : records) out << format_record(r) << '\n';
}

std::vector<EventRecord> read_event_log(std::istream& in) {
    std::vector<EventRecord> out;
    std::string buf;
    std::size_t ln = 0;
    while (std::getline(in, buf)) {
        ++ln;
        const auto line = trim(buf);
        if (line.empty() || line.front() == '#') continue;
        out.push_back(parse_record(line, ln));
    }
    return out;
}

}  // namespace imurep
