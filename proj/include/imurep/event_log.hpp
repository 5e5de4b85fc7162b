#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "imurep/classifier.hpp"

namespace imurep {

// One tab-separated record per line, in this field order:
//   kind  t_ms  label  count  winning_score  runner_up_score
// kind is SEGMENT, CLASSIFIED, SUPPRESSED, COUNT, DISCONTINUITY or SUMMARY.
// Segment-related records use the segment midpoint as t_ms. Absent fields
// are written as '-'; a rejected classification carries the label REJECTED.
// Lines starting with '#' are comments.
enum class EventKind { Segment, Classified, Suppressed, Count, Discontinuity, Summary };

std::string_view kind_name(EventKind k) noexcept;

inline constexpr std::string_view kRejectedLabel = "REJECTED";

struct EventRecord {
    EventKind kind = EventKind::Segment;
    std::int64_t t_ms = 0;
    std::optional<std::string> label;
    std::optional<std::int64_t> count;
    std::optional<double> winning_score;
    std::optional<double> runner_up_score;

    friend bool operator==(const EventRecord&, const EventRecord&) = default;
};

EventRecord to_record(const PipelineEvent& event);

std::string format_record(const EventRecord& r);
EventRecord parse_record(std::string_view line, std::size_t line_number);

void write_event_log(std::span<const EventRecord> records, std::ostream& out);
void write_event_log_header(std::ostream& out);
std::vector<EventRecord> read_event_log(std::istream& in);

}  // namespace imurep
