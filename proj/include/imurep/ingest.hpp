#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "imurep/dtw.hpp"
#include "imurep/signal.hpp"

namespace imurep {

enum class Units { G, MetersPerSecondSquared };

/// Parsed from the first CSV line, e.g.
///   # sample_rate_hz=50 units=g axes=xyz
/// `axes` names the axis carried by each of the three value columns.
struct StreamHeader {
    double sample_rate_hz = 50.0;
    Units units = Units::G;
    std::array<Axis, 3> axis_order{Axis::X, Axis::Y, Axis::Z};
};

StreamHeader parse_stream_header(std::string_view line, std::size_t line_number = 1);
std::string format_stream_header(const StreamHeader& header);

/// Pull-style reader over "t_ms,ax,ay,az" rows. Values are converted to g
/// and reordered to x, y, z. Timestamps must strictly increase.
class CsvReader {
public:
    explicit CsvReader(std::istream& in);

    const StreamHeader& header() const noexcept { return header_; }
    std::optional<AccelSample> next();
    std::size_t line_number() const noexcept { return line_; }

private:
    std::istream& in_;
    StreamHeader header_;
    std::string buf_;
    std::size_t line_ = 0;
    std::optional<std::int64_t> last_t_;
};

struct Recording {
    StreamHeader header;
    std::vector<AccelSample> samples;
};

Recording read_csv(std::istream& in);
Recording load_csv(const std::filesystem::path& path);

/// Writes g units, xyz column order, shortest round-trip decimals.
void write_csv(double sample_rate_hz, std::span<const AccelSample> samples, std::ostream& out);
void save_csv(double sample_rate_hz, std::span<const AccelSample> samples,
              const std::filesystem::path& path);

}  // namespace imurep
