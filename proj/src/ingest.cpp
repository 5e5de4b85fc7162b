#include "imurep/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>

#include "imurep/errors.hpp"
#include "imurep/numfmt.hpp"

namespace imurep {

StreamHeader parse_stream_header(std::string_view line, std::size_t ln) {
    line = trim(line);
    if (line.empty() || line.front() != '#') {
        throw ParseError(ln, "first line must be a '#' header carrying sample_rate_hz and units");
    }
    line.remove_prefix(1);
    StreamHeader h;
    bool have_rate = false;
    bool have_units = false;
    for (auto tok : split_ws(line)) {
        const auto eq = tok.find('=');
        if (eq == std::string_view::npos) continue;
        const auto key = tok.substr(0, eq);
        const auto value = tok.substr(eq + 1);
        if (key == "sample_rate_hz") {
            h.sample_rate_hz = parse_double(value, ln, key);
            if (h.sample_rate_hz <= 0.0) throw ParseError(ln, "sample_rate_hz must be positive");
            have_rate = true;
        } else if (key == "units") {
            if (value == "g") {
                h.units = Units::G;
            } else if (value == "m/s^2" || value == "m/s2" || value == "mps2" ||
                       value == "m/s\xC2\xB2") {
                h.units = Units::MetersPerSecondSquared;
            } else {
                throw ParseError(ln, "unknown units '" + std::string(value) + "'");
            }
            have_units = true;
        } else if (key == "axes") {
            if (value.size() != 3) throw ParseError(ln, "axes must name 3 axes, e.g. xyz");
            bool seen[3] = {false, false, false};
            for (std::size_t i = 0; i < 3; ++i) {
                const char c = static_cast<char>(std::tolower(static_cast<unsigned char>(value[i])));
                if (c < 'x' || c > 'z' || seen[c - 'x']) {
                    throw ParseError(ln, "axes must be a permutation of xyz");
                }
                seen[c - 'x'] = true;
                h.axis_order[i] = static_cast<Axis>(c - 'x');
            }
        }
    }
    if (!have_rate) throw ParseError(ln, "header is missing sample_rate_hz");
    if (!have_units) throw ParseError(ln, "header is missing units");
    return h;
}

std::string format_stream_header(const StreamHeader& h) {
    std::string axes;
    for (auto a : h.axis_order) axes += static_cast<char>('x' + static_cast<int>(a));
    return "# sample_rate_hz=" + format_double(h.sample_rate_hz) +
           " units=" + (h.units == Units::G ? "g" : "m/s^2") + " axes=" + axes;
}

CsvReader::CsvReader(std::istream& in) : in_(in) {
    if (!std::getline(in_, buf_)) {
        throw ParseError(1, "empty stream file (missing header line)");
    }
    line_ = 1;
    header_ = parse_stream_header(buf_, 1);
}

std::optional<AccelSample> CsvReader::next() {
    while (std::getline(in_, buf_)) {
        ++line_;
        const auto line = trim(buf_);
        if (line.empty() || line.front() == '#') continue;
        const auto f = split(line, ',');
        if (f.size() != 4) {
            throw ParseError(line_, "expected 't_ms,ax,ay,az', found " + std::to_string(f.size()) +
                                        " fields");
        }
        const std::int64_t t = parse_int(f[0], line_, "t_ms");
        if (t < 0) throw ParseError(line_, "t_ms must be non-negative");
        if (last_t_ && t <= *last_t_) {
            throw StreamOrderError(line_, "t_ms " + std::to_string(t) +
                                              " does not increase past " + std::to_string(*last_t_));
        }
        last_t_ = t;
        double v[3] = {parse_double(f[1], line_, "column 2"), parse_double(f[2], line_, "column 3"),
                       parse_double(f[3], line_, "column 4")};
        if (header_.units == Units::MetersPerSecondSquared) {
            for (auto& x : v) x /= kStandardGravity;
        }
        double xyz[3] = {0.0, 0.0, 0.0};
        for (std::size_t i = 0; i < 3; ++i) xyz[static_cast<int>(header_.axis_order[i])] = v[i];
        return AccelSample{t, {xyz[0], xyz[1], xyz[2]}};
    }
    return std::nullopt;
}

Recording read_csv(std::istream& in) {
    CsvReader reader(in);
    Recording rec{reader.header(), {}};
    while (auto s = reader.next()) rec.samples.push_back(*s);
    return rec;
}

Recording load_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open stream file '" + path.string() + "'");
    return read_csv(in);
}

void write_csv(double sample_rate_hz, std::span<const AccelSample> samples, std::ostream& out) {
    StreamHeader h;
    h.sample_rate_hz = sample_rate_hz;
    out << format_stream_header(h) << '\n';
    for (const auto& s : samples) {
        out << s.t_ms << ',' << format_double(s.accel.x) << ',' << format_double(s.accel.y) << ','
            << format_double(s.accel.z) << '\n';
    }
}

void save_csv(double sample_rate_hz, std::span<const AccelSample> samples,
              const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot open '" + path.string() + "' for writing");
    write_csv(sample_rate_hz, samples, out);
    if (!out) throw InputError("failed writing '" + path.string() + "'");
}

}  // namespace imurep
