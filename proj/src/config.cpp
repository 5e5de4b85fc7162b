#include "imurep/config.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "imurep/errors.hpp"
#include "imurep/numfmt.hpp"

namespace imurep {

void validate(const PipelineConfig& c) {
    if (!(c.energy_window_s > 0.0)) throw ConfigError("energy_window_s must be positive");
    if (!(c.peak_window_s > 0.0)) throw ConfigError("peak_window_s must be positive");
    if (!(c.min_prominence >= 0.0)) throw ConfigError("min_prominence must be non-negative");
    if (!(c.baseline_value >= 0.0)) throw ConfigError("baseline must be non-negative");
    const auto& k = c.classifier;
    if (!(k.threshold >= 0.0)) throw ConfigError("threshold must be non-negative");
    if (!(k.match_weight > 0.0 && k.match_weight <= 1.0)) {
        throw ConfigError("match_weight must lie in (0, 1]");
    }
    if (!(k.max_length_ratio == 0.0 || k.max_length_ratio >= 1.0)) {
        throw ConfigError("max_length_ratio must be 0 (off) or at least 1");
    }
    if (!(k.min_segment_energy >= 0.0)) throw ConfigError("min_segment_energy must be non-negative");
}

PipelineConfig parse_config(std::istream& in) {
    PipelineConfig c;
    std::string buf;
    std::size_t ln = 0;
    while (std::getline(in, buf)) {
        ++ln;
        std::string_view line = buf;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ParseError(ln, "expected key=value");
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        if (key == "energy_window_s") {
            c.energy_window_s = parse_double(value, ln, key);
        } else if (key == "peak_window_s") {
            c.peak_window_s = parse_double(value, ln, key);
        } else if (key == "min_prominence") {
            c.min_prominence = parse_double(value, ln, key);
        } else if (key == "baseline") {
            if (value == "median") {
                c.baseline_mode = BaselineMode::Median;
            } else {
                c.baseline_mode = BaselineMode::Fixed;
                c.baseline_value = parse_double(value, ln, key);
            }
        } else if (key == "threshold") {
            c.classifier.threshold = parse_double(value, ln, key);
        } else if (key == "match_weight") {
            c.classifier.match_weight = parse_double(value, ln, key);
        } else if (key == "normalize") {
            if (value == "true") {
                c.classifier.dtw.normalize = true;
            } else if (value == "false") {
                c.classifier.dtw.normalize = false;
            } else {
                throw ParseError(ln, "normalize must be true or false");
            }
        } else if (key == "dtw_band") {
            const auto b = parse_int(value, ln, key);
            if (b < 0) throw ParseError(ln, "dtw_band must be non-negative");
            c.classifier.dtw.band = static_cast<std::size_t>(b);
        } else if (key == "max_length_ratio") {
            c.classifier.max_length_ratio = parse_double(value, ln, key);
        } else if (key == "min_segment_energy") {
            c.classifier.min_segment_energy = parse_double(value, ln, key);
        } else {
            throw ParseError(ln, "unknown config key '" + std::string(key) + "'");
        }
    }
    try {
        validate(c);
    } catch (const ConfigError& e) {
        throw ConfigError(std::string("invalid config: ") + e.what());
    }
    return c;
}

PipelineConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
    return parse_config(in);
}

void write_config(const PipelineConfig& c, std::ostream& out) {
    out << "energy_window_s=" << format_double(c.energy_window_s) << '\n'
        << "peak_window_s=" << format_double(c.peak_window_s) << '\n'
        << "min_prominence=" << format_double(c.min_prominence) << '\n'
        << "baseline="
        << (c.baseline_mode == BaselineMode::Median ? std::string("median")
                                                    : format_double(c.baseline_value))
        << '\n'
        << "threshold=" << format_double(c.classifier.threshold) << '\n'
        << "match_weight=" << format_double(c.classifier.match_weight) << '\n'
        << "normalize=" << (c.classifier.dtw.normalize ? "true" : "false") << '\n'
        << "dtw_band=" << c.classifier.dtw.band << '\n'
        << "max_length_ratio=" << format_double(c.classifier.max_length_ratio) << '\n'
        << "min_segment_energy=" << format_double(c.classifier.min_segment_energy) << '\n';
}

}  // namespace imurep
