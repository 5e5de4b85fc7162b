#include "imurep/templates.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>

#include "imurep/errors.hpp"
#include "imurep/numfmt.hpp"

namespace imurep {

void validate_label(const std::string& label) {
    if (label.empty()) {
        throw InputError("label must not be empty");
    }
    if (std::any_of(label.begin(), label.end(),
                    [](unsigned char c) { return c <= ' ' || c == 0x7f; })) {
        throw InputError("label '" + label + "' must not contain whitespace or control characters");
    }
    if (label == "REJECTED" || label == "-") {
        throw InputError("label '" + label + "' is reserved");
    }
}

Template::Template(std::string label_, TriaxialSeries data_, int suppress)
    : label(std::move(label_)), data(std::move(data_)), stats(), suppress_trailing(suppress) {
    validate_label(label);
    if (data.size() < 2) {
        throw InputError("template '" + label + "' needs at least 2 samples");
    }
    if (suppress_trailing < 0) {
        throw InputError("suppress_trailing must be non-negative");
    }
    stats = axis_stats(data);
}

Template make_template(const Segment& segment, const std::string& label, int suppress_trailing) {
    return Template(label, segment.data, suppress_trailing);
}

void TemplateStore::add(Template t) {
    if (find(t.label)) {
        throw DuplicateLabelError("template label '" + t.label + "' already exists");
    }
    templates_.push_back(std::move(t));
}

const Template* TemplateStore::find(const std::string& label) const noexcept {
    for (const auto& t : templates_) {
        if (t.label == label) return &t;
    }
    return nullptr;
}

int TemplateStore::max_suppress_trailing() const noexcept {
    int k = 0;
    for (const auto& t : templates_) k = std::max(k, t.suppress_trailing);
    return k;
}

void save_templates(const TemplateStore& store, std::ostream& out) {
    out << "imurep-templates " << kTemplateFormatVersion << '\n';
    for (const auto& t : store) {
        out << "template\n";
        out << "label " << t.label << '\n';
        out << "sample_rate_hz " << format_double(t.data.sample_rate_hz()) << '\n';
        out << "suppress_trailing " << t.suppress_trailing << '\n';
        if (t.threshold_override) {
            out << "threshold_override " << format_double(*t.threshold_override) << '\n';
        }
        if (t.match_weight_override) {
            out << "match_weight " << format_double(*t.match_weight_override) << '\n';
        }
        out << "samples " << t.data.size() << '\n';
        for (const auto& v : t.data.samples()) {
            out << format_double(v.x) << ' ' << format_double(v.y) << ' ' << format_double(v.z)
                << '\n';
        }
        out << "end\n";
    }
}

void save_templates(const TemplateStore& store, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw InputError("cannot open '" + path.string() + "' for writing");
    }
    save_templates(store, out);
    if (!out) {
        throw InputError("failed writing '" + path.string() + "'");
    }
}

namespace {

class LineReader {
public:
    explicit LineReader(std::istream& in) : in_(in) {}

    // Next non-blank, non-comment line, trimmed. False at end of input.
    bool next(std::string_view& line) {
        while (std::getline(in_, buf_)) {
            ++number_;
            line = trim(buf_);
            if (!line.empty() && line.front() != '#') return true;
        }
        return false;
    }
    std::size_t number() const noexcept { return number_; }

private:
    std::istream& in_;
    std::string buf_;
    std::size_t number_ = 0;
};

std::pair<std::string_view, std::string_view> key_value(std::string_view line) {
    const auto sp = line.find_first_of(" \t");
    if (sp == std::string_view::npos) return {line, {}};
    return {line.substr(0, sp), trim(line.substr(sp + 1))};
}

Template read_template(LineReader& reader) {
    std::string_view line;
    std::optional<std::string> label;
    std::optional<double> rate;
    int suppress = 0;
    std::optional<double> threshold;
    std::optional<double> weight;
    while (true) {
        if (!reader.next(line)) {
            throw ParseError(reader.number(), "unexpected end of file inside template block");
        }
        const auto [key, value] = key_value(line);
        const std::size_t ln = reader.number();
        if (key == "label") {
            label = std::string(value);
            try {
                validate_label(*label);
            } catch (const InputError& e) {
                throw ParseError(ln, e.what());
            }
        } else if (key == "sample_rate_hz") {
            rate = parse_double(value, ln, "sample_rate_hz");
            if (*rate <= 0.0) throw ParseError(ln, "sample_rate_hz must be positive");
        } else if (key == "suppress_trailing") {
            const auto k = parse_int(value, ln, "suppress_trailing");
            if (k < 0 || k > 1000) throw ParseError(ln, "suppress_trailing out of range");
            suppress = static_cast<int>(k);
        } else if (key == "threshold_override") {
            threshold = parse_double(value, ln, "threshold_override");
            if (*threshold < 0.0) throw ParseError(ln, "threshold_override must be non-negative");
        } else if (key == "match_weight") {
            weight = parse_double(value, ln, "match_weight");
            if (*weight <= 0.0 || *weight > 1.0) {
                throw ParseError(ln, "match_weight must lie in (0, 1]");
            }
        } else if (key == "samples") {
            if (!label) throw ParseError(ln, "template block is missing 'label'");
            if (!rate) throw ParseError(ln, "template block is missing 'sample_rate_hz'");
            const auto count = parse_int(value, ln, "samples");
            if (count < 2) throw ParseError(ln, "a template needs at least 2 samples");
            std::vector<Vec3> data;
            data.reserve(static_cast<std::size_t>(count));
            for (std::int64_t k = 0; k < count; ++k) {
                if (!reader.next(line)) {
                    throw ParseError(reader.number(), "unexpected end of file in sample rows");
                }
                const std::size_t row = reader.number();
                const auto fields = split_ws(line);
                if (fields.size() != 3) {
                    throw ParseError(row, "sample row needs 3 fields, found " +
                                              std::to_string(fields.size()));
                }
                data.push_back({parse_double(fields[0], row, "ax"),
                                parse_double(fields[1], row, "ay"),
                                parse_double(fields[2], row, "az")});
            }
            if (!reader.next(line) || line != "end") {
                throw ParseError(reader.number(), "expected 'end' after sample rows");
            }
            Template t(*label, TriaxialSeries(*rate, std::move(data)), suppress);
            t.threshold_override = threshold;
            t.match_weight_override = weight;
            return t;
        } else {
            throw ParseError(ln, "unknown template field '" + std::string(key) + "'");
        }
    }
}

}  // namespace

TemplateStore load_templates(std::istream& in) {
    LineReader reader(in);
    std::string_view line;
    TemplateStore store;
    if (!reader.next(line)) {
        throw ParseError(reader.number(), "empty template file (missing header)");
    }
    const auto [magic, version] = key_value(line);
    if (magic != "imurep-templates") {
        throw ParseError(reader.number(), "not a template file (missing 'imurep-templates' header)");
    }
    const auto v = parse_int(version, reader.number(), "version");
    if (v != kTemplateFormatVersion) {
        throw FormatVersionError(reader.number(),
                                 "unsupported template format version " + std::to_string(v) +
                                     " (expected " + std::to_string(kTemplateFormatVersion) + ")");
    }
    while (reader.next(line)) {
        if (line != "template") {
            throw ParseError(reader.number(), "expected 'template', found '" + std::string(line) + "'");
        }
        const std::size_t block_line = reader.number();
        Template t = read_template(reader);
        try {
            store.add(std::move(t));
        } catch (const DuplicateLabelError& e) {
            throw ParseError(block_line, e.what());
        }
    }
    return store;
}

TemplateStore load_templates(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw InputError("cannot open template file '" + path.string() + "'");
    }
    return load_templates(in);
}

}  // namespace imurep
