#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "imurep/dtw.hpp"
#include "imurep/segmentation.hpp"

namespace imurep {

/// Labels are non-empty and whitespace-free so every text format can carry
/// them as a single token.
void validate_label(const std::string& label);

struct Template {
    std::string label;
    TriaxialSeries data;
    AxisStats stats;
    int suppress_trailing = 0;
    std::optional<double> threshold_override;
    std::optional<double> match_weight_override;

    Template(std::string label, TriaxialSeries data, int suppress_trailing = 0);

    friend bool operator==(const Template&, const Template&) = default;
};

/// Wraps the segment's raw samples verbatim.
Template make_template(const Segment& segment, const std::string& label,
                       int suppress_trailing = 0);

class TemplateStore {
public:
    TemplateStore() = default;

    /// Throws DuplicateLabelError if the label is already present.
    void add(Template t);
    const Template* find(const std::string& label) const noexcept;

    std::size_t size() const noexcept { return templates_.size(); }
    bool empty() const noexcept { return templates_.empty(); }
    int max_suppress_trailing() const noexcept;

    auto begin() const noexcept { return templates_.begin(); }
    auto end() const noexcept { return templates_.end(); }
    const Template& operator[](std::size_t i) const { return templates_[i]; }

    friend bool operator==(const TemplateStore&, const TemplateStore&) = default;

private:
    std::vector<Template> templates_;
};

inline constexpr int kTemplateFormatVersion = 1;

// File layout:
//   imurep-templates <version>
//   template
//   label <name>
//   sample_rate_hz <r>
//   suppress_trailing <k>
//   [threshold_override <v>]
//   [match_weight <w>]
//   samples <n>
//   <ax> <ay> <az>        (n rows)
//   end
// Blank lines and '#' comments are ignored. Numbers use the shortest
// decimal form that reads back to the identical double.
void save_templates(const TemplateStore& store, std::ostream& out);
void save_templates(const TemplateStore& store, const std::filesystem::path& path);
TemplateStore load_templates(std::istream& in);
TemplateStore load_templates(const std::filesystem::path& path);

}  // namespace imurep
