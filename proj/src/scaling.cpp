#include "fcagenda/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_set>

#include "fcagenda/csv.hpp"
#include "fcagenda/error.hpp"
#include "fcagenda/numeric_text.hpp"

namespace fcagenda {

std::optional<std::size_t> ManyValuedContext::attribute_index(std::string_view name) const {
  for (std::size_t i = 0; i < attributes.size(); ++i) {
    if (attributes[i].name == name) return i;
  }
  return std::nullopt;
}

ParsedTable parse_table(std::string_view text, const TableOptions& options) {
  const std::vector<CsvRow> rows = parse_csv(text);
  if (rows.empty()) {
    if (options.allow_empty && !options.require_label) return {};
    throw FormatError("empty table");
  }
  const CsvRow& header = rows.front();

  std::optional<std::size_t> label_col;
  if (options.label_column) {
    for (std::size_t c = 1; c < header.size(); ++c) {
      if (header[c] == *options.label_column) label_col = c;
    }
    if (!label_col && options.require_label) {
      throw FormatError("missing label column '" + *options.label_column + "'");
    }
  }

  ParsedTable out;
  std::vector<std::size_t> attr_cols;
  std::unordered_set<std::string> seen_names;
  for (std::size_t c = 1; c < header.size(); ++c) {
    if (label_col && c == *label_col) continue;
    if (!seen_names.insert(header[c]).second) {
      throw FormatError("duplicate column name '" + header[c] + "'");
    }
    attr_cols.push_back(c);
    out.data.attributes.push_back({header[c], AttributeKind::categorical});
  }

  if (rows.size() == 1 && !options.allow_empty) throw FormatError("empty table");

  std::unordered_set<std::string> seen_ids;
  if (label_col) out.labels.emplace();
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const CsvRow& row = rows[r];
    if (row.size() != header.size()) {
      throw FormatError("ragged row " + std::to_string(r + 1) + ": expected " +
                        std::to_string(header.size()) + " fields, got " +
                        std::to_string(row.size()));
    }
    if (!seen_ids.insert(row[0]).second) {
      throw FormatError("duplicate object id '" + row[0] + "'");
    }
    out.data.objects.push_back(row[0]);
    std::vector<std::string> cells;
    cells.reserve(attr_cols.size());
    for (std::size_t c : attr_cols) cells.push_back(row[c]);
    out.data.cells.push_back(std::move(cells));
    if (label_col) out.labels->push_back(row[*label_col]);
  }

  for (std::size_t j = 0; j < out.data.attributes.size(); ++j) {
    Attribute& attr = out.data.attributes[j];
    if (auto it = options.kind_overrides.find(attr.name); it != options.kind_overrides.end()) {
      attr.kind = it->second;
      continue;
    }
    bool any = false;
    bool all_numeric = true;
    for (const auto& cells : out.data.cells) {
      if (cells[j].empty()) continue;
      any = true;
      if (!parse_double(cells[j])) {
        all_numeric = false;
        break;
      }
    }
    attr.kind = (any && all_numeric) ? AttributeKind::numeric : AttributeKind::categorical;
  }
  return out;
}

std::string AttributeScale::feature_name(std::size_t k) const {
  return name + "=" + (scale == ScaleKind::nominal ? values.at(k) : labels.at(k));
}

std::size_t AttributeScale::locate(std::string_view raw) const {
  if (raw.empty()) throw FormatError("missing value for attribute '" + name + "'");
  if (scale == ScaleKind::ordinal) {
    auto v = parse_double(raw);
    if (!v) {
      throw FormatError("non-numeric value '" + std::string(raw) + "' for attribute '" + name +
                        "'");
    }
    auto it = std::lower_bound(cuts.begin(), cuts.end(), *v);
    return static_cast<std::size_t>(it - cuts.begin());
  }
  std::string key(raw);
  if (kind == AttributeKind::numeric) {
    if (auto v = parse_double(raw)) key = format_double(*v);
  }
  auto it = std::find(values.begin(), values.end(), key);
  if (it == values.end()) {
    throw UnknownValueError("unknown value '" + std::string(raw) + "' for attribute '" + name +
                            "'");
  }
  return static_cast<std::size_t>(it - values.begin());
}

AttributeGroups::AttributeGroups(std::vector<AttributeGroup> groups) : groups_(std::move(groups)) {
  std::size_t next = 0;
  for (const auto& g : groups_) {
    if (g.first != next || g.count == 0) {
      throw FormatError("attribute groups must be non-empty contiguous blocks");
    }
    next += g.count;
  }
  feature_count_ = next;
}

std::optional<std::size_t> AttributeGroups::find(std::string_view attribute) const {
  for (std::size_t i = 0; i < groups_.size(); ++i) {
    if (groups_[i].attribute == attribute) return i;
  }
  return std::nullopt;
}

FeatureSet AttributeGroups::block(std::size_t group) const {
  FeatureSet s(feature_count_);
  const auto& g = groups_.at(group);
  for (std::size_t k = 0; k < g.count; ++k) s.insert(g.first + k);
  return s;
}

FeatureSet AttributeGroups::blocks(const std::vector<std::size_t>& group_indices) const {
  FeatureSet s(feature_count_);
  for (std::size_t g : group_indices) s |= block(g);
  return s;
}

std::vector<std::size_t> AttributeGroups::groups_touching(const FeatureSet& features) const {
  std::vector<std::size_t> out;
  for (std::size_t g = 0; g < groups_.size(); ++g) {
    if (block(g).intersects(features)) out.push_back(g);
  }
  return out;
}

bool AttributeGroups::is_block_union(const FeatureSet& features) const {
  for (std::size_t g = 0; g < groups_.size(); ++g) {
    const FeatureSet b = block(g);
    if (b.intersects(features) && !b.is_subset_of(features)) return false;
  }
  return true;
}

std::vector<std::string> ScalingSpec::feature_names() const {
  std::vector<std::string> names;
  for (const auto& a : attributes) {
    for (std::size_t k = 0; k < a.feature_count(); ++k) names.push_back(a.feature_name(k));
  }
  return names;
}

AttributeGroups ScalingSpec::groups() const {
  std::vector<AttributeGroup> groups;
  std::size_t first = 0;
  for (const auto& a : attributes) {
    groups.push_back({a.name, first, a.feature_count()});
    first += a.feature_count();
  }
  return AttributeGroups(std::move(groups));
}

std::optional<std::size_t> ScalingSpec::attribute_index(std::string_view name) const {
  for (std::size_t i = 0; i < attributes.size(); ++i) {
    if (attributes[i].name == name) return i;
  }
  return std::nullopt;
}

double quantile_type7(std::vector<double> sample, double p) {
  if (sample.empty()) throw FormatError("quantile of an empty sample");
  std::sort(sample.begin(), sample.end());
  const double h = (static_cast<double>(sample.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sample.size() - 1);
  return sample[lo] + (h - static_cast<double>(lo)) * (sample[hi] - sample[lo]);
}

namespace {

std::vector<std::string> ordinal_labels(std::size_t bins) {
  if (bins == 3) return {"Low", "Medium", "High"};
  if (bins == 2) return {"Low", "High"};
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < bins; ++i) labels.push_back("bin" + std::to_string(i));
  return labels;
}

AttributeScale nominal_scale(const ManyValuedContext& mv, std::size_t j) {
  AttributeScale s;
  s.name = mv.attributes[j].name;
  s.kind = mv.attributes[j].kind;
  s.scale = ScaleKind::nominal;
  std::set<std::string> seen;
  for (const auto& row : mv.cells) {
    std::string v = row[j];
    if (v.empty()) throw FormatError("missing value for attribute '" + s.name + "'");
    if (s.kind == AttributeKind::numeric) v = format_double(*parse_double(v));
    if (seen.insert(v).second) s.values.push_back(std::move(v));
  }
  return s;
}

std::vector<double> numeric_column(const ManyValuedContext& mv, std::size_t j) {
  std::vector<double> values;
  values.reserve(mv.cells.size());
  for (const auto& row : mv.cells) {
    auto v = parse_double(row[j]);
    if (!v) {
      throw FormatError("missing or non-numeric value in numeric attribute '" +
                        mv.attributes[j].name + "'");
    }
    values.push_back(*v);
  }
  return values;
}

}  // namespace

ScalingSpec build_scaling_spec(const ManyValuedContext& mv, const ScalingOptions& options) {
  ScalingSpec spec;
  for (const auto& [name, cuts] : options.explicit_cuts) {
    if (!mv.attribute_index(name)) throw FormatError("cut points for unknown attribute '" + name + "'");
  }
  for (std::size_t j = 0; j < mv.attributes.size(); ++j) {
    const Attribute& attr = mv.attributes[j];
    if (attr.kind == AttributeKind::categorical ||
        options.strategy == ScalingStrategy::nominal_only) {
      spec.attributes.push_back(nominal_scale(mv, j));
      continue;
    }
    const std::vector<double> values = numeric_column(mv, j);
    AttributeScale s;
    s.name = attr.name;
    s.kind = AttributeKind::numeric;
    s.scale = ScaleKind::ordinal;

    if (options.strategy == ScalingStrategy::explicit_cuts) {
      auto it = options.explicit_cuts.find(attr.name);
      if (it == options.explicit_cuts.end() || it->second.empty()) {
        throw FormatError("no cut points given for numeric attribute '" + attr.name + "'");
      }
      s.cuts = it->second;
      for (std::size_t i = 1; i < s.cuts.size(); ++i) {
        if (!(s.cuts[i - 1] < s.cuts[i])) {
          throw FormatError("cut points for '" + attr.name + "' must be strictly increasing");
        }
      }
    } else {
      const std::set<double> distinct(values.begin(), values.end());
      if (distinct.size() < 3) {
        spec.warnings.push_back("attribute '" + attr.name + "' has " +
                                std::to_string(distinct.size()) +
                                " distinct values; scaled nominally instead of by terciles");
        spec.attributes.push_back(nominal_scale(mv, j));
        continue;
      }
      const double lo = quantile_type7(values, 1.0 / 3.0);
      const double hi = quantile_type7(values, 2.0 / 3.0);
      s.cuts.push_back(lo);
      if (hi > lo) {
        s.cuts.push_back(hi);
      } else {
        spec.warnings.push_back("attribute '" + attr.name +
                                "': tercile cuts coincide; using two bins");
      }
    }
    s.labels = ordinal_labels(s.cuts.size() + 1);
    spec.attributes.push_back(std::move(s));
  }
  return spec;
}

ScaledContext apply_scaling(const ManyValuedContext& mv, const ScalingSpec& spec) {
  if (mv.objects.empty()) throw FormatError("empty table");
  std::vector<std::size_t> column_of;
  for (const auto& a : spec.attributes) {
    auto j = mv.attribute_index(a.name);
    if (!j) throw FormatError("data lacks attribute '" + a.name + "'");
    column_of.push_back(*j);
  }
  const AttributeGroups groups = spec.groups();
  std::vector<FeatureSet> rows;
  rows.reserve(mv.objects.size());
  for (const auto& cells : mv.cells) {
    FeatureSet row(groups.feature_count());
    for (std::size_t i = 0; i < spec.attributes.size(); ++i) {
      row.insert(groups[i].first + spec.attributes[i].locate(cells[column_of[i]]));
    }
    rows.push_back(std::move(row));
  }
  return {FormalContext::from_rows(mv.objects, spec.feature_names(), std::move(rows)), groups};
}

FeatureSet scale_object(const ScalingSpec& spec, const std::vector<std::string>& values) {
  if (values.size() != spec.attributes.size()) {
    throw FormatError("expected " + std::to_string(spec.attributes.size()) + " attribute values, got " +
                      std::to_string(values.size()));
  }
  const AttributeGroups groups = spec.groups();
  FeatureSet row(groups.feature_count());
  for (std::size_t i = 0; i < spec.attributes.size(); ++i) {
    row.insert(groups[i].first + spec.attributes[i].locate(values[i]));
  }
  return row;
}

FeatureSet scale_object(const ScalingSpec& spec, const std::map<std::string, std::string>& row) {
  std::vector<std::string> values;
  values.reserve(spec.attributes.size());
  for (const auto& a : spec.attributes) {
    auto it = row.find(a.name);
    if (it == row.end()) throw FormatError("missing attribute '" + a.name + "'");
    values.push_back(it->second);
  }
  return scale_object(spec, values);
}

}  // namespace fcagenda
