#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fcagenda/context.hpp"

namespace fcagenda {

enum class AttributeKind { categorical, numeric };

struct Attribute {
  std::string name;
  AttributeKind kind = AttributeKind::categorical;
};

// Rectangular many-valued table: cells[object][attribute] holds the raw text.
struct ManyValuedContext {
  std::vector<std::string> objects;
  std::vector<Attribute> attributes;
  std::vector<std::vector<std::string>> cells;

  std::optional<std::size_t> attribute_index(std::string_view name) const;
};

struct TableOptions {
  // Column routed to `ParsedTable::labels` instead of the attributes.
  std::optional<std::string> label_column;
  // Fail when the label column is missing (training, evaluation).
  bool require_label = false;
  // Header-only input yields an empty table instead of an error.
  bool allow_empty = false;
  std::map<std::string, AttributeKind> kind_overrides;
};

struct ParsedTable {
  ManyValuedContext data;
  std::optional<std::vector<std::string>> labels;
};

// First row is the header, first column holds object identifiers. An
// attribute is numeric iff every non-empty cell parses as a decimal number.
ParsedTable parse_table(std::string_view text, const TableOptions& options = {});

enum class ScaleKind { nominal, ordinal };

struct AttributeScale {
  std::string name;
  AttributeKind kind = AttributeKind::categorical;
  ScaleKind scale = ScaleKind::nominal;
  // nominal: one feature per value, in order of first appearance. Numeric
  // values are stored in canonical shortest form.
  std::vector<std::string> values;
  // ordinal: strictly increasing cuts; bin i is (cuts[i-1], cuts[i]], the
  // first bin is unbounded below, the last unbounded above.
  std::vector<double> cuts;
  std::vector<std::string> labels;

  std::size_t feature_count() const {
    return scale == ScaleKind::nominal ? values.size() : labels.size();
  }
  std::string feature_name(std::size_t k) const;
  // Index of the feature within this attribute's block that `raw` maps to.
  std::size_t locate(std::string_view raw) const;
};

struct AttributeGroup {
  std::string attribute;
  std::size_t first = 0;
  std::size_t count = 0;
};

// Attribute name -> contiguous block of scaled feature indices.
class AttributeGroups {
 public:
  AttributeGroups() = default;
  explicit AttributeGroups(std::vector<AttributeGroup> groups);

  std::size_t size() const noexcept { return groups_.size(); }
  std::size_t feature_count() const noexcept { return feature_count_; }
  const std::vector<AttributeGroup>& groups() const noexcept { return groups_; }
  const AttributeGroup& operator[](std::size_t i) const { return groups_[i]; }
  std::optional<std::size_t> find(std::string_view attribute) const;

  FeatureSet block(std::size_t group) const;
  // Union of the given groups' blocks.
  FeatureSet blocks(const std::vector<std::size_t>& group_indices) const;
  // Groups whose block intersects `features`.
  std::vector<std::size_t> groups_touching(const FeatureSet& features) const;
  bool is_block_union(const FeatureSet& features) const;

  friend bool operator==(const AttributeGroups&, const AttributeGroups&) = default;

 private:
  std::vector<AttributeGroup> groups_;
  std::size_t feature_count_ = 0;
};

struct ScalingSpec {
  std::vector<AttributeScale> attributes;
  // Non-fatal notes such as a tercile fallback to nominal scaling.
  std::vector<std::string> warnings;

  std::vector<std::string> feature_names() const;
  AttributeGroups groups() const;
  std::optional<std::size_t> attribute_index(std::string_view name) const;
};

enum class ScalingStrategy { nominal_only, terciles, explicit_cuts };

struct ScalingOptions {
  ScalingStrategy strategy = ScalingStrategy::terciles;
  std::map<std::string, std::vector<double>> explicit_cuts;
};

// Type-7 (linear interpolation) sample quantile, 0 <= p <= 1.
double quantile_type7(std::vector<double> sample, double p);

ScalingSpec build_scaling_spec(const ManyValuedContext& mv, const ScalingOptions& options = {});

struct ScaledContext {
  FormalContext context;
  AttributeGroups groups;
};

ScaledContext apply_scaling(const ManyValuedContext& mv, const ScalingSpec& spec);

// `row` maps attribute name to raw value and must cover every attribute.
FeatureSet scale_object(const ScalingSpec& spec, const std::map<std::string, std::string>& row);
// Values given in the spec's attribute order.
FeatureSet scale_object(const ScalingSpec& spec, const std::vector<std::string>& values);

}  // namespace fcagenda
