#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "fcagenda/index_set.hpp"

namespace fcagenda {

using IncidencePair = std::pair<std::size_t, std::size_t>;  // (object, feature)

// Binary formal context (objects, features, incidence). The relation is
// stored twice: one feature row per object and one object column per
// feature. Immutable after construction.
class FormalContext {
 public:
  // Empty context (no objects, no features).
  FormalContext() = default;

  // Both identifier lists must be non-empty and duplicate-free; throws
  // FormatError otherwise or when a pair is out of range.
  static FormalContext create(std::vector<std::string> objects, std::vector<std::string> features,
                              std::span<const IncidencePair> incidence);

  // Same validation, incidence given as one feature row per object.
  static FormalContext from_rows(std::vector<std::string> objects,
                                 std::vector<std::string> features, std::vector<FeatureSet> rows);

  std::size_t object_count() const noexcept { return objects_.size(); }
  std::size_t feature_count() const noexcept { return features_.size(); }
  const std::vector<std::string>& objects() const noexcept { return objects_; }
  const std::vector<std::string>& features() const noexcept { return features_; }
  std::optional<std::size_t> object_index(const std::string& name) const;
  std::optional<std::size_t> feature_index(const std::string& name) const;

  const FeatureSet& row(std::size_t object) const { return rows_[object]; }
  const ObjectSet& column(std::size_t feature) const { return columns_[feature]; }
  bool incident(std::size_t object, std::size_t feature) const {
    return rows_[object].contains(feature);
  }

  ObjectSet all_objects() const { return ObjectSet::full(object_count()); }
  FeatureSet all_features() const { return FeatureSet::full(feature_count()); }
  ObjectSet no_objects() const { return ObjectSet(object_count()); }
  FeatureSet no_features() const { return FeatureSet(feature_count()); }

  // Features shared by every object of `objects`; all features for the empty set.
  FeatureSet derive_intent(const ObjectSet& objects) const;
  // Objects having every feature of `features`; all objects for the empty set.
  ObjectSet derive_extent(const FeatureSet& features) const;

  ObjectSet closure_objects(const ObjectSet& objects) const {
    return derive_extent(derive_intent(objects));
  }
  FeatureSet closure_features(const FeatureSet& features) const {
    return derive_intent(derive_extent(features));
  }

  // Subcontext restricted to the agenda's features. Objects are unchanged,
  // feature k of the result is the k-th member of `agenda` (ascending) and
  // keeps its name. An empty agenda yields a context without features.
  FormalContext induce(const FeatureSet& agenda) const;

  // Maps an intent over this context's features onto the features of
  // induce(agenda).
  static FeatureSet restrict_to(const FeatureSet& agenda, const FeatureSet& intent);

 private:
  FormalContext(std::vector<std::string> objects, std::vector<std::string> features,
                std::vector<FeatureSet> rows);
  void build_columns();

  std::vector<std::string> objects_;
  std::vector<std::string> features_;
  std::vector<FeatureSet> rows_;
  std::vector<ObjectSet> columns_;
  std::unordered_map<std::string, std::size_t> object_lookup_;
  std::unordered_map<std::string, std::size_t> feature_lookup_;
};

}  // namespace fcagenda
