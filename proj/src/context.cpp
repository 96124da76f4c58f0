#include "fcagenda/context.hpp"

#include "fcagenda/error.hpp"

namespace fcagenda {
namespace {

std::unordered_map<std::string, std::size_t> index_names(const std::vector<std::string>& names,
                                                         const char* what) {
  std::unordered_map<std::string, std::size_t> lookup;
  lookup.reserve(names.size());
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (!lookup.emplace(names[i], i).second) {
      throw FormatError(std::string("duplicate ") + what + " identifier '" + names[i] + "'");
    }
  }
  return lookup;
}

}  // namespace

FormalContext::FormalContext(std::vector<std::string> objects, std::vector<std::string> features,
                             std::vector<FeatureSet> rows)
    : objects_(std::move(objects)), features_(std::move(features)), rows_(std::move(rows)) {
  object_lookup_ = index_names(objects_, "object");
  feature_lookup_ = index_names(features_, "feature");
  build_columns();
}

void FormalContext::build_columns() {
  columns_.assign(features_.size(), ObjectSet(objects_.size()));
  for (std::size_t a = 0; a < rows_.size(); ++a) {
    rows_[a].for_each([&](std::size_t x) { columns_[x].insert(a); });
  }
}

FormalContext FormalContext::create(std::vector<std::string> objects,
                                    std::vector<std::string> features,
                                    std::span<const IncidencePair> incidence) {
  if (objects.empty()) throw FormatError("context needs at least one object");
  if (features.empty()) throw FormatError("context needs at least one feature");
  std::vector<FeatureSet> rows(objects.size(), FeatureSet(features.size()));
  for (const auto& [a, x] : incidence) {
    if (a >= objects.size() || x >= features.size()) {
      throw FormatError("incidence pair (" + std::to_string(a) + ", " + std::to_string(x) +
                        ") out of range");
    }
    rows[a].insert(x);
  }
  return FormalContext(std::move(objects), std::move(features), std::move(rows));
}

FormalContext FormalContext::from_rows(std::vector<std::string> objects,
                                       std::vector<std::string> features,
                                       std::vector<FeatureSet> rows) {
  if (objects.empty()) throw FormatError("context needs at least one object");
  if (features.empty()) throw FormatError("context needs at least one feature");
  if (rows.size() != objects.size()) throw FormatError("one feature row per object required");
  for (const auto& r : rows) {
    if (r.universe() != features.size()) throw FormatError("feature row over the wrong universe");
  }
  return FormalContext(std::move(objects), std::move(features), std::move(rows));
}

std::optional<std::size_t> FormalContext::object_index(const std::string& name) const {
  auto it = object_lookup_.find(name);
  if (it == object_lookup_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> FormalContext::feature_index(const std::string& name) const {
  auto it = feature_lookup_.find(name);
  if (it == feature_lookup_.end()) return std::nullopt;
  return it->second;
}

FeatureSet FormalContext::derive_intent(const ObjectSet& objects) const {
  assert(objects.universe() == object_count());
  FeatureSet intent = all_features();
  objects.for_each([&](std::size_t a) { intent &= rows_[a]; });
  return intent;
}

ObjectSet FormalContext::derive_extent(const FeatureSet& features) const {
  assert(features.universe() == feature_count());
  ObjectSet extent = all_objects();
  features.for_each([&](std::size_t x) { extent &= columns_[x]; });
  return extent;
}

FeatureSet FormalContext::restrict_to(const FeatureSet& agenda, const FeatureSet& intent) {
  assert(agenda.universe() == intent.universe());
  FeatureSet local(agenda.count());
  std::size_t k = 0;
  agenda.for_each([&](std::size_t x) {
    if (intent.contains(x)) local.insert(k);
    ++k;
  });
  return local;
}

FormalContext FormalContext::induce(const FeatureSet& agenda) const {
  assert(agenda.universe() == feature_count());
  std::vector<std::string> names;
  agenda.for_each([&](std::size_t x) { names.push_back(features_[x]); });
  std::vector<FeatureSet> rows;
  rows.reserve(objects_.size());
  for (const auto& r : rows_) rows.push_back(restrict_to(agenda, r));
  return FormalContext(objects_, std::move(names), std::move(rows));
}

}  // namespace fcagenda
