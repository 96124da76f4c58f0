#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "fcagenda/context.hpp"

namespace fcagenda {

struct Concept {
  ObjectSet extent;
  FeatureSet intent;

  friend bool operator==(const Concept&, const Concept&) = default;
};

struct EnumerationOptions {
  std::size_t max_concepts = 1'000'000;
};

// All formal concepts of one context, ordered lexicographically by extent.
// When the context was induced by an agenda, the agenda (over the parent's
// feature universe) is kept so parent intents can be restricted.
class ConceptLattice {
 public:
  ConceptLattice(FormalContext context, std::vector<Concept> concepts,
                 std::optional<FeatureSet> agenda = std::nullopt);

  const FormalContext& context() const noexcept { return context_; }
  std::span<const Concept> concepts() const noexcept { return concepts_; }
  std::size_t size() const noexcept { return concepts_.size(); }
  const Concept& operator[](std::size_t i) const { return concepts_[i]; }
  const std::optional<FeatureSet>& agenda() const noexcept { return agenda_; }

  // Concept with extent A (last in canonical order).
  const Concept& top() const { return concepts_.back(); }
  // Concept with the smallest extent (first in canonical order).
  const Concept& bottom() const { return concepts_.front(); }

  // Local feature set for an intent given over this lattice's own features
  // or, when an agenda is attached, over the parent context's features.
  FeatureSet local_intent(const FeatureSet& intent) const;

 private:
  FormalContext context_;
  std::vector<Concept> concepts_;
  std::optional<FeatureSet> agenda_;
};

// Close-by-One depth-first enumeration with the canonicity test. Throws
// ConceptCapExceeded once more than options.max_concepts are found.
ConceptLattice enumerate_concepts(const FormalContext& context,
                                  const EnumerationOptions& options = {});

// Lattice of the subcontext induced by `agenda`, tagged with that agenda.
ConceptLattice enumerate_agenda_lattice(const FormalContext& context, const FeatureSet& agenda,
                                        const EnumerationOptions& options = {});

// c <= d iff extent(c) is contained in extent(d).
inline bool concept_leq(const Concept& c, const Concept& d) {
  return c.extent.is_subset_of(d.extent);
}

bool is_concept(const FormalContext& context, const ObjectSet& extent, const FeatureSet& intent);

}  // namespace fcagenda
