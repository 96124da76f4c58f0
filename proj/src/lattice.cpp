#include "fcagenda/lattice.hpp"

#include <algorithm>

#include "fcagenda/error.hpp"

namespace fcagenda {

ConceptLattice::ConceptLattice(FormalContext context, std::vector<Concept> concepts,
                               std::optional<FeatureSet> agenda)
    : context_(std::move(context)), concepts_(std::move(concepts)), agenda_(std::move(agenda)) {
  std::sort(concepts_.begin(), concepts_.end(),
            [](const Concept& a, const Concept& b) { return a.extent < b.extent; });
}

FeatureSet ConceptLattice::local_intent(const FeatureSet& intent) const {
  if (agenda_ && intent.universe() == agenda_->universe()) {
    return FormalContext::restrict_to(*agenda_, intent);
  }
  if (intent.universe() != context_.feature_count()) {
    throw FormatError("intent does not match the lattice's feature universe");
  }
  return intent;
}

namespace {

class CloseByOne {
 public:
  CloseByOne(const FormalContext& ctx, std::size_t cap) : ctx_(ctx), cap_(cap) {}

  std::vector<Concept> run() {
    ObjectSet extent = ctx_.all_objects();
    FeatureSet intent = ctx_.derive_intent(extent);
    descend(std::move(extent), std::move(intent), 0);
    return std::move(out_);
  }

 private:
  void descend(ObjectSet extent, FeatureSet intent, std::size_t start) {
    if (out_.size() == cap_) throw ConceptCapExceeded(cap_, out_.size());
    out_.push_back({extent, intent});
    const std::size_t m = ctx_.feature_count();
    for (std::size_t j = start; j < m; ++j) {
      if (intent.contains(j)) continue;
      ObjectSet child = extent & ctx_.column(j);
      FeatureSet child_intent = ctx_.derive_intent(child);
      // canonical iff the closure adds no feature below j
      if (child_intent.equal_below(intent, j)) {
        descend(std::move(child), std::move(child_intent), j + 1);
      }
    }
  }

  const FormalContext& ctx_;
  std::size_t cap_;
  std::vector<Concept> out_;
};

}  // namespace

ConceptLattice enumerate_concepts(const FormalContext& context,
                                  const EnumerationOptions& options) {
  return ConceptLattice(context, CloseByOne(context, options.max_concepts).run());
}

ConceptLattice enumerate_agenda_lattice(const FormalContext& context, const FeatureSet& agenda,
                                        const EnumerationOptions& options) {
  FormalContext sub = context.induce(agenda);
  auto concepts = CloseByOne(sub, options.max_concepts).run();
  return ConceptLattice(std::move(sub), std::move(concepts), agenda);
}

bool is_concept(const FormalContext& context, const ObjectSet& extent, const FeatureSet& intent) {
  return context.derive_intent(extent) == intent && context.derive_extent(intent) == extent;
}

}  // namespace fcagenda
