#include "fcagenda/learners.hpp"

#include <algorithm>

#include "fcagenda/error.hpp"

namespace fcagenda {

LabeledSplit LabeledSplit::make(ObjectSet positives, ObjectSet negatives, ObjectSet unlabeled) {
  if (positives.universe() != negatives.universe() ||
      positives.universe() != unlabeled.universe()) {
    throw FormatError("labeled split sets over different universes");
  }
  if (positives.intersects(negatives) || positives.intersects(unlabeled) ||
      negatives.intersects(unlabeled)) {
    throw FormatError("labeled split sets must be pairwise disjoint");
  }
  return {std::move(positives), std::move(negatives), std::move(unlabeled)};
}

LabeledSplit LabeledSplit::one_vs_rest(std::span<const std::size_t> labels, std::size_t k) {
  LabeledSplit s{ObjectSet(labels.size()), ObjectSet(labels.size()), ObjectSet(labels.size())};
  for (std::size_t a = 0; a < labels.size(); ++a) {
    if (labels[a] == kUnlabeled) {
      s.unlabeled.insert(a);
    } else if (labels[a] == k) {
      s.positives.insert(a);
    } else {
      s.negatives.insert(a);
    }
  }
  return s;
}

namespace {

bool is_hypothesis(const ConceptLattice& lattice, const Concept& c, const ObjectSet& own,
                   const ObjectSet& opposite, JsmMode mode) {
  if (mode == JsmMode::strict) {
    // An extent made only of unlabeled objects would otherwise count for
    // both signs, so it must meet the own class as well.
    return !c.extent.empty() && !c.extent.intersects(opposite) && c.extent.intersects(own);
  }
  if (!c.extent.intersects(own)) return false;
  const FormalContext& ctx = lattice.context();
  bool contained_in_opposite = false;
  opposite.for_each([&](std::size_t a) {
    if (!contained_in_opposite && c.intent.is_subset_of(ctx.row(a))) contained_in_opposite = true;
  });
  return !contained_in_opposite;
}

std::vector<FeatureSet> hypotheses(const ConceptLattice& lattice, const ObjectSet& own,
                                   const ObjectSet& opposite, JsmMode mode) {
  std::vector<FeatureSet> out;
  if (lattice.context().feature_count() == 0) return out;
  for (const Concept& c : lattice.concepts()) {
    if (is_hypothesis(lattice, c, own, opposite, mode)) out.push_back(c.intent);
  }
  return out;
}

JsmVerdict decide(const std::vector<FeatureSet>& positive, const std::vector<FeatureSet>& negative,
                  const FeatureSet& query) {
  JsmVerdict v;
  for (const auto& h : positive) {
    if (h.is_subset_of(query)) v.positive_witnesses.push_back(h);
  }
  for (const auto& h : negative) {
    if (h.is_subset_of(query)) v.negative_witnesses.push_back(h);
  }
  const bool pos = !v.positive_witnesses.empty();
  const bool neg = !v.negative_witnesses.empty();
  v.verdict = pos && neg   ? Verdict::conflict
              : pos        ? Verdict::positive
              : neg        ? Verdict::negative
                           : Verdict::undetermined;
  return v;
}

double verdict_membership(Verdict v) {
  switch (v) {
    case Verdict::positive:
      return 1.0;
    case Verdict::negative:
      return 0.0;
    default:
      return 0.5;
  }
}

}  // namespace

std::vector<FeatureSet> positive_hypotheses(const ConceptLattice& lattice,
                                            const LabeledSplit& split, JsmMode mode) {
  return hypotheses(lattice, split.positives, split.negatives, mode);
}

std::vector<FeatureSet> negative_hypotheses(const ConceptLattice& lattice,
                                            const LabeledSplit& split, JsmMode mode) {
  return hypotheses(lattice, split.negatives, split.positives, mode);
}

std::pair<JsmVerdict, MembershipVector> classify_jsm(const ConceptLattice& lattice,
                                                     const LabeledSplit& split,
                                                     const FeatureSet& query_intent,
                                                     JsmMode mode) {
  const FeatureSet query = lattice.local_intent(query_intent);
  JsmVerdict v = decide(positive_hypotheses(lattice, split, mode),
                        negative_hypotheses(lattice, split, mode), query);
  const double m = verdict_membership(v.verdict);
  return {std::move(v), MembershipVector{m, 1.0 - m}};
}

double closure_outlier_degree(const FormalContext& context, std::size_t object) {
  ObjectSet single(context.object_count(), {object});
  const double closure = static_cast<double>(context.closure_objects(single).count());
  return 1.0 - closure / static_cast<double>(context.object_count());
}

double closure_outlier_degree_of_intent(const FormalContext& context, const FeatureSet& intent) {
  const double extent = static_cast<double>(context.derive_extent(intent).count());
  return 1.0 - extent / static_cast<double>(context.object_count());
}

std::size_t sugiyama_q(const ConceptLattice& lattice, const ObjectSet& objects) {
  const FeatureSet shared = lattice.context().derive_intent(objects);
  std::size_t q = 0;
  for (const Concept& c : lattice.concepts()) {
    if (objects.is_subset_of(c.extent) || shared.is_subset_of(c.intent)) ++q;
  }
  return q;
}

std::size_t sugiyama_q_of_intent(const ConceptLattice& lattice, const FeatureSet& local_intent) {
  std::size_t q = 0;
  for (const Concept& c : lattice.concepts()) {
    if (c.intent.is_subset_of(local_intent) || local_intent.is_subset_of(c.intent)) ++q;
  }
  return q;
}

double sugiyama_outlier_degree(const ConceptLattice& lattice, std::size_t object) {
  ObjectSet single(lattice.context().object_count(), {object});
  return 1.0 - static_cast<double>(sugiyama_q(lattice, single)) /
                   static_cast<double>(lattice.size());
}

std::string_view learner_name(LearnerKind kind) {
  switch (kind) {
    case LearnerKind::jsm_strict:
      return "jsm-strict";
    case LearnerKind::jsm_classic:
      return "jsm-classic";
    case LearnerKind::closure:
      return "closure";
    case LearnerKind::sugiyama:
      return "sugiyama";
  }
  return "unknown";
}

std::optional<LearnerKind> parse_learner(std::string_view name) {
  for (auto k : {LearnerKind::jsm_strict, LearnerKind::jsm_classic, LearnerKind::closure,
                 LearnerKind::sugiyama}) {
    if (learner_name(k) == name) return k;
  }
  return std::nullopt;
}

bool is_outlier_scorer(LearnerKind kind) {
  return kind == LearnerKind::closure || kind == LearnerKind::sugiyama;
}

namespace {

class JsmLearner final : public LatticeLearner {
 public:
  JsmLearner(ConceptLattice lattice, std::span<const std::size_t> labels, std::size_t classes,
             JsmMode mode)
      : lattice_(std::move(lattice)) {
    if (labels.size() != lattice_.context().object_count()) {
      throw FormatError("one label per training object required");
    }
    for (std::size_t k = 0; k < classes; ++k) {
      const LabeledSplit split = LabeledSplit::one_vs_rest(labels, k);
      positive_.push_back(positive_hypotheses(lattice_, split, mode));
      negative_.push_back(negative_hypotheses(lattice_, split, mode));
    }
  }

  std::size_t channels() const override { return positive_.size(); }

  bool evaluate(const FeatureSet& intent, std::span<double> out) const override {
    const FeatureSet query = lattice_.local_intent(intent);
    bool abstained = true;
    for (std::size_t k = 0; k < positive_.size(); ++k) {
      const Verdict v = decide(positive_[k], negative_[k], query).verdict;
      out[k] = verdict_membership(v);
      if (v == Verdict::positive || v == Verdict::negative) abstained = false;
    }
    return !abstained;
  }

  const ConceptLattice& lattice() const override { return lattice_; }

 private:
  ConceptLattice lattice_;
  std::vector<std::vector<FeatureSet>> positive_;
  std::vector<std::vector<FeatureSet>> negative_;
};

class ClosureScorer final : public LatticeLearner {
 public:
  explicit ClosureScorer(ConceptLattice lattice) : lattice_(std::move(lattice)) {}

  std::size_t channels() const override { return 1; }
  bool evaluate(const FeatureSet& intent, std::span<double> out) const override {
    out[0] = closure_outlier_degree_of_intent(lattice_.context(), lattice_.local_intent(intent));
    return true;
  }
  const ConceptLattice& lattice() const override { return lattice_; }

 private:
  ConceptLattice lattice_;
};

class SugiyamaScorer final : public LatticeLearner {
 public:
  explicit SugiyamaScorer(ConceptLattice lattice) : lattice_(std::move(lattice)) {}

  std::size_t channels() const override { return 1; }
  bool evaluate(const FeatureSet& intent, std::span<double> out) const override {
    const auto q = sugiyama_q_of_intent(lattice_, lattice_.local_intent(intent));
    out[0] = 1.0 - static_cast<double>(q) / static_cast<double>(lattice_.size());
    return true;
  }
  const ConceptLattice& lattice() const override { return lattice_; }

 private:
  ConceptLattice lattice_;
};

}  // namespace

std::unique_ptr<LatticeLearner> make_learner(LearnerKind kind, ConceptLattice lattice,
                                             std::span<const std::size_t> labels,
                                             std::size_t class_count) {
  switch (kind) {
    case LearnerKind::jsm_strict:
      return std::make_unique<JsmLearner>(std::move(lattice), labels, class_count,
                                          JsmMode::strict);
    case LearnerKind::jsm_classic:
      return std::make_unique<JsmLearner>(std::move(lattice), labels, class_count,
                                          JsmMode::classic);
    case LearnerKind::closure:
      return std::make_unique<ClosureScorer>(std::move(lattice));
    case LearnerKind::sugiyama:
      return std::make_unique<SugiyamaScorer>(std::move(lattice));
  }
  throw FormatError("unknown learner");
}

}  // namespace fcagenda
