#pragma once

#include <cstddef>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "fcagenda/lattice.hpp"

namespace fcagenda {

inline constexpr std::size_t kUnlabeled = std::numeric_limits<std::size_t>::max();

// Positive, negative and unlabeled training objects of a binary target.
struct LabeledSplit {
  ObjectSet positives;
  ObjectSet negatives;
  ObjectSet unlabeled;

  // Throws FormatError unless the three sets are pairwise disjoint.
  static LabeledSplit make(ObjectSet positives, ObjectSet negatives, ObjectSet unlabeled);
  // Class k against every other labeled object; kUnlabeled entries go to unlabeled.
  static LabeledSplit one_vs_rest(std::span<const std::size_t> labels, std::size_t k);
};

enum class JsmMode {
  // Closed H, non-empty extent, extent disjoint from the opposite class.
  strict,
  // Closed H whose extent meets the own class and that no opposite example contains.
  classic,
};

enum class Verdict { positive, negative, undetermined, conflict };

struct JsmVerdict {
  Verdict verdict = Verdict::undetermined;
  std::vector<FeatureSet> positive_witnesses;
  std::vector<FeatureSet> negative_witnesses;
};

using MembershipVector = std::vector<double>;

// Hypotheses are intents of `lattice` (over its own features). A lattice
// without features has no hypotheses.
std::vector<FeatureSet> positive_hypotheses(const ConceptLattice& lattice,
                                            const LabeledSplit& split, JsmMode mode);
std::vector<FeatureSet> negative_hypotheses(const ConceptLattice& lattice,
                                            const LabeledSplit& split, JsmMode mode);

// query_intent may be given over the parent context when the lattice
// carries an agenda. Membership: positive (1,0), negative (0,1), otherwise
// (1/2, 1/2).
std::pair<JsmVerdict, MembershipVector> classify_jsm(const ConceptLattice& lattice,
                                                     const LabeledSplit& split,
                                                     const FeatureSet& query_intent,
                                                     JsmMode mode);

// 1 - |Cl({a})| / |A|
double closure_outlier_degree(const FormalContext& context, std::size_t object);
// Same score for an arbitrary description: 1 - |extent(intent)| / |A|.
double closure_outlier_degree_of_intent(const FormalContext& context, const FeatureSet& intent);

// Number of concepts (G, Y) with B contained in G or I1[B] contained in Y.
std::size_t sugiyama_q(const ConceptLattice& lattice, const ObjectSet& objects);
// q for a single description d: concepts with Y contained in d (an object
// described by d would lie in G) or d contained in Y.
std::size_t sugiyama_q_of_intent(const ConceptLattice& lattice, const FeatureSet& local_intent);
// 1 - q({a}) / |lattice|
double sugiyama_outlier_degree(const ConceptLattice& lattice, std::size_t object);

enum class LearnerKind { jsm_strict, jsm_classic, closure, sugiyama };

std::string_view learner_name(LearnerKind kind);
std::optional<LearnerKind> parse_learner(std::string_view name);
bool is_outlier_scorer(LearnerKind kind);

// Alg(a, L): one base learner bound to one basis lattice.
class LatticeLearner {
 public:
  virtual ~LatticeLearner() = default;

  virtual std::size_t channels() const = 0;
  // `intent` is over the parent context's features. Writes channels()
  // values in [0,1]; returns false when the learner abstains.
  virtual bool evaluate(const FeatureSet& intent, std::span<double> out) const = 0;
  virtual const ConceptLattice& lattice() const = 0;
};

// `labels` holds a class index (or kUnlabeled) per object of the lattice's
// context; outlier scorers ignore it and produce one channel.
std::unique_ptr<LatticeLearner> make_learner(LearnerKind kind, ConceptLattice lattice,
                                             std::span<const std::size_t> labels,
                                             std::size_t class_count);

}  // namespace fcagenda
