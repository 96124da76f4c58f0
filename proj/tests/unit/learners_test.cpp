#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "fcagenda/error.hpp"
#include "fcagenda/learners.hpp"
#include "test_support.hpp"

namespace fcagenda {
namespace {

using testing::features_named;

class AppleLearners : public ::testing::Test {
 protected:
  AppleLearners()
      : data_(testing::apple_data()),
        split_(LabeledSplit::one_vs_rest(data_.labels, 0)),
        full_(enumerate_concepts(data_.context)) {}

  ConceptLattice block_lattice(std::size_t g) const {
    return enumerate_agenda_lattice(data_.context, data_.spec.groups().block(g));
  }
  FeatureSet t0() const {
    return features_named(data_.context, {"Color=green", "Volume=High", "Sweetness=High",
                                          "Local=Yes", "Price=High"});
  }
  static bool has(const std::vector<FeatureSet>& hs, const FeatureSet& h) {
    return std::find(hs.begin(), hs.end(), h) != hs.end();
  }

  TrainingData data_;
  LabeledSplit split_;
  ConceptLattice full_;
};

TEST_F(AppleLearners, SplitFollowsClassOne) {
  EXPECT_EQ(split_.positives, ObjectSet(8, {0, 1, 3, 4, 6}));
  EXPECT_EQ(split_.negatives, ObjectSet(8, {2, 5, 7}));
  EXPECT_TRUE(split_.unlabeled.empty());
  EXPECT_THROW(LabeledSplit::make(ObjectSet(2, {0}), ObjectSet(2, {0}), ObjectSet(2)), FormatError);
}

TEST_F(AppleLearners, SweetnessHypotheses) {
  const auto l = block_lattice(2);
  const auto pos = positive_hypotheses(l, split_, JsmMode::strict);
  const auto neg = negative_hypotheses(l, split_, JsmMode::strict);
  // local features: High, Medium, Low
  EXPECT_EQ(pos, (std::vector<FeatureSet>{FeatureSet(3, {0})}));
  EXPECT_EQ(neg, (std::vector<FeatureSet>{FeatureSet(3, {2})}));
}

TEST_F(AppleLearners, FullLatticeHypothesesAreClosed) {
  const auto pos = positive_hypotheses(full_, split_, JsmMode::strict);
  const auto neg = negative_hypotheses(full_, split_, JsmMode::strict);
  EXPECT_TRUE(has(pos, features_named(data_.context, {"Sweetness=High", "Price=Medium"})));
  EXPECT_FALSE(has(pos, features_named(data_.context, {"Sweetness=High"})));
  for (const auto& h : pos) {
    EXPECT_EQ(data_.context.closure_features(h), h);
    EXPECT_FALSE(has(neg, h));
  }
  for (const auto& h : neg) EXPECT_EQ(data_.context.closure_features(h), h);
}

TEST_F(AppleLearners, VacuousNegativeClass) {
  const LabeledSplit all_pos =
      LabeledSplit::make(data_.context.all_objects(), data_.context.no_objects(), data_.context.no_objects());
  const auto pos = positive_hypotheses(full_, all_pos, JsmMode::strict);
  std::size_t nonempty = 0;
  for (const auto& c : full_.concepts()) nonempty += c.extent.empty() ? 0 : 1;
  EXPECT_EQ(pos.size(), nonempty);
  EXPECT_TRUE(negative_hypotheses(full_, all_pos, JsmMode::strict).empty());
}

TEST_F(AppleLearners, TZeroVerdicts) {
  auto [full, m_full] = classify_jsm(full_, split_, t0(), JsmMode::strict);
  EXPECT_EQ(full.verdict, Verdict::undetermined);
  EXPECT_EQ(m_full, (MembershipVector{0.5, 0.5}));

  auto [sweet, m_sweet] = classify_jsm(block_lattice(2), split_, t0(), JsmMode::strict);
  EXPECT_EQ(sweet.verdict, Verdict::positive);
  EXPECT_EQ(sweet.positive_witnesses, (std::vector<FeatureSet>{FeatureSet(3, {0})}));
  EXPECT_EQ(m_sweet, (MembershipVector{1.0, 0.0}));

  auto [price, m_price] = classify_jsm(block_lattice(4), split_, t0(), JsmMode::strict);
  EXPECT_EQ(price.verdict, Verdict::negative);
  EXPECT_EQ(m_price, (MembershipVector{0.0, 1.0}));

  // both signs present: {Sweetness=High} and {Volume=Medium} in one lattice
  const auto sv = enumerate_agenda_lattice(data_.context, data_.spec.groups().blocks({1, 2}));
  const auto mixed = features_named(data_.context, {"Volume=Medium", "Sweetness=High"});
  EXPECT_EQ(classify_jsm(sv, split_, mixed, JsmMode::strict).first.verdict, Verdict::conflict);
}

TEST_F(AppleLearners, ClassicModeConditions) {
  const auto l = block_lattice(2);
  const auto pos = positive_hypotheses(l, split_, JsmMode::classic);
  // {High} meets A+ and no negative example has it; top intent is contained in every row
  EXPECT_TRUE(has(pos, FeatureSet(3, {0})));
  EXPECT_FALSE(has(pos, FeatureSet(3)));
  for (const auto& h : pos) {
    split_.negatives.for_each([&](std::size_t a) { EXPECT_FALSE(h.is_subset_of(l.context().row(a))); });
  }
}

TEST_F(AppleLearners, ZeroFeatureLatticeAbstains) {
  const auto l = enumerate_agenda_lattice(data_.context, data_.context.no_features());
  const auto learner = make_learner(LearnerKind::jsm_strict, l, data_.labels, 2);
  std::vector<double> out(2);
  EXPECT_FALSE(learner->evaluate(t0(), out));
  EXPECT_EQ(out, (std::vector<double>{0.5, 0.5}));
}

TEST_F(AppleLearners, JsmLearnerChannels) {
  const auto learner = make_learner(LearnerKind::jsm_strict, block_lattice(2), data_.labels, 2);
  ASSERT_EQ(learner->channels(), 2U);
  std::vector<double> out(2);
  EXPECT_TRUE(learner->evaluate(t0(), out));
  EXPECT_EQ(out, (std::vector<double>{1.0, 0.0}));
  EXPECT_TRUE(learner->evaluate(data_.context.row(5), out));
  EXPECT_EQ(out, (std::vector<double>{0.0, 1.0}));
  EXPECT_FALSE(learner->evaluate(data_.context.row(2), out));
}

TEST_F(AppleLearners, ClosureDegrees) {
  EXPECT_DOUBLE_EQ(closure_outlier_degree(data_.context, 3), 0.875);
  EXPECT_DOUBLE_EQ(closure_outlier_degree(data_.context, 0), 0.875);
  for (std::size_t a = 0; a < 8; ++a) {
    EXPECT_DOUBLE_EQ(closure_outlier_degree(data_.context, a),
                     closure_outlier_degree_of_intent(data_.context, data_.context.row(a)));
  }
  const auto same = FormalContext::from_rows({"a", "b", "c"}, {"x", "y"},
                                             {FeatureSet(2, {0}), FeatureSet(2, {0}), FeatureSet(2, {0})});
  for (std::size_t a = 0; a < 3; ++a) EXPECT_EQ(closure_outlier_degree(same, a), 0.0);
}

std::size_t oracle_q(const FormalContext& ctx, const std::vector<Concept>& concepts, const ObjectSet& b) {
  const FeatureSet shared = testing::oracle_intent(ctx, b);
  std::size_t q = 0;
  for (const auto& c : concepts) {
    bool b_in_g = true;
    for (std::size_t a = 0; a < ctx.object_count(); ++a) {
      if (b.contains(a) && !c.extent.contains(a)) b_in_g = false;
    }
    bool shared_in_y = true;
    for (std::size_t x = 0; x < ctx.feature_count(); ++x) {
      if (shared.contains(x) && !c.intent.contains(x)) shared_in_y = false;
    }
    if (b_in_g || shared_in_y) ++q;
  }
  return q;
}

TEST(Sugiyama, MatchesDoubleLoopOracle) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 40; ++trial) {
    const auto ctx = testing::random_context(rng, 6, 6);
    const auto lattice = enumerate_concepts(ctx);
    const auto concepts = testing::brute_force_concepts(ctx);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << ctx.object_count()); ++mask) {
      ObjectSet b(ctx.object_count());
      for (std::size_t a = 0; a < ctx.object_count(); ++a) {
        if (mask >> a & 1U) b.insert(a);
      }
      EXPECT_EQ(sugiyama_q(lattice, b), oracle_q(ctx, concepts, b));
    }
    for (std::size_t a = 0; a < ctx.object_count(); ++a) {
      EXPECT_EQ(sugiyama_q_of_intent(lattice, ctx.row(a)),
                sugiyama_q(lattice, ObjectSet(ctx.object_count(), {a})));
    }
  }
}

TEST(Sugiyama, SmallCases) {
  const IncidencePair pairs[] = {{0, 0}};
  const auto one = enumerate_concepts(FormalContext::create({"a"}, {"x"}, pairs));
  EXPECT_EQ(sugiyama_q(one, ObjectSet(1, {0})), 1U);
  EXPECT_EQ(sugiyama_outlier_degree(one, 0), 0.0);

  const auto apples = enumerate_concepts(testing::apple_data().context);
  EXPECT_EQ(sugiyama_q(apples, ObjectSet(8)), apples.size());
}

TEST(Sugiyama, CountsConceptsComparableToTheGeneratedConcept) {
  // Identity relation on three objects: bottom, three atoms, top.
  const IncidencePair pairs[] = {{0, 0}, {1, 1}, {2, 2}};
  const auto ctx = FormalContext::create({"a", "b", "c"}, {"x", "y", "z"}, pairs);
  const auto l = enumerate_concepts(ctx);
  ASSERT_EQ(l.size(), 5U);
  EXPECT_EQ(sugiyama_q(l, ObjectSet(3, {0})), 3U);
  // {a, b} generates the top concept, which is comparable to everything,
  // so q grows although the set grew
  EXPECT_EQ(sugiyama_q(l, ObjectSet(3, {0, 1})), 5U);
}

TEST(Sugiyama, IdenticalRowsScoreEqually) {
  const auto same = FormalContext::from_rows({"a", "b", "c"}, {"x", "y"},
                                             {FeatureSet(2, {1}), FeatureSet(2, {1}), FeatureSet(2, {1})});
  const auto l = enumerate_concepts(same);
  const double d0 = sugiyama_outlier_degree(l, 0);
  EXPECT_EQ(sugiyama_outlier_degree(l, 1), d0);
  EXPECT_EQ(sugiyama_outlier_degree(l, 2), d0);
}

TEST(Learners, NamesRoundTrip) {
  for (auto k : {LearnerKind::jsm_strict, LearnerKind::jsm_classic, LearnerKind::closure,
                 LearnerKind::sugiyama}) {
    EXPECT_EQ(parse_learner(learner_name(k)), k);
  }
  EXPECT_FALSE(parse_learner("svm").has_value());
  EXPECT_TRUE(is_outlier_scorer(LearnerKind::sugiyama));
  EXPECT_FALSE(is_outlier_scorer(LearnerKind::jsm_classic));
}

}  // namespace
}  // namespace fcagenda
