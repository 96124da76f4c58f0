#include <gtest/gtest.h>

#include <numeric>

#include "fcagenda/report.hpp"
#include "test_support.hpp"

namespace fcagenda {
namespace {

ModelState apple_state(std::vector<FeatureSet> basis, std::vector<double> weights) {
  ModelState s;
  s.data = testing::apple_data();
  s.agenda = {std::move(basis), std::move(weights)};
  return s;
}

TEST(Explain, OrderingMassesAndFlags) {
  const auto g = testing::apple_data().spec.groups();
  const auto s = apple_state({g.block(0), g.block(2), g.block(4), g.block(1)}, {-0.2, 0.3, 0.3, 0.2});
  const auto r = explain(s);
  ASSERT_EQ(r.agendas.size(), 4U);
  // equal weights fall back to the lexicographic feature list
  EXPECT_EQ(r.agendas[0].attributes, (std::vector<std::string>{"Price"}));
  EXPECT_EQ(r.agendas[1].attributes, (std::vector<std::string>{"Sweetness"}));
  EXPECT_EQ(r.agendas[2].attributes, (std::vector<std::string>{"Volume"}));
  EXPECT_EQ(r.agendas[3].attributes, (std::vector<std::string>{"Color"}));
  EXPECT_TRUE(r.agendas[3].opposite_categorization);
  EXPECT_FALSE(r.agendas[0].opposite_categorization);
  EXPECT_TRUE(r.clipped);
  EXPECT_EQ(r.agendas[3].mass, 0.0);
  EXPECT_NEAR(r.agendas[0].mass, 0.375, 1e-15);
  EXPECT_EQ(r.agendas[1].features,
            (std::vector<std::string>{"Sweetness=High", "Sweetness=Low", "Sweetness=Medium"}));
  double total = 0;
  for (const auto& e : r.agendas) total += e.mass;
  EXPECT_NEAR(total, 1.0, 1e-12);
  EXPECT_NEAR(std::accumulate(r.pignistic.begin(), r.pignistic.end(), 0.0), 1.0, 1e-9);
  EXPECT_NEAR(std::accumulate(r.plausibility.begin(), r.plausibility.end(), 0.0), 1.0, 1e-9);
}

TEST(Explain, SingleAgendaHasAllTheMass) {
  const auto g = testing::apple_data().spec.groups();
  const auto r = explain(apple_state({g.block(2)}, {0.7}));
  ASSERT_EQ(r.agendas.size(), 1U);
  EXPECT_EQ(r.agendas[0].mass, 1.0);
  for (std::size_t x = 0; x < 13; ++x) {
    const double expect = (x >= 5 && x < 8) ? 1.0 / 3.0 : 0.0;
    EXPECT_NEAR(r.pignistic[x], expect, 1e-15);
  }
  const auto j = to_json(r);
  EXPECT_EQ(j["agendas"].size(), 1U);
  EXPECT_EQ(j["agendas"][0]["mass"], "1");
  EXPECT_EQ(j["feature_importance"].size(), 13U);
}

TEST(Metrics, ConfusionPrecisionRecall) {
  const std::vector<std::string> classes = {"a", "b"};
  const std::vector<std::size_t> actual = {0, 0, 0, 1, 1};
  const std::vector<std::optional<std::size_t>> predicted = {0, 1, std::nullopt, 1, 0};
  const auto m = classification_metrics(classes, actual, predicted);
  EXPECT_EQ(m.correct, 2U);
  EXPECT_EQ(m.undecided, 1U);
  EXPECT_DOUBLE_EQ(m.accuracy, 0.4);
  EXPECT_DOUBLE_EQ(m.abstention_rate, 0.2);
  EXPECT_EQ(m.confusion, (std::vector<std::vector<std::size_t>>{{1, 1, 1}, {1, 1, 0}}));
  EXPECT_DOUBLE_EQ(*m.precision[0], 0.5);
  EXPECT_DOUBLE_EQ(*m.recall[0], 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(*m.recall[1], 0.5);

  const auto none = classification_metrics(classes, {0, 1}, {std::nullopt, std::nullopt});
  EXPECT_DOUBLE_EQ(none.abstention_rate, 1.0);
  EXPECT_FALSE(none.precision[0].has_value());
  EXPECT_EQ(to_json(none)["classes"][0]["precision"], nullptr);
}

TEST(Metrics, RankSeparation) {
  EXPECT_EQ(rank_separation({0.9, 0.1, 0.8, 0.2}, {true, false, true, false}), 1.0);
  EXPECT_EQ(rank_separation({0.1, 0.9}, {true, false}), 0.0);
  EXPECT_EQ(rank_separation({0.5, 0.5}, {true, false}), 0.5);
  EXPECT_FALSE(rank_separation({0.5}, {true}).has_value());
}

}  // namespace
}  // namespace fcagenda
