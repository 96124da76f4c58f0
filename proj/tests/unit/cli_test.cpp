#include <gtest/gtest.h>

#include <json.hpp>

#include <sstream>

#include "fcagenda/commands.hpp"
#include "fcagenda/model_io.hpp"
#include "test_support.hpp"

namespace fcagenda {
namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string apples() { return testing::data_path("apples.csv").string(); }
std::string tmp(const std::string& name) { return testing::temp_path(name).string(); }

std::string train_apples(const std::string& name, std::vector<std::string> extra = {}) {
  const std::string model = tmp(name);
  std::vector<std::string> args = {"train", "--data", apples(), "--label-col", "Class", "--out", model};
  args.insert(args.end(), extra.begin(), extra.end());
  const auto r = run(args);
  EXPECT_EQ(r.code, 0) << r.err;
  return model;
}

TEST(Cli, TrainPrintsLossAndWeights) {
  const auto model = tmp("cli_train.json");
  const auto r = run({"train", "--data", apples(), "--label-col", "Class", "--task", "classify",
                      "--learner", "jsm-strict", "--basis", "bounded", "--alpha", "1", "--epochs",
                      "500", "--lr", "0.1", "--seed", "42", "--out", model});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("final loss: "), std::string::npos);
  EXPECT_NE(r.out.find("{Sweetness}"), std::string::npos);
  EXPECT_EQ(load_model(model).state().agenda.basis.size(), 5U);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({"train", "--data", apples(), "--label-col", "Kind", "--out", tmp("x.json")}).code, 2);
  EXPECT_EQ(run({"train", "--data", apples(), "--label-col", "Class", "--expert-file", "e.txt",
                 "--out", tmp("x.json")}).code, 2);
  EXPECT_EQ(run({"train", "--data", apples(), "--label-col", "Class", "--basis", "expert",
                 "--out", tmp("x.json")}).code, 2);
  EXPECT_EQ(run({"train", "--data", apples(), "--label-col", "Class", "--tau", "0.1",
                 "--out", tmp("x.json")}).code, 2);
  EXPECT_EQ(run({"train", "--data", apples(), "--label-col", "Class", "--learner", "closure",
                 "--out", tmp("x.json")}).code, 2);
  EXPECT_EQ(run({"train", "--data", apples(), "--label-col", "Class", "--learner", "svm",
                 "--out", tmp("x.json")}).code, 2);
  EXPECT_EQ(run({"train", "--data", "/no/such.csv", "--label-col", "Class", "--out", tmp("x.json")}).code, 2);
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, ExpertBasisIsPassedThrough) {
  const auto expert = tmp("cli_expert.txt");
  testing::write_text(expert, "# one agenda\nVolume, Price\n");
  const auto model = train_apples("cli_expert.json", {"--basis", "expert", "--expert-file", expert});
  const auto m = load_model(model);
  const auto g = m.state().data.spec.groups();
  EXPECT_EQ(m.state().agenda.basis, (std::vector<FeatureSet>{g.blocks({1, 4})}));
}

TEST(Cli, CapExceededExitsWithFour) {
  const auto r = run({"train", "--data", apples(), "--label-col", "Class", "--max-concepts", "2",
                      "--out", tmp("x.json")});
  EXPECT_EQ(r.code, 4);
  EXPECT_NE(r.err.find("Color=red"), std::string::npos);
}

TEST(Cli, PredictRecords) {
  const auto model = train_apples("cli_predict.json");
  auto r = run({"predict", "--model", model, "--data", testing::data_path("t0.csv").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream line(r.out);
  std::string id, m1, m2, decided;
  std::getline(line, id, '\t');
  std::getline(line, m1, '\t');
  std::getline(line, m2, '\t');
  std::getline(line, decided);
  EXPECT_EQ(id, "t0");
  EXPECT_NEAR(std::stod(m1) + std::stod(m2), 1.0, 1e-12);
  EXPECT_TRUE(decided == "1" || decided == "2" || decided == "undecided");

  r = run({"predict", "--model", model, "--data", apples()});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 8);
  EXPECT_NE(r.out.find("7\t0.5\t0.5\tundecided\n"), std::string::npos);
}

TEST(Cli, PredictPartialAndEmptyInput) {
  const auto model = train_apples("cli_partial.json");
  const auto rows = tmp("cli_rows.csv");
  testing::write_text(rows,
                      "Type,Color,Volume,Sweetness,Local,Price\n"
                      "a,green,High,High,Yes,High\n"
                      "b,yellow,High,High,Yes,High\n"
                      "c,red,Low,Low,No,Low\n");
  auto r = run({"predict", "--model", model, "--data", rows});
  EXPECT_EQ(r.code, 3);
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 2);
  EXPECT_NE(r.err.find("'b'"), std::string::npos);

  const auto empty = tmp("cli_empty.csv");
  testing::write_text(empty, "");
  r = run({"predict", "--model", model, "--data", empty});
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  testing::write_text(empty, "Type,Color,Volume,Sweetness,Local,Price\n");
  r = run({"predict", "--model", model, "--data", empty});
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());

  testing::write_text(rows, "Type,Color\na,red\n");
  EXPECT_EQ(run({"predict", "--model", model, "--data", rows}).code, 2);
}

TEST(Cli, CorruptModelExitsWithTwo) {
  const auto model = train_apples("cli_corrupt.json");
  const std::string text = testing::read_text(model);
  const auto broken = tmp("cli_truncated.json");
  testing::write_text(broken, text.substr(0, text.size() / 3));
  EXPECT_EQ(run({"predict", "--model", broken, "--data", apples()}).code, 2);
  EXPECT_EQ(run({"explain", "--model", broken}).code, 2);
}

TEST(Cli, ExplainReport) {
  const auto model = train_apples("cli_explain.json");
  const auto r = run({"explain", "--model", model});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  ASSERT_EQ(j["agendas"].size(), 5U);
  double prev = 2.0;
  for (const auto& a : j["agendas"]) {
    const double w = std::stod(a["weight"].get<std::string>());
    EXPECT_LE(w, prev);
    prev = w;
    EXPECT_EQ(a["opposite_categorization"].get<bool>(), w < 0);
  }
  EXPECT_TRUE(j["negative_weights_clipped"].get<bool>());
}

TEST(Cli, EvalModes) {
  const auto model = train_apples("cli_eval.json");
  auto r = run({"eval", "--model", model, "--data", apples()});
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["mode"], "resubstitution");
  EXPECT_EQ(j["metrics"]["objects"], 8);

  r = run({"eval", "--model", model, "--data", apples(), "--split", "0.25", "--seed", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["mode"], "holdout");
  EXPECT_EQ(j["metrics"]["objects"], 2);

  EXPECT_EQ(run({"eval", "--model", model, "--data", apples(), "--split", "0.5", "--leave-one-out"}).code, 2);
  EXPECT_EQ(run({"eval", "--model", model, "--data", testing::data_path("t0.csv").string()}).code, 2);
}

TEST(Cli, LeaveOneOutMatchesManualFolds) {
  const auto model_path = train_apples("cli_loo.json");
  const auto r = run({"eval", "--model", model_path, "--data", apples(), "--leave-one-out"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);

  const auto data = testing::apple_data();
  const auto basis = basis_bounded(data.spec.groups(), 1, false);
  std::vector<std::vector<std::size_t>> confusion(2, std::vector<std::size_t>(3, 0));
  for (std::size_t held = 0; held < 8; ++held) {
    TrainingData fold;
    fold.spec = data.spec;
    fold.class_labels = data.class_labels;
    std::vector<std::string> ids;
    std::vector<FeatureSet> rows;
    for (std::size_t a = 0; a < 8; ++a) {
      if (a == held) continue;
      ids.push_back(data.context.objects()[a]);
      rows.push_back(data.context.row(a));
      fold.labels.push_back(data.labels[a]);
    }
    fold.context = FormalContext::from_rows(ids, data.context.features(), rows);
    const auto m = train(fold, basis, LearnerKind::jsm_strict, TrainingConfig{});
    const auto p = m.predict_intent(data.context.row(held));
    ++confusion[data.labels[held]][p.undecided ? 2 : p.decided];
  }
  for (std::size_t k = 0; k < 2; ++k) {
    EXPECT_EQ(j["metrics"]["classes"][k]["confusion_row"].get<std::vector<std::size_t>>(), confusion[k]);
  }
}

TEST(Cli, OutlierTask) {
  const auto data = tmp("cli_outliers.csv");
  testing::write_text(data,
                      "id,shape,size,out\n"
                      "1,round,small,0\n2,round,small,0\n3,round,small,0\n"
                      "4,round,large,0\n5,round,large,0\n6,square,small,1\n");
  const auto model = tmp("cli_outlier.json");
  auto r = run({"train", "--data", data, "--label-col", "out", "--task", "outlier", "--learner",
                "closure", "--out", model});
  ASSERT_EQ(r.code, 0) << r.err;
  r = run({"predict", "--model", model, "--data", data});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("6\t"), std::string::npos);
  r = run({"eval", "--model", model, "--data", data});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["scores"].size(), 6U);
  EXPECT_EQ(j["rank_separation"], "1");
}

}  // namespace
}  // namespace fcagenda
