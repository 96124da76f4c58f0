#include "fcagenda/commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <sstream>

#include "fcagenda/agenda.hpp"
#include "fcagenda/error.hpp"
#include "fcagenda/model_io.hpp"
#include "fcagenda/numeric_text.hpp"
#include "fcagenda/report.hpp"
#include "fcagenda/trainer.hpp"

namespace fcagenda::cli {
namespace {

class UsageError : public Error {
 public:
  using Error::Error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out || !(out << text) || !out.flush()) throw UsageError("cannot write '" + path + "'");
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

// One agenda per line, comma-separated names; '#' starts a comment.
std::vector<std::vector<std::string>> parse_expert_file(const std::string& text) {
  std::vector<std::vector<std::string>> agendas;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    std::vector<std::string> names;
    std::istringstream fields(line);
    std::string field;
    while (std::getline(fields, field, ',')) {
      std::string name = trim(field);
      if (name.empty()) {
        throw FormatError("expert file line " + std::to_string(line_no) + ": empty name");
      }
      names.push_back(std::move(name));
    }
    agendas.push_back(std::move(names));
  }
  if (agendas.empty()) throw FormatError("expert file lists no agendas");
  return agendas;
}

std::string agenda_label(const FeatureSet& agenda, const TrainingData& data) {
  const AttributeGroups groups = data.spec.groups();
  std::string label;
  auto append = [&](const std::string& name) { label += (label.empty() ? "" : ",") + name; };
  if (groups.is_block_union(agenda)) {
    for (std::size_t g : groups.groups_touching(agenda)) append(groups[g].attribute);
  } else {
    agenda.for_each([&](std::size_t x) { append(data.context.features()[x]); });
  }
  return "{" + label + "}";
}

void require_attributes(const ManyValuedContext& table, const ScalingSpec& spec) {
  for (const auto& attr : spec.attributes) {
    if (!table.attribute_index(attr.name)) {
      throw UsageError("schema mismatch: missing attribute '" + attr.name + "'");
    }
  }
}

std::map<std::string, std::string> row_values(const ManyValuedContext& table, std::size_t a) {
  std::map<std::string, std::string> row;
  for (std::size_t j = 0; j < table.attributes.size(); ++j) {
    row[table.attributes[j].name] = table.cells[a][j];
  }
  return row;
}

TrainingConfig config_of(const ModelState& s) {
  TrainingConfig c;
  c.epochs = s.metadata.epochs;
  c.learning_rate = s.metadata.learning_rate;
  c.seed = s.metadata.seed;
  c.loss = s.metadata.loss;
  c.guard = s.metadata.guard;
  return c;
}

// ---- train

struct TrainArgs {
  std::string data;
  std::string label_col;
  std::string task = "classify";
  std::string learner = "jsm-strict";
  std::string basis = "bounded";
  std::size_t alpha = 1;
  bool include_full = false;
  std::string expert_file;
  std::size_t epochs = 500;
  double lr = 0.1;
  std::uint64_t seed = 42;
  double tau = 0.05;
  std::string out;
  std::string loss = "mse";
  double guard = 1e-3;
  double init_range = 0.5;
  std::size_t max_concepts = EnumerationOptions{}.max_concepts;
  std::size_t max_rounds = 5;
  std::size_t max_blocks = 0;
  std::string scaling = "terciles";
  std::vector<std::string> categorical;
  bool feature_agendas = false;

  CLI::Option* alpha_opt = nullptr;
  CLI::Option* include_full_opt = nullptr;
  CLI::Option* expert_opt = nullptr;
  CLI::Option* tau_opt = nullptr;
  CLI::Option* rounds_opt = nullptr;
  CLI::Option* blocks_opt = nullptr;
  CLI::Option* feature_agendas_opt = nullptr;
};

void add_train(CLI::App& app, TrainArgs& a) {
  auto* cmd = app.add_subcommand("train", "Learn agenda weights and write a model file");
  cmd->add_option("--data", a.data, "Training CSV")->required();
  cmd->add_option("--label-col", a.label_col, "Label column")->required();
  cmd->add_option("--task", a.task)->check(CLI::IsMember({"classify", "outlier"}));
  cmd->add_option("--learner", a.learner)
      ->check(CLI::IsMember({"jsm-strict", "jsm-classic", "closure", "sugiyama"}));
  cmd->add_option("--basis", a.basis)->check(CLI::IsMember({"bounded", "expert", "adaptive"}));
  a.alpha_opt = cmd->add_option("--alpha", a.alpha, "Blocks per agenda (initial for adaptive)");
  a.include_full_opt = cmd->add_flag("--include-full", a.include_full, "Add the full feature set");
  a.expert_opt = cmd->add_option("--expert-file", a.expert_file, "One agenda per line");
  cmd->add_option("--epochs", a.epochs);
  cmd->add_option("--lr", a.lr);
  cmd->add_option("--seed", a.seed);
  a.tau_opt = cmd->add_option("--tau", a.tau, "Adaptive survival mass");
  cmd->add_option("--out", a.out, "Model file")->required();
  cmd->add_option("--loss", a.loss)->check(CLI::IsMember({"mse", "cross-entropy"}));
  cmd->add_option("--guard", a.guard, "Minimum |sum of weights|");
  cmd->add_option("--init-range", a.init_range);
  cmd->add_option("--max-concepts", a.max_concepts, "Concept cap per lattice");
  a.rounds_opt = cmd->add_option("--max-rounds", a.max_rounds, "Adaptive round limit");
  a.blocks_opt = cmd->add_option("--max-blocks", a.max_blocks, "Adaptive blocks per agenda");
  cmd->add_option("--scaling", a.scaling)->check(CLI::IsMember({"terciles", "nominal"}));
  cmd->add_option("--categorical", a.categorical, "Columns read as categorical");
  a.feature_agendas_opt =
      cmd->add_flag("--feature-agendas", a.feature_agendas, "Blocks are single features");
}

void check_train_flags(const TrainArgs& a) {
  auto given = [](const CLI::Option* o) { return o->count() > 0; };
  if (given(a.expert_opt) && a.basis != "expert") {
    throw UsageError("--expert-file requires --basis expert");
  }
  if (a.basis == "expert" && !given(a.expert_opt)) {
    throw UsageError("--basis expert requires --expert-file");
  }
  if (a.basis == "expert") {
    for (const auto* o : {a.alpha_opt, a.include_full_opt, a.feature_agendas_opt}) {
      if (given(o)) throw UsageError(o->get_name() + " does not apply to --basis expert");
    }
  }
  if (a.basis != "adaptive") {
    for (const auto* o : {a.tau_opt, a.rounds_opt, a.blocks_opt}) {
      if (given(o)) throw UsageError(o->get_name() + " requires --basis adaptive");
    }
  }
  const bool scorer = is_outlier_scorer(*parse_learner(a.learner));
  if (a.task == "classify" && scorer) {
    throw UsageError("--task classify requires a jsm learner");
  }
  if (a.task == "outlier" && !scorer) {
    throw UsageError("--task outlier requires --learner closure or sugiyama");
  }
}

int cmd_train(const TrainArgs& a, std::ostream& out, std::ostream& err) {
  check_train_flags(a);
  const Task task = *parse_task(a.task);
  const LearnerKind learner = *parse_learner(a.learner);

  TableOptions topts;
  topts.label_column = a.label_col;
  topts.require_label = true;
  for (const auto& c : a.categorical) topts.kind_overrides[c] = AttributeKind::categorical;
  const ParsedTable table = parse_table(read_file(a.data), topts);

  ScalingOptions sopts;
  sopts.strategy = a.scaling == "nominal" ? ScalingStrategy::nominal_only : ScalingStrategy::terciles;
  TrainingData data = make_training_data(table, task, sopts);
  for (const auto& w : data.spec.warnings) err << "warning: " << w << "\n";

  TrainingConfig config;
  config.epochs = a.epochs;
  config.learning_rate = a.lr;
  config.seed = a.seed;
  config.loss = *parse_loss(a.loss);
  config.guard = a.guard;
  config.init_range = a.init_range;
  config.validate();
  const EnumerationOptions enumeration{a.max_concepts};

  const AttributeGroups groups =
      a.feature_agendas ? singleton_groups(data.context.features()) : data.spec.groups();
  std::vector<FeatureSet> basis;
  if (a.basis == "bounded") {
    basis = basis_bounded(groups, a.alpha, a.include_full);
  } else if (a.basis == "expert") {
    basis = basis_expert(parse_expert_file(read_file(a.expert_file)), data.spec.groups(),
                         data.context.features());
  } else {
    BasisStrategyConfig bcfg;
    bcfg.strategy = BasisStrategy::adaptive;
    bcfg.alpha = a.alpha;
    bcfg.include_full = a.include_full;
    bcfg.tau = a.tau;
    bcfg.max_rounds = a.max_rounds;
    bcfg.max_blocks = a.max_blocks;
    const WeightTrainer trainer = [&](const std::vector<FeatureSet>& candidate) {
      return train_task(data, candidate, learner, task, config, enumeration).state().agenda.weights;
    };
    AdaptiveResult result = basis_adaptive(groups, trainer, bcfg);
    for (const auto& line : result.log) err << line << "\n";
    basis = std::move(result.weights.basis);
  }

  const TrainedModel model = train_task(std::move(data), basis, learner, task, config, enumeration);
  ModelState state = model.state();
  state.label_column = a.label_col;
  state.metadata.basis_strategy = a.basis;
  write_file(a.out, serialize_model(state));

  out << "final loss: " << format_double(state.metadata.final_loss) << "\n";
  if (state.metadata.skipped_steps > 0) {
    out << "skipped steps: " << state.metadata.skipped_steps << "\n";
  }
  out << "agenda weights:\n";
  for (std::size_t i = 0; i < state.agenda.basis.size(); ++i) {
    out << "  " << format_double(state.agenda.weights[i]) << "\t"
        << agenda_label(state.agenda.basis[i], state.data) << "\n";
  }
  return kExitOk;
}

// ---- predict

struct PredictArgs {
  std::string model;
  std::string data;
};

void add_predict(CLI::App& app, PredictArgs& a) {
  auto* cmd = app.add_subcommand("predict", "Print memberships and decisions per object");
  cmd->add_option("--model", a.model)->required();
  cmd->add_option("--data", a.data)->required();
}

int cmd_predict(const PredictArgs& a, std::ostream& out, std::ostream& err) {
  const TrainedModel model = load_model(a.model);
  const ModelState& s = model.state();
  TableOptions topts;
  if (!s.label_column.empty()) topts.label_column = s.label_column;
  topts.allow_empty = true;
  const ParsedTable table = parse_table(read_file(a.data), topts);
  if (table.data.objects.empty()) return kExitOk;
  require_attributes(table.data, s.data.spec);

  bool skipped = false;
  for (std::size_t i = 0; i < table.data.objects.size(); ++i) {
    const std::string& id = table.data.objects[i];
    Prediction p;
    try {
      p = model.predict(row_values(table.data, i));
    } catch (const Error& e) {
      err << "row '" << id << "' skipped: " << e.what() << "\n";
      skipped = true;
      continue;
    }
    out << id;
    if (s.task == Task::outlier) {
      const double score = p.memberships.at(0);
      out << "\t" << format_double(score) << "\t" << (score >= 0.5 ? "outlier" : "inlier") << "\n";
      continue;
    }
    for (double m : p.memberships) out << "\t" << format_double(m);
    out << "\t" << (p.undecided ? std::string("undecided") : s.data.class_labels[p.decided]) << "\n";
  }
  return skipped ? kExitPartial : kExitOk;
}

// ---- explain

struct ExplainArgs {
  std::string model;
};

void add_explain(CLI::App& app, ExplainArgs& a) {
  auto* cmd = app.add_subcommand("explain", "Print agenda weights, masses and feature importance");
  cmd->add_option("--model", a.model)->required();
}

int cmd_explain(const ExplainArgs& a, std::ostream& out) {
  const TrainedModel model = load_model(a.model);
  out << to_json(explain(model.state())).dump(2) << "\n";
  return kExitOk;
}

// ---- eval

struct EvalArgs {
  std::string model;
  std::string data;
  double split = 0.0;
  bool leave_one_out = false;
  std::uint64_t seed = 42;

  CLI::Option* split_opt = nullptr;
  CLI::Option* loo_opt = nullptr;
  CLI::Option* seed_opt = nullptr;
};

void add_eval(CLI::App& app, EvalArgs& a) {
  auto* cmd = app.add_subcommand("eval", "Score a model against labeled data");
  cmd->add_option("--model", a.model)->required();
  cmd->add_option("--data", a.data)->required();
  a.split_opt = cmd->add_option("--split", a.split, "Held-out fraction; retrains on the rest")
                    ->check(CLI::Range(0.0, 1.0));
  a.loo_opt = cmd->add_flag("--leave-one-out", a.leave_one_out, "Retrain once per object");
  a.seed_opt = cmd->add_option("--seed", a.seed, "Holdout shuffle seed");
}

struct EvalRows {
  std::vector<std::string> ids;
  std::vector<FeatureSet> intents;
  std::vector<std::size_t> labels;
};

// Rows with a missing or unknown label or an unscalable value are skipped.
EvalRows eval_rows(const ModelState& s, const ParsedTable& table, std::ostream& err,
                   bool& skipped) {
  EvalRows rows;
  for (std::size_t i = 0; i < table.data.objects.size(); ++i) {
    const std::string& id = table.data.objects[i];
    const std::string& label = (*table.labels)[i];
    const auto it = std::find(s.data.class_labels.begin(), s.data.class_labels.end(), label);
    if (it == s.data.class_labels.end()) {
      err << "row '" << id << "' skipped: " << (label.empty() ? "missing label" : "unknown label '" + label + "'") << "\n";
      skipped = true;
      continue;
    }
    try {
      rows.intents.push_back(scale_object(s.data.spec, row_values(table.data, i)));
    } catch (const Error& e) {
      err << "row '" << id << "' skipped: " << e.what() << "\n";
      skipped = true;
      continue;
    }
    rows.ids.push_back(id);
    rows.labels.push_back(static_cast<std::size_t>(it - s.data.class_labels.begin()));
  }
  return rows;
}

TrainedModel retrain(const ModelState& s, const EvalRows& rows,
                     const std::vector<std::size_t>& subset) {
  TrainingData data;
  data.spec = s.data.spec;
  data.class_labels = s.data.class_labels;
  std::vector<std::string> ids;
  std::vector<FeatureSet> intents;
  for (std::size_t i : subset) {
    ids.push_back(rows.ids[i]);
    intents.push_back(rows.intents[i]);
    data.labels.push_back(rows.labels[i]);
  }
  data.context = FormalContext::from_rows(std::move(ids), s.data.context.features(),
                                          std::move(intents));
  return train_task(std::move(data), s.agenda.basis, s.learner, s.task, config_of(s),
                    EnumerationOptions{s.max_concepts});
}

int cmd_eval(const EvalArgs& a, std::ostream& out, std::ostream& err) {
  if (a.split_opt->count() > 0 && a.leave_one_out) {
    throw UsageError("--split and --leave-one-out are exclusive");
  }
  if (a.seed_opt->count() > 0 && a.split_opt->count() == 0) {
    throw UsageError("--seed requires --split");
  }
  if (a.split_opt->count() > 0 && !(a.split > 0.0 && a.split < 1.0)) {
    throw UsageError("--split must lie strictly between 0 and 1");
  }
  const TrainedModel model = load_model(a.model);
  const ModelState& s = model.state();
  if (s.label_column.empty()) throw UsageError("model records no label column");
  TableOptions topts;
  topts.label_column = s.label_column;
  topts.require_label = true;
  const ParsedTable table = parse_table(read_file(a.data), topts);
  require_attributes(table.data, s.data.spec);

  bool skipped = false;
  const EvalRows rows = eval_rows(s, table, err, skipped);
  const std::size_t n = rows.ids.size();
  if (n == 0) throw FormatError("no usable labeled rows");

  // (row, prediction) pairs in evaluation order
  std::vector<std::pair<std::size_t, Prediction>> results;
  std::string mode = "resubstitution";
  if (a.leave_one_out) {
    mode = "leave-one-out";
    if (n < 2) throw FormatError("leave-one-out needs at least two rows");
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<std::size_t> rest;
      for (std::size_t j = 0; j < n; ++j) {
        if (j != i) rest.push_back(j);
      }
      results.emplace_back(i, retrain(s, rows, rest).predict_intent(rows.intents[i]));
    }
  } else if (a.split_opt->count() > 0) {
    mode = "holdout";
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::mt19937_64 rng(a.seed);
    std::shuffle(order.begin(), order.end(), rng);
    const auto held = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(a.split * static_cast<double>(n))));
    if (held >= n) throw FormatError("--split leaves no training rows");
    const std::vector<std::size_t> test(order.begin(), order.begin() + static_cast<long>(held));
    std::vector<std::size_t> rest(order.begin() + static_cast<long>(held), order.end());
    std::sort(rest.begin(), rest.end());
    const TrainedModel m = retrain(s, rows, rest);
    for (std::size_t i : test) results.emplace_back(i, m.predict_intent(rows.intents[i]));
  } else {
    for (std::size_t i = 0; i < n; ++i) results.emplace_back(i, model.predict_intent(rows.intents[i]));
  }

  nlohmann::json j;
  j["mode"] = mode;
  if (s.task == Task::outlier) {
    nlohmann::json scores = nlohmann::json::array();
    std::vector<double> values;
    std::vector<bool> is_outlier;
    for (const auto& [i, p] : results) {
      values.push_back(p.memberships.at(0));
      is_outlier.push_back(rows.labels[i] == 1);
      scores.push_back({{"id", rows.ids[i]},
                        {"score", format_double(values.back())},
                        {"label", s.data.class_labels[rows.labels[i]]}});
    }
    j["scores"] = std::move(scores);
    const auto separation = rank_separation(values, is_outlier);
    j["rank_separation"] = separation ? nlohmann::json(format_double(*separation)) : nlohmann::json(nullptr);
  } else {
    std::vector<std::size_t> actual;
    std::vector<std::optional<std::size_t>> predicted;
    nlohmann::json listing = nlohmann::json::array();
    for (const auto& [i, p] : results) {
      actual.push_back(rows.labels[i]);
      predicted.push_back(p.undecided ? std::nullopt : std::optional(p.decided));
      listing.push_back({{"id", rows.ids[i]},
                         {"actual", s.data.class_labels[rows.labels[i]]},
                         {"predicted", p.undecided ? std::string("undecided")
                                                   : s.data.class_labels[p.decided]}});
    }
    j["metrics"] = to_json(classification_metrics(s.data.class_labels, actual, predicted));
    j["predictions"] = std::move(listing);
  }
  out << j.dump(2) << "\n";
  return skipped ? kExitPartial : kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Agenda-weighted concept lattice classification and outlier detection",
               "fcagenda"};
  app.require_subcommand(1);
  TrainArgs train_args;
  PredictArgs predict_args;
  ExplainArgs explain_args;
  EvalArgs eval_args;
  add_train(app, train_args);
  add_predict(app, predict_args);
  add_explain(app, explain_args);
  add_eval(app, eval_args);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (app.got_subcommand("train")) return cmd_train(train_args, out, err);
    if (app.got_subcommand("predict")) return cmd_predict(predict_args, out, err);
    if (app.got_subcommand("explain")) return cmd_explain(explain_args, out);
    return cmd_eval(eval_args, out, err);
  } catch (const ConceptCapExceeded& e) {
    err << "error: " << e.what() << "\n";
    return kExitResourceCap;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace fcagenda::cli
