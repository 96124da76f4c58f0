#include "fcagenda/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "fcagenda/error.hpp"
#include "fcagenda/kernels.hpp"

namespace fcagenda {

std::string_view loss_name(LossKind kind) {
  return kind == LossKind::mse ? "mse" : "cross-entropy";
}

std::optional<LossKind> parse_loss(std::string_view name) {
  if (name == "mse") return LossKind::mse;
  if (name == "cross-entropy") return LossKind::cross_entropy;
  return std::nullopt;
}

std::string_view task_name(Task task) { return task == Task::classify ? "classify" : "outlier"; }

std::optional<Task> parse_task(std::string_view name) {
  if (name == "classify") return Task::classify;
  if (name == "outlier") return Task::outlier;
  return std::nullopt;
}

void TrainingConfig::validate() const {
  if (epochs < 1) throw FormatError("epochs must be at least 1");
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw FormatError("learning rate must be positive");
  }
  if (!(guard > 0.0)) throw FormatError("denominator guard must be positive");
  if (!(init_range > 0.0) || !std::isfinite(init_range)) {
    throw FormatError("init range must be positive");
  }
}

OutputTable::OutputTable(std::size_t objects, std::size_t channels, std::size_t lattices)
    : objects_(objects),
      channels_(channels),
      lattices_(lattices),
      values_(objects * channels * lattices, 0.0),
      abstained_(objects * lattices, 0) {}

OutputTable build_output_table(std::span<const LatticeLearner* const> learners,
                               std::span<const FeatureSet> intents) {
  if (learners.empty()) throw FormatError("empty basis");
  const std::size_t channels = learners.front()->channels();
  OutputTable table(intents.size(), channels, learners.size());
  std::vector<double> buf(channels);
  for (std::size_t l = 0; l < learners.size(); ++l) {
    for (std::size_t a = 0; a < intents.size(); ++a) {
      const bool voted = learners[l]->evaluate(intents[a], buf);
      for (std::size_t k = 0; k < channels; ++k) table.at(a, k, l) = buf[k];
      table.set_abstained(a, l, !voted);
    }
  }
  return table;
}

namespace {

double checked_weight_sum(std::span<const double> weights, double guard) {
  const double s = kernels::active().sum(weights.data(), weights.size());
  if (!(std::abs(s) >= guard)) {
    throw GuardViolation("|sum of weights| = " + std::to_string(std::abs(s)) +
                         " is below the guard " + std::to_string(guard));
  }
  return s;
}

std::size_t argmax(const std::vector<double>& v) {
  std::size_t best = 0;
  for (std::size_t k = 1; k < v.size(); ++k) {
    if (v[k] > v[best]) best = k;
  }
  return best;
}

constexpr double kClampLow = 1e-7;
constexpr double kClampHigh = 1.0 - 1e-7;

}  // namespace

Prediction ensemble_output(std::span<const double> weights, const OutputTable& table,
                           std::size_t object, double guard) {
  if (weights.size() != table.lattices()) throw FormatError("one weight per lattice required");
  const double s = checked_weight_sum(weights, guard);
  const auto& k = kernels::active();
  Prediction p;
  p.memberships.resize(table.channels());
  for (std::size_t c = 0; c < table.channels(); ++c) {
    p.memberships[c] = k.dot(weights.data(), table.across_lattices(object, c).data(),
                             weights.size()) / s;
  }
  p.decided = argmax(p.memberships);
  p.undecided = true;
  for (std::size_t l = 0; l < table.lattices(); ++l) {
    if (!table.abstained(object, l)) p.undecided = false;
  }
  return p;
}

Prediction ensemble_output(std::span<const double> weights,
                           const std::vector<MembershipVector>& per_lattice, double guard) {
  if (per_lattice.empty()) throw FormatError("empty basis");
  OutputTable table(1, per_lattice.front().size(), per_lattice.size());
  for (std::size_t l = 0; l < per_lattice.size(); ++l) {
    if (per_lattice[l].size() != table.channels()) throw FormatError("ragged lattice outputs");
    for (std::size_t c = 0; c < table.channels(); ++c) table.at(0, c, l) = per_lattice[l][c];
  }
  return ensemble_output(weights, table, 0, guard);
}

std::vector<double> ensemble_outputs(std::span<const double> weights, const OutputTable& table,
                                     double guard) {
  if (weights.size() != table.lattices()) throw FormatError("one weight per lattice required");
  const double s = checked_weight_sum(weights, guard);
  const auto& k = kernels::active();
  std::vector<double> out(table.objects() * table.channels());
  for (std::size_t a = 0; a < table.objects(); ++a) {
    for (std::size_t c = 0; c < table.channels(); ++c) {
      out[a * table.channels() + c] =
          k.dot(weights.data(), table.across_lattices(a, c).data(), weights.size()) / s;
    }
  }
  return out;
}

double loss_value(std::span<const double> outputs, std::span<const double> targets,
                  LossKind kind) {
  if (outputs.size() != targets.size()) throw FormatError("outputs and targets differ in size");
  if (outputs.empty()) return 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < outputs.size(); ++i) {
    if (kind == LossKind::mse) {
      const double d = outputs[i] - targets[i];
      total += d * d;
    } else {
      const double o = std::clamp(outputs[i], kClampLow, kClampHigh);
      total -= targets[i] * std::log(o) + (1.0 - targets[i]) * std::log(1.0 - o);
    }
  }
  return total / static_cast<double>(outputs.size());
}

std::vector<double> grad_weights(std::span<const double> weights, const OutputTable& table,
                                 std::span<const double> targets, LossKind kind, double guard) {
  const std::vector<double> outs = ensemble_outputs(weights, table, guard);
  if (targets.size() != outs.size()) throw FormatError("outputs and targets differ in size");
  const double s = kernels::active().sum(weights.data(), weights.size());
  const double n = static_cast<double>(outs.size());
  std::vector<double> grad(weights.size(), 0.0);
  for (std::size_t a = 0; a < table.objects(); ++a) {
    for (std::size_t c = 0; c < table.channels(); ++c) {
      const std::size_t i = a * table.channels() + c;
      double dloss = 0.0;
      if (kind == LossKind::mse) {
        dloss = 2.0 * (outs[i] - targets[i]) / n;
      } else if (outs[i] > kClampLow && outs[i] < kClampHigh) {
        dloss = (-targets[i] / outs[i] + (1.0 - targets[i]) / (1.0 - outs[i])) / n;
      }
      if (dloss == 0.0) continue;
      // d out / d w_l = (Alg_l - out) / sum(w)
      const auto alg = table.across_lattices(a, c);
      for (std::size_t l = 0; l < weights.size(); ++l) {
        grad[l] += dloss * (alg[l] - outs[i]) / s;
      }
    }
  }
  return grad;
}

namespace {

// Unit L1 norm with a positive sum; leaves every ensemble output unchanged.
bool canonicalize(std::vector<double>& w, double guard) {
  double l1 = 0.0;
  double sum = 0.0;
  for (double x : w) {
    l1 += std::abs(x);
    sum += x;
  }
  if (!(l1 > 0.0) || !std::isfinite(l1)) return false;
  const double scale = (sum < 0.0 ? -1.0 : 1.0) / l1;
  std::vector<double> scaled(w);
  double scaled_sum = 0.0;
  for (double& x : scaled) {
    x *= scale;
    scaled_sum += x;
  }
  if (!(std::abs(scaled_sum) >= guard)) return false;
  w = std::move(scaled);
  return true;
}

constexpr int kMaxHalvings = 20;
constexpr int kMaxInitDraws = 10000;

}  // namespace

FitResult fit_weights(const OutputTable& table, std::span<const double> targets,
                      const TrainingConfig& config) {
  config.validate();
  if (table.lattices() == 0) throw FormatError("empty basis");
  if (table.objects() == 0) throw FormatError("no labeled objects");

  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> init(-config.init_range, config.init_range);
  FitResult fit;
  fit.weights.resize(table.lattices());
  for (int draw = 0;; ++draw) {
    if (draw == kMaxInitDraws) throw GuardViolation("could not draw initial weights");
    for (double& w : fit.weights) w = init(rng);
    if (canonicalize(fit.weights, config.guard)) break;
  }

  fit.loss_curve.reserve(config.epochs + 1);
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    const auto outs = ensemble_outputs(fit.weights, table, config.guard);
    fit.loss_curve.push_back(loss_value(outs, targets, config.loss));
    const auto grad = grad_weights(fit.weights, table, targets, config.loss, config.guard);

    double lr = config.learning_rate;
    bool accepted = false;
    for (int attempt = 0; attempt <= kMaxHalvings && !accepted; ++attempt, lr *= 0.5) {
      std::vector<double> candidate(fit.weights);
      for (std::size_t l = 0; l < candidate.size(); ++l) candidate[l] -= lr * grad[l];
      if (canonicalize(candidate, config.guard)) {
        fit.weights = std::move(candidate);
        accepted = true;
      }
    }
    if (!accepted) ++fit.skipped_steps;
  }
  fit.loss_curve.push_back(
      loss_value(ensemble_outputs(fit.weights, table, config.guard), targets, config.loss));
  return fit;
}

TrainingData make_training_data(const ParsedTable& table, Task task,
                                const ScalingOptions& options) {
  if (!table.labels) throw FormatError("table has no label column");
  TrainingData data;
  data.spec = build_scaling_spec(table.data, options);
  data.context = apply_scaling(table.data, data.spec).context;
  if (task == Task::outlier) {
    data.class_labels = {"0", "1"};
  } else {
    const std::set<std::string> distinct(table.labels->begin(), table.labels->end());
    for (const auto& label : distinct) {
      if (!label.empty()) data.class_labels.push_back(label);
    }
  }
  for (std::size_t a = 0; a < table.labels->size(); ++a) {
    const std::string& label = (*table.labels)[a];
    if (label.empty()) {
      data.labels.push_back(kUnlabeled);
      continue;
    }
    const auto it = std::find(data.class_labels.begin(), data.class_labels.end(), label);
    if (it == data.class_labels.end()) {
      throw FormatError("object '" + table.data.objects[a] + "': outlier label must be 0 or 1");
    }
    data.labels.push_back(static_cast<std::size_t>(it - data.class_labels.begin()));
  }
  return data;
}

std::vector<std::unique_ptr<LatticeLearner>> build_learners(const TrainingData& data,
                                                            const std::vector<FeatureSet>& basis,
                                                            LearnerKind learner,
                                                            const EnumerationOptions& options) {
  if (basis.empty()) throw FormatError("empty basis");
  std::vector<std::unique_ptr<LatticeLearner>> out;
  out.reserve(basis.size());
  for (const auto& agenda : basis) {
    if (agenda.universe() != data.context.feature_count()) {
      throw FormatError("basis agenda over the wrong feature universe");
    }
    try {
      out.push_back(make_learner(learner, enumerate_agenda_lattice(data.context, agenda, options),
                                 data.labels, data.class_labels.size()));
    } catch (const ConceptCapExceeded& e) {
      std::string names;
      agenda.for_each([&](std::size_t x) {
        names += (names.empty() ? "" : ",") + data.context.features()[x];
      });
      throw ConceptCapExceeded(e.cap(), e.partial_count(), "agenda {" + names + "}");
    }
  }
  return out;
}

std::vector<double> training_targets(const TrainingData& data, Task task) {
  std::vector<double> targets;
  const std::size_t channels = task == Task::classify ? data.class_labels.size() : 1;
  for (std::size_t label : data.labels) {
    if (label == kUnlabeled) continue;
    if (task == Task::classify) {
      for (std::size_t k = 0; k < channels; ++k) targets.push_back(k == label ? 1.0 : 0.0);
    } else {
      targets.push_back(static_cast<double>(label));
    }
  }
  return targets;
}

namespace {

void validate_data(const TrainingData& data) {
  if (data.labels.size() != data.context.object_count()) {
    throw FormatError("one label per training object required");
  }
  bool any = false;
  for (std::size_t label : data.labels) {
    if (label == kUnlabeled) continue;
    if (label >= data.class_labels.size()) throw FormatError("label index out of range");
    any = true;
  }
  if (!any) throw FormatError("no labeled objects");
}

std::vector<FeatureSet> labeled_intents(const TrainingData& data) {
  std::vector<FeatureSet> intents;
  for (std::size_t a = 0; a < data.labels.size(); ++a) {
    if (data.labels[a] != kUnlabeled) intents.push_back(data.context.row(a));
  }
  return intents;
}

TrainedModel fit_model(TrainingData data, std::vector<FeatureSet> basis, LearnerKind learner,
                       Task task, const TrainingConfig& config,
                       const EnumerationOptions& options) {
  config.validate();
  validate_data(data);
  auto learners = build_learners(data, basis, learner, options);
  std::vector<const LatticeLearner*> view;
  for (const auto& l : learners) view.push_back(l.get());
  const OutputTable table = build_output_table(view, labeled_intents(data));
  const FitResult fit = fit_weights(table, training_targets(data, task), config);

  ModelState state;
  state.task = task;
  state.learner = learner;
  state.data = std::move(data);
  state.agenda = AgendaWeights{std::move(basis), fit.weights};
  state.metadata.seed = config.seed;
  state.metadata.epochs = config.epochs;
  state.metadata.learning_rate = config.learning_rate;
  state.metadata.loss = config.loss;
  state.metadata.guard = config.guard;
  state.metadata.final_loss = fit.loss_curve.back();
  state.metadata.skipped_steps = fit.skipped_steps;
  state.metadata.loss_curve = fit.loss_curve;
  state.max_concepts = options.max_concepts;
  return TrainedModel(std::move(state), std::move(learners));
}

}  // namespace

namespace {

void validate_state(const ModelState& state) {
  state.agenda.validate();
  if (state.agenda.basis.empty()) throw FormatError("model has an empty basis");
  validate_data(state.data);
  if (state.task == Task::classify && is_outlier_scorer(state.learner)) {
    throw FormatError("classification needs a JSM learner");
  }
  if (state.task == Task::outlier && !is_outlier_scorer(state.learner)) {
    throw FormatError("outlier detection needs the closure or sugiyama scorer");
  }
  checked_weight_sum(state.agenda.weights, state.metadata.guard);
}

}  // namespace

TrainedModel::TrainedModel(ModelState state) : state_(std::move(state)) {
  validate_state(state_);
  learners_ = build_learners(state_.data, state_.agenda.basis, state_.learner,
                             EnumerationOptions{state_.max_concepts});
}

TrainedModel::TrainedModel(ModelState state,
                           std::vector<std::unique_ptr<LatticeLearner>> learners)
    : state_(std::move(state)), learners_(std::move(learners)) {
  validate_state(state_);
  if (learners_.size() != state_.agenda.basis.size()) {
    throw FormatError("one learner per basis agenda required");
  }
}

Prediction TrainedModel::predict_intent(const FeatureSet& intent) const {
  std::vector<const LatticeLearner*> view;
  for (const auto& l : learners_) view.push_back(l.get());
  const FeatureSet one[] = {intent};
  const OutputTable table = build_output_table(view, one);
  return ensemble_output(state_.agenda.weights, table, 0, state_.metadata.guard);
}

Prediction TrainedModel::predict(const std::map<std::string, std::string>& row) const {
  return predict_intent(scale_object(state_.data.spec, row));
}

double TrainedModel::score_outlier(const std::map<std::string, std::string>& row) const {
  return predict(row).memberships.at(0);
}

TrainedModel train(TrainingData data, std::vector<FeatureSet> basis, LearnerKind learner,
                   const TrainingConfig& config, const EnumerationOptions& options) {
  if (is_outlier_scorer(learner)) throw FormatError("classification needs a JSM learner");
  return fit_model(std::move(data), std::move(basis), learner, Task::classify, config, options);
}

TrainedModel train_outlier(TrainingData data, std::vector<FeatureSet> basis, LearnerKind scorer,
                           const TrainingConfig& config, const EnumerationOptions& options) {
  if (!is_outlier_scorer(scorer)) {
    throw FormatError("outlier detection needs the closure or sugiyama scorer");
  }
  if (data.class_labels != std::vector<std::string>{"0", "1"}) {
    throw FormatError("outlier labels must be 0/1");
  }
  return fit_model(std::move(data), std::move(basis), scorer, Task::outlier, config, options);
}

TrainedModel train_task(TrainingData data, std::vector<FeatureSet> basis, LearnerKind learner,
                        Task task, const TrainingConfig& config,
                        const EnumerationOptions& options) {
  if (task == Task::outlier) {
    return train_outlier(std::move(data), std::move(basis), learner, config, options);
  }
  return train(std::move(data), std::move(basis), learner, config, options);
}

}  // namespace fcagenda
