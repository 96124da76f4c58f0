#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fcagenda/agenda.hpp"
#include "fcagenda/learners.hpp"
#include "fcagenda/scaling.hpp"

namespace fcagenda {

enum class LossKind { mse, cross_entropy };
enum class Task { classify, outlier };

std::string_view loss_name(LossKind kind);
std::optional<LossKind> parse_loss(std::string_view name);
std::string_view task_name(Task task);
std::optional<Task> parse_task(std::string_view name);

struct TrainingConfig {
  std::size_t epochs = 500;
  double learning_rate = 0.1;
  std::uint64_t seed = 42;
  LossKind loss = LossKind::mse;
  // Minimum |sum of weights|. Training keeps the weights at unit L1 norm.
  double guard = 1e-3;
  // Initial weights are uniform in [-init_range, init_range].
  double init_range = 0.5;

  void validate() const;
};

// Alg_k(a, L) for every training object a, channel k and basis lattice L.
// Values for one (a, k) are contiguous over lattices.
class OutputTable {
 public:
  OutputTable(std::size_t objects, std::size_t channels, std::size_t lattices);

  std::size_t objects() const noexcept { return objects_; }
  std::size_t channels() const noexcept { return channels_; }
  std::size_t lattices() const noexcept { return lattices_; }

  double& at(std::size_t a, std::size_t k, std::size_t l) {
    return values_[(a * channels_ + k) * lattices_ + l];
  }
  double at(std::size_t a, std::size_t k, std::size_t l) const {
    return values_[(a * channels_ + k) * lattices_ + l];
  }
  std::span<const double> across_lattices(std::size_t a, std::size_t k) const {
    return {values_.data() + (a * channels_ + k) * lattices_, lattices_};
  }

  bool abstained(std::size_t a, std::size_t l) const { return abstained_[a * lattices_ + l] != 0; }
  void set_abstained(std::size_t a, std::size_t l, bool v) {
    abstained_[a * lattices_ + l] = v ? 1 : 0;
  }

 private:
  std::size_t objects_;
  std::size_t channels_;
  std::size_t lattices_;
  std::vector<double> values_;
  std::vector<unsigned char> abstained_;
};

// Evaluates every learner exactly once on every intent.
OutputTable build_output_table(std::span<const LatticeLearner* const> learners,
                               std::span<const FeatureSet> intents);

struct Prediction {
  std::vector<double> memberships;
  // argmax, lowest index on ties
  std::size_t decided = 0;
  // every basis lattice abstained
  bool undecided = false;
};

// Weighted mean of the per-lattice outputs with the plain weight sum as the
// denominator. Throws GuardViolation when |sum w| < guard.
Prediction ensemble_output(std::span<const double> weights, const OutputTable& table,
                           std::size_t object, double guard);
Prediction ensemble_output(std::span<const double> weights,
                           const std::vector<MembershipVector>& per_lattice, double guard);

// Flat [object * channels + k] outputs for every table row.
std::vector<double> ensemble_outputs(std::span<const double> weights, const OutputTable& table,
                                     double guard);

// mse: mean over (object, class) of squared error. cross_entropy: mean
// binary cross-entropy with outputs clamped to [1e-7, 1 - 1e-7].
double loss_value(std::span<const double> outputs, std::span<const double> targets,
                  LossKind kind);

// Gradient of loss_value(ensemble_outputs(w)) with respect to w.
std::vector<double> grad_weights(std::span<const double> weights, const OutputTable& table,
                                 std::span<const double> targets, LossKind kind, double guard);

struct FitResult {
  std::vector<double> weights;
  // loss before every epoch, then the loss after the last step
  std::vector<double> loss_curve;
  std::size_t skipped_steps = 0;
};

// Full-batch gradient descent on the ensemble weights.
FitResult fit_weights(const OutputTable& table, std::span<const double> targets,
                      const TrainingConfig& config);

// Scaled training context with one class index per object.
struct TrainingData {
  ScalingSpec spec;
  FormalContext context;
  std::vector<std::string> class_labels;
  std::vector<std::size_t> labels;
};

// Scales a labeled table. Class labels are the sorted distinct non-empty
// label cells (exactly {"0", "1"} for outlier detection); an empty label
// cell leaves its object unlabeled.
TrainingData make_training_data(const ParsedTable& table, Task task,
                                const ScalingOptions& options = {});

struct TrainingMetadata {
  std::uint64_t seed = 0;
  std::size_t epochs = 0;
  double learning_rate = 0.0;
  LossKind loss = LossKind::mse;
  double guard = 1e-3;
  double final_loss = 0.0;
  std::size_t skipped_steps = 0;
  std::string basis_strategy;
  // Kept in memory only; not persisted.
  std::vector<double> loss_curve;
};

// Everything a model file holds. Lattices are rebuilt from it.
struct ModelState {
  Task task = Task::classify;
  LearnerKind learner = LearnerKind::jsm_strict;
  TrainingData data;
  AgendaWeights agenda;
  TrainingMetadata metadata;
  // Column of the training table that held the labels.
  std::string label_column;
  std::size_t max_concepts = EnumerationOptions{}.max_concepts;
};

std::vector<std::unique_ptr<LatticeLearner>> build_learners(const TrainingData& data,
                                                            const std::vector<FeatureSet>& basis,
                                                            LearnerKind learner,
                                                            const EnumerationOptions& options);

// Targets for the labeled objects: one-hot rows (classification) or the
// 0/1 indicator (outlier).
std::vector<double> training_targets(const TrainingData& data, Task task);

class TrainedModel {
 public:
  explicit TrainedModel(ModelState state);
  // `learners` must have been built from `state` by build_learners.
  TrainedModel(ModelState state, std::vector<std::unique_ptr<LatticeLearner>> learners);

  const ModelState& state() const noexcept { return state_; }
  const std::vector<std::unique_ptr<LatticeLearner>>& learners() const noexcept {
    return learners_;
  }

  // Intent over the model's scaled features.
  Prediction predict_intent(const FeatureSet& intent) const;
  // Raw attribute values keyed by attribute name.
  Prediction predict(const std::map<std::string, std::string>& row) const;
  double score_outlier(const std::map<std::string, std::string>& row) const;

 private:
  ModelState state_;
  std::vector<std::unique_ptr<LatticeLearner>> learners_;
};

// Dispatches on the task to train or train_outlier.
TrainedModel train_task(TrainingData data, std::vector<FeatureSet> basis, LearnerKind learner,
                        Task task, const TrainingConfig& config,
                        const EnumerationOptions& options = {});

TrainedModel train(TrainingData data, std::vector<FeatureSet> basis, LearnerKind learner,
                   const TrainingConfig& config, const EnumerationOptions& options = {});

// Labels must be the 0/1 classes {"0", "1"}; learner must be an outlier scorer.
TrainedModel train_outlier(TrainingData data, std::vector<FeatureSet> basis, LearnerKind scorer,
                           const TrainingConfig& config, const EnumerationOptions& options = {});

}  // namespace fcagenda
