#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "fcagenda/index_set.hpp"
#include "fcagenda/scaling.hpp"

namespace fcagenda {

inline constexpr double kMassTolerance = 1e-9;

// Normalized, non-negative masses over feature subsets of a fixed universe.
class MassFunction {
 public:
  explicit MassFunction(std::size_t universe) : universe_(universe) {}

  // Throws FormatError on negative mass, repeated focal sets, or a total
  // that differs from 1 by more than kMassTolerance.
  static MassFunction from_assignments(std::size_t universe,
                                       std::vector<std::pair<FeatureSet, double>> assignments);
  // All mass on the whole feature set.
  static MassFunction vacuous(std::size_t universe);

  std::size_t universe() const noexcept { return universe_; }
  const std::map<FeatureSet, double>& focal_sets() const noexcept { return masses_; }
  double mass(const FeatureSet& set) const;
  double total() const;

 private:
  std::size_t universe_;
  std::map<FeatureSet, double> masses_;
};

// Real weight per basis agenda. Negative entries are allowed.
struct AgendaWeights {
  std::vector<FeatureSet> basis;
  std::vector<double> weights;

  // Throws FormatError on size mismatch, repeated agendas, or non-finite weights.
  void validate() const;
};

// Masses proportional to the weights. With clip, negative weights count as 0.
// Throws FormatError("no mass") when nothing positive remains.
MassFunction normalize_to_mass(const AgendaWeights& weights, bool clip);

// Dempster's rule of combination; throws FormatError on total conflict.
MassFunction dempster_combine(const MassFunction& m1, const MassFunction& m2);

// BetP(x) = sum over focal Y containing x of m(Y) / |Y|.
std::vector<double> pignistic(const MassFunction& m);

// pl({x}) normalized over all x.
std::vector<double> plausibility_transform(const MassFunction& m);

// One singleton block per feature, for feature-level agendas.
AttributeGroups singleton_groups(const std::vector<std::string>& feature_names);

// Every union of 1..alpha attribute blocks (fewer blocks first, then by
// block indices), followed by the full feature set when include_full.
std::vector<FeatureSet> basis_bounded(const AttributeGroups& groups, std::size_t alpha,
                                      bool include_full);

// Each agenda lists attribute names (or feature names when feature_names is
// non-empty and a name matches a feature). Result is deduplicated and
// sorted.
std::vector<FeatureSet> basis_expert(const std::vector<std::vector<std::string>>& agendas,
                                     const AttributeGroups& groups,
                                     const std::vector<std::string>& feature_names = {});

enum class BasisStrategy { bounded, expert, adaptive };

struct BasisStrategyConfig {
  BasisStrategy strategy = BasisStrategy::bounded;
  std::size_t alpha = 1;
  bool include_full = false;
  // Agendas whose clip-normalized mass falls below tau are dropped.
  double tau = 0.05;
  std::size_t max_rounds = 5;
  // Upper bound on blocks per candidate agenda; 0 leaves only the
  // growth rule (largest surviving agenda plus one block).
  std::size_t max_blocks = 0;
};

// Trains weights for the given basis and returns one weight per agenda.
using WeightTrainer = std::function<std::vector<double>(const std::vector<FeatureSet>&)>;

struct AdaptiveResult {
  AgendaWeights weights;
  std::size_t rounds = 0;
  std::vector<std::string> log;
};

AdaptiveResult basis_adaptive(const AttributeGroups& groups, const WeightTrainer& train,
                              const BasisStrategyConfig& config);

}  // namespace fcagenda
