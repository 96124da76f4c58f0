#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fcagenda/trainer.hpp"

namespace fcagenda {

struct AgendaEntry {
  std::vector<std::string> features;    // sorted names
  std::vector<std::string> attributes;  // attributes the agenda touches
  double weight = 0.0;
  double mass = 0.0;  // clip-normalized
  // A negative weight: the lattice's categorization runs against the task.
  bool opposite_categorization = false;
};

struct ExplanationReport {
  // Descending weight, then lexicographic feature list.
  std::vector<AgendaEntry> agendas;
  std::vector<std::string> feature_names;
  std::vector<double> pignistic;
  std::vector<double> plausibility;
  bool clipped = false;  // some weight was negative and counted as 0
};

// Throws FormatError("no mass") when no weight is positive.
ExplanationReport explain(const ModelState& state);
nlohmann::json to_json(const ExplanationReport& report);

struct ClassificationMetrics {
  std::vector<std::string> classes;
  std::size_t total = 0;
  std::size_t correct = 0;
  std::size_t undecided = 0;
  double accuracy = 0.0;
  double abstention_rate = 0.0;
  // undefined when the class was never predicted / never present
  std::vector<std::optional<double>> precision;
  std::vector<std::optional<double>> recall;
  // confusion[actual][predicted]; the extra last column counts undecided
  std::vector<std::vector<std::size_t>> confusion;
};

// predicted[i] == nullopt marks an undecided object.
ClassificationMetrics classification_metrics(const std::vector<std::string>& classes,
                                             const std::vector<std::size_t>& actual,
                                             const std::vector<std::optional<std::size_t>>& predicted);
nlohmann::json to_json(const ClassificationMetrics& metrics);

// Probability that a random outlier scores above a random inlier (ties
// count one half). nullopt when either group is empty.
std::optional<double> rank_separation(const std::vector<double>& scores,
                                      const std::vector<bool>& is_outlier);

}  // namespace fcagenda
