#include "fcagenda/report.hpp"

#include <algorithm>

#include "fcagenda/agenda.hpp"
#include "fcagenda/error.hpp"
#include "fcagenda/numeric_text.hpp"

namespace fcagenda {

ExplanationReport explain(const ModelState& state) {
  const auto& ctx = state.data.context;
  const AttributeGroups groups = state.data.spec.groups();
  const MassFunction mass = normalize_to_mass(state.agenda, true);

  ExplanationReport r;
  r.feature_names = ctx.features();
  for (std::size_t i = 0; i < state.agenda.basis.size(); ++i) {
    const FeatureSet& agenda = state.agenda.basis[i];
    AgendaEntry e;
    agenda.for_each([&](std::size_t x) { e.features.push_back(ctx.features()[x]); });
    std::sort(e.features.begin(), e.features.end());
    for (std::size_t g : groups.groups_touching(agenda)) e.attributes.push_back(groups[g].attribute);
    e.weight = state.agenda.weights[i];
    e.mass = mass.mass(agenda);
    e.opposite_categorization = e.weight < 0.0;
    r.clipped = r.clipped || e.opposite_categorization;
    r.agendas.push_back(std::move(e));
  }
  std::stable_sort(r.agendas.begin(), r.agendas.end(), [](const AgendaEntry& a, const AgendaEntry& b) {
    if (a.weight != b.weight) return a.weight > b.weight;
    return a.features < b.features;
  });
  r.pignistic = pignistic(mass);
  r.plausibility = plausibility_transform(mass);
  return r;
}

nlohmann::json to_json(const ExplanationReport& r) {
  nlohmann::json agendas = nlohmann::json::array();
  for (const auto& e : r.agendas) {
    agendas.push_back({{"features", e.features},
                       {"attributes", e.attributes},
                       {"weight", format_double(e.weight)},
                       {"mass", format_double(e.mass)},
                       {"opposite_categorization", e.opposite_categorization}});
  }
  nlohmann::json importance = nlohmann::json::array();
  for (std::size_t x = 0; x < r.feature_names.size(); ++x) {
    importance.push_back({{"feature", r.feature_names[x]},
                          {"pignistic", format_double(r.pignistic[x])},
                          {"plausibility", format_double(r.plausibility[x])}});
  }
  return {{"agendas", std::move(agendas)},
          {"feature_importance", std::move(importance)},
          {"negative_weights_clipped", r.clipped}};
}

ClassificationMetrics classification_metrics(const std::vector<std::string>& classes,
                                             const std::vector<std::size_t>& actual,
                                             const std::vector<std::optional<std::size_t>>& predicted) {
  if (actual.size() != predicted.size()) throw FormatError("metrics: size mismatch");
  const std::size_t n = classes.size();
  ClassificationMetrics m;
  m.classes = classes;
  m.total = actual.size();
  m.confusion.assign(n, std::vector<std::size_t>(n + 1, 0));
  for (std::size_t i = 0; i < actual.size(); ++i) {
    if (actual[i] >= n) throw FormatError("metrics: label out of range");
    if (!predicted[i]) {
      ++m.undecided;
      ++m.confusion[actual[i]][n];
      continue;
    }
    ++m.confusion[actual[i]][*predicted[i]];
    if (*predicted[i] == actual[i]) ++m.correct;
  }
  if (m.total > 0) {
    m.accuracy = static_cast<double>(m.correct) / static_cast<double>(m.total);
    m.abstention_rate = static_cast<double>(m.undecided) / static_cast<double>(m.total);
  }
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t predicted_k = 0;
    std::size_t actual_k = 0;
    for (std::size_t a = 0; a < n; ++a) predicted_k += m.confusion[a][k];
    for (std::size_t p = 0; p <= n; ++p) actual_k += m.confusion[k][p];
    const double tp = static_cast<double>(m.confusion[k][k]);
    m.precision.push_back(predicted_k ? std::optional(tp / static_cast<double>(predicted_k))
                                      : std::nullopt);
    m.recall.push_back(actual_k ? std::optional(tp / static_cast<double>(actual_k)) : std::nullopt);
  }
  return m;
}

nlohmann::json to_json(const ClassificationMetrics& m) {
  nlohmann::json per_class = nlohmann::json::array();
  for (std::size_t k = 0; k < m.classes.size(); ++k) {
    auto opt = [](const std::optional<double>& v) -> nlohmann::json {
      return v ? nlohmann::json(format_double(*v)) : nlohmann::json(nullptr);
    };
    per_class.push_back({{"class", m.classes[k]},
                         {"precision", opt(m.precision[k])},
                         {"recall", opt(m.recall[k])},
                         {"confusion_row", m.confusion[k]}});
  }
  return {{"objects", m.total},
          {"correct", m.correct},
          {"undecided", m.undecided},
          {"accuracy", format_double(m.accuracy)},
          {"abstention_rate", format_double(m.abstention_rate)},
          {"classes", std::move(per_class)}};
}

std::optional<double> rank_separation(const std::vector<double>& scores,
                                      const std::vector<bool>& is_outlier) {
  if (scores.size() != is_outlier.size()) throw FormatError("metrics: size mismatch");
  double wins = 0.0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!is_outlier[i]) continue;
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (is_outlier[j]) continue;
      ++pairs;
      if (scores[i] > scores[j]) {
        wins += 1.0;
      } else if (scores[i] == scores[j]) {
        wins += 0.5;
      }
    }
  }
  if (pairs == 0) return std::nullopt;
  return wins / static_cast<double>(pairs);
}

}  // namespace fcagenda
