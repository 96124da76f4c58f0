#include "fcagenda/agenda.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "fcagenda/error.hpp"

namespace fcagenda {

MassFunction MassFunction::from_assignments(
    std::size_t universe, std::vector<std::pair<FeatureSet, double>> assignments) {
  MassFunction m(universe);
  for (auto& [set, mass] : assignments) {
    if (set.universe() != universe) throw FormatError("focal set over the wrong universe");
    if (!(mass >= 0.0) || !std::isfinite(mass)) throw FormatError("mass must be finite and >= 0");
    if (!m.masses_.emplace(std::move(set), mass).second) {
      throw FormatError("repeated focal set");
    }
  }
  if (std::abs(m.total() - 1.0) > kMassTolerance) {
    throw FormatError("masses must sum to 1");
  }
  return m;
}

MassFunction MassFunction::vacuous(std::size_t universe) {
  MassFunction m(universe);
  m.masses_.emplace(FeatureSet::full(universe), 1.0);
  return m;
}

double MassFunction::mass(const FeatureSet& set) const {
  auto it = masses_.find(set);
  return it == masses_.end() ? 0.0 : it->second;
}

double MassFunction::total() const {
  double t = 0.0;
  for (const auto& [set, mass] : masses_) t += mass;
  return t;
}

void AgendaWeights::validate() const {
  if (basis.size() != weights.size()) throw FormatError("one weight per basis agenda required");
  std::set<FeatureSet> seen;
  for (const auto& b : basis) {
    if (!seen.insert(b).second) throw FormatError("repeated basis agenda");
  }
  for (double w : weights) {
    if (!std::isfinite(w)) throw FormatError("weights must be finite");
  }
}

MassFunction normalize_to_mass(const AgendaWeights& w, bool clip) {
  w.validate();
  if (w.basis.empty()) throw FormatError("no mass");
  std::vector<double> kept(w.weights);
  for (double& x : kept) {
    if (x < 0.0) {
      if (!clip) throw FormatError("negative weight cannot be normalized without clipping");
      x = 0.0;
    }
  }
  const double total = std::accumulate(kept.begin(), kept.end(), 0.0);
  if (!(total > 0.0)) throw FormatError("no mass");
  std::vector<std::pair<FeatureSet, double>> assignments;
  for (std::size_t i = 0; i < kept.size(); ++i) assignments.emplace_back(w.basis[i], kept[i] / total);
  return MassFunction::from_assignments(w.basis.front().universe(), std::move(assignments));
}

MassFunction dempster_combine(const MassFunction& m1, const MassFunction& m2) {
  if (m1.universe() != m2.universe()) throw FormatError("mass functions over different universes");
  std::map<FeatureSet, double> joint;
  double conflict = 0.0;
  for (const auto& [y1, a] : m1.focal_sets()) {
    for (const auto& [y2, b] : m2.focal_sets()) {
      const double p = a * b;
      FeatureSet z = y1 & y2;
      if (z.empty()) {
        conflict += p;
      } else {
        joint[std::move(z)] += p;
      }
    }
  }
  const double norm = 1.0 - conflict;
  if (!(norm > 0.0)) throw FormatError("total conflict: masses cannot be combined");
  std::vector<std::pair<FeatureSet, double>> assignments;
  for (auto& [z, p] : joint) {
    if (p > 0.0) assignments.emplace_back(z, p / norm);
  }
  // Renormalize only when rounding drifted; keeps combination with the
  // vacuous mass exact.
  double total = 0.0;
  for (const auto& [z, p] : assignments) total += p;
  if (std::abs(total - 1.0) > 1e-12) {
    for (auto& [z, p] : assignments) p /= total;
  }
  return MassFunction::from_assignments(m1.universe(), std::move(assignments));
}

std::vector<double> pignistic(const MassFunction& m) {
  std::vector<double> bet(m.universe(), 0.0);
  for (const auto& [y, mass] : m.focal_sets()) {
    if (mass == 0.0) continue;
    const std::size_t size = y.count();
    if (size == 0) throw FormatError("pignistic transform undefined with mass on the empty set");
    const double share = mass / static_cast<double>(size);
    y.for_each([&](std::size_t x) { bet[x] += share; });
  }
  return bet;
}

std::vector<double> plausibility_transform(const MassFunction& m) {
  std::vector<double> pl(m.universe(), 0.0);
  for (const auto& [y, mass] : m.focal_sets()) {
    y.for_each([&](std::size_t x) { pl[x] += mass; });
  }
  const double total = std::accumulate(pl.begin(), pl.end(), 0.0);
  if (!(total > 0.0)) throw FormatError("plausibility transform undefined: all plausibilities are 0");
  for (double& p : pl) p /= total;
  return pl;
}

AttributeGroups singleton_groups(const std::vector<std::string>& feature_names) {
  std::vector<AttributeGroup> groups;
  for (std::size_t i = 0; i < feature_names.size(); ++i) groups.push_back({feature_names[i], i, 1});
  return AttributeGroups(std::move(groups));
}

namespace {

// All k-combinations of `items`, in lexicographic order.
void combinations(const std::vector<std::size_t>& items, std::size_t k,
                  const std::function<void(const std::vector<std::size_t>&)>& visit) {
  if (k == 0 || k > items.size()) return;
  std::vector<std::size_t> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  std::vector<std::size_t> chosen(k);
  while (true) {
    for (std::size_t i = 0; i < k; ++i) chosen[i] = items[idx[i]];
    visit(chosen);
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == items.size() - k + (i - 1)) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

std::vector<FeatureSet> block_unions(const AttributeGroups& groups,
                                     const std::vector<std::size_t>& group_indices,
                                     std::size_t max_blocks) {
  std::vector<FeatureSet> out;
  for (std::size_t k = 1; k <= std::min(max_blocks, group_indices.size()); ++k) {
    combinations(group_indices, k, [&](const std::vector<std::size_t>& chosen) {
      out.push_back(groups.blocks(chosen));
    });
  }
  return out;
}

std::vector<std::size_t> all_groups(const AttributeGroups& groups) {
  std::vector<std::size_t> g(groups.size());
  std::iota(g.begin(), g.end(), 0);
  return g;
}

}  // namespace

std::vector<FeatureSet> basis_bounded(const AttributeGroups& groups, std::size_t alpha,
                                      bool include_full) {
  if (alpha < 1) throw FormatError("alpha must be at least 1");
  if (alpha > groups.size()) {
    throw FormatError("alpha (" + std::to_string(alpha) + ") exceeds the number of attributes (" +
                      std::to_string(groups.size()) + ")");
  }
  std::vector<FeatureSet> basis = block_unions(groups, all_groups(groups), alpha);
  if (include_full) {
    FeatureSet full = FeatureSet::full(groups.feature_count());
    if (std::find(basis.begin(), basis.end(), full) == basis.end()) basis.push_back(full);
  }
  return basis;
}

std::vector<FeatureSet> basis_expert(const std::vector<std::vector<std::string>>& agendas,
                                     const AttributeGroups& groups,
                                     const std::vector<std::string>& feature_names) {
  if (agendas.empty()) throw FormatError("expert basis is empty");
  std::set<FeatureSet> unique;
  for (const auto& names : agendas) {
    if (names.empty()) throw FormatError("expert agenda is empty");
    FeatureSet agenda(groups.feature_count());
    for (const auto& name : names) {
      if (auto g = groups.find(name)) {
        agenda |= groups.block(*g);
        continue;
      }
      auto it = std::find(feature_names.begin(), feature_names.end(), name);
      if (it == feature_names.end()) throw FormatError("unknown attribute '" + name + "'");
      agenda.insert(static_cast<std::size_t>(it - feature_names.begin()));
    }
    unique.insert(std::move(agenda));
  }
  return {unique.begin(), unique.end()};
}

AdaptiveResult basis_adaptive(const AttributeGroups& groups, const WeightTrainer& train,
                              const BasisStrategyConfig& config) {
  if (!(config.tau < 1.0)) throw FormatError("tau must be below 1");
  if (config.max_rounds < 1) throw FormatError("at least one round required");

  const FeatureSet full = FeatureSet::full(groups.feature_count());
  std::vector<FeatureSet> basis = basis_bounded(groups, std::max<std::size_t>(config.alpha, 1), false);
  std::set<FeatureSet> previous;
  AdaptiveResult result;

  for (std::size_t round = 1; round <= config.max_rounds; ++round) {
    AgendaWeights trained{basis, train(basis)};
    trained.validate();
    result.rounds = round;

    std::vector<double> mass(basis.size(), 0.0);
    try {
      const MassFunction m = normalize_to_mass(trained, true);
      for (std::size_t i = 0; i < basis.size(); ++i) mass[i] = m.mass(basis[i]);
    } catch (const FormatError&) {
      // every weight non-positive: nothing survives
    }

    AgendaWeights survivors;
    bool new_agenda_survived = false;
    std::size_t widest = 0;
    FeatureSet reach(groups.feature_count());
    for (std::size_t i = 0; i < basis.size(); ++i) {
      if (mass[i] < config.tau) continue;
      survivors.basis.push_back(basis[i]);
      survivors.weights.push_back(trained.weights[i]);
      if (!previous.contains(basis[i])) new_agenda_survived = true;
      widest = std::max(widest, groups.groups_touching(basis[i]).size());
      reach |= basis[i];
    }
    result.log.push_back("round " + std::to_string(round) + ": " + std::to_string(basis.size()) +
                         " agendas, " + std::to_string(survivors.basis.size()) + " kept");

    if (survivors.basis.empty()) {
      if (round == 1) throw FormatError("no surviving agenda");
      break;  // keep the previous round's result
    }
    result.weights = std::move(survivors);
    if (round > 1 && !new_agenda_survived) break;
    if (std::find(basis.begin(), basis.end(), full) != basis.end()) break;
    if (round == config.max_rounds) break;

    std::size_t limit = widest + 1;
    if (config.max_blocks > 0) limit = std::min(limit, config.max_blocks);
    std::vector<FeatureSet> next = block_unions(groups, groups.groups_touching(reach), limit);

    previous = std::set<FeatureSet>(basis.begin(), basis.end());
    const bool adds_something = std::any_of(next.begin(), next.end(), [&](const FeatureSet& a) {
      return !previous.contains(a);
    });
    if (!adds_something) break;
    basis = std::move(next);
  }
  return result;
}

}  // namespace fcagenda
