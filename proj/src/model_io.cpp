#include "fcagenda/model_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "fcagenda/error.hpp"
#include "fcagenda/numeric_text.hpp"

namespace fcagenda {

using nlohmann::json;

namespace {

constexpr std::string_view kFormatTag = "fcagenda-model";

std::string number_text(double v) { return format_double(v); }

double number_from(const json& j, const char* what) {
  if (!j.is_string()) throw FormatError(std::string("model: ") + what + " must be a decimal string");
  auto v = parse_double(j.get<std::string>());
  if (!v) throw FormatError(std::string("model: bad number for ") + what);
  return *v;
}

json scale_to_json(const AttributeScale& a) {
  json j;
  j["name"] = a.name;
  j["kind"] = a.kind == AttributeKind::numeric ? "numeric" : "categorical";
  j["scale"] = a.scale == ScaleKind::nominal ? "nominal" : "ordinal";
  if (a.scale == ScaleKind::nominal) {
    j["values"] = a.values;
  } else {
    json cuts = json::array();
    for (double c : a.cuts) cuts.push_back(number_text(c));
    j["cuts"] = std::move(cuts);
    j["labels"] = a.labels;
  }
  return j;
}

AttributeScale scale_from_json(const json& j) {
  AttributeScale a;
  a.name = j.at("name").get<std::string>();
  const auto kind = j.at("kind").get<std::string>();
  if (kind != "numeric" && kind != "categorical") throw FormatError("model: bad attribute kind");
  a.kind = kind == "numeric" ? AttributeKind::numeric : AttributeKind::categorical;
  const auto scale = j.at("scale").get<std::string>();
  if (scale == "nominal") {
    a.scale = ScaleKind::nominal;
    a.values = j.at("values").get<std::vector<std::string>>();
    if (a.values.empty()) throw FormatError("model: nominal attribute without values");
  } else if (scale == "ordinal") {
    a.scale = ScaleKind::ordinal;
    for (const auto& c : j.at("cuts")) a.cuts.push_back(number_from(c, "cut point"));
    a.labels = j.at("labels").get<std::vector<std::string>>();
    if (a.cuts.empty() || a.labels.size() != a.cuts.size() + 1) {
      throw FormatError("model: ordinal attribute needs one more label than cut points");
    }
    for (std::size_t i = 1; i < a.cuts.size(); ++i) {
      if (!(a.cuts[i - 1] < a.cuts[i])) throw FormatError("model: cut points not increasing");
    }
  } else {
    throw FormatError("model: bad scale kind");
  }
  return a;
}

}  // namespace

std::string serialize_model(const ModelState& s) {
  const auto& ctx = s.data.context;
  json j;
  j["format"] = kFormatTag;
  j["version"] = kModelFormatVersion;
  j["task"] = task_name(s.task);
  j["learner"] = learner_name(s.learner);
  j["classes"] = s.data.class_labels;
  j["label_column"] = s.label_column;
  j["max_concepts"] = s.max_concepts;

  json attrs = json::array();
  for (const auto& a : s.data.spec.attributes) attrs.push_back(scale_to_json(a));
  j["scaling"] = {{"attributes", std::move(attrs)}, {"warnings", s.data.spec.warnings}};
  j["features"] = ctx.features();
  json groups = json::array();
  const AttributeGroups spec_groups = s.data.spec.groups();
  for (const auto& g : spec_groups.groups()) {
    groups.push_back({{"attribute", g.attribute}, {"first", g.first}, {"count", g.count}});
  }
  j["groups"] = std::move(groups);

  json basis = json::array();
  for (const auto& agenda : s.agenda.basis) {
    std::vector<std::string> names;
    agenda.for_each([&](std::size_t x) { names.push_back(ctx.features()[x]); });
    std::sort(names.begin(), names.end());
    basis.push_back(std::move(names));
  }
  j["basis"] = std::move(basis);
  json weights = json::array();
  for (double w : s.agenda.weights) weights.push_back(number_text(w));
  j["weights"] = std::move(weights);

  json rows = json::array();
  for (std::size_t a = 0; a < ctx.object_count(); ++a) rows.push_back(ctx.row(a).indices());
  json labels = json::array();
  for (std::size_t label : s.data.labels) {
    labels.push_back(label == kUnlabeled ? std::string() : s.data.class_labels[label]);
  }
  j["training"] = {{"objects", ctx.objects()}, {"incidence", std::move(rows)},
                   {"labels", std::move(labels)}};

  const auto& m = s.metadata;
  j["metadata"] = {{"seed", m.seed},
                   {"epochs", m.epochs},
                   {"learning_rate", number_text(m.learning_rate)},
                   {"loss", loss_name(m.loss)},
                   {"guard", number_text(m.guard)},
                   {"final_loss", number_text(m.final_loss)},
                   {"skipped_steps", m.skipped_steps},
                   {"basis_strategy", m.basis_strategy}};
  return j.dump(2) + "\n";
}

ModelState parse_model(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw FormatError(std::string("model: not valid JSON (") + e.what() + ")");
  }
  try {
    if (!j.is_object() || j.value("format", std::string()) != kFormatTag) {
      throw FormatError("model: not a model file");
    }
    const int version = j.at("version").get<int>();
    if (version != kModelFormatVersion) {
      throw FormatError("model: unsupported format version " + std::to_string(version));
    }
    ModelState s;
    auto task = parse_task(j.at("task").get<std::string>());
    auto learner = parse_learner(j.at("learner").get<std::string>());
    if (!task || !learner) throw FormatError("model: unknown task or learner");
    s.task = *task;
    s.learner = *learner;
    s.label_column = j.at("label_column").get<std::string>();
    s.max_concepts = j.at("max_concepts").get<std::size_t>();
    s.data.class_labels = j.at("classes").get<std::vector<std::string>>();
    if (s.data.class_labels.empty()) throw FormatError("model: no classes");

    for (const auto& a : j.at("scaling").at("attributes")) {
      s.data.spec.attributes.push_back(scale_from_json(a));
    }
    s.data.spec.warnings = j.at("scaling").at("warnings").get<std::vector<std::string>>();
    const auto features = j.at("features").get<std::vector<std::string>>();
    if (features != s.data.spec.feature_names()) {
      throw FormatError("model: feature list does not match the scaling spec");
    }
    const AttributeGroups groups = s.data.spec.groups();
    const auto& jg = j.at("groups");
    if (jg.size() != groups.size()) throw FormatError("model: attribute groups mismatch");
    for (std::size_t i = 0; i < groups.size(); ++i) {
      if (jg[i].at("attribute").get<std::string>() != groups[i].attribute ||
          jg[i].at("first").get<std::size_t>() != groups[i].first ||
          jg[i].at("count").get<std::size_t>() != groups[i].count) {
        throw FormatError("model: attribute groups mismatch");
      }
    }

    const auto& tr = j.at("training");
    auto objects = tr.at("objects").get<std::vector<std::string>>();
    const auto& incidence = tr.at("incidence");
    const auto& labels = tr.at("labels");
    if (incidence.size() != objects.size() || labels.size() != objects.size()) {
      throw FormatError("model: training table is ragged");
    }
    std::vector<FeatureSet> rows;
    for (const auto& r : incidence) {
      FeatureSet row(features.size());
      for (const auto& x : r) {
        const auto idx = x.get<std::size_t>();
        if (idx >= features.size()) throw FormatError("model: feature index out of range");
        row.insert(idx);
      }
      rows.push_back(std::move(row));
    }
    for (const auto& l : labels) {
      const auto name = l.get<std::string>();
      if (name.empty()) {
        s.data.labels.push_back(kUnlabeled);
        continue;
      }
      auto it = std::find(s.data.class_labels.begin(), s.data.class_labels.end(), name);
      if (it == s.data.class_labels.end()) throw FormatError("model: unknown training label");
      s.data.labels.push_back(static_cast<std::size_t>(it - s.data.class_labels.begin()));
    }
    s.data.context = FormalContext::from_rows(std::move(objects), features, std::move(rows));

    const auto& jb = j.at("basis");
    const auto& jw = j.at("weights");
    if (jb.size() != jw.size()) throw FormatError("model: one weight per basis agenda required");
    for (const auto& agenda : jb) {
      FeatureSet set(features.size());
      for (const auto& name : agenda) {
        auto idx = s.data.context.feature_index(name.get<std::string>());
        if (!idx) throw FormatError("model: unknown feature in basis");
        set.insert(*idx);
      }
      s.agenda.basis.push_back(std::move(set));
    }
    for (const auto& w : jw) s.agenda.weights.push_back(number_from(w, "weight"));

    const auto& m = j.at("metadata");
    s.metadata.seed = m.at("seed").get<std::uint64_t>();
    s.metadata.epochs = m.at("epochs").get<std::size_t>();
    s.metadata.learning_rate = number_from(m.at("learning_rate"), "learning rate");
    auto loss = parse_loss(m.at("loss").get<std::string>());
    if (!loss) throw FormatError("model: unknown loss");
    s.metadata.loss = *loss;
    s.metadata.guard = number_from(m.at("guard"), "guard");
    s.metadata.final_loss = number_from(m.at("final_loss"), "final loss");
    s.metadata.skipped_steps = m.at("skipped_steps").get<std::size_t>();
    s.metadata.basis_strategy = m.at("basis_strategy").get<std::string>();
    return s;
  } catch (const json::exception& e) {
    throw FormatError(std::string("model: ") + e.what());
  }
}

void save_model(const TrainedModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write model file " + path.string());
  out << serialize_model(model.state());
  if (!out) throw FormatError("failed writing model file " + path.string());
}

TrainedModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot read model file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return TrainedModel(parse_model(buf.str()));
}

}  // namespace fcagenda
