// Copyright 2026 The DP Trade-off Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dptradeoff/config.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"

namespace dptradeoff {
namespace {

using nlohmann::json;

absl::Status FieldError(const std::string& field, const std::string& what) {
  return absl::InvalidArgumentError(absl::StrFormat("%s: %s", field, what));
}

// Prefixes a validation error with the config field it concerns.
absl::Status InField(const std::string& field, const absl::Status& status) {
  if (status.ok()) return status;
  return absl::Status(status.code(),
                      absl::StrFormat("%s: %s", field, status.message()));
}

// Reads typed fields from one JSON object and rejects unknown keys, naming
// every offending field by its dotted path.
class SectionReader {
 public:
  SectionReader(const json& j, std::string section)
      : j_(j), section_(std::move(section)) {}

  absl::Status CheckShape(std::initializer_list<const char*> allowed) const {
    if (!j_.is_object()) return FieldError(section_, "expected an object");
    for (const auto& [key, value] : j_.items()) {
      bool known = false;
      for (const char* a : allowed) known = known || key == a;
      if (!known) {
        return FieldError(Path(key),
                          absl::StrFormat("unknown field (expected one of %s)",
                                          absl::StrJoin(allowed, ", ")));
      }
    }
    return absl::OkStatus();
  }

  bool Has(const char* key) const { return j_.contains(key); }
  const json& At(const char* key) const { return j_.at(key); }
  std::string Path(const std::string& key) const {
    return section_.empty() ? key : section_ + "." + key;
  }

  absl::Status Number(const char* key, double& out) const {
    if (!Has(key)) return absl::OkStatus();
    const json& v = j_.at(key);
    if (!v.is_number()) return FieldError(Path(key), "expected a number");
    out = v.get<double>();
    if (!std::isfinite(out)) return FieldError(Path(key), "must be finite");
    return absl::OkStatus();
  }

  absl::Status Integer(const char* key, int& out) const {
    if (!Has(key)) return absl::OkStatus();
    const json& v = j_.at(key);
    if (!v.is_number_integer()) {
      return FieldError(Path(key), "expected an integer");
    }
    out = v.get<int>();
    return absl::OkStatus();
  }

  absl::Status Boolean(const char* key, bool& out) const {
    if (!Has(key)) return absl::OkStatus();
    const json& v = j_.at(key);
    if (!v.is_boolean()) return FieldError(Path(key), "expected true/false");
    out = v.get<bool>();
    return absl::OkStatus();
  }

  absl::Status String(const char* key, std::string& out) const {
    if (!Has(key)) return absl::OkStatus();
    const json& v = j_.at(key);
    if (!v.is_string()) return FieldError(Path(key), "expected a string");
    out = v.get<std::string>();
    return absl::OkStatus();
  }

 private:
  const json& j_;
  std::string section_;
};

#define DPT_RETURN_IF_ERROR(expr)          \
  do {                                     \
    if (absl::Status _s = (expr); !_s.ok()) \
      return _s;                           \
  } while (0)

absl::StatusOr<PreferenceWeights> WeightsFromJson(const json& j,
                                                  const std::string& field) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() ||
      !j[1].is_number()) {
    return FieldError(field, "expected [w_privacy, w_accuracy]");
  }
  PreferenceWeights w{j[0].get<double>(), j[1].get<double>()};
  DPT_RETURN_IF_ERROR(InField(field, Validate(w)));
  return w;
}

absl::Status ParseNormalization(const json& j, NormalizationSpec& out,
                                bool& alpha_given) {
  SectionReader r(j, "normalization");
  DPT_RETURN_IF_ERROR(
      r.CheckShape({"eps_min", "eps_max", "alpha_min", "alpha_max"}));
  DPT_RETURN_IF_ERROR(r.Number("eps_min", out.eps_min));
  DPT_RETURN_IF_ERROR(r.Number("eps_max", out.eps_max));
  DPT_RETURN_IF_ERROR(r.Number("alpha_min", out.alpha_min));
  DPT_RETURN_IF_ERROR(r.Number("alpha_max", out.alpha_max));
  alpha_given = r.Has("alpha_min") || r.Has("alpha_max");
  return absl::OkStatus();
}

absl::Status ParseOracle(const json& j, const std::string& base_dir,
                         OracleSpec& out) {
  SectionReader r(j, "oracle");
  DPT_RETURN_IF_ERROR(
      r.CheckShape({"kind", "C", "path", "command", "noise_sigma", "delta"}));
  if (r.Has("kind")) {
    std::string kind;
    DPT_RETURN_IF_ERROR(r.String("kind", kind));
    absl::StatusOr<OracleSpec::Kind> parsed = ParseOracleKind(kind);
    if (!parsed.ok()) return InField("oracle.kind", parsed.status());
    out.kind = *parsed;
  }
  DPT_RETURN_IF_ERROR(r.Number("C", out.c));
  DPT_RETURN_IF_ERROR(r.String("path", out.path));
  DPT_RETURN_IF_ERROR(r.String("command", out.command));
  DPT_RETURN_IF_ERROR(r.Number("noise_sigma", out.noise_sigma));
  DPT_RETURN_IF_ERROR(r.Number("delta", out.delta));
  if (!out.path.empty() && !base_dir.empty() &&
      std::filesystem::path(out.path).is_relative()) {
    out.path = (std::filesystem::path(base_dir) / out.path).string();
  }
  return absl::OkStatus();
}

absl::Status ParseUserModel(const json& j, Config& out) {
  SectionReader r(j, "user_model");
  DPT_RETURN_IF_ERROR(r.CheckShape(
      {"temperature", "simulator_temperature", "discretization"}));
  DPT_RETURN_IF_ERROR(r.Number("temperature", out.user_model.temperature));
  DPT_RETURN_IF_ERROR(r.Integer("discretization", out.user_model.discretization));
  if (r.Has("simulator_temperature")) {
    if (r.At("simulator_temperature").is_null()) {
      out.simulator_temperature.reset();
    } else {
      double t = 0;
      DPT_RETURN_IF_ERROR(r.Number("simulator_temperature", t));
      out.simulator_temperature = t;
    }
  }
  return absl::OkStatus();
}

absl::Status ParseAcquisition(const json& j, AcquisitionConfig& out) {
  SectionReader r(j, "acquisition");
  DPT_RETURN_IF_ERROR(r.CheckShape(
      {"p_grid_size", "num_sims", "num_curve_candidates", "num_p_candidates",
       "num_pair_candidates", "max_exact_outcomes", "max_front_particles",
       "max_pref_particles"}));
  DPT_RETURN_IF_ERROR(r.Integer("p_grid_size", out.p_grid_size));
  DPT_RETURN_IF_ERROR(r.Integer("num_sims", out.num_sims));
  DPT_RETURN_IF_ERROR(r.Integer("num_curve_candidates", out.num_curve_candidates));
  DPT_RETURN_IF_ERROR(r.Integer("num_p_candidates", out.num_p_candidates));
  DPT_RETURN_IF_ERROR(r.Integer("num_pair_candidates", out.num_pair_candidates));
  DPT_RETURN_IF_ERROR(r.Integer("max_exact_outcomes", out.max_exact_outcomes));
  DPT_RETURN_IF_ERROR(r.Integer("max_front_particles", out.max_front_particles));
  DPT_RETURN_IF_ERROR(r.Integer("max_pref_particles", out.max_pref_particles));
  return absl::OkStatus();
}

absl::Status ParsePriors(const json& j, PriorConfig& out) {
  SectionReader r(j, "priors");
  DPT_RETURN_IF_ERROR(r.CheckShape({"front_kind", "front",
                                    "gompertz_transition_in_unit",
                                    "gompertz_prior_space", "weights"}));
  if (r.Has("front_kind")) {
    std::string kind;
    DPT_RETURN_IF_ERROR(r.String("front_kind", kind));
    absl::StatusOr<FrontKind> parsed = ParseFrontKind(kind);
    if (!parsed.ok()) return InField("priors.front_kind", parsed.status());
    if (*parsed != out.front.kind) {
      const bool transition = out.front.transition_in_unit;
      out.front = FrontPrior::Default(*parsed);
      out.front.transition_in_unit = transition;
    }
  }
  if (r.Has("front")) {
    SectionReader f(r.At("front"), "priors.front");
    DPT_RETURN_IF_ERROR(f.CheckShape({"L", "k", "b", "c", "sigma"}));
    const std::pair<const char*, Distribution*> fields[] = {
        {"L", &out.front.span},     {"k", &out.front.steepness},
        {"b", &out.front.offset},   {"c", &out.front.location},
        {"sigma", &out.front.noise}};
    for (const auto& [key, dist] : fields) {
      if (!f.Has(key)) continue;
      absl::StatusOr<Distribution> parsed = DistributionFromJson(f.At(key));
      if (!parsed.ok()) return InField(f.Path(key), parsed.status());
      *dist = *parsed;
    }
  }
  DPT_RETURN_IF_ERROR(
      r.Boolean("gompertz_transition_in_unit", out.front.transition_in_unit));
  if (r.Has("gompertz_prior_space")) {
    std::string space;
    DPT_RETURN_IF_ERROR(r.String("gompertz_prior_space", space));
    if (space != "normalized" && space != "raw") {
      return FieldError("priors.gompertz_prior_space",
                        "expected 'normalized' or 'raw'");
    }
    out.gompertz_raw_space = space == "raw";
  }
  if (r.Has("weights")) {
    SectionReader w(r.At("weights"), "priors.weights");
    DPT_RETURN_IF_ERROR(w.CheckShape({"dirichlet"}));
    if (w.Has("dirichlet")) {
      const json& d = w.At("dirichlet");
      if (!d.is_array() || d.size() != 2 || !d[0].is_number() ||
          !d[1].is_number()) {
        return FieldError("priors.weights.dirichlet",
                          "expected [a_privacy, a_accuracy]");
      }
      out.weights = {d[0].get<double>(), d[1].get<double>()};
    }
  }
  return absl::OkStatus();
}

absl::Status ParseLoop(const json& j, LoopConfig& out) {
  SectionReader r(j, "loop");
  DPT_RETURN_IF_ERROR(r.CheckShape(
      {"num_steps", "num_seeds", "schedule", "arms", "front_particles",
       "pref_particles", "rejuvenation", "ess_fraction", "mcmc_steps",
       "known_front", "known_weights", "true_weights"}));
  DPT_RETURN_IF_ERROR(r.Integer("num_steps", out.num_steps));
  DPT_RETURN_IF_ERROR(r.Integer("num_seeds", out.num_seeds));
  if (r.Has("schedule")) {
    std::string name;
    DPT_RETURN_IF_ERROR(r.String("schedule", name));
    absl::StatusOr<Schedule> parsed = ParseSchedule(name);
    if (!parsed.ok()) return InField("loop.schedule", parsed.status());
    out.schedule = *parsed;
  }
  if (r.Has("arms")) {
    const json& arms = r.At("arms");
    if (!arms.is_array() || arms.empty()) {
      return FieldError("loop.arms", "expected a non-empty list of arm names");
    }
    out.arms.clear();
    for (size_t i = 0; i < arms.size(); ++i) {
      const std::string field = absl::StrFormat("loop.arms[%d]", i);
      if (!arms[i].is_string()) return FieldError(field, "expected a string");
      absl::StatusOr<Arm> arm = ParseArm(arms[i].get<std::string>());
      if (!arm.ok()) return InField(field, arm.status());
      out.arms.push_back(*arm);
    }
  }
  DPT_RETURN_IF_ERROR(r.Integer("front_particles", out.front_particles));
  DPT_RETURN_IF_ERROR(r.Integer("pref_particles", out.pref_particles));
  if (r.Has("rejuvenation")) {
    std::string mode;
    DPT_RETURN_IF_ERROR(r.String("rejuvenation", mode));
    absl::StatusOr<RejuvenationConfig::Mode> parsed =
        ParseRejuvenationMode(mode);
    if (!parsed.ok()) return InField("loop.rejuvenation", parsed.status());
    out.rejuvenation.mode = *parsed;
  }
  DPT_RETURN_IF_ERROR(r.Number("ess_fraction", out.rejuvenation.ess_fraction));
  DPT_RETURN_IF_ERROR(r.Integer("mcmc_steps", out.rejuvenation.mcmc_steps));
  DPT_RETURN_IF_ERROR(r.Boolean("known_front", out.known_front));
  DPT_RETURN_IF_ERROR(r.Boolean("known_weights", out.known_weights));
  if (r.Has("true_weights")) {
    if (r.At("true_weights").is_null()) {
      out.true_weights.reset();
    } else {
      absl::StatusOr<PreferenceWeights> w =
          WeightsFromJson(r.At("true_weights"), "loop.true_weights");
      if (!w.ok()) return w.status();
      out.true_weights = *w;
    }
  }
  return absl::OkStatus();
}

}  // namespace

std::string QueryStrategyName(QueryStrategy s) {
  switch (s) {
    case QueryStrategy::kCurveKg:
      return "curve-kg";
    case QueryStrategy::kRandomCurve:
      return "random-curve";
    case QueryStrategy::kPairKg:
      return "pair-kg";
    case QueryStrategy::kRandomPair:
      return "random-pairs";
  }
  return "unknown";
}

std::string PrivacyStrategyName(PrivacyStrategy s) {
  return s == PrivacyStrategy::kKg ? "kg" : "random";
}

std::string ScheduleName(Schedule s) {
  switch (s) {
    case Schedule::kAlternate:
      return "alternate";
    case Schedule::kAdaptive:
      return "adaptive";
    case Schedule::kInteractOnly:
      return "interact-only";
    case Schedule::kEvaluateOnly:
      return "evaluate-only";
  }
  return "unknown";
}

absl::StatusOr<Schedule> ParseSchedule(const std::string& name) {
  for (Schedule s : {Schedule::kAlternate, Schedule::kAdaptive,
                     Schedule::kInteractOnly, Schedule::kEvaluateOnly}) {
    if (name == ScheduleName(s)) return s;
  }
  return absl::InvalidArgumentError(absl::StrFormat(
      "unknown schedule '%s' (alternate|adaptive|interact-only|evaluate-only)",
      name));
}

absl::StatusOr<Arm> ParseArm(const std::string& name) {
  if (name == "curve-kg") {
    return Arm{name, QueryStrategy::kCurveKg, PrivacyStrategy::kKg};
  }
  if (name == "random-curve") {
    return Arm{name, QueryStrategy::kRandomCurve, PrivacyStrategy::kKg};
  }
  if (name == "pair-kg") {
    return Arm{name, QueryStrategy::kPairKg, PrivacyStrategy::kKg};
  }
  if (name == "random-pairs") {
    return Arm{name, QueryStrategy::kRandomPair, PrivacyStrategy::kKg};
  }
  if (name == "random") {
    return Arm{name, QueryStrategy::kRandomCurve, PrivacyStrategy::kRandom};
  }
  return absl::InvalidArgumentError(absl::StrFormat(
      "unknown arm '%s' (curve-kg|random-curve|pair-kg|random-pairs|random)",
      name));
}

absl::StatusOr<std::vector<Arm>> ParseArmList(const std::string& list) {
  std::vector<Arm> arms;
  for (absl::string_view part : absl::StrSplit(list, ',', absl::SkipEmpty())) {
    absl::StatusOr<Arm> arm =
        ParseArm(std::string(absl::StripAsciiWhitespace(part)));
    if (!arm.ok()) return arm.status();
    arms.push_back(*arm);
  }
  if (arms.empty()) return absl::InvalidArgumentError("empty arm list");
  return arms;
}

FrontPrior Config::EffectiveFrontPrior() const {
  FrontPrior prior = priors.front;
  if (priors.gompertz_raw_space && prior.kind == FrontKind::kGompertz) {
    prior.raw_privacy = FrontPrior::RawPrivacyMap{
        normalization.p_min(), normalization.p_max() - normalization.p_min()};
  }
  return prior;
}

absl::Status Validate(const Config& config) {
  DPT_RETURN_IF_ERROR(Validate(config.normalization));
  DPT_RETURN_IF_ERROR(Validate(config.oracle));
  DPT_RETURN_IF_ERROR(InField("user_model", Validate(config.user_model)));
  if (config.simulator_temperature.has_value() &&
      !(*config.simulator_temperature > 0)) {
    return FieldError("user_model.simulator_temperature", "must be > 0");
  }
  DPT_RETURN_IF_ERROR(InField("acquisition", Validate(config.acquisition)));
  DPT_RETURN_IF_ERROR(
      InField("priors.front", Validate(config.EffectiveFrontPrior())));
  DPT_RETURN_IF_ERROR(InField("priors.weights", Validate(config.priors.weights)));
  const LoopConfig& loop = config.loop;
  if (loop.num_steps < 1) return FieldError("loop.num_steps", "must be >= 1");
  if (loop.num_seeds < 1) return FieldError("loop.num_seeds", "must be >= 1");
  if (loop.front_particles < 1) {
    return FieldError("loop.front_particles", "must be >= 1");
  }
  if (loop.pref_particles < 1) {
    return FieldError("loop.pref_particles", "must be >= 1");
  }
  if (loop.arms.empty()) return FieldError("loop.arms", "must not be empty");
  if (!(loop.rejuvenation.ess_fraction > 0 &&
        loop.rejuvenation.ess_fraction <= 1)) {
    return FieldError("loop.ess_fraction", "must be in (0, 1]");
  }
  if (loop.rejuvenation.mcmc_steps < 0) {
    return FieldError("loop.mcmc_steps", "must be >= 0");
  }
  if (loop.known_front &&
      config.oracle.kind != OracleSpec::Kind::kClosedFormLogistic) {
    return FieldError("loop.known_front",
                      "requires a closed_form_logistic oracle");
  }
  if (loop.true_weights.has_value()) {
    DPT_RETURN_IF_ERROR(InField("loop.true_weights", Validate(*loop.true_weights)));
  }
  return absl::OkStatus();
}

absl::StatusOr<Config> ConfigFromJson(const json& j,
                                      const std::string& base_dir) {
  Config config;
  SectionReader root(j, "");
  if (!j.is_object()) return FieldError("config", "expected a JSON object");
  DPT_RETURN_IF_ERROR(root.CheckShape({"normalization", "oracle", "user_model",
                                       "acquisition", "priors", "loop"}));
  bool alpha_given = false;
  if (root.Has("normalization")) {
    DPT_RETURN_IF_ERROR(ParseNormalization(root.At("normalization"),
                                           config.normalization, alpha_given));
  }
  if (root.Has("oracle")) {
    DPT_RETURN_IF_ERROR(ParseOracle(root.At("oracle"), base_dir, config.oracle));
  }
  if (root.Has("user_model")) {
    DPT_RETURN_IF_ERROR(ParseUserModel(root.At("user_model"), config));
  }
  if (root.Has("acquisition")) {
    DPT_RETURN_IF_ERROR(
        ParseAcquisition(root.At("acquisition"), config.acquisition));
  }
  if (root.Has("priors")) {
    DPT_RETURN_IF_ERROR(ParsePriors(root.At("priors"), config.priors));
  }
  if (root.Has("loop")) {
    DPT_RETURN_IF_ERROR(ParseLoop(root.At("loop"), config.loop));
  }
  DPT_RETURN_IF_ERROR(Validate(config.oracle));
  if (config.oracle.kind == OracleSpec::Kind::kTabulated) {
    // Tables are read here so a missing file fails at load time, and so the
    // accuracy range can default to the table's.
    absl::StatusOr<TabulatedFront> table =
        TabulatedFront::Load(config.oracle.path);
    if (!table.ok()) return InField("oracle.path", table.status());
    if (!alpha_given) {
      config.normalization.alpha_min = table->accuracy_min();
      config.normalization.alpha_max = table->accuracy_max();
    }
    if (config.normalization.eps_min < table->eps_min() * (1 - 1e-12) ||
        config.normalization.eps_max > table->eps_max() * (1 + 1e-12)) {
      return FieldError(
          "normalization",
          absl::StrFormat("epsilon range [%g, %g] exceeds the table range "
                          "[%g, %g] of %s",
                          config.normalization.eps_min,
                          config.normalization.eps_max, table->eps_min(),
                          table->eps_max(), config.oracle.path));
    }
  }
  DPT_RETURN_IF_ERROR(Validate(config));
  return config;
}

absl::StatusOr<Config> ParseConfig(const std::string& text,
                                   const std::string& base_dir) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    return absl::InvalidArgumentError(
        absl::StrFormat("config is not valid JSON: %s", e.what()));
  }
  return ConfigFromJson(j, base_dir);
}

absl::StatusOr<Config> LoadConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    return absl::NotFoundError(
        absl::StrFormat("cannot open config file '%s'", path));
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  absl::StatusOr<Config> config = ParseConfig(
      buffer.str(), std::filesystem::path(path).parent_path().string());
  if (!config.ok()) {
    return absl::Status(config.status().code(),
                        absl::StrFormat("%s: %s", path, config.status().message()));
  }
  return config;
}

absl::StatusOr<Config> ApplyOverrides(const Config& base,
                                      const json& overrides) {
  if (!overrides.is_object()) {
    return FieldError("overrides", "expected a JSON object");
  }
  json merged = ToJson(base);
  merged.merge_patch(overrides);
  return ConfigFromJson(merged);
}

json ToJson(const Config& config) {
  const NormalizationSpec& n = config.normalization;
  json oracle{{"kind", OracleKindName(config.oracle.kind)},
              {"noise_sigma", config.oracle.noise_sigma},
              {"delta", config.oracle.delta}};
  switch (config.oracle.kind) {
    case OracleSpec::Kind::kClosedFormLogistic:
      oracle["C"] = config.oracle.c;
      break;
    case OracleSpec::Kind::kTabulated:
      oracle["path"] = config.oracle.path;
      break;
    case OracleSpec::Kind::kExternal:
      oracle["command"] = config.oracle.command;
      break;
  }
  json user{{"temperature", config.user_model.temperature},
            {"discretization", config.user_model.discretization}};
  if (config.simulator_temperature.has_value()) {
    user["simulator_temperature"] = *config.simulator_temperature;
  }
  const AcquisitionConfig& a = config.acquisition;
  const FrontPrior& fp = config.priors.front;
  json arms = json::array();
  for (const Arm& arm : config.loop.arms) arms.push_back(arm.name);
  const LoopConfig& loop = config.loop;
  json loop_json{
      {"num_steps", loop.num_steps},
      {"num_seeds", loop.num_seeds},
      {"schedule", ScheduleName(loop.schedule)},
      {"arms", arms},
      {"front_particles", loop.front_particles},
      {"pref_particles", loop.pref_particles},
      {"rejuvenation", RejuvenationModeName(loop.rejuvenation.mode)},
      {"ess_fraction", loop.rejuvenation.ess_fraction},
      {"mcmc_steps", loop.rejuvenation.mcmc_steps},
      {"known_front", loop.known_front},
      {"known_weights", loop.known_weights},
  };
  if (loop.true_weights.has_value()) {
    loop_json["true_weights"] = ToJson(*loop.true_weights);
  }
  return json{
      {"normalization",
       {{"eps_min", n.eps_min},
        {"eps_max", n.eps_max},
        {"alpha_min", n.alpha_min},
        {"alpha_max", n.alpha_max}}},
      {"oracle", oracle},
      {"user_model", user},
      {"acquisition",
       {{"p_grid_size", a.p_grid_size},
        {"num_sims", a.num_sims},
        {"num_curve_candidates", a.num_curve_candidates},
        {"num_p_candidates", a.num_p_candidates},
        {"num_pair_candidates", a.num_pair_candidates},
        {"max_exact_outcomes", a.max_exact_outcomes},
        {"max_front_particles", a.max_front_particles},
        {"max_pref_particles", a.max_pref_particles}}},
      {"priors",
       {{"front_kind", FrontKindName(fp.kind)},
        {"front",
         {{"L", ToJson(fp.span)},
          {"k", ToJson(fp.steepness)},
          {"b", ToJson(fp.offset)},
          {"c", ToJson(fp.location)},
          {"sigma", ToJson(fp.noise)}}},
        {"gompertz_transition_in_unit", fp.transition_in_unit},
        {"gompertz_prior_space",
         config.priors.gompertz_raw_space ? "raw" : "normalized"},
        {"weights",
         {{"dirichlet",
           {config.priors.weights.privacy_concentration,
            config.priors.weights.accuracy_concentration}}}}}},
      {"loop", loop_json},
  };
}

}  // namespace dptradeoff
