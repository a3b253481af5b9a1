#include "schema.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "ioncool/species.hpp"

namespace ioncool::cli {

namespace {

ParamSpec required(std::string key, Kind kind, Bound bound, std::string help) {
  return ParamSpec{std::move(key), kind, bound, std::nullopt, {}, std::move(help)};
}

ParamSpec optional(std::string key, Kind kind, Bound bound, Json fallback, std::string help) {
  return ParamSpec{std::move(key), kind, bound, std::move(fallback), {}, std::move(help)};
}

ParamSpec choice(std::string key, std::vector<std::string> choices, std::optional<Json> fallback, std::string help) {
  return ParamSpec{std::move(key), Kind::text, Bound::any, std::move(fallback), std::move(choices), std::move(help)};
}

std::vector<std::string> species_names() {
  std::vector<std::string> names;
  for (const auto& s : species_table()) names.push_back(s.name);
  return names;
}

std::vector<ExperimentSpec> build_specs() {
  const Kind num = Kind::number, integer = Kind::integer;
  const Bound pos = Bound::positive, nonneg = Bound::non_negative, any = Bound::any;
  std::vector<ExperimentSpec> specs;

  specs.push_back({"doppler",
                   "Temperature of a thermal ensemble in two counter-propagating beams",
                   {
                       choice("species", species_names(), Json("Rb"), "entry of the species table"),
                       required("T0_k", num, pos, "initial temperature, K"),
                       optional("detuning_linewidths", num, any, -0.5, "laser detuning in units of the linewidth"),
                       optional("saturation", num, nonneg, 0.1, "saturation parameter per beam"),
                       required("duration_s", num, pos, "simulated time, s"),
                       optional("samples", integer, Bound::at_least_two, 201, "output samples"),
                       optional("require_convergence", Kind::boolean, any, false,
                                "fail with exit code 3 unless the equilibrium is reached"),
                   }});

  specs.push_back({"doppler-limit",
                   "Doppler-limited temperature hbar gamma / 2 k_B",
                   {choice("species", species_names(), std::nullopt, "entry of the species table")}});

  specs.push_back({"resistive",
                   "Energy decay of a charge between plates shorted through a resistor",
                   {
                       required("mass_amu", num, pos, "particle mass, u"),
                       optional("charge_e", num, pos, 1.0, "charge, elementary charges"),
                       required("half_gap_m", num, pos, "electrode half separation, m"),
                       required("resistance_ohm", num, pos, "external resistance, Ohm"),
                       required("initial_energy_j", num, pos, "initial axial energy, J"),
                       optional("duration_s", num, pos, nullptr, "simulated time, s (default five time constants)"),
                       optional("samples", integer, Bound::at_least_two, 201, "output samples"),
                   }});

  specs.push_back({"sideband-cool",
                   "Master-equation simulation of resolved-sideband cooling of one mode",
                   {
                       required("nu_hz", num, pos, "trap frequency, Hz"),
                       required("rabi_hz", num, nonneg, "carrier Rabi frequency, Hz"),
                       required("eta", num, nonneg, "Lamb-Dicke parameter"),
                       optional("sideband_detuning_hz", num, any, 0.0, "laser detuning from the red sideband, Hz"),
                       optional("phase_rad", num, any, -0.5 * 3.14159265358979323846,
                                "laser phase, rad (first-order model only)"),
                       required("repump_rate_per_s", num, nonneg, "effective decay rate of the upper level, 1/s"),
                       optional("heating_rate_quanta_per_s", num, nonneg, 0.0, "motional heating rate, quanta/s"),
                       optional("recoil_eta", num, nonneg, 0.0, "Lamb-Dicke parameter of spontaneous emission"),
                       required("initial_nbar", num, nonneg, "mean phonon number of the initial thermal state"),
                       required("duration_s", num, pos, "simulated time, s"),
                       optional("fock_cutoff", integer, Bound::at_least_one, 40, "highest Fock state kept"),
                       optional("samples", integer, Bound::at_least_two, 201, "output samples"),
                       choice("model", {"rwa", "first-order"}, Json("rwa"), "static or time-dependent Hamiltonian"),
                   }});

  specs.push_back({"eit-spectrum",
                   "Probe absorption of the driven three-level system (rates in units of gamma)",
                   {
                       required("omega1_gamma", num, nonneg, "drive Rabi frequency"),
                       required("omega3_gamma", num, pos, "probe Rabi frequency"),
                       optional("delta1_gamma", num, any, 0.0, "drive detuning"),
                       optional("beta", num, Bound::unit_interval, 0.5, "branching ratio of |2> into |3>"),
                       optional("delta3_min_gamma", num, any, -3.0, "start of the probe-detuning axis"),
                       optional("delta3_max_gamma", num, any, 3.0, "end of the probe-detuning axis"),
                       optional("points", integer, Bound::at_least_two, 601, "points on the probe-detuning axis"),
                       optional("nu_gamma", num, nonneg, 0.0, "trap frequency for the cooling assessment (0: none)"),
                       optional("carrier_detuning_gamma", num, any, nullptr,
                                "carrier placement for the assessment (default: delta1_gamma)"),
                   }});

  specs.push_back({"magic",
                   "Gradient-induced coupling strength and effective Lamb-Dicke parameter",
                   {
                       required("nu_hz", num, pos, "trap frequency, Hz"),
                       required("mass_amu", num, pos, "ion mass, u"),
                       required("freq_gradient_hz_per_mm", num, nonneg, "transition-frequency gradient, Hz/mm"),
                       optional("eta", num, nonneg, 0.0, "optical Lamb-Dicke parameter of the drive"),
                       optional("rabi_hz", num, nonneg, 0.0, "carrier Rabi frequency of the drive, Hz"),
                   }});

  specs.push_back({"chain-modes",
                   "Equilibrium positions and axial normal modes of a linear ion chain",
                   {
                       required("ions", integer, Bound::at_least_one, "number of ions"),
                       required("nu_hz", num, pos, "axial COM frequency, Hz"),
                       required("mass_amu", num, pos, "ion mass, u"),
                       optional("charge_e", num, pos, 1.0, "ion charge, elementary charges"),
                       choice("pairing", {"participation", "identity"}, Json("participation"),
                              "ion-to-mode pairing for the gradient design"),
                   }});

  specs.push_back({"multimode-cool",
                   "Rate-equation cooling of all chain modes with one drive frequency",
                   {
                       required("ions", integer, Bound::at_least_one, "number of ions (at most 4)"),
                       required("nu_hz", num, pos, "axial COM frequency, Hz"),
                       required("mass_amu", num, pos, "ion mass, u"),
                       optional("charge_e", num, pos, 1.0, "ion charge, elementary charges"),
                       required("eta_com", num, nonneg, "effective Lamb-Dicke parameter of a single ion at nu"),
                       required("rabi_hz", num, pos, "carrier Rabi frequency, Hz"),
                       required("linewidth_per_s", num, pos, "effective linewidth of the cooling transition, 1/s"),
                       choice("gradient", {"designed", "none"}, Json("designed"), "per-ion frequency offsets"),
                       choice("pairing", {"participation", "identity"}, Json("participation"),
                              "ion-to-mode pairing for the gradient design"),
                       optional("drive_mode", integer, Bound::at_least_one, 1,
                                "mode whose red sideband is driven when gradient is none"),
                       optional("heating_rate_quanta_per_s", num, nonneg, 0.0, "heating rate of every mode, quanta/s"),
                       required("initial_nbar", num, nonneg, "initial mean phonon number of every mode"),
                       required("duration_s", num, pos, "simulated time, s"),
                       optional("samples", integer, Bound::at_least_two, 201, "output samples"),
                   }});

  specs.push_back({"rabi-flop",
                   "Coherent or damped flopping on the carrier or a first sideband",
                   {
                       choice("transition", {"carrier", "red", "blue"}, std::nullopt, "driven line"),
                       required("rabi_hz", num, pos, "carrier Rabi frequency, Hz"),
                       optional("eta", num, nonneg, 0.1, "Lamb-Dicke parameter"),
                       optional("initial_n", integer, Bound::non_negative, 0, "initial Fock state (internal |g>)"),
                       optional("fock_cutoff", integer, Bound::at_least_one, 20, "highest Fock state kept"),
                       optional("decay_rate_per_s", num, nonneg, 0.0, "spontaneous decay rate of |e>, 1/s"),
                       required("duration_s", num, pos, "simulated time, s"),
                       optional("samples", integer, Bound::at_least_two, 201, "output samples"),
                   }});
  return specs;
}

std::string kind_name(Kind k) {
  switch (k) {
    case Kind::number: return "number";
    case Kind::integer: return "integer";
    case Kind::text: return "string";
    case Kind::boolean: return "bool";
  }
  return "?";
}

std::string expected_names(const std::vector<std::string>& names) {
  std::string out;
  for (const auto& n : names) out += (out.empty() ? "" : ", ") + n;
  return out;
}

void check_value(const ParamSpec& spec, const Json& value, const std::string& path) {
  switch (spec.kind) {
    case Kind::number:
      if (!value.is_number()) throw ConfigError(path, "expected a number");
      break;
    case Kind::integer:
      if (!value.is_number_integer()) throw ConfigError(path, "expected an integer");
      break;
    case Kind::text:
      if (!value.is_string()) throw ConfigError(path, "expected a string");
      if (!spec.choices.empty() &&
          std::find(spec.choices.begin(), spec.choices.end(), value.get<std::string>()) == spec.choices.end())
        throw ConfigError(path, "expected one of " + expected_names(spec.choices));
      return;
    case Kind::boolean:
      if (!value.is_boolean()) throw ConfigError(path, "expected true or false");
      return;
  }
  const double x = value.get<double>();
  if (!std::isfinite(x)) throw ConfigError(path, "must be finite");
  switch (spec.bound) {
    case Bound::any: break;
    case Bound::positive:
      if (!(x > 0.0)) throw ConfigError(path, "must be positive");
      break;
    case Bound::non_negative:
      if (!(x >= 0.0)) throw ConfigError(path, "must be non-negative");
      break;
    case Bound::unit_interval:
      if (!(x >= 0.0 && x <= 1.0)) throw ConfigError(path, "must lie in [0, 1]");
      break;
    case Bound::at_least_one:
      if (!(x >= 1.0)) throw ConfigError(path, "must be at least 1");
      break;
    case Bound::at_least_two:
      if (!(x >= 2.0)) throw ConfigError(path, "must be at least 2");
      break;
  }
}

Sweep parse_grid(const ExperimentSpec& spec, const Json& grid) {
  if (!grid.is_object()) throw ConfigError("grid", "expected an object");
  for (const auto& [key, value] : grid.items())
    if (key != "parameter" && key != "start" && key != "stop" && key != "points" && key != "values")
      throw ConfigError("grid." + key, "unknown key");
  if (!grid.contains("parameter") || !grid["parameter"].is_string())
    throw ConfigError("grid.parameter", "required string");
  Sweep sweep;
  sweep.parameter = grid["parameter"].get<std::string>();
  const ParamSpec* target = spec.find(sweep.parameter);
  if (target == nullptr || target->kind != Kind::number)
    throw ConfigError("grid.parameter", "'" + sweep.parameter + "' is not a numeric parameter of " + spec.name);

  const bool explicit_values = grid.contains("values");
  const bool range = grid.contains("start") || grid.contains("stop") || grid.contains("points");
  if (explicit_values == range) throw ConfigError("grid", "give either values or start/stop/points");
  if (explicit_values) {
    if (!grid["values"].is_array() || grid["values"].empty()) throw ConfigError("grid.values", "expected a non-empty array");
    for (std::size_t i = 0; i < grid["values"].size(); ++i) {
      const std::string path = "grid.values[" + std::to_string(i) + "]";
      check_value(*target, grid["values"][i], path);
      sweep.values.push_back(grid["values"][i].get<double>());
    }
    return sweep;
  }
  for (const char* key : {"start", "stop", "points"})
    if (!grid.contains(key)) throw ConfigError(std::string("grid.") + key, "required");
  check_value(*target, grid["start"], "grid.start");
  check_value(*target, grid["stop"], "grid.stop");
  if (!grid["points"].is_number_integer() || grid["points"].get<long>() < 2)
    throw ConfigError("grid.points", "expected an integer of at least 2");
  const double a = grid["start"].get<double>(), b = grid["stop"].get<double>();
  const long n = grid["points"].get<long>();
  for (long i = 0; i < n; ++i) sweep.values.push_back(i == n - 1 ? b : a + (b - a) * static_cast<double>(i) / (n - 1));
  return sweep;
}

}  // namespace

const ParamSpec* ExperimentSpec::find(const std::string& key) const {
  for (const auto& p : params)
    if (p.key == key) return &p;
  return nullptr;
}

const std::vector<ExperimentSpec>& experiment_specs() {
  static const std::vector<ExperimentSpec> specs = build_specs();
  return specs;
}

const ExperimentSpec& experiment_spec(const std::string& name) {
  for (const auto& s : experiment_specs())
    if (s.name == name) return s;
  std::vector<std::string> names;
  for (const auto& s : experiment_specs()) names.push_back(s.name);
  throw ConfigError("experiment", "unknown experiment '" + name + "'; expected one of " + expected_names(names));
}

const Json& Params::at(const std::string& key) const {
  if (spec_->find(key) == nullptr) throw std::logic_error("parameter '" + key + "' is not in the schema");
  return values_.at(key);
}

double Params::number(const std::string& key) const { return at(key).get<double>(); }
int Params::integer(const std::string& key) const { return at(key).get<int>(); }
std::string Params::text(const std::string& key) const { return at(key).get<std::string>(); }
bool Params::boolean(const std::string& key) const { return at(key).get<bool>(); }

bool Params::given(const std::string& key) const {
  return std::find(explicit_keys_.begin(), explicit_keys_.end(), key) != explicit_keys_.end();
}

Params Params::with(const std::string& key, double value) const {
  Params out = *this;
  out.values_[key] = value;
  if (!given(key)) out.explicit_keys_.push_back(key);
  return out;
}

Params validate_parameters(const ExperimentSpec& spec, const Json& parameters) {
  if (!parameters.is_object()) throw ConfigError("parameters", "expected an object");
  for (const auto& [key, value] : parameters.items()) {
    const ParamSpec* p = spec.find(key);
    if (p == nullptr) throw ConfigError("parameters." + key, "unknown key for experiment '" + spec.name + "'");
    check_value(*p, value, "parameters." + key);
  }
  Json filled = Json::object();
  std::vector<std::string> given;
  for (const auto& p : spec.params) {
    if (parameters.contains(p.key)) {
      filled[p.key] = parameters[p.key];
      given.push_back(p.key);
    } else if (p.required()) {
      throw ConfigError("parameters." + p.key, "required by experiment '" + spec.name + "'");
    } else {
      filled[p.key] = *p.fallback;
    }
  }
  Params out(spec, std::move(filled));
  out.explicit_keys_ = std::move(given);
  return out;
}

RunConfig parse_config(const Json& config) {
  if (!config.is_object()) throw ConfigError("(root)", "expected a JSON object");
  for (const auto& [key, value] : config.items())
    if (key != "experiment" && key != "parameters" && key != "output" && key != "grid")
      throw ConfigError(key, "unknown key");
  if (!config.contains("experiment")) throw ConfigError("experiment", "required");
  if (!config["experiment"].is_string()) throw ConfigError("experiment", "expected a string");

  RunConfig run;
  run.echo = config;
  run.experiment = config["experiment"].get<std::string>();
  const ExperimentSpec& spec = experiment_spec(run.experiment);
  run.params = validate_parameters(spec, config.contains("parameters") ? config["parameters"] : Json::object());
  if (config.contains("output")) {
    if (!config["output"].is_string() || config["output"].get<std::string>().empty())
      throw ConfigError("output", "expected a non-empty path");
    run.output = config["output"].get<std::string>();
  }
  if (config.contains("grid")) run.grid = parse_grid(spec, config["grid"]);
  return run;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path, "cannot open config file");
  Json config;
  try {
    config = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path, std::string("invalid JSON: ") + e.what());
  }
  return parse_config(config);
}

std::string experiment_table() {
  std::size_t width = 0;
  for (const auto& s : experiment_specs()) width = std::max(width, s.name.size());
  std::ostringstream out;
  for (const auto& s : experiment_specs()) {
    std::string keys;
    for (const auto& p : s.params)
      if (p.required()) keys += (keys.empty() ? "" : ", ") + p.key;
    out << s.name << std::string(width + 2 - s.name.size(), ' ') << s.summary << '\n'
        << std::string(width + 2, ' ') << "required: " << (keys.empty() ? "-" : keys) << '\n';
  }
  return out.str();
}

std::string schema_text() {
  std::ostringstream out;
  out << "Config file (JSON):\n"
         "  experiment  string, one of the names below (required)\n"
         "  parameters  object, keys listed per experiment\n"
         "  output      string, output directory (overridden by --out)\n"
         "  grid        object, optional sweep of one numeric parameter:\n"
         "              {\"parameter\": key, \"start\": x, \"stop\": y, \"points\": n} or\n"
         "              {\"parameter\": key, \"values\": [...]}\n"
         "Unknown keys are rejected.\n";
  for (const auto& s : experiment_specs()) {
    out << '\n' << s.name << ": " << s.summary << '\n';
    for (const auto& p : s.params) {
      out << "  " << p.key << " (" << kind_name(p.kind) << ")";
      if (!p.choices.empty()) out << " {" << expected_names(p.choices) << "}";
      if (p.required())
        out << " required";
      else if (!p.fallback->is_null())
        out << " default " << p.fallback->dump();
      out << ": " << p.help << '\n';
    }
  }
  return out.str();
}

}  // namespace ioncool::cli
