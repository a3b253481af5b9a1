#pragma once

// Config-file schema: experiment names, their parameter tables and the
// strict validation applied before anything runs.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace ioncool::cli {

using Json = nlohmann::ordered_json;

/// A config problem; `key` is the dotted path of the offending entry.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& what)
      : std::runtime_error(key + ": " + what), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

enum class Kind { number, integer, text, boolean };
enum class Bound { any, positive, non_negative, unit_interval, at_least_one, at_least_two };

struct ParamSpec {
  std::string key;
  Kind kind = Kind::number;
  Bound bound = Bound::any;
  std::optional<Json> fallback;  // empty: required; null: optional without default
  std::vector<std::string> choices = {};  // text parameters only; empty: free text
  std::string help;

  bool required() const { return !fallback.has_value(); }
};

struct ExperimentSpec {
  std::string name;
  std::string summary;
  std::vector<ParamSpec> params;

  const ParamSpec* find(const std::string& key) const;
};

/// Every experiment, in listing order.
const std::vector<ExperimentSpec>& experiment_specs();
const ExperimentSpec& experiment_spec(const std::string& name);

/// Parameters after validation with defaults filled in.
class Params {
 public:
  Params(const ExperimentSpec& spec, Json values) : spec_(&spec), values_(std::move(values)) {}

  double number(const std::string& key) const;
  int integer(const std::string& key) const;
  std::string text(const std::string& key) const;
  bool boolean(const std::string& key) const;
  /// True when the key was given in the config rather than defaulted.
  bool given(const std::string& key) const;

  Params with(const std::string& key, double value) const;
  const Json& values() const { return values_; }
  const ExperimentSpec& spec() const { return *spec_; }

 private:
  const Json& at(const std::string& key) const;
  const ExperimentSpec* spec_;
  Json values_;
  std::vector<std::string> explicit_keys_;
  friend Params validate_parameters(const ExperimentSpec&, const Json&);
};

struct Sweep {
  std::string parameter;
  std::vector<double> values;
};

struct RunConfig {
  std::string experiment;
  std::optional<Params> params;
  std::string output = "ioncool-output";
  std::optional<Sweep> grid;
  Json echo;  // the config as read
};

Params validate_parameters(const ExperimentSpec& spec, const Json& parameters);
RunConfig parse_config(const Json& config);
RunConfig load_config(const std::string& path);

/// Human-readable table of experiments and their parameters.
std::string schema_text();
std::string experiment_table();

}  // namespace ioncool::cli
