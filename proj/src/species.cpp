#include "ioncool/species.hpp"

#include <cmath>

#include "json.hpp"

#include "ioncool/hamiltonians.hpp"
#include "ioncool/species_data.hpp"

namespace ioncool {

namespace {

struct Table {
  int version = 0;
  std::vector<SpeciesParams> entries;
};

const Table& table() {
  static const Table parsed = [] {
    const auto doc = nlohmann::json::parse(generated::kSpeciesJson);
    Table t;
    t.version = doc.at("version").get<int>();
    for (const auto& entry : doc.at("species")) {
      SpeciesParams s;
      s.name = entry.at("name").get<std::string>();
      s.mass = entry.at("mass_amu").get<double>() * kAtomicMass;
      s.wavelength = entry.at("wavelength_m").get<double>();
      s.linewidth = 2.0 * kPi * entry.at("linewidth_hz").get<double>();
      s.validate();
      t.entries.push_back(std::move(s));
    }
    return t;
  }();
  return parsed;
}

}  // namespace

double SpeciesParams::wavenumber() const { return 2.0 * kPi / wavelength; }

void SpeciesParams::validate() const {
  if (!(mass > 0.0) || !(wavelength > 0.0) || !(linewidth > 0.0))
    throw Error("SpeciesParams '" + name + "': mass, wavelength and linewidth must be positive");
}

int species_table_version() { return table().version; }

const std::vector<SpeciesParams>& species_table() { return table().entries; }

const SpeciesParams& find_species(const std::string& name) {
  for (const auto& s : table().entries)
    if (s.name == name) return s;
  throw Error("unknown species '" + name + "'");
}

}  // namespace ioncool
