#pragma once

#include <string>
#include <vector>

namespace ioncool {

/// Cooling-transition data for one atomic or ionic species.
struct SpeciesParams {
  std::string name;
  double mass = 0.0;        // kg
  double wavelength = 0.0;  // m
  double linewidth = 0.0;   // natural linewidth gamma, rad/s

  double wavenumber() const;  // 2 pi / lambda
  void validate() const;
};

/// Version tag of the shipped species table.
int species_table_version();

/// Every species in the shipped table.
const std::vector<SpeciesParams>& species_table();

/// Lookup by name ("Rb", "Na", "Ca+", ...). Throws Error if absent.
const SpeciesParams& find_species(const std::string& name);

}  // namespace ioncool
