#pragma once

// Run outputs: numeric tables written as CSV, small JSON documents, and the
// manifest that is written last and hashes everything else.

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "schema.hpp"

namespace ioncool::cli {

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  void add_row(std::vector<double> row);
};

struct Outcome {
  std::vector<std::pair<std::string, Table>> tables;    // file name -> CSV table
  std::vector<std::pair<std::string, Json>> documents;  // file name -> JSON document
  std::vector<std::pair<std::string, double>> summary;  // scalar results, in order
  std::vector<std::string> warnings;
};

/// `%.17g` in the C locale.
std::string format_double(double x);
/// Header row, comma separated, '\n' line endings.
std::string to_csv(const Table& table);
std::string sha256_hex(const std::string& bytes);

struct ArtifactRecord {
  std::string file;
  std::string sha256;
  std::size_t bytes = 0;
};

/// Writes every table and document of `outcome` plus summary.json into
/// `dir`, then manifest.json. Any manifest left by an earlier run is removed
/// before the first artifact is touched.
std::vector<ArtifactRecord> write_outcome(const std::filesystem::path& dir, const Outcome& outcome,
                                          const Json& config_echo, const std::string& experiment,
                                          double wall_time_s);

}  // namespace ioncool::cli
