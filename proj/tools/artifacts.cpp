#include "artifacts.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <openssl/evp.h>

#include "ioncool/species.hpp"
#include "version.hpp"

namespace ioncool::cli {

namespace fs = std::filesystem;

void Table::add_row(std::vector<double> row) {
  if (row.size() != columns.size()) throw std::logic_error("Table: row width does not match the header");
  rows.push_back(std::move(row));
}

std::string format_double(double x) {
  char buf[40];
  const int n = std::snprintf(buf, sizeof buf, "%.17g", x);
  return std::string(buf, static_cast<std::size_t>(n));
}

std::string to_csv(const Table& table) {
  std::string out;
  for (std::size_t c = 0; c < table.columns.size(); ++c) out += (c ? "," : "") + table.columns[c];
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      out += format_double(row[c]);
    }
    out += '\n';
  }
  return out;
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("sha256: digest failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < length; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xf];
  }
  return out;
}

namespace {

void write_file(const fs::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace

std::vector<ArtifactRecord> write_outcome(const fs::path& dir, const Outcome& outcome, const Json& config_echo,
                                          const std::string& experiment, double wall_time_s) {
  fs::create_directories(dir);
  fs::remove(dir / "manifest.json");

  std::vector<ArtifactRecord> records;
  auto emit = [&](const std::string& name, const std::string& bytes) {
    write_file(dir / name, bytes);
    records.push_back({name, sha256_hex(bytes), bytes.size()});
  };
  for (const auto& [name, table] : outcome.tables) emit(name, to_csv(table));
  for (const auto& [name, doc] : outcome.documents) emit(name, doc.dump(2) + "\n");
  Json summary = Json::object();
  for (const auto& [key, value] : outcome.summary) summary[key] = value;
  if (!outcome.warnings.empty()) summary["warnings"] = outcome.warnings;
  emit("summary.json", summary.dump(2) + "\n");

  Json manifest = Json::object();
  manifest["tool"] = "ioncool";
  manifest["version"] = kToolVersion;
  manifest["species_table_version"] = species_table_version();
  manifest["experiment"] = experiment;
  manifest["config"] = config_echo;
  manifest["artifacts"] = Json::array();
  for (const auto& r : records)
    manifest["artifacts"].push_back({{"file", r.file}, {"sha256", r.sha256}, {"bytes", r.bytes}});
  manifest["wall_time_s"] = wall_time_s;
  write_file(dir / "manifest.json", manifest.dump(2) + "\n");
  return records;
}

}  // namespace ioncool::cli
