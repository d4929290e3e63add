#pragma once

// Output files: CSV tables and JSON documents with a metadata header,
// written atomically (temporary file, then rename).

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "quasispec/scenario.hpp"

namespace quasispec {

struct ArtifactMeta {
  std::string tool = "quasispec";
  std::string version = QUASISPEC_VERSION;
  std::string subcommand;
  std::string config_hash;
  nlohmann::json config;  ///< config_to_json of the run
};

ArtifactMeta make_meta(const ScenarioConfig& c, const std::string& subcommand);

/// Shortest round-trip decimal form.
std::string format_number(double v);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> columns);
  void add_row(std::vector<std::string> cells);
  /// Metadata as leading '#' lines, then the header and rows.
  std::string render(const ArtifactMeta& meta) const;
  std::size_t rows() const { return rows_.size(); }

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
};

/// {"schema": "v1", "meta": {...}, "data": data}, pretty-printed with a trailing newline.
std::string json_document(const ArtifactMeta& meta, const nlohmann::json& data);

void write_atomic(const std::filesystem::path& path, const std::string& content);

class ArtifactWriter {
 public:
  ArtifactWriter(std::filesystem::path dir, ArtifactMeta meta);
  std::filesystem::path csv(const std::string& name, const CsvTable& table);
  std::filesystem::path json(const std::string& name, const nlohmann::json& data);
  const std::vector<std::filesystem::path>& written() const { return written_; }
  const ArtifactMeta& meta() const { return meta_; }

 private:
  std::filesystem::path dir_;
  ArtifactMeta meta_;
  std::vector<std::filesystem::path> written_;
};

}  // namespace quasispec
