#include "quasispec/artifacts.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

#include <fmt/format.h>

#include "quasispec/symbol_json.hpp"

namespace quasispec {

ArtifactMeta make_meta(const ScenarioConfig& c, const std::string& subcommand) {
  ArtifactMeta m;
  m.subcommand = subcommand;
  m.config_hash = config_hash(c);
  m.config = config_to_json(c);
  return m;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

CsvTable::CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

void CsvTable::add_row(std::vector<std::string> cells) {
  if (cells.size() != columns_.size())
    throw ValidationError(fmt::format("CsvTable: row has {} cells, expected {}", cells.size(), columns_.size()));
  rows_.push_back(std::move(cells));
}

namespace {

std::string cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string line(const std::vector<std::string>& cells) {
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) out += (i ? "," : "") + cell(cells[i]);
  return out + "\n";
}

}  // namespace

std::string CsvTable::render(const ArtifactMeta& meta) const {
  std::string out = fmt::format("# tool: {} {}\n# subcommand: {}\n# config_hash: {}\n# config: {}\n", meta.tool,
                                meta.version, meta.subcommand, meta.config_hash, meta.config.dump());
  out += line(columns_);
  for (const auto& r : rows_) out += line(r);
  return out;
}

std::string json_document(const ArtifactMeta& meta, const nlohmann::json& data) {
  const nlohmann::json doc = {{"schema", kSchemaVersion},
                              {"meta",
                               {{"tool", meta.tool},
                                {"version", meta.version},
                                {"subcommand", meta.subcommand},
                                {"config_hash", meta.config_hash},
                                {"config", meta.config}}},
                              {"data", data}};
  return doc.dump(2) + "\n";
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError(fmt::format("cannot write '{}'", tmp.string()));
    out << content;
    out.flush();
    if (!out) throw ValidationError(fmt::format("write to '{}' failed", tmp.string()));
  }
  std::filesystem::rename(tmp, path);
}

ArtifactWriter::ArtifactWriter(std::filesystem::path dir, ArtifactMeta meta)
    : dir_(std::move(dir)), meta_(std::move(meta)) {}

std::filesystem::path ArtifactWriter::csv(const std::string& name, const CsvTable& table) {
  const auto path = dir_ / name;
  write_atomic(path, table.render(meta_));
  written_.push_back(path);
  return path;
}

std::filesystem::path ArtifactWriter::json(const std::string& name, const nlohmann::json& data) {
  const auto path = dir_ / name;
  write_atomic(path, json_document(meta_, data));
  written_.push_back(path);
  return path;
}

}  // namespace quasispec
