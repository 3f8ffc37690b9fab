#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace ffif {

/// Shortest decimal that round-trips to the same double ('.' separator).
std::string format_double(double v);

/// Lowercase hex SHA-256 digest.
std::string sha256_hex(std::string_view data);

struct TableFile {
  std::string name;
  std::string content;
};

/// Tables plus a manifest whose "tables" entry lists each file with its checksum.
struct ExportBundle {
  nlohmann::json manifest = nlohmann::json::object();
  std::vector<TableFile> tables;

  void add_table(std::string name, std::string content);
  /// The manifest as written to manifest.json.
  std::string manifest_text() const;
};

/// CSV with a header row; every row must match the header width.
std::string to_csv(std::span<const std::string> header, std::span<const std::vector<double>> columns);

/// Writes every table and manifest.json into dir (created if missing). Throws Io.
void write_bundle(const ExportBundle& bundle, const std::filesystem::path& dir);

void write_text(const std::filesystem::path& path, std::string_view content);

}  // namespace ffif
