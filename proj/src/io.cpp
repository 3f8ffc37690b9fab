#include "ffif/io.hpp"

#include <array>
#include <charconv>
#include <fstream>

#include <openssl/evp.h>

#include "ffif/error.hpp"

namespace ffif {

std::string format_double(double v) {
  std::array<char, 32> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc{}) throw Error(ErrorCode::Io, "cannot format number");
  return std::string(buf.data(), end);
}

std::string sha256_hex(std::string_view data) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int length = 0;
  if (EVP_Digest(data.data(), data.size(), digest.data(), &length, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorCode::Io, "SHA-256 computation failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < length; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 0xf];
  }
  return out;
}

void ExportBundle::add_table(std::string name, std::string content) {
  if (!manifest.contains("tables")) manifest["tables"] = nlohmann::json::array();
  manifest["tables"].push_back(
      {{"file", name}, {"sha256", sha256_hex(content)}, {"bytes", content.size()}});
  tables.push_back({std::move(name), std::move(content)});
}

std::string ExportBundle::manifest_text() const { return manifest.dump(2) + "\n"; }

std::string to_csv(std::span<const std::string> header, std::span<const std::vector<double>> columns) {
  if (header.size() != columns.size()) {
    throw Error(ErrorCode::LengthMismatch, "CSV header and column counts differ");
  }
  const std::size_t rows = columns.empty() ? 0 : columns.front().size();
  for (const auto& c : columns) {
    if (c.size() != rows) throw Error(ErrorCode::LengthMismatch, "CSV columns differ in length");
  }
  std::string out;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out += ',';
    out += header[i];
  }
  out += '\n';
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t i = 0; i < columns.size(); ++i) {
      if (i) out += ',';
      out += format_double(columns[i][r]);
    }
    out += '\n';
  }
  return out;
}

void write_text(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

void write_bundle(const ExportBundle& bundle, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create " + dir.string() + ": " + ec.message());
  for (const auto& t : bundle.tables) write_text(dir / t.name, t.content);
  write_text(dir / "manifest.json", bundle.manifest_text());
}

}  // namespace ffif
