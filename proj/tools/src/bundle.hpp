#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace mollow::cli {

struct Column {
  std::string name;
  std::string doc;
};

struct FileRecord {
  std::string name;  // relative to the output directory
  std::string sha256;
  std::size_t bytes = 0;
  std::string description;
  std::vector<Column> columns;
};

/// Lower-case hex SHA-256 of `data`.
std::string sha256_hex(const std::string& data);

/// Output directory plus the record of everything written into it. Files
/// are written immediately; manifest.json goes last.
class Bundle {
 public:
  explicit Bundle(std::filesystem::path dir);

  void add(const std::string& name, const std::string& content, std::string description,
           std::vector<Column> columns = {});
  void warn(std::string message) { warnings_.push_back(std::move(message)); }

  /// Writes manifest.json with the config snapshot and checksums of every added file.
  void write_manifest(const std::string& mode, const std::string& config_text);

  const std::filesystem::path& dir() const { return dir_; }
  const std::vector<FileRecord>& files() const { return files_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

 private:
  std::filesystem::path dir_;
  std::vector<FileRecord> files_;
  std::vector<std::string> warnings_;
};

/// Config snapshot stored in a manifest.
std::string config_text_from_manifest(const std::string& manifest_path);

}  // namespace mollow::cli
