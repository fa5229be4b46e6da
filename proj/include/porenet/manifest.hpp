#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace porenet {

/// Content hash (FNV-1a 64) of a file, hex encoded. Throws IoError when the
/// file cannot be read.
std::string file_hash_hex(const std::filesystem::path& path);

/// Versioned record of pipeline stages: inputs, parameters and outputs with
/// content hashes. A stage whose recorded hashes and parameters all still
/// match is up to date and can be skipped (re-running it is a no-op).
class Manifest {
 public:
  /// Loads the manifest if the file exists, otherwise starts empty.
  explicit Manifest(std::filesystem::path file);

  bool stage_up_to_date(const std::string& stage,
                        const std::vector<std::filesystem::path>& inputs,
                        const std::string& params,
                        const std::vector<std::filesystem::path>& outputs) const;

  void record_stage(const std::string& stage,
                    const std::vector<std::filesystem::path>& inputs,
                    const std::string& params,
                    const std::vector<std::filesystem::path>& outputs);

  void save() const;

 private:
  std::filesystem::path file_;
  nlohmann::json doc_;
};

}  // namespace porenet
