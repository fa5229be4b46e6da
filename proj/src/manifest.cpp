#include "porenet/manifest.hpp"

#include <cstdint>
#include <fstream>

#include "porenet/errors.hpp"

namespace porenet {

std::string file_hash_hex(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot hash file: " + path.string());
  std::uint64_t hash = 0xcbf29ce484222325ull;  // FNV-1a 64
  std::vector<char> buffer(1 << 16);
  while (in) {
    in.read(buffer.data(), static_cast<std::streamsize>(buffer.size()));
    const auto got = in.gcount();
    for (std::streamsize i = 0; i < got; ++i) {
      hash ^= static_cast<unsigned char>(buffer[i]);
      hash *= 0x100000001b3ull;
    }
  }
  char out[17];
  std::snprintf(out, sizeof out, "%016llx", static_cast<unsigned long long>(hash));
  return out;
}

Manifest::Manifest(std::filesystem::path file) : file_(std::move(file)) {
  if (std::filesystem::exists(file_)) {
    std::ifstream in(file_);
    if (!in) throw IoError("cannot open manifest: " + file_.string());
    try {
      in >> doc_;
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(file_.string() + ": " + e.what());
    }
    if (doc_.value("format", "") != "porenet-manifest" || doc_.value("version", 0) != 1)
      throw FormatError(file_.string() + ": not a porenet manifest");
  } else {
    doc_ = {{"format", "porenet-manifest"}, {"version", 1},
            {"stages", nlohmann::json::object()}};
  }
}

bool Manifest::stage_up_to_date(
    const std::string& stage, const std::vector<std::filesystem::path>& inputs,
    const std::string& params,
    const std::vector<std::filesystem::path>& outputs) const {
  const auto& stages = doc_.at("stages");
  if (!stages.contains(stage)) return false;
  const auto& entry = stages.at(stage);
  if (entry.value("params", "") != params) return false;

  auto all_match = [&](const char* key,
                       const std::vector<std::filesystem::path>& files) {
    const auto& recorded = entry.value(key, nlohmann::json::object());
    if (recorded.size() != files.size()) return false;
    for (const auto& f : files) {
      if (!std::filesystem::exists(f)) return false;
      const auto it = recorded.find(f.string());
      if (it == recorded.end() || *it != file_hash_hex(f)) return false;
    }
    return true;
  };
  return all_match("inputs", inputs) && all_match("outputs", outputs);
}

void Manifest::record_stage(const std::string& stage,
                            const std::vector<std::filesystem::path>& inputs,
                            const std::string& params,
                            const std::vector<std::filesystem::path>& outputs) {
  nlohmann::json entry;
  entry["params"] = params;
  auto hash_all = [&](const std::vector<std::filesystem::path>& files) {
    nlohmann::json m = nlohmann::json::object();
    for (const auto& f : files) m[f.string()] = file_hash_hex(f);
    return m;
  };
  entry["inputs"] = hash_all(inputs);
  entry["outputs"] = hash_all(outputs);
  doc_["stages"][stage] = entry;
}

void Manifest::save() const {
  std::ofstream out(file_);
  if (!out) throw IoError("cannot write manifest: " + file_.string());
  out << doc_.dump(1) << '\n';
  if (!out) throw IoError("failed writing manifest: " + file_.string());
}

}  // namespace porenet
