#include "porenet/raw_io.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace porenet {

namespace {

[[noreturn]] void format_fail(const std::filesystem::path& path, int line,
                              const std::string& msg) {
  throw FormatError(path.string() + ":" + std::to_string(line) + ": " + msg);
}

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::vector<double> parse_array(const std::filesystem::path& path, int line,
                                const std::string& value) {
  const std::string v = trim(value);
  if (v.size() < 2 || v.front() != '[' || v.back() != ']')
    format_fail(path, line, "expected [a, b, c]");
  std::vector<double> out;
  std::stringstream ss(v.substr(1, v.size() - 2));
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stod(trim(item)));
    } catch (const std::exception&) {
      format_fail(path, line, "bad number '" + trim(item) + "'");
    }
  }
  return out;
}

std::string parse_string(const std::filesystem::path&, int,
                         const std::string& value) {
  const std::string v = trim(value);
  if (v.size() >= 2 && v.front() == '"' && v.back() == '"')
    return v.substr(1, v.size() - 2);
  return v;
}

}  // namespace

VolumeMeta read_meta(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open metadata file: " + path.string());

  VolumeMeta meta;
  bool have_dims = false, have_res = false;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string s = trim(line);
    if (s.empty() || s[0] == '#') continue;
    const auto eq = s.find('=');
    if (eq == std::string::npos)
      format_fail(path, lineno, "expected 'key = value'");
    const std::string key = trim(s.substr(0, eq));
    const std::string value = s.substr(eq + 1);
    if (key == "dims") {
      const auto a = parse_array(path, lineno, value);
      if (a.size() != 3) format_fail(path, lineno, "dims needs 3 entries");
      meta.nx = static_cast<int>(a[0]);
      meta.ny = static_cast<int>(a[1]);
      meta.nz = static_cast<int>(a[2]);
      if (meta.nx < 1 || meta.ny < 1 || meta.nz < 1)
        format_fail(path, lineno, "dims must be >= 1");
      have_dims = true;
    } else if (key == "resolution_um") {
      const auto a = parse_array(path, lineno, value);
      if (a.size() != 3)
        format_fail(path, lineno, "resolution_um needs 3 entries");
      meta.res = Resolution{a[0], a[1], a[2]};
      if (meta.res.rx <= 0 || meta.res.ry <= 0 || meta.res.rz <= 0)
        format_fail(path, lineno, "resolution_um must be > 0");
      have_res = true;
    } else if (key == "encoding") {
      meta.encoding = parse_string(path, lineno, value);
      if (meta.encoding != "u8" && meta.encoding != "u32le")
        format_fail(path, lineno, "unsupported encoding '" + meta.encoding + "'");
    } else if (key == "version" || key == "order") {
      // accepted; order is always x-fastest
    } else {
      format_fail(path, lineno, "unknown key '" + key + "'");
    }
  }
  if (!have_dims) throw FormatError(path.string() + ": missing dims");
  if (!have_res) throw FormatError(path.string() + ": missing resolution_um");
  return meta;
}

void write_meta(const std::filesystem::path& path, const VolumeMeta& meta) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write metadata file: " + path.string());
  out << "version = 1\n";
  out << "dims = [" << meta.nx << ", " << meta.ny << ", " << meta.nz << "]\n";
  char buf[128];
  std::snprintf(buf, sizeof buf, "resolution_um = [%.17g, %.17g, %.17g]\n",
                meta.res.rx, meta.res.ry, meta.res.rz);
  out << buf;
  out << "encoding = \"" << meta.encoding << "\"\n";
  out << "order = \"x-fastest\"\n";
  if (!out) throw IoError("failed writing metadata file: " + path.string());
}

std::filesystem::path default_meta_path(const std::filesystem::path& raw_path) {
  std::filesystem::path p = raw_path;
  p += ".meta";
  return p;
}

VoxelGrid load_raw(const std::filesystem::path& raw_path,
                   const VolumeMeta& meta) {
  if (meta.encoding != "u8")
    throw FormatError("load_raw: expected u8 encoding, got " + meta.encoding);
  std::ifstream in(raw_path, std::ios::binary);
  if (!in) throw IoError("cannot open volume file: " + raw_path.string());
  in.seekg(0, std::ios::end);
  const auto file_size = static_cast<std::size_t>(in.tellg());
  const std::size_t expected = static_cast<std::size_t>(meta.nx) * meta.ny * meta.nz;
  if (file_size != expected)
    throw FormatError("size mismatch for " + raw_path.string() + ": file has " +
                      std::to_string(file_size) + " bytes, dims require " +
                      std::to_string(expected));
  in.seekg(0);

  VoxelGrid grid(meta.nx, meta.ny, meta.nz, meta.res);
  std::vector<char> buffer(1 << 20);
  std::size_t idx = 0;
  while (idx < expected) {
    const std::size_t chunk = std::min(buffer.size(), expected - idx);
    in.read(buffer.data(), static_cast<std::streamsize>(chunk));
    if (!in) throw IoError("failed reading volume file: " + raw_path.string());
    for (std::size_t b = 0; b < chunk; ++b)
      if (buffer[b] != 0) grid.set(idx + b, true);
    idx += chunk;
  }
  return grid;
}

VoxelGrid load_raw(const std::filesystem::path& raw_path,
                   const std::filesystem::path& meta_path) {
  return load_raw(raw_path, read_meta(meta_path));
}

void save_raw(const VoxelGrid& grid, const std::filesystem::path& raw_path,
              const std::filesystem::path& meta_path) {
  std::ofstream out(raw_path, std::ios::binary);
  if (!out) throw IoError("cannot write volume file: " + raw_path.string());
  std::vector<char> buffer(1 << 20);
  std::size_t idx = 0;
  while (idx < grid.size()) {
    const std::size_t chunk = std::min(buffer.size(), grid.size() - idx);
    for (std::size_t b = 0; b < chunk; ++b)
      buffer[b] = grid.get(idx + b) ? 1 : 0;
    out.write(buffer.data(), static_cast<std::streamsize>(chunk));
    idx += chunk;
  }
  if (!out) throw IoError("failed writing volume file: " + raw_path.string());

  VolumeMeta meta{grid.nx(), grid.ny(), grid.nz(), grid.resolution(), "u8"};
  write_meta(meta_path, meta);
}

void save_raw(const VoxelGrid& grid, const std::filesystem::path& raw_path) {
  save_raw(grid, raw_path, default_meta_path(raw_path));
}

void save_labels(const std::vector<std::uint32_t>& labels,
                 const VolumeMeta& meta_in,
                 const std::filesystem::path& raw_path,
                 const std::filesystem::path& meta_path) {
  const std::size_t expected =
      static_cast<std::size_t>(meta_in.nx) * meta_in.ny * meta_in.nz;
  if (labels.size() != expected)
    throw InvariantError("save_labels: label count does not match dims");
  std::ofstream out(raw_path, std::ios::binary);
  if (!out) throw IoError("cannot write label file: " + raw_path.string());
  std::vector<char> buffer;
  buffer.reserve(4 << 20);
  for (std::uint32_t v : labels) {
    buffer.push_back(static_cast<char>(v & 0xff));
    buffer.push_back(static_cast<char>((v >> 8) & 0xff));
    buffer.push_back(static_cast<char>((v >> 16) & 0xff));
    buffer.push_back(static_cast<char>((v >> 24) & 0xff));
    if (buffer.size() >= (4 << 20)) {
      out.write(buffer.data(), static_cast<std::streamsize>(buffer.size()));
      buffer.clear();
    }
  }
  if (!buffer.empty())
    out.write(buffer.data(), static_cast<std::streamsize>(buffer.size()));
  if (!out) throw IoError("failed writing label file: " + raw_path.string());

  VolumeMeta meta = meta_in;
  meta.encoding = "u32le";
  write_meta(meta_path, meta);
}

std::vector<std::uint32_t> load_labels(const std::filesystem::path& raw_path,
                                       const VolumeMeta& meta) {
  if (meta.encoding != "u32le")
    throw FormatError("load_labels: expected u32le encoding, got " +
                      meta.encoding);
  std::ifstream in(raw_path, std::ios::binary);
  if (!in) throw IoError("cannot open label file: " + raw_path.string());
  in.seekg(0, std::ios::end);
  const auto file_size = static_cast<std::size_t>(in.tellg());
  const std::size_t n = static_cast<std::size_t>(meta.nx) * meta.ny * meta.nz;
  if (file_size != n * 4)
    throw FormatError("size mismatch for " + raw_path.string() + ": file has " +
                      std::to_string(file_size) + " bytes, dims require " +
                      std::to_string(n * 4));
  in.seekg(0);
  std::vector<std::uint32_t> labels(n);
  std::vector<unsigned char> buffer(n * 4);
  in.read(reinterpret_cast<char*>(buffer.data()),
          static_cast<std::streamsize>(buffer.size()));
  if (!in) throw IoError("failed reading label file: " + raw_path.string());
  for (std::size_t i = 0; i < n; ++i) {
    labels[i] = static_cast<std::uint32_t>(buffer[4 * i]) |
                (static_cast<std::uint32_t>(buffer[4 * i + 1]) << 8) |
                (static_cast<std::uint32_t>(buffer[4 * i + 2]) << 16) |
                (static_cast<std::uint32_t>(buffer[4 * i + 3]) << 24);
  }
  return labels;
}

void save_points_csv(const VoxelGrid& mask, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write point list: " + path.string());
  out << "i,j,k\n";
  for (std::size_t idx = 0; idx < mask.size(); ++idx) {
    if (!mask.get(idx)) continue;
    const VoxelCoord v = mask.coord_of(idx);
    out << v.i << ',' << v.j << ',' << v.k << '\n';
  }
  if (!out) throw IoError("failed writing point list: " + path.string());
}

}  // namespace porenet
