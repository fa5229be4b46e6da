#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "porenet/voxel_grid.hpp"

namespace porenet {

/// Sidecar metadata for headerless RAW volumes. The text format is
/// line-oriented `key = value`:
///
///   version = 1
///   dims = [512, 512, 512]
///   resolution_um = [24, 24, 24]
///   encoding = "u8"
///   order = "x-fastest"
///
/// `encoding` is "u8" (one byte per voxel, nonzero = pore) for binary
/// volumes and "u32le" for label images. Linearization is always x-fastest.
struct VolumeMeta {
  int nx = 0, ny = 0, nz = 0;
  Resolution res{};
  std::string encoding = "u8";
};

VolumeMeta read_meta(const std::filesystem::path& path);
void write_meta(const std::filesystem::path& path, const VolumeMeta& meta);

/// Default sidecar path: "<raw>.meta".
std::filesystem::path default_meta_path(const std::filesystem::path& raw_path);

VoxelGrid load_raw(const std::filesystem::path& raw_path,
                   const VolumeMeta& meta);
VoxelGrid load_raw(const std::filesystem::path& raw_path,
                   const std::filesystem::path& meta_path);

void save_raw(const VoxelGrid& grid, const std::filesystem::path& raw_path,
              const std::filesystem::path& meta_path);
void save_raw(const VoxelGrid& grid, const std::filesystem::path& raw_path);

/// 32-bit unsigned little-endian label image, label 0 = non-pore.
void save_labels(const std::vector<std::uint32_t>& labels,
                 const VolumeMeta& meta,
                 const std::filesystem::path& raw_path,
                 const std::filesystem::path& meta_path);
std::vector<std::uint32_t> load_labels(const std::filesystem::path& raw_path,
                                       const VolumeMeta& meta);

/// Point list of set voxels as CSV rows "i,j,k" with a header line.
void save_points_csv(const VoxelGrid& mask, const std::filesystem::path& path);

}  // namespace porenet
