#pragma once

#include <filesystem>
#include <string>

#include "rainsim/point_cloud.hpp"

namespace rainsim {

// On-disk layouts. bin4 is the common N x 4 float32 little-endian interchange
// record (x, y, z, intensity); bin5 appends a float32 label field (0 = clear,
// 1 = rain noise) so simulated clouds stay self-labeled; csv is
// "x,y,z,intensity[,label]" with a header row.
enum class CloudFormat { kBin4, kBin5, kCsv };

// Maps .bin -> bin4, .bin5 -> bin5, .csv -> csv. Throws IoError otherwise.
CloudFormat format_from_extension(const std::filesystem::path& path);

PointCloud read_pointcloud(const std::filesystem::path& path, CloudFormat format);

// bin round-trips are bit exact. Writing bin5 (or csv with a label column)
// requires every point to be labeled.
void write_pointcloud(const PointCloud& cloud, const std::filesystem::path& path,
                      CloudFormat format);

}  // namespace rainsim
