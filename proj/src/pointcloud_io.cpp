#include "rainsim/pointcloud_io.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <vector>

#include "rainsim/errors.hpp"

static_assert(std::endian::native == std::endian::little,
              "bin4/bin5 layouts are little-endian; byte-swapping is not implemented");

namespace rainsim {
namespace {

constexpr float kLabelClear = 0.0f;
constexpr float kLabelRainNoise = 1.0f;

NoiseLabel label_from_field(float value, std::size_t record, const std::filesystem::path& path) {
  if (value == kLabelClear) return NoiseLabel::kClear;
  if (value == kLabelRainNoise) return NoiseLabel::kRainNoise;
  throw ValidationError(path.string() + ": record " + std::to_string(record) +
                        ": label field must be 0 or 1");
}

float label_to_field(NoiseLabel label, const std::filesystem::path& path) {
  switch (label) {
    case NoiseLabel::kClear:
      return kLabelClear;
    case NoiseLabel::kRainNoise:
      return kLabelRainNoise;
    case NoiseLabel::kUnlabeled:
      break;
  }
  throw ValidationError(path.string() + ": unlabeled point cannot be written with a label field");
}

void check_point(const Point& p, std::size_t record, const std::filesystem::path& path) {
  if (!p.finite()) {
    throw ValidationError(path.string() + ": record " + std::to_string(record) +
                          ": non-finite coordinate");
  }
  if (!std::isfinite(p.intensity) || p.intensity < 0.0f) {
    throw ValidationError(path.string() + ": record " + std::to_string(record) +
                          ": intensity must be finite and >= 0");
  }
}

PointCloud read_bin(const std::filesystem::path& path, bool with_label) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open for reading: " + path.string());
  }
  in.seekg(0, std::ios::end);
  const auto byte_length = static_cast<std::size_t>(in.tellg());
  in.seekg(0, std::ios::beg);

  const std::size_t fields = with_label ? 5 : 4;
  const std::size_t record_size = fields * sizeof(float);
  if (byte_length % record_size != 0) {
    throw IoError(path.string() + ": byte length " + std::to_string(byte_length) +
                  " is not a multiple of the " + std::to_string(record_size) +
                  "-byte record size");
  }

  PointCloud cloud;
  cloud.frame_id = path.stem().string();
  const std::size_t n = byte_length / record_size;
  cloud.points.reserve(n);
  std::vector<float> record(fields);
  for (std::size_t i = 0; i < n; ++i) {
    in.read(reinterpret_cast<char*>(record.data()),
            static_cast<std::streamsize>(record_size));
    if (!in) {
      throw IoError(path.string() + ": short read at record " + std::to_string(i));
    }
    Point p;
    p.x = record[0];
    p.y = record[1];
    p.z = record[2];
    p.intensity = record[3];
    p.noise_label = with_label ? label_from_field(record[4], i, path) : NoiseLabel::kUnlabeled;
    check_point(p, i, path);
    cloud.points.push_back(p);
  }
  return cloud;
}

void write_bin(const PointCloud& cloud, const std::filesystem::path& path, bool with_label) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot open for writing: " + path.string());
  }
  std::vector<float> record(with_label ? 5 : 4);
  for (std::size_t i = 0; i < cloud.points.size(); ++i) {
    const Point& p = cloud.points[i];
    record[0] = p.x;
    record[1] = p.y;
    record[2] = p.z;
    record[3] = p.intensity;
    if (with_label) {
      record[4] = label_to_field(p.noise_label, path);
    }
    out.write(reinterpret_cast<const char*>(record.data()),
              static_cast<std::streamsize>(record.size() * sizeof(float)));
  }
  if (!out) {
    throw IoError("write failed: " + path.string());
  }
}

// Shortest float form that parses back to the same value.
std::string format_float(float v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", static_cast<double>(v));
  return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

float parse_float_field(const std::string& field, std::size_t record,
                        const std::filesystem::path& path) {
  float value = 0.0f;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  while (first != last && (*first == ' ' || *first == '\t')) ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) {
    throw IoError(path.string() + ": record " + std::to_string(record) +
                  ": unparseable field '" + field + "'");
  }
  return value;
}

PointCloud read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open for reading: " + path.string());
  }
  std::string line;
  if (!std::getline(in, line)) {
    PointCloud empty;  // header-less empty file reads as an empty cloud
    empty.frame_id = path.stem().string();
    return empty;
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  bool with_label = false;
  if (line == "x,y,z,intensity") {
    with_label = false;
  } else if (line == "x,y,z,intensity,label") {
    with_label = true;
  } else {
    throw IoError(path.string() + ": unrecognized csv header '" + line + "'");
  }

  PointCloud cloud;
  cloud.frame_id = path.stem().string();
  std::size_t record = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    const std::size_t expected = with_label ? 5 : 4;
    if (fields.size() != expected) {
      throw IoError(path.string() + ": record " + std::to_string(record) + ": expected " +
                    std::to_string(expected) + " fields, got " + std::to_string(fields.size()));
    }
    Point p;
    p.x = parse_float_field(fields[0], record, path);
    p.y = parse_float_field(fields[1], record, path);
    p.z = parse_float_field(fields[2], record, path);
    p.intensity = parse_float_field(fields[3], record, path);
    p.noise_label = with_label
                        ? label_from_field(parse_float_field(fields[4], record, path), record, path)
                        : NoiseLabel::kUnlabeled;
    check_point(p, record, path);
    cloud.points.push_back(p);
    ++record;
  }
  return cloud;
}

void write_csv(const PointCloud& cloud, const std::filesystem::path& path) {
  bool with_label = !cloud.points.empty();
  for (const Point& p : cloud.points) {
    if (p.noise_label == NoiseLabel::kUnlabeled) {
      with_label = false;
      break;
    }
  }
  std::ofstream out(path, std::ios::trunc);
  if (!out) {
    throw IoError("cannot open for writing: " + path.string());
  }
  out << (with_label ? "x,y,z,intensity,label\n" : "x,y,z,intensity\n");
  for (const Point& p : cloud.points) {
    out << format_float(p.x) << ',' << format_float(p.y) << ',' << format_float(p.z) << ','
        << format_float(p.intensity);
    if (with_label) {
      out << ',' << (p.noise_label == NoiseLabel::kRainNoise ? '1' : '0');
    }
    out << '\n';
  }
  if (!out) {
    throw IoError("write failed: " + path.string());
  }
}

}  // namespace

CloudFormat format_from_extension(const std::filesystem::path& path) {
  const std::string ext = path.extension().string();
  if (ext == ".bin") return CloudFormat::kBin4;
  if (ext == ".bin5") return CloudFormat::kBin5;
  if (ext == ".csv") return CloudFormat::kCsv;
  throw IoError("unrecognized point cloud extension: " + path.string());
}

PointCloud read_pointcloud(const std::filesystem::path& path, CloudFormat format) {
  std::error_code ec;
  if (!std::filesystem::exists(path, ec) || ec) {
    throw IoError("no such file: " + path.string());
  }
  switch (format) {
    case CloudFormat::kBin4:
      return read_bin(path, /*with_label=*/false);
    case CloudFormat::kBin5:
      return read_bin(path, /*with_label=*/true);
    case CloudFormat::kCsv:
      return read_csv(path);
  }
  throw IoError("unknown point cloud format");
}

void write_pointcloud(const PointCloud& cloud, const std::filesystem::path& path,
                      CloudFormat format) {
  switch (format) {
    case CloudFormat::kBin4:
      write_bin(cloud, path, /*with_label=*/false);
      return;
    case CloudFormat::kBin5:
      write_bin(cloud, path, /*with_label=*/true);
      return;
    case CloudFormat::kCsv:
      write_csv(cloud, path);
      return;
  }
  throw IoError("unknown point cloud format");
}

}  // namespace rainsim
