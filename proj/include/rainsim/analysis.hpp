#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "rainsim/distill.hpp"
#include "rainsim/point_cloud.hpp"

namespace rainsim {

// Absolute difference of mean intensity between a real and a simulated
// corpus, per point category. A category missing from either side is absent.
struct IntensityGap {
  std::optional<double> noise;
  std::optional<double> clear;
  std::optional<double> all;
};

struct RangeBinGap {
  double range_lo = 0.0;  // meters, inclusive
  double range_hi = 0.0;  // meters, exclusive
  double gap = 0.0;       // mean-per-frame real count minus sim count, signed
};

struct GapReport {
  IntensityGap intensity_gap;
  std::vector<RangeBinGap> points_gap;
};

struct DetectionMatch {
  double iou_threshold = 0.0;
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  double precision = 0.0;  // tp / (tp + fp), 0 when no predictions
  double recall = 0.0;     // tp / (tp + fn), 0 when no ground truths
};

// Both corpora must be fully labeled; intensities are pooled over all frames
// per category before taking means.
IntensityGap intensity_gap(std::span<const PointCloud> real, std::span<const PointCloud> sim);

// Signed mean-per-frame point count difference per range bin
// [k * bin_width, (k + 1) * bin_width). Empty corpora give an empty report.
std::vector<RangeBinGap> points_gap_by_range(std::span<const PointCloud> real,
                                             std::span<const PointCloud> sim, double bin_width);

// Ground-plane IoU of two yaw-rotated boxes via convex polygon clipping.
// Throws std::invalid_argument for zero-area footprints.
double iou_bev(const Box& a, const Box& b);

// Greedy matching in descending confidence: each prediction takes the
// highest-IoU unmatched ground truth at or above the threshold (IoU ties go
// to the lower ground-truth index). One DetectionMatch per threshold.
std::vector<DetectionMatch> precision_recall(std::span<const DetBox> preds,
                                             std::span<const Box> gts,
                                             std::span<const double> thresholds);

}  // namespace rainsim
