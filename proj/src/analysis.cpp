#include "rainsim/analysis.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "rainsim/errors.hpp"

namespace rainsim {
namespace {

struct CategoryStats {
  double sum = 0.0;
  std::size_t count = 0;

  std::optional<double> mean() const {
    if (count == 0) return std::nullopt;
    return sum / static_cast<double>(count);
  }
};

struct CorpusStats {
  CategoryStats noise;
  CategoryStats clear;
  CategoryStats all;
};

CorpusStats collect(std::span<const PointCloud> corpus) {
  CorpusStats stats;
  for (const PointCloud& cloud : corpus) {
    for (const Point& p : cloud.points) {
      const auto intensity = static_cast<double>(p.intensity);
      switch (p.noise_label) {
        case NoiseLabel::kRainNoise:
          stats.noise.sum += intensity;
          stats.noise.count += 1;
          break;
        case NoiseLabel::kClear:
          stats.clear.sum += intensity;
          stats.clear.count += 1;
          break;
        case NoiseLabel::kUnlabeled:
          throw ValidationError("intensity_gap: corpora must be fully labeled");
      }
      stats.all.sum += intensity;
      stats.all.count += 1;
    }
  }
  return stats;
}

std::optional<double> gap_of(const CategoryStats& real, const CategoryStats& sim) {
  const auto real_mean = real.mean();
  const auto sim_mean = sim.mean();
  if (!real_mean || !sim_mean) return std::nullopt;
  return std::abs(*real_mean - *sim_mean);
}

// Counter-clockwise footprint corners of a yaw-rotated box.
std::array<std::array<double, 2>, 4> footprint(const Box& box) {
  const double c = std::cos(box.yaw);
  const double s = std::sin(box.yaw);
  const double hl = box.length / 2.0;
  const double hw = box.width / 2.0;
  std::array<std::array<double, 2>, 4> corners{};
  const double local[4][2] = {{hl, hw}, {-hl, hw}, {-hl, -hw}, {hl, -hw}};
  for (int i = 0; i < 4; ++i) {
    corners[static_cast<std::size_t>(i)] = {box.x + c * local[i][0] - s * local[i][1],
                                            box.y + s * local[i][0] + c * local[i][1]};
  }
  return corners;
}

double polygon_area(std::span<const std::array<double, 2>> poly) {
  if (poly.size() < 3) return 0.0;
  double twice_area = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const auto& a = poly[i];
    const auto& b = poly[(i + 1) % poly.size()];
    twice_area += a[0] * b[1] - b[0] * a[1];
  }
  return std::abs(twice_area) / 2.0;
}

// Sutherland-Hodgman clip of a convex polygon against the half-plane on the
// left of edge a->b.
std::vector<std::array<double, 2>> clip_by_edge(std::span<const std::array<double, 2>> poly,
                                                const std::array<double, 2>& a,
                                                const std::array<double, 2>& b) {
  auto side = [&](const std::array<double, 2>& p) {
    return (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0]);
  };
  std::vector<std::array<double, 2>> out;
  out.reserve(poly.size() + 1);
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const auto& cur = poly[i];
    const auto& nxt = poly[(i + 1) % poly.size()];
    const double side_cur = side(cur);
    const double side_nxt = side(nxt);
    if (side_cur >= 0.0) out.push_back(cur);
    if ((side_cur > 0.0 && side_nxt < 0.0) || (side_cur < 0.0 && side_nxt > 0.0)) {
      const double t = side_cur / (side_cur - side_nxt);
      out.push_back({cur[0] + t * (nxt[0] - cur[0]), cur[1] + t * (nxt[1] - cur[1])});
    }
  }
  return out;
}

}  // namespace

IntensityGap intensity_gap(std::span<const PointCloud> real, std::span<const PointCloud> sim) {
  const CorpusStats real_stats = collect(real);
  const CorpusStats sim_stats = collect(sim);
  return IntensityGap{gap_of(real_stats.noise, sim_stats.noise),
                      gap_of(real_stats.clear, sim_stats.clear),
                      gap_of(real_stats.all, sim_stats.all)};
}

std::vector<RangeBinGap> points_gap_by_range(std::span<const PointCloud> real,
                                             std::span<const PointCloud> sim, double bin_width) {
  if (!(bin_width > 0.0)) {
    throw std::invalid_argument("points_gap_by_range: bin_width must be > 0");
  }
  if (real.empty() && sim.empty()) return {};

  auto bin_counts = [&](std::span<const PointCloud> corpus) {
    std::vector<std::size_t> counts;
    for (const PointCloud& cloud : corpus) {
      for (const Point& p : cloud.points) {
        const auto bin = static_cast<std::size_t>(std::floor(p.range() / bin_width));
        if (bin >= counts.size()) counts.resize(bin + 1, 0);
        counts[bin] += 1;
      }
    }
    return counts;
  };
  const auto real_counts = bin_counts(real);
  const auto sim_counts = bin_counts(sim);

  const std::size_t n_bins = std::max(real_counts.size(), sim_counts.size());
  std::vector<RangeBinGap> gaps;
  gaps.reserve(n_bins);
  for (std::size_t k = 0; k < n_bins; ++k) {
    const double real_mean =
        real.empty() ? 0.0
                     : static_cast<double>(k < real_counts.size() ? real_counts[k] : 0) /
                           static_cast<double>(real.size());
    const double sim_mean =
        sim.empty() ? 0.0
                    : static_cast<double>(k < sim_counts.size() ? sim_counts[k] : 0) /
                          static_cast<double>(sim.size());
    gaps.push_back(RangeBinGap{static_cast<double>(k) * bin_width,
                               static_cast<double>(k + 1) * bin_width, real_mean - sim_mean});
  }
  return gaps;
}

double iou_bev(const Box& a, const Box& b) {
  if (!(a.length > 0.0) || !(a.width > 0.0) || !(b.length > 0.0) || !(b.width > 0.0)) {
    throw std::invalid_argument("iou_bev: boxes must have positive footprint area");
  }
  const auto corners_a = footprint(a);
  const auto corners_b = footprint(b);

  std::vector<std::array<double, 2>> poly(corners_a.begin(), corners_a.end());
  for (std::size_t i = 0; i < 4 && !poly.empty(); ++i) {
    poly = clip_by_edge(poly, corners_b[i], corners_b[(i + 1) % 4]);
  }
  const double inter = polygon_area(poly);
  const double area_a = a.length * a.width;
  const double area_b = b.length * b.width;
  const double uni = area_a + area_b - inter;
  return std::clamp(inter / uni, 0.0, 1.0);
}

std::vector<DetectionMatch> precision_recall(std::span<const DetBox> preds,
                                             std::span<const Box> gts,
                                             std::span<const double> thresholds) {
  for (double t : thresholds) {
    if (!(t > 0.0) || t > 1.0) {
      throw std::invalid_argument("precision_recall: thresholds must lie in (0, 1]");
    }
  }

  // Confidence order, stable on ties.
  std::vector<std::size_t> order(preds.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return preds[i].confidence > preds[j].confidence;
  });

  std::vector<DetectionMatch> results;
  results.reserve(thresholds.size());
  for (double threshold : thresholds) {
    std::vector<bool> taken(gts.size(), false);
    std::size_t tp = 0;
    for (std::size_t rank : order) {
      double best_iou = 0.0;
      std::size_t best_gt = gts.size();
      for (std::size_t g = 0; g < gts.size(); ++g) {
        if (taken[g]) continue;
        const double iou = iou_bev(preds[rank].box, gts[g]);
        if (iou > best_iou) {  // strict: IoU ties keep the lower index
          best_iou = iou;
          best_gt = g;
        }
      }
      if (best_gt < gts.size() && best_iou >= threshold) {
        taken[best_gt] = true;
        ++tp;
      }
    }
    DetectionMatch match;
    match.iou_threshold = threshold;
    match.tp = tp;
    match.fp = preds.size() - tp;
    match.fn = gts.size() - tp;
    match.precision =
        preds.empty() ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + match.fp);
    match.recall = gts.empty() ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + match.fn);
    results.push_back(match);
  }
  return results;
}

}  // namespace rainsim
