#include "rainsim/distill.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "rainsim/errors.hpp"
#include "rainsim/kdtree.hpp"

namespace rainsim {
namespace {

// Largest double below 1. std::tanh saturates to exactly 1.0 past ~19, which
// would break the open similarity bounds; similarity factors clamp here.
constexpr double kJustBelowOne = 0x1.fffffffffffffp-1;

double open_tanh(double x) { return std::min(std::tanh(x), kJustBelowOne); }

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Wraps an angle difference to (-pi, pi].
double wrap_angle(double d) {
  d = std::fmod(d, 2.0 * std::numbers::pi);
  if (d <= -std::numbers::pi) d += 2.0 * std::numbers::pi;
  if (d > std::numbers::pi) d -= 2.0 * std::numbers::pi;
  return d;
}

double smooth_l1_term(double d) {
  const double a = std::abs(d);
  return a < 1.0 ? 0.5 * d * d : a - 0.5;
}

}  // namespace

void LossWeights::validate() const {
  for (double v : {lambda1, lambda2, threshold, eta1, eta2, eta3, epsilon}) {
    if (!std::isfinite(v)) {
      throw ValidationError("loss weights: all fields must be finite");
    }
  }
  if (!(epsilon > 0.0)) {
    throw ValidationError("loss weights: epsilon must be > 0");
  }
}

double density_similarity(std::size_t count_sunny, std::size_t count_rainy, double epsilon) {
  const double lo = static_cast<double>(std::min(count_sunny, count_rainy));
  const double gap = std::abs(static_cast<double>(count_sunny) - static_cast<double>(count_rainy));
  return open_tanh(lo / (gap + epsilon));
}

double chamfer_distance(std::span<const Vec3> a, std::span<const Vec3> b) {
  if (a.empty() || b.empty()) {
    throw std::invalid_argument("chamfer_distance: point sets must be non-empty");
  }
  const KdTree3 tree_a(a);
  const KdTree3 tree_b(b);
  double sum_ab = 0.0;
  for (const Vec3& p : a) sum_ab += tree_b.nearest_distance(p);
  double sum_ba = 0.0;
  for (const Vec3& p : b) sum_ba += tree_a.nearest_distance(p);
  return sum_ab / static_cast<double>(a.size()) + sum_ba / static_cast<double>(b.size());
}

double shape_similarity(std::span<const Vec3> a, std::span<const Vec3> b) {
  return 1.0 - open_tanh(chamfer_distance(a, b));
}

double instance_similarity(const InstancePair& pair, double epsilon) {
  if (pair.pc_rainy.empty() || pair.pc_sunny.empty()) {
    return 0.0;  // object fully lost on one side carries no shape evidence
  }
  return density_similarity(pair.pc_sunny.size(), pair.pc_rainy.size(), epsilon) *
         shape_similarity(pair.pc_sunny, pair.pc_rainy);
}

double smooth_l1(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw std::invalid_argument("smooth_l1: length mismatch");
  }
  if (x.empty()) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sum += smooth_l1_term(x[i] - y[i]);
  }
  return sum / static_cast<double>(x.size());
}

double awid_loss(std::span<const InstancePair> pairs, double epsilon) {
  if (pairs.empty()) return 0.0;
  double sum = 0.0;
  for (const InstancePair& pair : pairs) {
    if (pair.feat_sunny.size() != pair.feat_rainy.size()) {
      throw std::invalid_argument("awid_loss: feature dimension mismatch for box '" +
                                  pair.box_id + "'");
    }
    sum += instance_similarity(pair, epsilon) * smooth_l1(pair.feat_sunny, pair.feat_rainy);
  }
  return sum / static_cast<double>(pairs.size());
}

double prd_cls_loss(const PredictionSet& preds, double threshold) {
  if (preds.cls_teacher.size() != preds.cls_student.size()) {
    throw std::invalid_argument("prd_cls_loss: logit sequences must be aligned");
  }
  if (preds.cls_teacher.empty()) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < preds.cls_teacher.size(); ++i) {
    if (sigmoid(preds.cls_teacher[i]) < threshold) continue;
    const double d = preds.cls_student[i] - preds.cls_teacher[i];
    sum += d * d;
  }
  // Averaged over every foreground position, masked terms contribute zero.
  return sum / static_cast<double>(preds.cls_teacher.size());
}

double prd_reg_loss(const PredictionSet& preds) {
  if (preds.box_teacher.size() != preds.box_student.size()) {
    throw std::invalid_argument("prd_reg_loss: box sequences must be aligned");
  }
  if (preds.box_teacher.empty()) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < preds.box_teacher.size(); ++i) {
    const Box& s = preds.box_student[i];
    const Box& t = preds.box_teacher[i];
    sum += smooth_l1_term(s.x - t.x);
    sum += smooth_l1_term(s.y - t.y);
    sum += smooth_l1_term(s.z - t.z);
    sum += smooth_l1_term(s.length - t.length);
    sum += smooth_l1_term(s.width - t.width);
    sum += smooth_l1_term(s.height - t.height);
    sum += smooth_l1_term(wrap_angle(s.yaw - t.yaw));
  }
  return sum / (7.0 * static_cast<double>(preds.box_teacher.size()));
}

double prd_loss(const PredictionSet& preds, const LossWeights& weights) {
  return weights.lambda1 * prd_cls_loss(preds, weights.threshold) +
         weights.lambda2 * prd_reg_loss(preds);
}

std::pair<std::size_t, std::size_t> points_in_box(const Box& box, const PointCloud& cloud) {
  const double cos_yaw = std::cos(box.yaw);
  const double sin_yaw = std::sin(box.yaw);
  std::size_t noise = 0;
  std::size_t clear = 0;
  for (std::size_t i = 0; i < cloud.points.size(); ++i) {
    const Point& p = cloud.points[i];
    if (p.noise_label == NoiseLabel::kUnlabeled) {
      throw ValidationError("points_in_box: unlabeled point at index " + std::to_string(i));
    }
    const double dx = static_cast<double>(p.x) - box.x;
    const double dy = static_cast<double>(p.y) - box.y;
    const double dz = static_cast<double>(p.z) - box.z;
    // Rotate into the box frame (by -yaw).
    const double local_x = cos_yaw * dx + sin_yaw * dy;
    const double local_y = -sin_yaw * dx + cos_yaw * dy;
    if (std::abs(local_x) <= box.length / 2.0 && std::abs(local_y) <= box.width / 2.0 &&
        std::abs(dz) <= box.height / 2.0) {
      (p.noise_label == NoiseLabel::kRainNoise ? noise : clear) += 1;
    }
  }
  return {noise, clear};
}

double noise_ratio(std::size_t noise_count, std::size_t clear_count, double epsilon) {
  return static_cast<double>(noise_count) / (static_cast<double>(clear_count) + epsilon);
}

double napc_loss(std::span<const DetBox> det_boxes, const PointCloud& cloud, double epsilon) {
  if (det_boxes.empty()) return 0.0;
  double sum = 0.0;
  for (const DetBox& det : det_boxes) {
    if (det.confidence < 0.0 || det.confidence > 1.0) {
      throw std::invalid_argument("napc_loss: confidence must lie in [0, 1]");
    }
    const auto [noise, clear] = points_in_box(det.box, cloud);
    sum += std::tanh(noise_ratio(noise, clear, epsilon)) * det.confidence;
  }
  return sum / static_cast<double>(det_boxes.size());
}

double total_loss(double sup_cls, double sup_reg, double ins, double rsp, double napc,
                  const LossWeights& weights) {
  for (double v : {sup_cls, sup_reg, ins, rsp, napc}) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("total_loss: components must be finite");
    }
  }
  return sup_cls + sup_reg + weights.eta1 * ins + weights.eta2 * rsp + weights.eta3 * napc;
}

}  // namespace rainsim
