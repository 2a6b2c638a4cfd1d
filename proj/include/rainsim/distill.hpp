#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rainsim/point_cloud.hpp"
#include "rainsim/vec3.hpp"

namespace rainsim {

// Oriented 3D box: center, extents, yaw about +z.
struct Box {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  double length = 0.0;  // along heading
  double width = 0.0;
  double height = 0.0;
  double yaw = 0.0;
};

struct DetBox {
  Box box;
  double confidence = 0.0;  // in [0, 1]
};

// One ground-truth object observed under both weather conditions, with the
// detector's pooled instance features for each.
struct InstancePair {
  std::string box_id;
  std::vector<Vec3> pc_sunny;
  std::vector<Vec3> pc_rainy;
  std::vector<double> feat_sunny;
  std::vector<double> feat_rainy;
};

// Aligned teacher/student head outputs plus the student's detections.
struct PredictionSet {
  std::vector<double> cls_teacher;  // logits at foreground positions
  std::vector<double> cls_student;
  std::vector<Box> box_teacher;
  std::vector<Box> box_student;
  std::vector<DetBox> det_boxes;
};

struct LossWeights {
  double lambda1 = 15.0;   // classification response weight
  double lambda2 = 0.2;    // regression response weight
  double threshold = 0.5;  // teacher confidence gate
  double eta1 = 2.0;       // instance distillation weight
  double eta2 = 0.5;       // response distillation weight
  double eta3 = 2.0;       // noise correction weight
  double epsilon = 1e-6;

  void validate() const;  // all finite, epsilon > 0
};

struct LossReport {
  double ins = 0.0;
  double rsp_cls = 0.0;
  double rsp_reg = 0.0;
  double rsp = 0.0;
  double napc = 0.0;
  double total = 0.0;
};

// tanh(min(d_s, d_r) / (|d_s - d_r| + epsilon)); saturates toward 1 for
// equal counts, 0 when either side is empty.
double density_similarity(std::size_t count_sunny, std::size_t count_rainy, double epsilon);

// Bidirectional mean nearest-neighbor Euclidean distance. Both sets must be
// non-empty. Symmetric.
double chamfer_distance(std::span<const Vec3> a, std::span<const Vec3> b);

// 1 - tanh(chamfer_distance); in (0, 1].
double shape_similarity(std::span<const Vec3> a, std::span<const Vec3> b);

// Product of density and shape similarity; 0 when the rainy set is empty
// (nothing left to compare against).
double instance_similarity(const InstancePair& pair, double epsilon);

// Mean elementwise smooth-L1 with the unit kink.
double smooth_l1(std::span<const double> x, std::span<const double> y);

// Similarity-weighted instance feature loss, averaged over pairs.
double awid_loss(std::span<const InstancePair> pairs, double epsilon);

// Squared logit error averaged over all foreground positions, counting only
// positions where the teacher's sigmoid confidence reaches the threshold.
double prd_cls_loss(const PredictionSet& preds, double threshold);

// Mean smooth-L1 over the 7 box parameters, with the yaw residual wrapped
// to (-pi, pi].
double prd_reg_loss(const PredictionSet& preds);

// lambda1 * cls + lambda2 * reg.
double prd_loss(const PredictionSet& preds, const LossWeights& weights);

// Counts cloud points inside the yaw-rotated box, boundary inclusive,
// split as (rain-noise count, clear count). Every point must be labeled.
std::pair<std::size_t, std::size_t> points_in_box(const Box& box, const PointCloud& cloud);

// noise_count / (clear_count + epsilon).
double noise_ratio(std::size_t noise_count, std::size_t clear_count, double epsilon);

// Mean over detections of tanh(noise ratio) * confidence: confident boxes
// full of rain noise are penalized hardest.
double napc_loss(std::span<const DetBox> det_boxes, const PointCloud& cloud, double epsilon);

// sup_cls + sup_reg + eta1 * ins + eta2 * rsp + eta3 * napc. All inputs
// must be finite.
double total_loss(double sup_cls, double sup_reg, double ins, double rsp, double napc,
                  const LossWeights& weights);

}  // namespace rainsim
