#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "rainsim/analysis.hpp"
#include "rainsim/atmosphere.hpp"
#include "rainsim/distill.hpp"
#include "rainsim/lidar.hpp"
#include "rainsim/splash.hpp"

namespace rainsim {

// Splash configuration file: the emitter/integrator knobs plus the vehicles
// that populate the scene.
struct SplashScene {
  SplashConfig config;
  std::vector<VehicleState> vehicles;
};

// Inputs for the distillation kernels as carried by the predictions file.
// The labeled cloud and supervision terms are optional; without a cloud the
// noise-correction term is zero.
struct DistillBatch {
  std::vector<InstancePair> pairs;
  PredictionSet preds;
  PointCloud cloud;
  bool has_cloud = false;
  double sup_cls = 0.0;
  double sup_reg = 0.0;
};

// Everything needed to reproduce one CLI run.
struct RunManifest {
  std::string tool_version;
  std::string subcommand;
  std::uint64_t seed = 0;
  std::string input_path;
  std::string output_path;
  std::map<std::string, std::string> config_paths;
  // frame file name -> derived seed (base seed XOR sorted frame index)
  std::vector<std::pair<std::string, std::uint64_t>> frame_seeds;
};

nlohmann::json load_json_file(const std::filesystem::path& path);
void save_json_file(const nlohmann::json& j, const std::filesystem::path& path);

AtmosphereParams atmosphere_from_json(const nlohmann::json& j);
nlohmann::json atmosphere_to_json(const AtmosphereParams& atmos);

LidarConfig lidar_from_json(const nlohmann::json& j);
nlohmann::json lidar_to_json(const LidarConfig& lidar);

SplashScene splash_scene_from_json(const nlohmann::json& j);
nlohmann::json splash_scene_to_json(const SplashScene& scene);

LossWeights loss_weights_from_json(const nlohmann::json& j);
nlohmann::json loss_weights_to_json(const LossWeights& weights);

std::vector<InstancePair> instance_pairs_from_json(const nlohmann::json& j);
nlohmann::json instance_pairs_to_json(std::span<const InstancePair> pairs);

DistillBatch distill_batch_from_json(const nlohmann::json& pairs_json,
                                     const nlohmann::json& preds_json);
// Serializes preds/cloud/supervision terms in the layout
// distill_batch_from_json reads.
nlohmann::json prediction_set_to_json(const PredictionSet& preds, const PointCloud* cloud,
                                      double sup_cls, double sup_reg);

nlohmann::json loss_report_to_json(const LossReport& report);

nlohmann::json gap_report_to_json(const GapReport& report);
std::string gap_report_to_csv(const GapReport& report);

std::vector<DetBox> det_boxes_from_json(const nlohmann::json& j);
nlohmann::json det_boxes_to_json(std::span<const DetBox> boxes);
std::vector<Box> boxes_from_json(const nlohmann::json& j);
nlohmann::json boxes_to_json(std::span<const Box> boxes);
nlohmann::json detection_matches_to_json(std::span<const DetectionMatch> matches);
std::string detection_matches_to_csv(std::span<const DetectionMatch> matches);

RunManifest manifest_from_json(const nlohmann::json& j);
nlohmann::json manifest_to_json(const RunManifest& manifest);

}  // namespace rainsim
