#include "rainsim/json_io.hpp"

#include <fstream>
#include <sstream>

#include "rainsim/errors.hpp"

namespace rainsim {
namespace {

using nlohmann::json;

Vec3 vec3_from_json(const json& j) {
  if (!j.is_array() || j.size() != 3) {
    throw IoError("expected a 3-element array for a vector");
  }
  return Vec3{j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

json vec3_to_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

Box box_from_json(const json& j) {
  if (!j.is_array() || j.size() != 7) {
    throw IoError("expected a 7-element array [x,y,z,l,w,h,yaw] for a box");
  }
  return Box{j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), j[3].get<double>(),
             j[4].get<double>(), j[5].get<double>(), j[6].get<double>()};
}

json box_to_json(const Box& b) {
  return json::array({b.x, b.y, b.z, b.length, b.width, b.height, b.yaw});
}

std::vector<Vec3> points_from_json(const json& j) {
  std::vector<Vec3> points;
  points.reserve(j.size());
  for (const auto& item : j) {
    points.push_back(vec3_from_json(item));
  }
  return points;
}

json points_to_json(std::span<const Vec3> points) {
  json arr = json::array();
  for (const Vec3& p : points) arr.push_back(vec3_to_json(p));
  return arr;
}

PointCloud cloud_from_inline_json(const json& j) {
  PointCloud cloud;
  cloud.points.reserve(j.size());
  std::size_t record = 0;
  for (const auto& item : j) {
    if (!item.is_array() || item.size() != 5) {
      throw IoError("inline cloud: expected [x,y,z,intensity,label] at record " +
                    std::to_string(record));
    }
    Point p;
    p.x = item[0].get<float>();
    p.y = item[1].get<float>();
    p.z = item[2].get<float>();
    p.intensity = item[3].get<float>();
    const double label = item[4].get<double>();
    if (label == 0.0) {
      p.noise_label = NoiseLabel::kClear;
    } else if (label == 1.0) {
      p.noise_label = NoiseLabel::kRainNoise;
    } else {
      throw IoError("inline cloud: label must be 0 or 1 at record " + std::to_string(record));
    }
    cloud.points.push_back(p);
    ++record;
  }
  return cloud;
}

template <typename T>
T require(const json& j, const char* key) {
  if (!j.contains(key)) {
    throw IoError(std::string("missing required key '") + key + "'");
  }
  return j.at(key).get<T>();
}

}  // namespace

json load_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open for reading: " + path.string());
  }
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

void save_json_file(const json& j, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) {
    throw IoError("cannot open for writing: " + path.string());
  }
  out << j.dump(2) << "\n";
  if (!out) {
    throw IoError("write failed: " + path.string());
  }
}

AtmosphereParams atmosphere_from_json(const json& j) {
  AtmosphereParams atmos;
  atmos.alpha = require<double>(j, "alpha");
  atmos.beta = require<double>(j, "beta");
  atmos.beta0 = require<double>(j, "beta0");
  atmos.tau_h = require<double>(j, "tau_h");
  atmos.r1 = require<double>(j, "r1");
  atmos.r2 = require<double>(j, "r2");
  if (j.contains("c")) atmos.c = j.at("c").get<double>();
  atmos.validate();
  return atmos;
}

json atmosphere_to_json(const AtmosphereParams& atmos) {
  return json{{"alpha", atmos.alpha}, {"beta", atmos.beta}, {"beta0", atmos.beta0},
              {"tau_h", atmos.tau_h}, {"r1", atmos.r1},     {"r2", atmos.r2},
              {"c", atmos.c}};
}

LidarConfig lidar_from_json(const json& j) {
  LidarConfig lidar;
  lidar.origin = vec3_from_json(j.value("origin", json::array({0.0, 0.0, 0.0})));
  lidar.ring_inclinations = require<std::vector<double>>(j, "ring_inclinations");
  lidar.azimuth_resolution = require<double>(j, "azimuth_resolution");
  lidar.max_range = require<double>(j, "max_range");
  if (j.contains("min_power_override") && !j.at("min_power_override").is_null()) {
    lidar.min_power_override = j.at("min_power_override").get<double>();
  }
  lidar.validate();
  return lidar;
}

json lidar_to_json(const LidarConfig& lidar) {
  json j{{"origin", vec3_to_json(lidar.origin)},
         {"ring_inclinations", lidar.ring_inclinations},
         {"azimuth_resolution", lidar.azimuth_resolution},
         {"max_range", lidar.max_range}};
  j["min_power_override"] =
      lidar.min_power_override ? json(*lidar.min_power_override) : json(nullptr);
  return j;
}

SplashScene splash_scene_from_json(const json& j) {
  SplashScene scene;
  SplashConfig& cfg = scene.config;
  cfg.emission_rate = require<double>(j, "emission_rate");
  const json& gains = j.at("mechanism_gains");
  cfg.mechanism_gains = {require<double>(gains, "BW"), require<double>(gains, "SW"),
                         require<double>(gains, "TP")};
  cfg.gravity = j.value("gravity", cfg.gravity);
  cfg.drag_coefficient = require<double>(j, "drag_coefficient");
  cfg.wind_amplitude = require<double>(j, "wind_amplitude");
  cfg.wind_frequency = require<double>(j, "wind_frequency");
  cfg.duration = require<double>(j, "duration");
  cfg.dt = require<double>(j, "dt");
  cfg.seed = j.value("seed", std::uint64_t{0});
  cfg.validate();

  if (j.contains("vehicles")) {
    for (const auto& vj : j.at("vehicles")) {
      VehicleState vehicle;
      vehicle.position = vec3_from_json(vj.at("position"));
      vehicle.heading = require<double>(vj, "heading");
      vehicle.speed = require<double>(vj, "speed");
      vehicle.wheelbase = vj.value("wheelbase", vehicle.wheelbase);
      vehicle.track_width = vj.value("track_width", vehicle.track_width);
      vehicle.validate();
      scene.vehicles.push_back(vehicle);
    }
  }
  return scene;
}

json splash_scene_to_json(const SplashScene& scene) {
  const SplashConfig& cfg = scene.config;
  json j{{"emission_rate", cfg.emission_rate},
         {"mechanism_gains",
          {{"BW", cfg.mechanism_gains[0]},
           {"SW", cfg.mechanism_gains[1]},
           {"TP", cfg.mechanism_gains[2]}}},
         {"gravity", cfg.gravity},
         {"drag_coefficient", cfg.drag_coefficient},
         {"wind_amplitude", cfg.wind_amplitude},
         {"wind_frequency", cfg.wind_frequency},
         {"duration", cfg.duration},
         {"dt", cfg.dt},
         {"seed", cfg.seed}};
  json vehicles = json::array();
  for (const VehicleState& v : scene.vehicles) {
    vehicles.push_back(json{{"position", vec3_to_json(v.position)},
                            {"heading", v.heading},
                            {"speed", v.speed},
                            {"wheelbase", v.wheelbase},
                            {"track_width", v.track_width}});
  }
  j["vehicles"] = vehicles;
  return j;
}

LossWeights loss_weights_from_json(const json& j) {
  LossWeights weights;
  weights.lambda1 = j.value("lambda1", weights.lambda1);
  weights.lambda2 = j.value("lambda2", weights.lambda2);
  weights.threshold = j.value("threshold", weights.threshold);
  weights.eta1 = j.value("eta1", weights.eta1);
  weights.eta2 = j.value("eta2", weights.eta2);
  weights.eta3 = j.value("eta3", weights.eta3);
  weights.epsilon = j.value("epsilon", weights.epsilon);
  weights.validate();
  return weights;
}

json loss_weights_to_json(const LossWeights& weights) {
  return json{{"lambda1", weights.lambda1}, {"lambda2", weights.lambda2},
              {"threshold", weights.threshold}, {"eta1", weights.eta1},
              {"eta2", weights.eta2},       {"eta3", weights.eta3},
              {"epsilon", weights.epsilon}};
}

std::vector<InstancePair> instance_pairs_from_json(const json& j) {
  const json& arr = j.contains("pairs") ? j.at("pairs") : j;
  if (!arr.is_array()) {
    throw IoError("instance pairs: expected an array or an object with a 'pairs' array");
  }
  std::vector<InstancePair> pairs;
  pairs.reserve(arr.size());
  for (const auto& pj : arr) {
    InstancePair pair;
    pair.box_id = pj.value("box_id", std::string{});
    pair.pc_sunny = points_from_json(pj.at("pc_sunny"));
    pair.pc_rainy = points_from_json(pj.at("pc_rainy"));
    pair.feat_sunny = require<std::vector<double>>(pj, "feat_sunny");
    pair.feat_rainy = require<std::vector<double>>(pj, "feat_rainy");
    pairs.push_back(std::move(pair));
  }
  return pairs;
}

json instance_pairs_to_json(std::span<const InstancePair> pairs) {
  json arr = json::array();
  for (const InstancePair& pair : pairs) {
    arr.push_back(json{{"box_id", pair.box_id},
                       {"pc_sunny", points_to_json(pair.pc_sunny)},
                       {"pc_rainy", points_to_json(pair.pc_rainy)},
                       {"feat_sunny", pair.feat_sunny},
                       {"feat_rainy", pair.feat_rainy}});
  }
  return json{{"pairs", arr}};
}

DistillBatch distill_batch_from_json(const json& pairs_json, const json& preds_json) {
  DistillBatch batch;
  batch.pairs = instance_pairs_from_json(pairs_json);

  batch.preds.cls_teacher = preds_json.value("cls_teacher", std::vector<double>{});
  batch.preds.cls_student = preds_json.value("cls_student", std::vector<double>{});
  if (preds_json.contains("box_teacher")) {
    for (const auto& bj : preds_json.at("box_teacher")) {
      batch.preds.box_teacher.push_back(box_from_json(bj));
    }
  }
  if (preds_json.contains("box_student")) {
    for (const auto& bj : preds_json.at("box_student")) {
      batch.preds.box_student.push_back(box_from_json(bj));
    }
  }
  if (preds_json.contains("det_boxes")) {
    for (const auto& dj : preds_json.at("det_boxes")) {
      batch.preds.det_boxes.push_back(
          DetBox{box_from_json(dj.at("box")), require<double>(dj, "confidence")});
    }
  }
  if (preds_json.contains("cloud")) {
    batch.cloud = cloud_from_inline_json(preds_json.at("cloud"));
    batch.has_cloud = true;
  }
  batch.sup_cls = preds_json.value("sup_cls", 0.0);
  batch.sup_reg = preds_json.value("sup_reg", 0.0);
  return batch;
}

json prediction_set_to_json(const PredictionSet& preds, const PointCloud* cloud, double sup_cls,
                            double sup_reg) {
  json teacher_boxes = json::array();
  for (const Box& box : preds.box_teacher) teacher_boxes.push_back(box_to_json(box));
  json student_boxes = json::array();
  for (const Box& box : preds.box_student) student_boxes.push_back(box_to_json(box));
  json detections = json::array();
  for (const DetBox& det : preds.det_boxes) {
    detections.push_back(json{{"box", box_to_json(det.box)}, {"confidence", det.confidence}});
  }
  json j{{"cls_teacher", preds.cls_teacher}, {"cls_student", preds.cls_student},
         {"box_teacher", teacher_boxes},     {"box_student", student_boxes},
         {"det_boxes", detections},          {"sup_cls", sup_cls},
         {"sup_reg", sup_reg}};
  if (cloud != nullptr) {
    json rows = json::array();
    for (const Point& p : cloud->points) {
      if (p.noise_label == NoiseLabel::kUnlabeled) {
        throw ValidationError("prediction set cloud must be fully labeled");
      }
      rows.push_back(json::array({p.x, p.y, p.z, p.intensity,
                                  p.noise_label == NoiseLabel::kRainNoise ? 1.0 : 0.0}));
    }
    j["cloud"] = rows;
  }
  return j;
}

json loss_report_to_json(const LossReport& report) {
  return json{{"ins", report.ins},   {"rsp_cls", report.rsp_cls}, {"rsp_reg", report.rsp_reg},
              {"rsp", report.rsp},   {"napc", report.napc},       {"total", report.total}};
}

json gap_report_to_json(const GapReport& report) {
  auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
  json bins = json::array();
  for (const RangeBinGap& bin : report.points_gap) {
    bins.push_back(json{{"range_lo", bin.range_lo}, {"range_hi", bin.range_hi}, {"gap", bin.gap}});
  }
  return json{{"intensity_gap",
               {{"noise", opt(report.intensity_gap.noise)},
                {"clear", opt(report.intensity_gap.clear)},
                {"all", opt(report.intensity_gap.all)}}},
              {"points_gap", bins}};
}

std::string gap_report_to_csv(const GapReport& report) {
  std::ostringstream out;
  out << "metric,category,range_lo,range_hi,value\n";
  auto row = [&](const char* category, const std::optional<double>& v) {
    if (!v) return;
    out << "intensity_gap," << category << ",,," << *v << "\n";
  };
  row("noise", report.intensity_gap.noise);
  row("clear", report.intensity_gap.clear);
  row("all", report.intensity_gap.all);
  for (const RangeBinGap& bin : report.points_gap) {
    out << "points_gap,," << bin.range_lo << "," << bin.range_hi << "," << bin.gap << "\n";
  }
  return out.str();
}

std::vector<DetBox> det_boxes_from_json(const json& j) {
  const json& arr = j.contains("boxes") ? j.at("boxes") : j;
  std::vector<DetBox> boxes;
  for (const auto& dj : arr) {
    if (dj.is_array()) {
      // [x,y,z,l,w,h,yaw,confidence]
      if (dj.size() != 8) {
        throw IoError("prediction boxes: expected 8-element rows or {box, confidence} objects");
      }
      Box box{dj[0].get<double>(), dj[1].get<double>(), dj[2].get<double>(), dj[3].get<double>(),
              dj[4].get<double>(), dj[5].get<double>(), dj[6].get<double>()};
      boxes.push_back(DetBox{box, dj[7].get<double>()});
    } else {
      boxes.push_back(DetBox{box_from_json(dj.at("box")), require<double>(dj, "confidence")});
    }
  }
  return boxes;
}

json det_boxes_to_json(std::span<const DetBox> boxes) {
  json arr = json::array();
  for (const DetBox& det : boxes) {
    arr.push_back(json{{"box", box_to_json(det.box)}, {"confidence", det.confidence}});
  }
  return json{{"boxes", arr}};
}

std::vector<Box> boxes_from_json(const json& j) {
  const json& arr = j.contains("boxes") ? j.at("boxes") : j;
  std::vector<Box> boxes;
  for (const auto& bj : arr) {
    boxes.push_back(box_from_json(bj));
  }
  return boxes;
}

json boxes_to_json(std::span<const Box> boxes) {
  json arr = json::array();
  for (const Box& box : boxes) {
    arr.push_back(box_to_json(box));
  }
  return json{{"boxes", arr}};
}

json detection_matches_to_json(std::span<const DetectionMatch> matches) {
  json arr = json::array();
  for (const DetectionMatch& m : matches) {
    arr.push_back(json{{"iou_threshold", m.iou_threshold},
                       {"tp", m.tp},
                       {"fp", m.fp},
                       {"fn", m.fn},
                       {"precision", m.precision},
                       {"recall", m.recall}});
  }
  return json{{"matches", arr}};
}

std::string detection_matches_to_csv(std::span<const DetectionMatch> matches) {
  std::ostringstream out;
  out << "iou_threshold,tp,fp,fn,precision,recall\n";
  for (const DetectionMatch& m : matches) {
    out << m.iou_threshold << "," << m.tp << "," << m.fp << "," << m.fn << "," << m.precision
        << "," << m.recall << "\n";
  }
  return out.str();
}

RunManifest manifest_from_json(const json& j) {
  RunManifest manifest;
  manifest.tool_version = require<std::string>(j, "tool_version");
  manifest.subcommand = require<std::string>(j, "subcommand");
  manifest.seed = j.value("seed", std::uint64_t{0});
  manifest.input_path = j.value("input", std::string{});
  manifest.output_path = j.value("output", std::string{});
  if (j.contains("configs")) {
    for (const auto& [key, value] : j.at("configs").items()) {
      manifest.config_paths[key] = value.get<std::string>();
    }
  }
  if (j.contains("frame_seeds")) {
    for (const auto& fj : j.at("frame_seeds")) {
      manifest.frame_seeds.emplace_back(require<std::string>(fj, "frame"),
                                        require<std::uint64_t>(fj, "seed"));
    }
  }
  return manifest;
}

json manifest_to_json(const RunManifest& manifest) {
  json frames = json::array();
  for (const auto& [frame, seed] : manifest.frame_seeds) {
    frames.push_back(json{{"frame", frame}, {"seed", seed}});
  }
  return json{{"tool_version", manifest.tool_version},
              {"subcommand", manifest.subcommand},
              {"seed", manifest.seed},
              {"input", manifest.input_path},
              {"output", manifest.output_path},
              {"configs", manifest.config_paths},
              {"frame_seeds", frames}};
}

}  // namespace rainsim
