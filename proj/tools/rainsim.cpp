#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "rainsim/errors.hpp"
#include "rainsim/json_io.hpp"
#include "rainsim/log.hpp"
#include "rainsim/pointcloud_io.hpp"
#include "rainsim/scene_transfer.hpp"
#include "rainsim/splash.hpp"
#include "rainsim/version.hpp"

namespace fs = std::filesystem;
using namespace rainsim;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitIoOrArgs = 2;

struct SimulateArgs {
  std::string input_dir;
  std::string output_dir;
  std::string lidar_path;
  std::string atmos_path;
  std::string splash_path;
  std::uint64_t seed = 0;
  bool seed_given = false;
  unsigned jobs = 0;
  bool force = false;
};

struct StatsArgs {
  std::string real_dir;
  std::string sim_dir;
  double bin_width = 10.0;
  std::string out_path;
};

struct DistillArgs {
  std::string pairs_path;
  std::string preds_path;
  std::string weights_path;
  std::string out_path;
};

struct EvalArgs {
  std::string pred_path;
  std::string gt_path;
  std::string iou_list = "0.3,0.5,0.7";
  std::string out_path;
};

bool is_cloud_file(const fs::path& path) {
  const std::string ext = path.extension().string();
  return ext == ".bin" || ext == ".bin5" || ext == ".csv";
}

std::vector<fs::path> list_frames(const fs::path& dir) {
  if (!fs::is_directory(dir)) {
    throw IoError("not a directory: " + dir.string());
  }
  std::vector<fs::path> frames;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && is_cloud_file(entry.path())) {
      frames.push_back(entry.path());
    }
  }
  std::sort(frames.begin(), frames.end(),
            [](const fs::path& a, const fs::path& b) { return a.filename() < b.filename(); });
  return frames;
}

std::vector<PointCloud> read_corpus(const fs::path& dir) {
  std::vector<PointCloud> corpus;
  for (const fs::path& frame : list_frames(dir)) {
    corpus.push_back(read_pointcloud(frame, format_from_extension(frame)));
  }
  return corpus;
}

void write_text_file(const std::string& text, const fs::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) {
    throw IoError("cannot open for writing: " + path.string());
  }
  out << text;
}

fs::path manifest_path_for(const fs::path& out_file) {
  fs::path p = out_file;
  p.replace_extension();
  p += ".manifest.json";
  return p;
}

std::vector<double> parse_threshold_list(const std::string& list) {
  std::vector<double> thresholds;
  std::size_t start = 0;
  while (start <= list.size()) {
    const std::size_t comma = list.find(',', start);
    const std::string item =
        list.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    if (!item.empty()) {
      try {
        thresholds.push_back(std::stod(item));
      } catch (const std::exception&) {
        throw std::invalid_argument("--iou: unparseable threshold '" + item + "'");
      }
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (thresholds.empty()) {
    throw std::invalid_argument("--iou: at least one threshold required");
  }
  return thresholds;
}

int run_simulate(const SimulateArgs& args) {
  const LidarConfig lidar = lidar_from_json(load_json_file(args.lidar_path));
  const AtmosphereParams atmos = atmosphere_from_json(load_json_file(args.atmos_path));
  SplashScene scene = splash_scene_from_json(load_json_file(args.splash_path));
  const std::uint64_t base_seed = args.seed_given ? args.seed : scene.config.seed;

  const auto frames = list_frames(args.input_dir);
  const fs::path out_dir(args.output_dir);
  fs::create_directories(out_dir);

  std::vector<fs::path> outputs;
  outputs.reserve(frames.size());
  std::set<fs::path> claimed;
  for (const fs::path& frame : frames) {
    fs::path out = out_dir / frame.filename();
    out.replace_extension(".bin5");
    if (!claimed.insert(out).second) {
      throw IoError("input frames " + frame.filename().string() +
                    " collide on output " + out.filename().string());
    }
    if (fs::exists(out) && !args.force) {
      throw IoError("refusing to overwrite " + out.string() + " (pass --force)");
    }
    outputs.push_back(out);
  }

  unsigned jobs = args.jobs != 0 ? args.jobs : std::thread::hardware_concurrency();
  if (jobs == 0) jobs = 1;
  jobs = std::min<unsigned>(jobs, frames.empty() ? 1 : static_cast<unsigned>(frames.size()));

  // Per-frame seeds are index-derived so any processing order (or worker
  // count) yields identical outputs.
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr first_error;
  std::atomic<bool> failed{false};

  auto worker = [&]() {
    while (!failed.load()) {
      const std::size_t i = next.fetch_add(1);
      if (i >= frames.size()) break;
      try {
        const std::uint64_t frame_seed = base_seed ^ static_cast<std::uint64_t>(i);
        SplashConfig cfg = scene.config;
        cfg.seed = frame_seed;
        const RainParticleSet particles = simulate_splash(scene.vehicles, cfg);
        const PointCloud cloud =
            read_pointcloud(frames[i], format_from_extension(frames[i]));
        const PointCloud rainy = simulate_rain(cloud, particles, atmos, lidar);
        write_pointcloud(rainy, outputs[i], CloudFormat::kBin5);
        log_debug("simulated " + frames[i].filename().string() + " -> " +
                  outputs[i].filename().string() + " (" + std::to_string(rainy.size()) + "/" +
                  std::to_string(cloud.size()) + " points)");
      } catch (...) {
        const std::scoped_lock lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        failed.store(true);
      }
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(jobs);
  for (unsigned w = 0; w < jobs; ++w) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);

  RunManifest manifest;
  manifest.tool_version = kVersion;
  manifest.subcommand = "simulate";
  manifest.seed = base_seed;
  manifest.input_path = args.input_dir;
  manifest.output_path = args.output_dir;
  manifest.config_paths = {{"lidar", args.lidar_path},
                           {"atmos", args.atmos_path},
                           {"splash", args.splash_path}};
  for (std::size_t i = 0; i < frames.size(); ++i) {
    manifest.frame_seeds.emplace_back(frames[i].filename().string(),
                                      base_seed ^ static_cast<std::uint64_t>(i));
  }
  save_json_file(manifest_to_json(manifest), out_dir / "manifest.json");

  log_info("simulate: " + std::to_string(frames.size()) + " frame(s) -> " + args.output_dir);
  return kExitOk;
}

int run_stats(const StatsArgs& args) {
  const auto real = read_corpus(args.real_dir);
  const auto sim = read_corpus(args.sim_dir);

  GapReport report;
  report.intensity_gap = intensity_gap(real, sim);
  report.points_gap = points_gap_by_range(real, sim, args.bin_width);

  const fs::path out(args.out_path);
  save_json_file(gap_report_to_json(report), out);
  fs::path csv = out;
  csv.replace_extension(".csv");
  write_text_file(gap_report_to_csv(report), csv);

  RunManifest manifest;
  manifest.tool_version = kVersion;
  manifest.subcommand = "stats";
  manifest.input_path = args.real_dir;
  manifest.output_path = args.out_path;
  manifest.config_paths = {{"real", args.real_dir}, {"sim", args.sim_dir}};
  save_json_file(manifest_to_json(manifest), manifest_path_for(out));
  return kExitOk;
}

int run_distill(const DistillArgs& args) {
  const LossWeights weights = loss_weights_from_json(load_json_file(args.weights_path));
  const DistillBatch batch =
      distill_batch_from_json(load_json_file(args.pairs_path), load_json_file(args.preds_path));

  LossReport report;
  report.ins = awid_loss(batch.pairs, weights.epsilon);
  report.rsp_cls = prd_cls_loss(batch.preds, weights.threshold);
  report.rsp_reg = prd_reg_loss(batch.preds);
  report.rsp = prd_loss(batch.preds, weights);
  report.napc =
      batch.has_cloud ? napc_loss(batch.preds.det_boxes, batch.cloud, weights.epsilon) : 0.0;
  report.total =
      total_loss(batch.sup_cls, batch.sup_reg, report.ins, report.rsp, report.napc, weights);

  const fs::path out(args.out_path);
  save_json_file(loss_report_to_json(report), out);

  RunManifest manifest;
  manifest.tool_version = kVersion;
  manifest.subcommand = "distill";
  manifest.output_path = args.out_path;
  manifest.config_paths = {{"pairs", args.pairs_path},
                           {"preds", args.preds_path},
                           {"weights", args.weights_path}};
  save_json_file(manifest_to_json(manifest), manifest_path_for(out));
  return kExitOk;
}

int run_eval(const EvalArgs& args) {
  const auto thresholds = parse_threshold_list(args.iou_list);
  const auto preds = det_boxes_from_json(load_json_file(args.pred_path));
  const auto gts = boxes_from_json(load_json_file(args.gt_path));

  const auto matches = precision_recall(preds, gts, thresholds);

  const fs::path out(args.out_path);
  save_json_file(detection_matches_to_json(matches), out);
  fs::path csv = out;
  csv.replace_extension(".csv");
  write_text_file(detection_matches_to_csv(matches), csv);

  RunManifest manifest;
  manifest.tool_version = kVersion;
  manifest.subcommand = "eval";
  manifest.output_path = args.out_path;
  manifest.config_paths = {{"pred", args.pred_path}, {"gt", args.gt_path}};
  save_json_file(manifest_to_json(manifest), manifest_path_for(out));
  return kExitOk;
}

}  // namespace

int run_app(int argc, char** argv) {
  CLI::App app{"Physically grounded rain simulation and distillation toolkit for LiDAR frames"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  SimulateArgs sim_args;
  auto* simulate = app.add_subcommand("simulate", "Convert clear frames into simulated rain");
  simulate->add_option("--input", sim_args.input_dir, "Directory of input frames")
      ->required()
      ->check(CLI::ExistingDirectory);
  simulate->add_option("--output", sim_args.output_dir, "Output directory")->required();
  simulate->add_option("--lidar", sim_args.lidar_path, "Sensor config JSON")
      ->required()
      ->check(CLI::ExistingFile);
  simulate->add_option("--atmos", sim_args.atmos_path, "Atmosphere params JSON")
      ->required()
      ->check(CLI::ExistingFile);
  simulate->add_option("--splash", sim_args.splash_path, "Splash config + vehicles JSON")
      ->required()
      ->check(CLI::ExistingFile);
  auto* seed_opt = simulate->add_option("--seed", sim_args.seed, "Base seed (XORed with frame index)");
  simulate->add_option("--jobs", sim_args.jobs, "Worker count (default: logical cores)");
  simulate->add_flag("--force", sim_args.force, "Overwrite existing outputs");

  StatsArgs stats_args;
  auto* stats = app.add_subcommand("stats", "Intensity/points gap between two corpora");
  stats->add_option("--real", stats_args.real_dir, "Reference corpus directory")
      ->required()
      ->check(CLI::ExistingDirectory);
  stats->add_option("--sim", stats_args.sim_dir, "Simulated corpus directory")
      ->required()
      ->check(CLI::ExistingDirectory);
  stats->add_option("--bin-width", stats_args.bin_width, "Range bin width in meters");
  stats->add_option("--out", stats_args.out_path, "Report JSON path")->required();

  DistillArgs distill_args;
  auto* distill = app.add_subcommand("distill", "Evaluate distillation loss kernels on a batch");
  distill->add_option("--pairs", distill_args.pairs_path, "Instance pair batch JSON")
      ->required()
      ->check(CLI::ExistingFile);
  distill->add_option("--preds", distill_args.preds_path, "Prediction set JSON")
      ->required()
      ->check(CLI::ExistingFile);
  distill->add_option("--weights", distill_args.weights_path, "Loss weights JSON")
      ->required()
      ->check(CLI::ExistingFile);
  distill->add_option("--out", distill_args.out_path, "Loss report JSON path")->required();

  EvalArgs eval_args;
  auto* eval = app.add_subcommand("eval", "Score detections against ground truth");
  eval->add_option("--pred", eval_args.pred_path, "Predicted boxes JSON")
      ->required()
      ->check(CLI::ExistingFile);
  eval->add_option("--gt", eval_args.gt_path, "Ground-truth boxes JSON")
      ->required()
      ->check(CLI::ExistingFile);
  eval->add_option("--iou", eval_args.iou_list, "Comma-separated IoU thresholds");
  eval->add_option("--out", eval_args.out_path, "Report JSON path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    std::cout << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    std::cout << app.version() << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help() << "\n";
    return kExitIoOrArgs;
  }

  try {
    sim_args.seed_given = seed_opt->count() > 0;
    if (simulate->parsed()) return run_simulate(sim_args);
    if (stats->parsed()) return run_stats(stats_args);
    if (distill->parsed()) return run_distill(distill_args);
    if (eval->parsed()) return run_eval(eval_args);
    std::cerr << app.help() << "\n";
    return kExitIoOrArgs;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIoOrArgs;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIoOrArgs;
  }
}

int main(int argc, char** argv) {
  try {
    return run_app(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIoOrArgs;
  } catch (...) {
    std::cerr << "error: unexpected failure\n";
    return kExitIoOrArgs;
  }
}
