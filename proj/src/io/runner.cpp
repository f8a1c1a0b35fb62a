#include "io/runner.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <optional>

#include "io/metrics.hpp"
#include "io/pfm.hpp"
#include "io/png_io.hpp"
#include "postproc/postproc.hpp"

namespace lexstereo {

namespace {

struct GroundTruth {
  Array2D<float> disparity;
  Array2D<uint8_t> nonocc;
};

std::optional<GroundTruth> load_ground_truth(const RunConfig& cfg, int w, int h) {
  if (cfg.gt_path.empty()) return std::nullopt;
  GroundTruth gt;
  gt.disparity = read_pfm(cfg.gt_path);
  if (gt.disparity.width() != w || gt.disparity.height() != h) {
    throw ConfigError("ground truth dimensions do not match the input pair");
  }
  if (!cfg.nonocc_path.empty()) {
    const Rgb8Image mask = read_png(cfg.nonocc_path);
    if (mask.width != w || mask.height != h) {
      throw ConfigError("nonocc mask dimensions do not match the input pair");
    }
    gt.nonocc = Array2D<uint8_t>(w, h);
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) gt.nonocc.at(x, y) = mask.px(x, y)[0] > 128 ? 1 : 0;
  } else {
    gt.nonocc = Array2D<uint8_t>(w, h, 1);
  }
  return gt;
}

void optimize_view(const RunConfig& cfg, const std::shared_ptr<const StereoPair>& pair,
                   View view, const GroundTruth* gt, LabelField& out_field,
                   double& out_energy, ViewTrace& out_trace) {
  EnergyModel model(pair, cfg.match, cfg.smooth, view);
  if (!cfg.costvol_left_path.empty()) {
    const std::string& path =
        view == View::left ? cfg.costvol_left_path : cfg.costvol_right_path;
    model.set_raw_cost(std::make_shared<VolumeRawCost>(CostVolume::load(path)));
  }

  GroupObserver observer;
  if (gt && view == View::left) {
    observer = [&](const TraceRecord& rec, const LabelField& f) {
      out_trace.records.push_back(rec);
      out_trace.bad20.push_back(bad_rate(f.disparity_map(), gt->disparity, gt->nonocc, 2.0));
    };
  } else {
    observer = [&](const TraceRecord& rec, const LabelField&) {
      out_trace.records.push_back(rec);
    };
  }

  OptimizeResult result = optimize(model, cfg.optimizer_config(pair->width), observer);
  out_field = std::move(result.field);
  out_energy = result.trace.empty() ? model.total_energy(out_field) : result.trace.back().energy;
}

void write_trace_csv(const RunResult& res, const std::string& path, bool have_gt) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open trace file " + path);
  out << "outer_iter,level,group,seconds,energy_left,energy_right,bad20_nonocc\n";
  const size_t n = res.trace_left.records.size();
  for (size_t i = 0; i < n; ++i) {
    const TraceRecord& l = res.trace_left.records[i];
    const bool have_right = i < res.trace_right.records.size();
    const double seconds = l.seconds + (have_right ? res.trace_right.records[i].seconds : 0.0);
    out << l.outer << ',' << l.level << ',' << l.group << ',' << seconds << ',' << l.energy
        << ',';
    if (have_right) out << res.trace_right.records[i].energy;
    out << ',';
    if (have_gt && i < res.trace_left.bad20.size()) out << res.trace_left.bad20[i];
    out << '\n';
  }
}

}  // namespace

RunResult run_on_pair(const RunConfig& cfg, StereoPair pair_in) {
  const auto t0 = std::chrono::steady_clock::now();
  auto pair = std::make_shared<const StereoPair>(std::move(pair_in));
  const int w = pair->width, h = pair->height;

  const std::optional<GroundTruth> gt = load_ground_truth(cfg, w, h);

  RunResult res;
  res.width = w;
  res.height = h;

  optimize_view(cfg, pair, View::left, gt ? &*gt : nullptr, res.left, res.energy_left,
                res.trace_left);
  optimize_view(cfg, pair, View::right, gt ? &*gt : nullptr, res.right, res.energy_right,
                res.trace_right);

  if (cfg.post_process) {
    PostprocParams pp = cfg.postproc;
    pp.workers = cfg.effective_workers();
    postprocess_pair(res.left, res.right, *pair, pp);
  }

  if (gt) {
    const Array2D<float> est = res.left.disparity_map();
    for (double thr : {0.5, 1.0, 2.0, 4.0}) {
      char key[32];
      std::snprintf(key, sizeof(key), "bad%02d_nonocc", static_cast<int>(thr * 10));
      res.metrics[key] = bad_rate(est, gt->disparity, gt->nonocc, thr);
    }
    const Array2D<uint8_t> all_mask(w, h, 1);
    res.metrics["bad20_all"] = bad_rate(est, gt->disparity, all_mask, 2.0);
  }
  res.metrics["energy_left"] = res.energy_left;
  res.metrics["energy_right"] = res.energy_right;

  res.seconds_total =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  res.metrics["seconds_total"] = res.seconds_total;
  return res;
}

RunResult run(const RunConfig& cfg) {
  cfg.validate();
  namespace fs = std::filesystem;

  if (!fs::exists(cfg.left_path)) throw ConfigError("left image not found: " + cfg.left_path);
  if (!fs::exists(cfg.right_path)) {
    throw ConfigError("right image not found: " + cfg.right_path);
  }
  std::error_code ec;
  fs::create_directories(cfg.out_dir, ec);
  if (ec) throw ConfigError("cannot create output directory " + cfg.out_dir);

  StereoPair pair = StereoPair::create(to_color_image(read_png(cfg.left_path)),
                                       to_color_image(read_png(cfg.right_path)), cfg.disp_max);

  RunResult res = run_on_pair(cfg, std::move(pair));

  const fs::path out(cfg.out_dir);
  const Array2D<float> disp_left = res.left.disparity_map();
  const Array2D<float> disp_right = res.right.disparity_map();
  write_pfm(disp_left, (out / "disp_left.pfm").string());
  write_pfm(disp_right, (out / "disp_right.pfm").string());
  write_png(colorize(disp_left, cfg.disp_max), (out / "disp_left.png").string());
  write_png(colorize(disp_right, cfg.disp_max), (out / "disp_right.png").string());
  write_trace_csv(res, (out / "trace.csv").string(), !cfg.gt_path.empty());

  if (!cfg.gt_path.empty()) {
    std::ofstream metrics((out / "metrics.txt").string());
    for (const auto& [key, value] : res.metrics) metrics << key << "=" << value << "\n";
  }
  return res;
}

}  // namespace lexstereo
