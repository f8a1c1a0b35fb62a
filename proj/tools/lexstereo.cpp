// Batch stereo matching CLI; thin wrapper over the lexstereo C API.

#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "lexstereo/lexstereo.h"

namespace {

struct ConfigHandle {
  lexstereo_config* cfg = lexstereo_config_create();
  ~ConfigHandle() { lexstereo_config_destroy(cfg); }
};

struct ResultHandle {
  lexstereo_result* res = nullptr;
  ~ResultHandle() { lexstereo_result_destroy(res); }
};

int fail(lexstereo_status status) {
  std::fprintf(stderr, "lexstereo: %s\n", lexstereo_last_error());
  // I/O and configuration problems exit 2; internal failures exit 1.
  switch (status) {
    case LEXSTEREO_ERROR_IO:
    case LEXSTEREO_ERROR_PARSE:
    case LEXSTEREO_ERROR_INVALID_ARGUMENT:
      return 2;
    default:
      return 1;
  }
}

int set_or_fail(lexstereo_config* cfg, const char* key, const std::string& value) {
  const lexstereo_status s = lexstereo_config_set(cfg, key, value.c_str());
  return s == LEXSTEREO_OK ? 0 : fail(s);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stereo matching by local expansion moves over per-pixel disparity planes"};
  app.get_formatter()->column_width(26);

  std::string left, right, out_dir, gt, nonocc, config_path;
  double ndisp = 0;
  bool no_post = false, ransac = false;
  long long seed = -1;
  int workers = -1;

  app.add_option("--left", left, "Left input image (PNG)")->required();
  app.add_option("--right", right, "Right input image (PNG)")->required();
  app.add_option("--ndisp", ndisp, "Maximum disparity in pixels")->required();
  app.add_option("--out", out_dir, "Output directory")->required();
  app.add_option("--gt", gt, "Ground-truth disparity (PFM) for evaluation");
  app.add_option("--nonocc", nonocc, "Non-occluded evaluation mask (PNG)");
  app.add_option("--config", config_path, "Parameter file (key = value lines)");
  app.add_flag("--no-post", no_post, "Skip the post-processing stage");
  app.add_flag("--ransac", ransac, "Enable the RANSAC plane proposer");
  app.add_option("--seed", seed, "Random seed");
  app.add_option("--workers", workers, "Parallel lanes (default: hardware threads)");

  CLI11_PARSE(app, argc, argv);

  ConfigHandle config;
  if (!config.cfg) {
    std::fprintf(stderr, "lexstereo: out of memory\n");
    return 1;
  }

  if (!config_path.empty()) {
    const lexstereo_status s = lexstereo_config_load_file(config.cfg, config_path.c_str());
    if (s != LEXSTEREO_OK) return fail(s);
  }

  // Command-line flags override the parameter file.
  if (int rc = set_or_fail(config.cfg, "left", left)) return rc;
  if (int rc = set_or_fail(config.cfg, "right", right)) return rc;
  if (int rc = set_or_fail(config.cfg, "out", out_dir)) return rc;
  if (int rc = set_or_fail(config.cfg, "disp_max", std::to_string(ndisp))) return rc;
  if (!gt.empty()) {
    if (int rc = set_or_fail(config.cfg, "gt", gt)) return rc;
  }
  if (!nonocc.empty()) {
    if (int rc = set_or_fail(config.cfg, "nonocc", nonocc)) return rc;
  }
  if (no_post) {
    if (int rc = set_or_fail(config.cfg, "post_process", "0")) return rc;
  }
  if (ransac) {
    if (int rc = set_or_fail(config.cfg, "ransac", "1")) return rc;
  }
  if (seed >= 0) {
    if (int rc = set_or_fail(config.cfg, "seed", std::to_string(seed))) return rc;
  }
  if (workers >= 0) {
    if (int rc = set_or_fail(config.cfg, "workers", std::to_string(workers))) return rc;
  }

  ResultHandle result;
  const lexstereo_status s = lexstereo_run(config.cfg, &result.res);
  if (s != LEXSTEREO_OK) return fail(s);

  double energy_left = 0, energy_right = 0;
  lexstereo_result_energy(result.res, LEXSTEREO_LEFT, &energy_left);
  lexstereo_result_energy(result.res, LEXSTEREO_RIGHT, &energy_right);
  std::printf("energy_left=%.6g\nenergy_right=%.6g\n", energy_left, energy_right);

  for (const char* name : {"bad05_nonocc", "bad10_nonocc", "bad20_nonocc", "bad40_nonocc",
                           "bad20_all", "seconds_total"}) {
    double value = 0;
    if (lexstereo_result_metric(result.res, name, &value) == LEXSTEREO_OK) {
      std::printf("%s=%.6g\n", name, value);
    }
  }
  return 0;
}
