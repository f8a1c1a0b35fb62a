#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "core/params.hpp"
#include "localexp/optimizer.hpp"
#include "postproc/postproc.hpp"

namespace lexstereo {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Grid cell size, absolute pixels or percent of image width ("9%").
struct CellSizeSpec {
  double value = 0;
  bool percent = false;

  int resolve(int image_width) const;
};

// Everything one batch run needs. Defaults follow the reference parameter
// set: {e, tau_col, tau_grad, alpha} = {1e-4, 10, 2, 0.9}, 41x41 matching
// windows, {lambda, tau_dis, eps, gamma} = {1, 1, 0.01, 10} with 8
// neighbors, cells 5/15/25 px, schedules {1,7} then {2,0}, ten outer
// iterations.
struct RunConfig {
  std::string left_path;
  std::string right_path;
  std::string out_dir;
  std::string gt_path;
  std::string nonocc_path;
  std::string costvol_left_path;
  std::string costvol_right_path;

  double disp_max = 0;  // required

  MatchParams match;
  SmoothParams smooth;

  std::vector<CellSizeSpec> cell_sizes{{5, false}, {15, false}, {25, false}};
  std::vector<int> k_prop{1, 2, 2};
  std::vector<int> k_rans{0, 0, 0};
  std::vector<int> k_rand{7, 0, 0};
  int outer_iterations = 10;
  bool early_stop = false;
  uint64_t seed = 0;
  int workers = 0;  // 0 = hardware concurrency

  bool use_ransac = false;
  RansacParams ransac;

  bool post_process = true;
  PostprocParams postproc;

  // Builds the optimizer config for a given image width (resolves percent
  // cell sizes; applies the RANSAC switch).
  OptimizerConfig optimizer_config(int image_width) const;

  int effective_workers() const;

  void validate() const;

  // One "key = value" assignment; throws ConfigError on unknown keys or
  // malformed values.
  void set(const std::string& key, const std::string& value);

  std::string get(const std::string& key) const;

  // Flat "key = value" file with '#' comments.
  void load_file(const std::string& path);

  static const std::vector<std::string>& known_keys();
};

}  // namespace lexstereo
