#include "io/run_config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

namespace lexstereo {

int CellSizeSpec::resolve(int image_width) const {
  const double px = percent ? value * image_width / 100.0 : value;
  return std::max(1, static_cast<int>(std::lround(px)));
}

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) parts.push_back(item);
  }
  return parts;
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing characters");
    return d;
  } catch (const std::exception&) {
    throw ConfigError("config: bad numeric value for '" + key + "': " + v);
  }
}

int parse_int(const std::string& key, const std::string& v) {
  const double d = parse_double(key, v);
  if (d != std::floor(d)) throw ConfigError("config: '" + key + "' must be an integer");
  return static_cast<int>(d);
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "1" || v == "true" || v == "on" || v == "yes") return true;
  if (v == "0" || v == "false" || v == "off" || v == "no") return false;
  throw ConfigError("config: bad boolean value for '" + key + "': " + v);
}

std::vector<int> parse_int_list(const std::string& key, const std::string& v) {
  std::vector<int> out;
  for (const std::string& item : split_list(v)) out.push_back(parse_int(key, item));
  if (out.empty()) throw ConfigError("config: empty list for '" + key + "'");
  return out;
}

std::vector<CellSizeSpec> parse_cells(const std::string& key, const std::string& v) {
  std::vector<CellSizeSpec> out;
  for (std::string item : split_list(v)) {
    CellSizeSpec spec;
    if (!item.empty() && item.back() == '%') {
      spec.percent = true;
      item.pop_back();
    }
    spec.value = parse_double(key, item);
    if (spec.value <= 0) throw ConfigError("config: cell sizes must be positive");
    out.push_back(spec);
  }
  if (out.empty()) throw ConfigError("config: empty list for '" + key + "'");
  return out;
}

std::string join_ints(const std::vector<int>& v) {
  std::string s;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(v[i]);
  }
  return s;
}

std::string format_num(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

const std::vector<std::string>& RunConfig::known_keys() {
  static const std::vector<std::string> keys = {
      "left", "right", "out", "gt", "nonocc", "costvol_left", "costvol_right",
      "disp_max", "e", "tau_col", "tau_grad", "alpha", "window_radius",
      "lambda", "tau_dis", "eps", "gamma", "neighborhood",
      "cell_sizes", "k_prop", "k_rans", "k_rand", "outer_iterations", "early_stop",
      "seed", "workers", "ransac", "ransac_inlier_threshold", "ransac_hypotheses",
      "post_process", "lr_threshold", "median_radius", "median_gamma",
  };
  return keys;
}

void RunConfig::set(const std::string& raw_key, const std::string& raw_value) {
  const std::string key = trim(raw_key);
  const std::string value = trim(raw_value);

  if (key == "left") left_path = value;
  else if (key == "right") right_path = value;
  else if (key == "out") out_dir = value;
  else if (key == "gt") gt_path = value;
  else if (key == "nonocc") nonocc_path = value;
  else if (key == "costvol_left") costvol_left_path = value;
  else if (key == "costvol_right") costvol_right_path = value;
  else if (key == "disp_max") disp_max = parse_double(key, value);
  else if (key == "e") match.e = parse_double(key, value);
  else if (key == "tau_col") match.tau_col = parse_double(key, value);
  else if (key == "tau_grad") match.tau_grad = parse_double(key, value);
  else if (key == "alpha") match.alpha_blend = parse_double(key, value);
  else if (key == "window_radius") {
    match.window_radius = parse_int(key, value);
    match.regression_radius = match.window_radius / 2;
  } else if (key == "lambda") smooth.lambda = parse_double(key, value);
  else if (key == "tau_dis") smooth.tau_dis = parse_double(key, value);
  else if (key == "eps") smooth.eps = parse_double(key, value);
  else if (key == "gamma") smooth.gamma = parse_double(key, value);
  else if (key == "neighborhood") smooth.neighborhood = parse_int(key, value);
  else if (key == "cell_sizes") cell_sizes = parse_cells(key, value);
  else if (key == "k_prop") k_prop = parse_int_list(key, value);
  else if (key == "k_rans") k_rans = parse_int_list(key, value);
  else if (key == "k_rand") k_rand = parse_int_list(key, value);
  else if (key == "outer_iterations") outer_iterations = parse_int(key, value);
  else if (key == "early_stop") early_stop = parse_bool(key, value);
  else if (key == "seed") seed = static_cast<uint64_t>(parse_double(key, value));
  else if (key == "workers") workers = parse_int(key, value);
  else if (key == "ransac") use_ransac = parse_bool(key, value);
  else if (key == "ransac_inlier_threshold") ransac.inlier_threshold = parse_double(key, value);
  else if (key == "ransac_hypotheses") ransac.hypotheses = parse_int(key, value);
  else if (key == "post_process") post_process = parse_bool(key, value);
  else if (key == "lr_threshold") postproc.lr_threshold = parse_double(key, value);
  else if (key == "median_radius") postproc.median_radius = parse_int(key, value);
  else if (key == "median_gamma") postproc.median_gamma = parse_double(key, value);
  else throw ConfigError("config: unknown key '" + key + "'");
}

std::string RunConfig::get(const std::string& key) const {
  if (key == "left") return left_path;
  if (key == "right") return right_path;
  if (key == "out") return out_dir;
  if (key == "gt") return gt_path;
  if (key == "nonocc") return nonocc_path;
  if (key == "costvol_left") return costvol_left_path;
  if (key == "costvol_right") return costvol_right_path;
  if (key == "disp_max") return format_num(disp_max);
  if (key == "e") return format_num(match.e);
  if (key == "tau_col") return format_num(match.tau_col);
  if (key == "tau_grad") return format_num(match.tau_grad);
  if (key == "alpha") return format_num(match.alpha_blend);
  if (key == "window_radius") return std::to_string(match.window_radius);
  if (key == "lambda") return format_num(smooth.lambda);
  if (key == "tau_dis") return format_num(smooth.tau_dis);
  if (key == "eps") return format_num(smooth.eps);
  if (key == "gamma") return format_num(smooth.gamma);
  if (key == "neighborhood") return std::to_string(smooth.neighborhood);
  if (key == "cell_sizes") {
    std::string s;
    for (size_t i = 0; i < cell_sizes.size(); ++i) {
      if (i) s += ",";
      s += format_num(cell_sizes[i].value);
      if (cell_sizes[i].percent) s += "%";
    }
    return s;
  }
  if (key == "k_prop") return join_ints(k_prop);
  if (key == "k_rans") return join_ints(k_rans);
  if (key == "k_rand") return join_ints(k_rand);
  if (key == "outer_iterations") return std::to_string(outer_iterations);
  if (key == "early_stop") return early_stop ? "1" : "0";
  if (key == "seed") return std::to_string(seed);
  if (key == "workers") return std::to_string(workers);
  if (key == "ransac") return use_ransac ? "1" : "0";
  if (key == "ransac_inlier_threshold") return format_num(ransac.inlier_threshold);
  if (key == "ransac_hypotheses") return std::to_string(ransac.hypotheses);
  if (key == "post_process") return post_process ? "1" : "0";
  if (key == "lr_threshold") return format_num(postproc.lr_threshold);
  if (key == "median_radius") return std::to_string(postproc.median_radius);
  if (key == "median_gamma") return format_num(postproc.median_gamma);
  throw ConfigError("config: unknown key '" + key + "'");
}

void RunConfig::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config: " + path + ":" + std::to_string(lineno) +
                        ": expected 'key = value'");
    }
    set(line.substr(0, eq), line.substr(eq + 1));
  }
}

int RunConfig::effective_workers() const {
  if (workers > 0) return workers;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

OptimizerConfig RunConfig::optimizer_config(int image_width) const {
  OptimizerConfig cfg;
  cfg.cell_sizes.clear();
  for (const CellSizeSpec& spec : cell_sizes) cfg.cell_sizes.push_back(spec.resolve(image_width));

  const size_t levels = cfg.cell_sizes.size();
  auto level_count = [&](const std::vector<int>& v, size_t i) {
    if (v.empty()) return 0;
    return v[std::min(i, v.size() - 1)];  // last entry extends to deeper levels
  };
  cfg.schedules.clear();
  for (size_t i = 0; i < levels; ++i) {
    cfg.schedules.push_back(
        {level_count(k_prop, i), level_count(k_rans, i), level_count(k_rand, i)});
  }
  cfg.outer_iterations = outer_iterations;
  cfg.early_stop = early_stop;
  cfg.seed = seed;
  cfg.workers = effective_workers();
  cfg.ransac = ransac;
  if (use_ransac) cfg.enable_ransac();
  return cfg;
}

void RunConfig::validate() const {
  if (left_path.empty()) throw ConfigError("config: 'left' input image is required");
  if (right_path.empty()) throw ConfigError("config: 'right' input image is required");
  if (out_dir.empty()) throw ConfigError("config: 'out' directory is required");
  if (disp_max <= 0) throw ConfigError("config: 'disp_max' must be > 0");
  match.validate();
  smooth.validate();
  if (cell_sizes.empty()) throw ConfigError("config: 'cell_sizes' must not be empty");
  if (outer_iterations < 0) throw ConfigError("config: 'outer_iterations' must be >= 0");
  if (!nonocc_path.empty() && gt_path.empty()) {
    throw ConfigError("config: 'nonocc' given without 'gt'");
  }
  if (costvol_left_path.empty() != costvol_right_path.empty()) {
    throw ConfigError("config: cost volumes must be given for both views");
  }
}

}  // namespace lexstereo
