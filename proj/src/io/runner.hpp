#pragma once

#include <map>

#include "core/label_field.hpp"
#include "io/run_config.hpp"

namespace lexstereo {

struct ViewTrace {
  std::vector<TraceRecord> records;
  std::vector<double> bad20;  // per record, only when ground truth is given
};

struct RunResult {
  int width = 0;
  int height = 0;
  LabelField left;
  LabelField right;
  double energy_left = 0;
  double energy_right = 0;
  ViewTrace trace_left;
  ViewTrace trace_right;
  std::map<std::string, double> metrics;  // filled when ground truth is given
  double seconds_total = 0;
};

// Full batch run: loads inputs, optimizes both views, post-processes, and
// writes disparity PFMs, colorized PNGs, the trace CSV, and a metrics
// summary into the output directory. Deterministic for a fixed seed
// regardless of the worker count.
RunResult run(const RunConfig& cfg);

// In-memory variant: images supplied directly, nothing written to disk.
RunResult run_on_pair(const RunConfig& cfg, StereoPair pair);

}  // namespace lexstereo
