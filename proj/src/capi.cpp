#include "lexstereo/lexstereo.h"

#include <cstring>
#include <new>
#include <string>

#include "io/pfm.hpp"
#include "io/png_io.hpp"
#include "io/runner.hpp"

using lexstereo::ConfigError;
using lexstereo::PfmError;
using lexstereo::PngError;
using lexstereo::RunConfig;
using lexstereo::RunResult;

struct lexstereo_config {
  RunConfig cfg;
};

struct lexstereo_result {
  RunResult res;
};

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& msg) { g_last_error = msg; }

template <typename Fn>
lexstereo_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const PfmError& e) {
    set_error(e.what());
    return LEXSTEREO_ERROR_PARSE;
  } catch (const PngError& e) {
    set_error(e.what());
    return LEXSTEREO_ERROR_IO;
  } catch (const ConfigError& e) {
    set_error(e.what());
    return LEXSTEREO_ERROR_IO;
  } catch (const std::invalid_argument& e) {
    set_error(e.what());
    return LEXSTEREO_ERROR_INVALID_ARGUMENT;
  } catch (const std::exception& e) {
    set_error(e.what());
    return LEXSTEREO_ERROR_INTERNAL;
  } catch (...) {
    set_error("unknown error");
    return LEXSTEREO_ERROR_INTERNAL;
  }
}

const lexstereo::LabelField* field_of(const lexstereo_result* res, lexstereo_view view) {
  return view == LEXSTEREO_LEFT ? &res->res.left : &res->res.right;
}

}  // namespace

extern "C" {

const char* lexstereo_version(void) { return "0.1.0"; }

const char* lexstereo_last_error(void) { return g_last_error.c_str(); }

lexstereo_config* lexstereo_config_create(void) { return new (std::nothrow) lexstereo_config; }

void lexstereo_config_destroy(lexstereo_config* cfg) { delete cfg; }

lexstereo_status lexstereo_config_set(lexstereo_config* cfg, const char* key,
                                      const char* value) {
  if (!cfg || !key || !value) {
    set_error("null argument");
    return LEXSTEREO_ERROR_INVALID_ARGUMENT;
  }
  return guarded([&] {
    cfg->cfg.set(key, value);
    return LEXSTEREO_OK;
  });
}

lexstereo_status lexstereo_config_get(const lexstereo_config* cfg, const char* key, char* buf,
                                      size_t buf_size) {
  if (!cfg || !key || !buf || buf_size == 0) {
    set_error("null argument");
    return LEXSTEREO_ERROR_INVALID_ARGUMENT;
  }
  return guarded([&] {
    const std::string value = cfg->cfg.get(key);
    if (value.size() + 1 > buf_size) {
      set_error("buffer too small");
      return LEXSTEREO_ERROR_INVALID_ARGUMENT;
    }
    std::memcpy(buf, value.c_str(), value.size() + 1);
    return LEXSTEREO_OK;
  });
}

lexstereo_status lexstereo_config_load_file(lexstereo_config* cfg, const char* path) {
  if (!cfg || !path) {
    set_error("null argument");
    return LEXSTEREO_ERROR_INVALID_ARGUMENT;
  }
  return guarded([&] {
    cfg->cfg.load_file(path);
    return LEXSTEREO_OK;
  });
}

lexstereo_status lexstereo_run(const lexstereo_config* cfg, lexstereo_result** out_result) {
  if (!cfg) {
    set_error("null config");
    return LEXSTEREO_ERROR_INVALID_ARGUMENT;
  }
  return guarded([&] {
    RunResult res = lexstereo::run(cfg->cfg);
    if (out_result) *out_result = new lexstereo_result{std::move(res)};
    return LEXSTEREO_OK;
  });
}

lexstereo_status lexstereo_match_buffers(const lexstereo_config* cfg, const uint8_t* left_rgb,
                                         const uint8_t* right_rgb, int32_t width,
                                         int32_t height, int32_t stride_bytes,
                                         lexstereo_result** out_result) {
  if (!cfg || !left_rgb || !right_rgb || !out_result) {
    set_error("null argument");
    return LEXSTEREO_ERROR_INVALID_ARGUMENT;
  }
  if (width <= 0 || height <= 0 || stride_bytes < 3 * width) {
    set_error("bad buffer geometry");
    return LEXSTEREO_ERROR_INVALID_ARGUMENT;
  }
  return guarded([&] {
    auto to_image = [&](const uint8_t* data) {
      lexstereo::ColorImage img(width, height);
      for (int y = 0; y < height; ++y) {
        const uint8_t* row = data + static_cast<size_t>(y) * stride_bytes;
        for (int x = 0; x < width; ++x) {
          img.set(x, y, row[3 * x], row[3 * x + 1], row[3 * x + 2]);
        }
      }
      return img;
    };
    lexstereo::StereoPair pair = lexstereo::StereoPair::create(
        to_image(left_rgb), to_image(right_rgb), cfg->cfg.disp_max);
    RunConfig run_cfg = cfg->cfg;
    run_cfg.gt_path.clear();
    run_cfg.nonocc_path.clear();
    RunResult res = lexstereo::run_on_pair(run_cfg, std::move(pair));
    *out_result = new lexstereo_result{std::move(res)};
    return LEXSTEREO_OK;
  });
}

void lexstereo_result_destroy(lexstereo_result* res) { delete res; }

lexstereo_status lexstereo_result_size(const lexstereo_result* res, int32_t* width,
                                       int32_t* height) {
  if (!res || !width || !height) {
    set_error("null argument");
    return LEXSTEREO_ERROR_INVALID_ARGUMENT;
  }
  *width = res->res.width;
  *height = res->res.height;
  return LEXSTEREO_OK;
}

lexstereo_status lexstereo_result_disparity(const lexstereo_result* res, lexstereo_view view,
                                            float* out, size_t count) {
  if (!res || !out) {
    set_error("null argument");
    return LEXSTEREO_ERROR_INVALID_ARGUMENT;
  }
  const lexstereo::LabelField* f = field_of(res, view);
  const size_t need = static_cast<size_t>(res->res.width) * res->res.height;
  if (count < need) {
    set_error("output buffer too small");
    return LEXSTEREO_ERROR_INVALID_ARGUMENT;
  }
  for (int y = 0; y < f->height(); ++y)
    for (int x = 0; x < f->width(); ++x) {
      out[static_cast<size_t>(y) * f->width() + x] = static_cast<float>(f->disparity(x, y));
    }
  return LEXSTEREO_OK;
}

lexstereo_status lexstereo_result_planes(const lexstereo_result* res, lexstereo_view view,
                                         float* out, size_t count) {
  if (!res || !out) {
    set_error("null argument");
    return LEXSTEREO_ERROR_INVALID_ARGUMENT;
  }
  const lexstereo::LabelField* f = field_of(res, view);
  const size_t need = 3ull * res->res.width * res->res.height;
  if (count < need) {
    set_error("output buffer too small");
    return LEXSTEREO_ERROR_INVALID_ARGUMENT;
  }
  size_t i = 0;
  for (int y = 0; y < f->height(); ++y)
    for (int x = 0; x < f->width(); ++x) {
      const lexstereo::PlaneLabel& l = f->at(x, y);
      out[i++] = static_cast<float>(l.a);
      out[i++] = static_cast<float>(l.b);
      out[i++] = static_cast<float>(l.c);
    }
  return LEXSTEREO_OK;
}

lexstereo_status lexstereo_result_energy(const lexstereo_result* res, lexstereo_view view,
                                         double* out) {
  if (!res || !out) {
    set_error("null argument");
    return LEXSTEREO_ERROR_INVALID_ARGUMENT;
  }
  *out = view == LEXSTEREO_LEFT ? res->res.energy_left : res->res.energy_right;
  return LEXSTEREO_OK;
}

lexstereo_status lexstereo_result_metric(const lexstereo_result* res, const char* name,
                                         double* out) {
  if (!res || !name || !out) {
    set_error("null argument");
    return LEXSTEREO_ERROR_INVALID_ARGUMENT;
  }
  const auto it = res->res.metrics.find(name);
  if (it == res->res.metrics.end()) {
    set_error(std::string("metric not available: ") + name);
    return LEXSTEREO_ERROR_INVALID_ARGUMENT;
  }
  *out = it->second;
  return LEXSTEREO_OK;
}

int32_t lexstereo_result_trace_rows(const lexstereo_result* res) {
  return res ? static_cast<int32_t>(res->res.trace_left.records.size()) : 0;
}

lexstereo_status lexstereo_result_trace_row(const lexstereo_result* res, int32_t index,
                                            int32_t* outer_iter, int32_t* level,
                                            int32_t* group, double* seconds,
                                            double* energy_left, double* energy_right) {
  if (!res) {
    set_error("null result");
    return LEXSTEREO_ERROR_INVALID_ARGUMENT;
  }
  const auto& left = res->res.trace_left.records;
  const auto& right = res->res.trace_right.records;
  if (index < 0 || static_cast<size_t>(index) >= left.size()) {
    set_error("trace row out of range");
    return LEXSTEREO_ERROR_INVALID_ARGUMENT;
  }
  const lexstereo::TraceRecord& l = left[index];
  const bool have_right = static_cast<size_t>(index) < right.size();
  if (outer_iter) *outer_iter = l.outer;
  if (level) *level = l.level;
  if (group) *group = l.group;
  if (seconds) *seconds = l.seconds + (have_right ? right[index].seconds : 0.0);
  if (energy_left) *energy_left = l.energy;
  if (energy_right) *energy_right = have_right ? right[index].energy : 0.0;
  return LEXSTEREO_OK;
}

}  // extern "C"
