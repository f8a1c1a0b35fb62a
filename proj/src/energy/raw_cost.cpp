#include "energy/raw_cost.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <stdexcept>

namespace lexstereo {

namespace {

inline double clampd(double v, double lo, double hi) { return std::min(std::max(v, lo), hi); }

// Bilinear sample of one channel of an interleaved RGB image; coordinates
// clamped to the image rectangle.
inline void sample_color(const ColorImage& img, double x, double y, double out[3]) {
  const int w = img.width(), h = img.height();
  x = clampd(x, 0.0, w - 1.0);
  y = clampd(y, 0.0, h - 1.0);
  const int x0 = static_cast<int>(x);
  const int y0 = static_cast<int>(y);
  const int x1 = std::min(x0 + 1, w - 1);
  const int y1 = std::min(y0 + 1, h - 1);
  const double fx = x - x0, fy = y - y0;
  const float* p00 = img.px(x0, y0);
  const float* p10 = img.px(x1, y0);
  const float* p01 = img.px(x0, y1);
  const float* p11 = img.px(x1, y1);
  for (int c = 0; c < 3; ++c) {
    const double top = p00[c] + fx * (p10[c] - p00[c]);
    const double bot = p01[c] + fx * (p11[c] - p01[c]);
    out[c] = top + fy * (bot - top);
  }
}

inline double sample_plane(const Array2D<float>& img, double x, double y) {
  const int w = img.width(), h = img.height();
  x = clampd(x, 0.0, w - 1.0);
  y = clampd(y, 0.0, h - 1.0);
  const int x0 = static_cast<int>(x);
  const int y0 = static_cast<int>(y);
  const int x1 = std::min(x0 + 1, w - 1);
  const int y1 = std::min(y0 + 1, h - 1);
  const double fx = x - x0, fy = y - y0;
  const double top = img.at(x0, y0) + fx * (img.at(x1, y0) - img.at(x0, y0));
  const double bot = img.at(x0, y1) + fx * (img.at(x1, y1) - img.at(x0, y1));
  return top + fy * (bot - top);
}

}  // namespace

PhotoConsistencyCost::PhotoConsistencyCost(const StereoPair& pair, const MatchParams& params,
                                           View view)
    : pair_(pair), params_(params), view_(view), ceiling_(params.cost_ceiling()) {}

double PhotoConsistencyCost::operator()(int su, int sv, double disparity) const {
  // Matching point in the other view; disparity subtracts when matching
  // left->right and adds when matching right->left.
  const double xw = view_ == View::left ? su - disparity : su + disparity;
  if (xw < 0.0 || xw > pair_.width - 1.0) return ceiling_;

  const ColorImage& self = pair_.image(view_);
  const ColorImage& other = pair_.image(other_view(view_));

  double oc[3];
  sample_color(other, xw, sv, oc);
  const float* sc = self.px(su, sv);
  const double l1 =
      std::abs(sc[0] - oc[0]) + std::abs(sc[1] - oc[1]) + std::abs(sc[2] - oc[2]);

  const double gs = pair_.grad_x(view_).at(su, sv);
  const double go = sample_plane(pair_.grad_x(other_view(view_)), xw, sv);

  return (1.0 - params_.alpha_blend) * std::min(l1, params_.tau_col) +
         params_.alpha_blend * std::min(std::abs(gs - go), params_.tau_grad);
}

void PhotoConsistencyCost::row_costs(int sv, int su0, int su1, double disp_a, double disp_base,
                                     double* out) const {
  const int w = pair_.width;
  const double sign = view_ == View::left ? -1.0 : 1.0;
  const ColorImage& self = pair_.image(view_);
  const ColorImage& other = pair_.image(other_view(view_));
  const float* self_row = self.px(0, sv);
  const float* other_row = other.px(0, sv);
  const float* gself = pair_.grad_x(view_).row(sv);
  const float* gother = pair_.grad_x(other_view(view_)).row(sv);
  const double wa = (1.0 - params_.alpha_blend), wg = params_.alpha_blend;

  for (int x = su0; x < su1; ++x) {
    const double xw = x + sign * (disp_a * x + disp_base);
    if (xw < 0.0 || xw > w - 1.0) {
      out[x - su0] = ceiling_;
      continue;
    }
    const int x0 = static_cast<int>(xw);
    const int x1 = std::min(x0 + 1, w - 1);
    const double fx = xw - x0;
    const float* oc0 = other_row + 3 * x0;
    const float* oc1 = other_row + 3 * x1;
    const float* sc = self_row + 3 * x;
    double l1 = 0.0;
    for (int c = 0; c < 3; ++c) {
      const double oc = oc0[c] + fx * (oc1[c] - oc0[c]);
      l1 += std::abs(sc[c] - oc);
    }
    const double go = gother[x0] + fx * (gother[x1] - gother[x0]);
    out[x - su0] = wa * std::min(l1, params_.tau_col) +
                   wg * std::min(std::abs(gself[x] - go), params_.tau_grad);
  }
}

double CostVolume::sample(double x, double y, double d) const {
  x = clampd(x, 0.0, width - 1.0);
  y = clampd(y, 0.0, height - 1.0);
  d = clampd(d, 0.0, ndisp - 1.0);
  const int x0 = static_cast<int>(x), y0 = static_cast<int>(y), d0 = static_cast<int>(d);
  const int x1 = std::min(x0 + 1, width - 1);
  const int y1 = std::min(y0 + 1, height - 1);
  const int d1 = std::min(d0 + 1, ndisp - 1);
  const double fx = x - x0, fy = y - y0, fd = d - d0;

  auto plane = [&](int dd) {
    const double top = at(x0, y0, dd) + fx * (at(x1, y0, dd) - at(x0, y0, dd));
    const double bot = at(x0, y1, dd) + fx * (at(x1, y1, dd) - at(x0, y1, dd));
    return top + fy * (bot - top);
  };
  const double v0 = plane(d0);
  const double v1 = plane(d1);
  return v0 + fd * (v1 - v0);
}

double CostVolume::max_value() const {
  double m = 0.0;
  for (float v : values)
    if (std::isfinite(v)) m = std::max(m, static_cast<double>(v));
  return m;
}

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

uint32_t read_u32_le(std::FILE* f, const std::string& path) {
  unsigned char b[4];
  if (std::fread(b, 1, 4, f) != 4) {
    throw std::runtime_error("cost volume: truncated header in " + path);
  }
  return static_cast<uint32_t>(b[0]) | (static_cast<uint32_t>(b[1]) << 8) |
         (static_cast<uint32_t>(b[2]) << 16) | (static_cast<uint32_t>(b[3]) << 24);
}

void write_u32_le(std::FILE* f, uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v & 0xff),
                        static_cast<unsigned char>((v >> 8) & 0xff),
                        static_cast<unsigned char>((v >> 16) & 0xff),
                        static_cast<unsigned char>((v >> 24) & 0xff)};
  std::fwrite(b, 1, 4, f);
}

constexpr bool host_is_little_endian() {
  return std::endian::native == std::endian::little;
}

}  // namespace

CostVolume CostVolume::load(const std::string& path) {
  FilePtr f(std::fopen(path.c_str(), "rb"));
  if (!f) throw std::runtime_error("cost volume: cannot open " + path);

  CostVolume vol;
  vol.width = static_cast<int>(read_u32_le(f.get(), path));
  vol.height = static_cast<int>(read_u32_le(f.get(), path));
  vol.ndisp = static_cast<int>(read_u32_le(f.get(), path));
  if (vol.width <= 0 || vol.height <= 0 || vol.ndisp <= 0) {
    throw std::runtime_error("cost volume: bad dimensions in " + path);
  }

  const size_t count = static_cast<size_t>(vol.width) * vol.height * vol.ndisp;
  vol.values.resize(count);
  if (std::fread(vol.values.data(), sizeof(float), count, f.get()) != count) {
    throw std::runtime_error("cost volume: truncated payload in " + path);
  }
  if constexpr (!host_is_little_endian()) {
    for (float& v : vol.values) {
      uint32_t u;
      std::memcpy(&u, &v, 4);
      u = __builtin_bswap32(u);
      std::memcpy(&v, &u, 4);
    }
  }
  return vol;
}

void CostVolume::save(const std::string& path) const {
  FilePtr f(std::fopen(path.c_str(), "wb"));
  if (!f) throw std::runtime_error("cost volume: cannot open " + path + " for writing");
  write_u32_le(f.get(), static_cast<uint32_t>(width));
  write_u32_le(f.get(), static_cast<uint32_t>(height));
  write_u32_le(f.get(), static_cast<uint32_t>(ndisp));
  static_assert(host_is_little_endian() || sizeof(float) == 4, "float layout");
  if constexpr (host_is_little_endian()) {
    std::fwrite(values.data(), sizeof(float), values.size(), f.get());
  } else {
    for (float v : values) {
      uint32_t u;
      std::memcpy(&u, &v, 4);
      u = __builtin_bswap32(u);
      std::fwrite(&u, 4, 1, f.get());
    }
  }
}

}  // namespace lexstereo
