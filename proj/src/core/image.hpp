#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <vector>

namespace lexstereo {

// Half-open pixel rectangle [x0,x1) x [y0,y1).
struct Rect {
  int x0 = 0, y0 = 0, x1 = 0, y1 = 0;

  int width() const { return x1 - x0; }
  int height() const { return y1 - y0; }
  long long area() const { return static_cast<long long>(width()) * height(); }
  bool empty() const { return x1 <= x0 || y1 <= y0; }
  bool contains(int x, int y) const { return x >= x0 && x < x1 && y >= y0 && y < y1; }
  bool contains(const Rect& r) const {
    return r.x0 >= x0 && r.x1 <= x1 && r.y0 >= y0 && r.y1 <= y1;
  }

  Rect dilated(int r) const { return {x0 - r, y0 - r, x1 + r, y1 + r}; }
  Rect clipped(const Rect& b) const {
    return {std::max(x0, b.x0), std::max(y0, b.y0), std::min(x1, b.x1), std::min(y1, b.y1)};
  }
  bool intersects(const Rect& r) const { return !clipped(r).empty(); }

  bool operator==(const Rect&) const = default;
};

// Dense row-major single-channel 2D array.
template <typename T>
class Array2D {
public:
  Array2D() = default;
  Array2D(int width, int height, T fill = T{})
      : width_(width), height_(height), data_(static_cast<size_t>(width) * height, fill) {}

  int width() const { return width_; }
  int height() const { return height_; }
  Rect bounds() const { return {0, 0, width_, height_}; }
  size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  T& at(int x, int y) {
    assert(x >= 0 && x < width_ && y >= 0 && y < height_);
    return data_[static_cast<size_t>(y) * width_ + x];
  }
  const T& at(int x, int y) const {
    assert(x >= 0 && x < width_ && y >= 0 && y < height_);
    return data_[static_cast<size_t>(y) * width_ + x];
  }

  T* row(int y) { return data_.data() + static_cast<size_t>(y) * width_; }
  const T* row(int y) const { return data_.data() + static_cast<size_t>(y) * width_; }

  T* data() { return data_.data(); }
  const T* data() const { return data_.data(); }

  void fill(T value) { std::fill(data_.begin(), data_.end(), value); }

  // Reshapes and zero-fills; keeps the allocation when possible.
  void reset(int width, int height) {
    width_ = width;
    height_ = height;
    data_.assign(static_cast<size_t>(width) * height, T{});
  }

private:
  int width_ = 0;
  int height_ = 0;
  std::vector<T> data_;
};

// Interleaved RGB image, values kept as real numbers in [0,255].
class ColorImage {
public:
  ColorImage() = default;
  ColorImage(int width, int height)
      : width_(width), height_(height), data_(static_cast<size_t>(width) * height * 3, 0.f) {}

  int width() const { return width_; }
  int height() const { return height_; }
  Rect bounds() const { return {0, 0, width_, height_}; }

  float* px(int x, int y) {
    assert(x >= 0 && x < width_ && y >= 0 && y < height_);
    return data_.data() + 3 * (static_cast<size_t>(y) * width_ + x);
  }
  const float* px(int x, int y) const {
    assert(x >= 0 && x < width_ && y >= 0 && y < height_);
    return data_.data() + 3 * (static_cast<size_t>(y) * width_ + x);
  }

  void set(int x, int y, float r, float g, float b) {
    float* p = px(x, y);
    p[0] = r;
    p[1] = g;
    p[2] = b;
  }

  const std::vector<float>& raw() const { return data_; }

private:
  int width_ = 0;
  int height_ = 0;
  std::vector<float> data_;
};

struct Vec3 {
  double x = 0, y = 0, z = 0;

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  double norm() const { return std::sqrt(dot(*this)); }
  Vec3 normalized() const {
    double n = norm();
    return {x / n, y / n, z / n};
  }
};

// Symmetric 3x3 matrix (covariances and their inverses).
struct Sym3 {
  double xx = 0, xy = 0, xz = 0, yy = 0, yz = 0, zz = 0;

  Vec3 apply(const Vec3& v) const {
    return {xx * v.x + xy * v.y + xz * v.z,
            xy * v.x + yy * v.y + yz * v.z,
            xz * v.x + yz * v.y + zz * v.z};
  }

  Sym3 plus_diagonal(double e) const { return {xx + e, xy, xz, yy + e, yz, zz + e}; }

  // Adjugate-based inverse; caller guarantees positive definiteness
  // (a positive diagonal shift is always applied before inversion here).
  Sym3 inverse() const {
    const double c00 = yy * zz - yz * yz;
    const double c01 = xz * yz - xy * zz;
    const double c02 = xy * yz - xz * yy;
    const double det = xx * c00 + xy * c01 + xz * c02;
    const double inv = 1.0 / det;
    return {c00 * inv,
            c01 * inv,
            c02 * inv,
            (xx * zz - xz * xz) * inv,
            (xy * xz - xx * yz) * inv,
            (xx * yy - xy * xy) * inv};
  }
};

}  // namespace lexstereo
