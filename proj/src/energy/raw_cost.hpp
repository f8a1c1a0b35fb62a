#pragma once

#include <memory>
#include <string>
#include <vector>

#include "core/params.hpp"
#include "core/stereo_pair.hpp"

namespace lexstereo {

// Pixelwise matching-cost hook. The default implementation scores
// color+gradient photo-consistency; a precomputed cost volume can be swapped
// in behind the same interface.
class RawCostFn {
public:
  virtual ~RawCostFn() = default;

  // Cost of assigning the given disparity to pixel (su, sv) of the modeled
  // view. Implementations must return values in [0, ceiling()].
  virtual double operator()(int su, int sv, double disparity) const = 0;

  // Batched row evaluation under one plane; out[x - su0] for x in [su0, su1).
  virtual void row_costs(int sv, int su0, int su1, double disp_a, double disp_base,
                         double* out) const {
    for (int x = su0; x < su1; ++x) out[x - su0] = (*this)(x, sv, disp_a * x + disp_base);
  }

  // Largest attainable cost; also the score of a warp that leaves the image
  // and of labels outside the allowed disparity range.
  virtual double ceiling() const = 0;
};

// Truncated color + gradient dissimilarity against the other view, sampled
// with clamped bilinear interpolation. Keeps a reference to the pair.
class PhotoConsistencyCost final : public RawCostFn {
public:
  PhotoConsistencyCost(const StereoPair& pair, const MatchParams& params, View view);

  double operator()(int su, int sv, double disparity) const override;
  void row_costs(int sv, int su0, int su1, double disp_a, double disp_base,
                 double* out) const override;
  double ceiling() const override { return ceiling_; }

private:
  const StereoPair& pair_;
  MatchParams params_;
  View view_;
  double ceiling_;
};

// Dense per-disparity cost planes, disparity-major. File layout: three
// 32-bit little-endian unsigned ints (width, height, ndisp) followed by
// ndisp planes of 32-bit little-endian floats.
struct CostVolume {
  int width = 0;
  int height = 0;
  int ndisp = 0;
  std::vector<float> values;

  float at(int x, int y, int d) const {
    return values[(static_cast<size_t>(d) * height + y) * width + x];
  }

  // Trilinear sample with all coordinates clamped to the volume.
  double sample(double x, double y, double d) const;

  double max_value() const;

  static CostVolume load(const std::string& path);
  void save(const std::string& path) const;
};

class VolumeRawCost final : public RawCostFn {
public:
  explicit VolumeRawCost(CostVolume volume)
      : volume_(std::move(volume)), ceiling_(volume_.max_value()) {}

  double operator()(int su, int sv, double disparity) const override {
    return volume_.sample(su, sv, disparity);
  }
  double ceiling() const override { return ceiling_; }

  const CostVolume& volume() const { return volume_; }

private:
  CostVolume volume_;
  double ceiling_;
};

}  // namespace lexstereo
