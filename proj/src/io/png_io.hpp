#pragma once

#include <string>

#include "core/image.hpp"

namespace lexstereo {

struct PngError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// 8-bit interleaved RGB buffer for encode/decode.
struct Rgb8Image {
  int width = 0;
  int height = 0;
  std::vector<uint8_t> data;  // 3 bytes per pixel

  uint8_t* px(int x, int y) { return data.data() + 3 * (static_cast<size_t>(y) * width + x); }
  const uint8_t* px(int x, int y) const {
    return data.data() + 3 * (static_cast<size_t>(y) * width + x);
  }
};

// Any PNG color type is expanded to 8-bit RGB.
Rgb8Image read_png(const std::string& path);
void write_png(const Rgb8Image& image, const std::string& path);

ColorImage to_color_image(const Rgb8Image& img);

}  // namespace lexstereo
