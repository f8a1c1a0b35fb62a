#pragma once

#include <stdexcept>
#include <string>

#include "core/image.hpp"

namespace lexstereo {

struct PfmError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Grayscale PFM ("Pf"): dimensions line, scale line (sign encodes byte
// order), then rows of 32-bit floats bottom-to-top. +inf marks unknown
// disparity. Color ("PF") files are rejected.
Array2D<float> read_pfm(const std::string& path);

// Writes scale -1.0 (little-endian) unconditionally.
void write_pfm(const Array2D<float>& image, const std::string& path);

}  // namespace lexstereo
