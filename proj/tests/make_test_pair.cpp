// Generates a small synthetic stereo pair with ground truth for CLI tests:
// left.png, right.png, gt.pfm, nonocc.png and params.cfg in argv[1].

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "io/pfm.hpp"
#include "io/png_io.hpp"
#include "support/synthetic.hpp"

using namespace lexstereo;

int main(int argc, char** argv) {
  if (argc != 2) {
    std::fprintf(stderr, "usage: make_test_pair <output-dir>\n");
    return 1;
  }
  namespace fs = std::filesystem;
  const fs::path dir = argv[1];
  fs::create_directories(dir);

  const auto scene = testing::render_scene(testing::three_plane_spec(40, 30, 12));

  auto save_png = [&](const ColorImage& img, const fs::path& path) {
    Rgb8Image out;
    out.width = img.width();
    out.height = img.height();
    out.data.resize(static_cast<size_t>(out.width) * out.height * 3);
    size_t i = 0;
    for (int y = 0; y < out.height; ++y)
      for (int x = 0; x < out.width; ++x) {
        const float* p = img.px(x, y);
        out.data[i++] = static_cast<uint8_t>(p[0]);
        out.data[i++] = static_cast<uint8_t>(p[1]);
        out.data[i++] = static_cast<uint8_t>(p[2]);
      }
    write_png(out, path.string());
  };

  save_png(scene.pair.left, dir / "left.png");
  save_png(scene.pair.right, dir / "right.png");
  write_pfm(scene.gt_left, (dir / "gt.pfm").string());

  Rgb8Image mask;
  mask.width = 40;
  mask.height = 30;
  mask.data.assign(40 * 30 * 3, 0);
  for (int y = 0; y < 30; ++y)
    for (int x = 0; x < 40; ++x) {
      if (scene.nonocc_left.at(x, y)) {
        mask.px(x, y)[0] = mask.px(x, y)[1] = mask.px(x, y)[2] = 255;
      }
    }
  write_png(mask, (dir / "nonocc.png").string());

  std::ofstream cfg(dir / "params.cfg");
  cfg << "# scaled-down parameters for the test pair\n"
      << "window_radius = 4\n"
      << "cell_sizes = 3,6,9\n"
      << "outer_iterations = 3\n";
  return 0;
}
