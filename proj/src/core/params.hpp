#pragma once

namespace lexstereo {

enum class View { left, right };

inline View other_view(View v) { return v == View::left ? View::right : View::left; }

// Data-term parameters. The matching window W_p is (2*window_radius+1)^2 and
// the guided-filter regression window is (2*regression_radius+1)^2, with
// regression_radius tied to window_radius / 2.
struct MatchParams {
  double e = 1e-4;            // regression regularizer added to the color covariance
  double tau_col = 10.0;      // color truncation (intensity units)
  double tau_grad = 2.0;      // gradient truncation
  double alpha_blend = 0.9;   // gradient weight in [0,1]; color gets 1 - alpha_blend
  int window_radius = 20;     // matching window radius r
  int regression_radius = 10; // guided-filter window radius, window_radius / 2

  static MatchParams with_window_radius(int r) {
    MatchParams p;
    p.window_radius = r;
    p.regression_radius = r / 2;
    return p;
  }

  // Upper bound of the pixelwise matching cost; also the score assigned to
  // warps that leave the image.
  double cost_ceiling() const { return (1.0 - alpha_blend) * tau_col + alpha_blend * tau_grad; }

  void validate() const;
};

// Smoothness-term parameters.
struct SmoothParams {
  double lambda = 1.0;   // smoothness weight applied to the pairwise sum
  double tau_dis = 1.0;  // disparity-difference truncation (pixels)
  double eps = 0.01;     // lower bound of the contrast weight
  double gamma = 10.0;   // contrast sensitivity
  int neighborhood = 8;  // 4 or 8

  void validate() const;
};

}  // namespace lexstereo
