#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace isq {

// Vertical-line (Bromwich) inversion parameters. The abscissa c must lie
// inside the transform's strip of analyticity; |c * T_tilde| ~ 30 is the
// working guideline for the periodization error.
struct BromwichConfig {
  double c = -1.0;
  double T_tilde = 30.0;
  int n_max = 20000;
};

enum class StripSide { Left, Right };

// Places c at distance 1 inside the half-plane bounded by strip_edge
// (|c| clamped to at least 0.25), T_tilde = 30/|c|.
BromwichConfig choose_config(double strip_edge, StripSide side);

using TransformFn = std::function<std::complex<double>(std::complex<double>)>;

// Durbin's trapezoidal rule on the line Re(z) = c:
//   f(t) = (e^{ct} / T~) * [ Re F(c)/2
//            + sum_{k=1..n_max} Re F(c + ik pi/T~) cos(k pi t / T~)
//            - sum_{k=0..n_max} Im F(c + ik pi/T~) sin(k pi t / T~) ].
// The prefactor makes the rule exact on known transform pairs (1/z -> 1);
// see the tests pinning 1/z and the closed-form kernels.
// Throws std::runtime_error naming the offending k if F returns a non-finite value.
double invert(const TransformFn& F, double t, const BromwichConfig& cfg);

// Same rule on many evaluation points, sharing the F(c + ik pi/T~) samples.
std::vector<double> invert_grid(const TransformFn& F, const std::vector<double>& ts,
                                const BromwichConfig& cfg);

}  // namespace isq
