#include "isq/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <variant>
#include <vector>

namespace isq {

namespace {

const double kInvSqrt2Pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);

double phi(double h, double u) { return kInvSqrt2Pi / h * std::exp(-u * u / (2.0 * h * h)); }
double dphi(double h, double u) { return -u / (h * h) * phi(h, u); }
double ddphi(double h, double u) { return (u * u - h * h) / (h * h * h * h) * phi(h, u); }
double Phi(double h, double u) { return 0.5 * std::erfc(-u / (h * std::numbers::sqrt2)); }

}  // namespace

double GaussianKernel::k(double t) { return kInvSqrt2Pi * std::exp(-0.5 * t * t); }

std::complex<double> GaussianKernel::k_hat(std::complex<double> z) {
  return std::exp(0.5 * z * z);
}

namespace detail {

// Sum of coef * phi_h^{(order)}(t - center); all closed-form kernels here are
// of this shape (orders 0..2).
struct GaussianSum {
  struct Term {
    double coef;
    double center;
    int order;
  };
  double h;
  std::vector<Term> terms;

  double eval(double t) const {
    double acc = 0.0;
    for (const auto& it : terms) {
      const double u = t - it.center;
      switch (it.order) {
        case 0: acc += it.coef * phi(h, u); break;
        case 1: acc += it.coef * dphi(h, u); break;
        default: acc += it.coef * ddphi(h, u); break;
      }
    }
    return acc;
  }

  double antiderivative(double t) const {
    double acc = 0.0;
    for (const auto& it : terms) {
      const double u = t - it.center;
      switch (it.order) {
        case 0: acc += it.coef * Phi(h, u); break;
        case 1: acc += it.coef * phi(h, u); break;
        default: acc += it.coef * dphi(h, u); break;
      }
    }
    return acc;
  }

  KernelSupport support() const {
    KernelSupport s{terms.front().center, terms.front().center};
    for (const auto& it : terms) {
      s.lo = std::min(s.lo, it.center);
      s.hi = std::max(s.hi, it.center);
    }
    s.lo -= 10.0 * h;
    s.hi += 10.0 * h;
    return s;
  }
};

// Tabulated Durbin inversion with Catmull-Rom interpolation; the cumulative
// integral table makes per-segment path integrals O(1).
struct NumericTable {
  double lo = 0.0;
  double dt = 1.0;
  std::vector<double> vals;
  std::vector<double> cum;  // cum[i] = integral of the interpolant on [lo, lo + i dt]

  void build_cum() {
    cum.assign(vals.size(), 0.0);
    for (std::size_t i = 0; i + 1 < vals.size(); ++i)
      cum[i + 1] = cum[i] + cell_integral(i, 1.0);
  }

  double hi() const { return lo + dt * static_cast<double>(vals.size() - 1); }

  void cell_coeffs(std::size_t i, double c[4]) const {
    const std::size_t n = vals.size();
    const double p0 = vals[i == 0 ? 0 : i - 1];
    const double p1 = vals[i];
    const double p2 = vals[std::min(i + 1, n - 1)];
    const double p3 = vals[std::min(i + 2, n - 1)];
    c[0] = p1;
    c[1] = 0.5 * (p2 - p0);
    c[2] = 0.5 * (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3);
    c[3] = 0.5 * (-p0 + 3.0 * p1 - 3.0 * p2 + p3);
  }

  // Integral of the cubic over [t_i, t_i + u*dt], u in [0,1].
  double cell_integral(std::size_t i, double u) const {
    double c[4];
    cell_coeffs(i, c);
    return dt * u * (c[0] + u * (c[1] / 2.0 + u * (c[2] / 3.0 + u * c[3] / 4.0)));
  }

  double eval(double t) const {
    if (t < lo || t > hi()) return 0.0;
    const double x = (t - lo) / dt;
    std::size_t i = static_cast<std::size_t>(x);
    if (i + 1 >= vals.size()) i = vals.size() - 2;
    const double u = x - static_cast<double>(i);
    double c[4];
    cell_coeffs(i, c);
    return c[0] + u * (c[1] + u * (c[2] + u * c[3]));
  }

  // Antiderivative vanishing at the left window edge, constant outside.
  double antiderivative(double t) const {
    if (t <= lo) return 0.0;
    if (t >= hi()) return cum.back();
    const double x = (t - lo) / dt;
    std::size_t i = static_cast<std::size_t>(x);
    if (i + 1 >= vals.size()) i = vals.size() - 2;
    return cum[i] + cell_integral(i, x - static_cast<double>(i));
  }
};

struct KernelBody {
  std::variant<GaussianSum, NumericTable> impl;
  TransformFn transform;  // exact Laplace-domain representation
  double sigma_lambda = 0.0;

  double eval(double t) const {
    return std::visit([&](const auto& b) { return b.eval(t); }, impl);
  }
  double antiderivative(double t) const {
    return std::visit([&](const auto& b) { return b.antiderivative(t); }, impl);
  }
  KernelSupport support() const {
    if (const auto* g = std::get_if<GaussianSum>(&impl)) return g->support();
    const auto& tab = std::get<NumericTable>(impl);
    return {tab.lo, tab.hi()};
  }
  bool closed() const { return std::holds_alternative<GaussianSum>(impl); }
};

}  // namespace detail

namespace {

using detail::GaussianSum;
using detail::KernelBody;
using detail::NumericTable;

// The inversion line must stay away from zeros of lambda_hat(-z); a dip of
// |lambda_hat| to ~0 on the line makes the integrand blow up. Normalising by
// the Assumption-2 shape (sigma^2 + omega^2)^{gamma/2} separates a genuine
// zero from the usual decay along the line: every built-in rate keeps the
// normalised modulus above ~0.4 while a zero drives it to 0.
void check_line(const RateModel& rate, const BromwichConfig& cfg) {
  const double sigma = -cfg.c;
  const double ds = sigma - rate.sigma_lambda();
  for (int k = 0; k <= 5000; ++k) {
    const double omega = 0.01 * k;
    const std::complex<double> z{cfg.c, omega};
    const double mod = std::abs(rate.laplace(-z));
    const double q = mod * std::pow(ds * ds + omega * omega, 0.5 * rate.gamma()) /
                     rate.lambda0();
    if (q < 0.02)
      throw std::runtime_error(
          "unsupported rate: lambda_hat(-z) nearly vanishes on the inversion line Re(z) = " +
          std::to_string(cfg.c));
  }
}

std::shared_ptr<const KernelBody> make_numeric_body(const RateModel& rate, double h,
                                                    const NumericKernelOptions& opts,
                                                    const TransformFn& transform,
                                                    double default_lo, double default_hi) {
  BromwichConfig cfg =
      opts.bromwich ? *opts.bromwich : choose_config(-rate.sigma_lambda(), StripSide::Left);
  if (cfg.c >= -rate.sigma_lambda())
    throw std::invalid_argument("numeric kernel: abscissa must satisfy c < -sigma_lambda");
  check_line(rate, cfg);

  NumericTable tab;
  tab.lo = std::isnan(opts.window_lo) ? default_lo : opts.window_lo;
  const double hi = std::isnan(opts.window_hi) ? default_hi : opts.window_hi;
  if (!(hi > tab.lo)) throw std::invalid_argument("numeric kernel: empty tabulation window");
  tab.dt = h / opts.points_per_h;
  const auto n_cells = static_cast<std::size_t>(std::ceil((hi - tab.lo) / tab.dt));
  std::vector<double> ts(n_cells + 1);
  for (std::size_t i = 0; i < ts.size(); ++i) ts[i] = tab.lo + tab.dt * static_cast<double>(i);
  tab.vals = invert_grid(transform, ts, cfg);
  tab.build_cum();

  auto body = std::make_shared<KernelBody>();
  body->impl = std::move(tab);
  body->transform = transform;
  body->sigma_lambda = rate.sigma_lambda();
  return body;
}

std::shared_ptr<const KernelBody> make_closed_body(GaussianSum sum, const RateModel& rate,
                                                   const TransformFn& transform) {
  auto body = std::make_shared<KernelBody>();
  body->impl = std::move(sum);
  body->transform = transform;
  body->sigma_lambda = rate.sigma_lambda();
  return body;
}

// Closed-form backend applies to: constant rates (p = 0 polynomials behave
// identically), the high/low rate with zero low phase, and the linear rate.
enum class ClosedKind { None, Constant, HighLow0, Linear };

ClosedKind closed_kind(const RateModel& rate) {
  switch (rate.family()) {
    case RateFamily::Constant:
      return ClosedKind::Constant;
    case RateFamily::Polynomial:
      if (rate.power() == 0.0) return ClosedKind::Constant;
      if (rate.power() == 1.0) return ClosedKind::Linear;
      return ClosedKind::None;
    case RateFamily::HighLow:
      return rate.lambda1() == 0.0 ? ClosedKind::HighLow0 : ClosedKind::None;
    default:
      return ClosedKind::None;
  }
}

}  // namespace

double DeconvKernelL::eval(double t) const { return body_->eval(t); }

double DeconvKernelL::integral(double a, double b) const {
  return body_->antiderivative(b) - body_->antiderivative(a);
}

std::complex<double> DeconvKernelL::laplace(std::complex<double> z) const {
  if (z.real() >= -rate_.sigma_lambda())
    throw std::domain_error("laplace_of_L: need Re(z) < -sigma_lambda");
  return body_->transform(z);
}

KernelSupport DeconvKernelL::support() const { return body_->support(); }

bool DeconvKernelL::closed_form() const { return body_->closed(); }

Weight DeconvKernelL::weight(double x0) const {
  auto body = body_;
  return Weight{[body, x0](double t) { return body->eval(t - x0); },
                [body, x0](double t) { return body->antiderivative(t - x0); }};
}

DeconvKernelL make_L(const RateModel& rate, double h, const NumericKernelOptions& opts) {
  if (!(h > 0.0)) throw std::invalid_argument("make_L: h must be > 0");

  DeconvKernelL kernel(rate, h);

  TransformFn transform = [rate, h](std::complex<double> z) {
    return GaussianKernel::k_hat(z * h) / rate.laplace(-z);
  };

  const double l0 = rate.lambda0();
  const ClosedKind kind = opts.force_numeric ? ClosedKind::None : closed_kind(rate);
  switch (kind) {
    case ClosedKind::Constant: {
      const double a = rate.family() == RateFamily::Constant ? rate.shift() : 0.0;
      kernel.body_ = make_closed_body(GaussianSum{h, {{-1.0 / l0, a, 1}}}, rate, transform);
      break;
    }
    case ClosedKind::HighLow0:
      kernel.body_ = make_closed_body(
          GaussianSum{h, {{-1.0 / l0, 0.0, 1}, {-1.0 / l0, -1.0, 1}}}, rate, transform);
      break;
    case ClosedKind::Linear:
      kernel.body_ = make_closed_body(GaussianSum{h, {{1.0 / l0, 0.0, 2}}}, rate, transform);
      break;
    case ClosedKind::None:
      kernel.body_ = make_numeric_body(rate, h, opts, transform, -30.0, 30.0);
      break;
  }
  return kernel;
}

std::complex<double> laplace_of_L(const DeconvKernelL& kernel, std::complex<double> z) {
  return kernel.laplace(z);
}

double MeanKernelJ::eval(double t) const { return body_->eval(t); }

double MeanKernelJ::integral(double a, double b) const {
  return body_->antiderivative(b) - body_->antiderivative(a);
}

std::complex<double> MeanKernelJ::laplace(std::complex<double> z) const {
  if (z.real() >= -rate_.sigma_lambda())
    throw std::domain_error("MeanKernelJ::laplace: need Re(z) < -sigma_lambda");
  return body_->transform(z);
}

KernelSupport MeanKernelJ::support() const { return body_->support(); }

bool MeanKernelJ::closed_form() const { return body_->closed(); }

Weight MeanKernelJ::weight() const {
  auto body = body_;
  return Weight{[body](double t) { return body->eval(t); },
                [body](double t) { return body->antiderivative(t); }};
}

MeanKernelJ make_J(const RateModel& rate, double b, double h, double x1,
                   const NumericKernelOptions& opts) {
  if (!(b > 0.0)) throw std::invalid_argument("make_J: b must be > 0");
  if (!(h > 0.0)) throw std::invalid_argument("make_J: h must be > 0");
  if (x1 > 0.0) throw std::invalid_argument("make_J: x1 must be <= 0");
  if (!(b + x1 > 0.0)) throw std::invalid_argument("make_J: need b + x1 > 0");

  MeanKernelJ kernel(rate, b, h, x1);

  // psi = 1_{[0, b+x1]} * phi_h(. - x1); psi_hat(z) = (1 - e^{-z(b+x1)}) e^{-z x1} e^{z^2 h^2/2} / z
  TransformFn transform = [rate, b, h, x1](std::complex<double> z) {
    const std::complex<double> psi_hat = (1.0 - std::exp(-z * (b + x1))) *
                                         std::exp(-z * x1) * GaussianKernel::k_hat(z * h) / z;
    return psi_hat / rate.laplace(-z);
  };

  const double l0 = rate.lambda0();
  const double rise = x1;            // left edge of the psi plateau
  const double fall = 2.0 * x1 + b;  // right edge
  const ClosedKind kind = opts.force_numeric ? ClosedKind::None : closed_kind(rate);
  switch (kind) {
    case ClosedKind::Constant: {
      const double a = rate.family() == RateFamily::Constant ? rate.shift() : 0.0;
      kernel.body_ = make_closed_body(
          GaussianSum{h, {{1.0 / l0, a + fall, 0}, {-1.0 / l0, a + rise, 0}}}, rate, transform);
      break;
    }
    case ClosedKind::HighLow0:
      kernel.body_ = make_closed_body(GaussianSum{h,
                                                  {{1.0 / l0, fall, 0},
                                                   {1.0 / l0, fall - 1.0, 0},
                                                   {-1.0 / l0, rise, 0},
                                                   {-1.0 / l0, rise - 1.0, 0}}},
                                      rate, transform);
      break;
    case ClosedKind::Linear:
      kernel.body_ = make_closed_body(
          GaussianSum{h, {{1.0 / l0, rise, 1}, {-1.0 / l0, fall, 1}}}, rate, transform);
      break;
    case ClosedKind::None:
      kernel.body_ = make_numeric_body(rate, h, opts, transform, x1 - 2.0 - 10.0 * h,
                                       b + 2.0 + 10.0 * h);
      break;
  }
  return kernel;
}

}  // namespace isq
