#include "isq/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "isq/quadrature.hpp"

namespace isq {

double TheoryContext::H_ab(double a, double b, double t) const {
  // Gbar vanishes beyond tail_cut and lambda(t-u) vanishes for u > t.
  const double lo = std::max(a, 0.0);
  const double hi = std::min({b, service.tail_cut(), t});
  if (hi <= lo) return 0.0;

  std::vector<double> breaks = service.jump_points(lo, hi);
  for (double s : rate.jump_points(t - hi, t - lo)) breaks.push_back(t - s);

  const double value = integrate_with_breaks(
      [&](double u) { return service.survival(u) * rate.eval(t - u); }, lo, hi, breaks, tol);
  if (!std::isfinite(value)) throw std::runtime_error("oracle: divergent convolution integral");
  return value;
}

double TheoryContext::H(double t) const {
  return H_ab(0.0, std::numeric_limits<double>::infinity(), t);
}

double TheoryContext::cov(double t1, double t2) const {
  if (t1 > t2) std::swap(t1, t2);
  return H_ab(t2 - t1, std::numeric_limits<double>::infinity(), t2);
}

double TheoryContext::joint_log_mgf(const std::vector<double>& ts,
                                    const std::vector<double>& thetas) const {
  const std::size_t m = ts.size();
  if (m == 0 || thetas.size() != m)
    throw std::invalid_argument("joint_log_mgf: need matching, nonempty ts/thetas");
  for (std::size_t i = 1; i < m; ++i)
    if (!(ts[i] > ts[i - 1]))
      throw std::invalid_argument("joint_log_mgf: ts must be strictly increasing");

  double total = 0.0;
  for (std::size_t k = 0; k < m; ++k) total += std::expm1(thetas[k]) * H(ts[k]);

  // Cross terms: (e^{theta_{k+1}}-1) sum_{j=0}^{k-1} (e^{sum_{i=j+1}^k theta_i}-1)
  //              * H_{t_{k+1}-t_{j+1}, t_{k+1}-t_j}(t_{k+1}),  with t_0 = -infinity.
  // Indices below are 1-based as in the formula; ts[i-1] is t_i.
  for (std::size_t k = 1; k + 1 <= m; ++k) {
    const double tk1 = ts[k];  // t_{k+1}
    const double outer = std::expm1(thetas[k]);
    double inner = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      double theta_sum = 0.0;
      for (std::size_t i = j + 1; i <= k; ++i) theta_sum += thetas[i - 1];
      const double a = tk1 - ts[j];  // t_{k+1} - t_{j+1}
      const double b = j == 0 ? std::numeric_limits<double>::infinity() : tk1 - ts[j - 1];
      inner += std::expm1(theta_sum) * H_ab(a, b, tk1);
    }
    total += outer * inner;
  }
  return total;
}

}  // namespace isq
