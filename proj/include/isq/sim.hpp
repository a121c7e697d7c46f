#pragma once

#include <functional>
#include <string>
#include <vector>

#include "isq/rates.hpp"
#include "isq/rng.hpp"
#include "isq/service.hpp"

namespace isq {

// One realization of the queue-length process on [0, horizon], stored as the
// merged, strictly increasing arrival/departure epochs with the piecewise
// constant (right-continuous) counts: X(t) = counts[j] on [epochs[j], epochs[j+1]).
// X(t) = 0 before the first epoch.
struct QueuePath {
  std::vector<double> epochs;
  std::vector<int> counts;
  double horizon = 0.0;

  int at(double t) const;
};

// Uniform grid t_i = start + i * step for i = 0..n; start + n*step <= horizon.
struct Grid {
  double step = 1.0;
  std::size_t n = 0;
  double start = 0.0;

  Grid(double step_, std::size_t n_, double start_ = 0.0);
  double point(std::size_t i) const { return start + static_cast<double>(i) * step; }
  std::size_t size() const { return n + 1; }
};

// Integrand for path integrals; when `antiderivative` is set the per-segment
// integral is exact, otherwise composite Simpson with 64 panels per segment.
struct Weight {
  std::function<double(double)> eval;
  std::function<double(double)> antiderivative;
};

// Lewis-Shedler thinning with a per-window majorant (window length 1).
std::vector<double> simulate_arrivals(const RateModel& rate, double T, Rng& rng);

QueuePath build_queue_path(const std::vector<double>& arrivals, const ServiceModel& service,
                           double T, Rng& rng);

// Sum_j X(t_j) * integral of f over [t_j, t_{j+1}] clipped to [a, b]; exact in X.
double path_integral(const QueuePath& path, const Weight& f, double a, double b);

std::vector<int> sample_on_grid(const QueuePath& path, const Grid& grid);

// Debug dump, one line per epoch: "epoch,count".
void write_path_csv(const std::string& filename, const QueuePath& path);

}  // namespace isq
