#include "isq/sim.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "isq/quadrature.hpp"

namespace isq {

int QueuePath::at(double t) const {
  auto it = std::upper_bound(epochs.begin(), epochs.end(), t);
  if (it == epochs.begin()) return 0;
  return counts[static_cast<std::size_t>(it - epochs.begin()) - 1];
}

Grid::Grid(double step_, std::size_t n_, double start_) : step(step_), n(n_), start(start_) {
  if (!(step > 0.0)) throw std::invalid_argument("Grid: step must be > 0");
  if (start < 0.0) throw std::invalid_argument("Grid: start must be >= 0");
}

std::vector<double> simulate_arrivals(const RateModel& rate, double T, Rng& rng) {
  if (T < 0.0) throw std::invalid_argument("simulate_arrivals: T must be >= 0");
  std::vector<double> arrivals;
  double w0 = 0.0;
  while (w0 < T) {
    const double w1 = std::min(w0 + 1.0, T);
    const double cap = rate.sup_bound(w0, w1);
    if (!std::isfinite(cap))
      throw std::runtime_error("simulate_arrivals: unbounded rate majorant on [" +
                               std::to_string(w0) + "," + std::to_string(w1) + "]");
    if (cap > 0.0) {
      double t = w0;
      for (;;) {
        t += rng.exponential(cap);
        if (t >= w1) break;
        if (rng.uniform01() * cap < rate.eval(t)) arrivals.push_back(t);
      }
    }
    w0 = w1;
  }
  return arrivals;
}

QueuePath build_queue_path(const std::vector<double>& arrivals, const ServiceModel& service,
                           double T, Rng& rng) {
  struct Event {
    double t;
    int delta;
  };
  std::vector<Event> events;
  events.reserve(2 * arrivals.size());
  for (double a : arrivals) {
    if (a < 0.0 || a > T) throw std::invalid_argument("build_queue_path: arrival outside [0,T]");
    events.push_back({a, +1});
    const double dep = a + service.sample(rng);
    if (dep <= T) events.push_back({dep, -1});
  }
  std::sort(events.begin(), events.end(),
            [](const Event& x, const Event& y) { return x.t < y.t; });

  QueuePath path;
  path.horizon = T;
  int level = 0;
  std::size_t i = 0;
  while (i < events.size()) {
    const double t = events[i].t;
    int delta = 0;
    while (i < events.size() && events[i].t == t) {
      delta += events[i].delta;
      ++i;
    }
    if (delta == 0) continue;  // merged simultaneous events may cancel
    level += delta;
    path.epochs.push_back(t);
    path.counts.push_back(level);
  }
  return path;
}

double path_integral(const QueuePath& path, const Weight& f, double a, double b) {
  if (a > b || a < 0.0 || b > path.horizon + 1e-12)
    throw std::invalid_argument("path_integral: need 0 <= a <= b <= horizon");
  if (path.epochs.empty()) return 0.0;

  auto piece = [&](double lo, double hi) -> double {
    if (hi <= lo) return 0.0;
    if (f.antiderivative) return f.antiderivative(hi) - f.antiderivative(lo);
    return fixed_simpson(f.eval, lo, hi, 64);
  };

  double total = 0.0;
  const std::size_t m = path.epochs.size();
  for (std::size_t j = 0; j < m; ++j) {
    if (path.counts[j] == 0) continue;
    const double seg_lo = std::max(path.epochs[j], a);
    const double seg_hi = std::min(j + 1 < m ? path.epochs[j + 1] : path.horizon, b);
    if (seg_hi > seg_lo) total += path.counts[j] * piece(seg_lo, seg_hi);
  }
  return total;
}

std::vector<int> sample_on_grid(const QueuePath& path, const Grid& grid) {
  if (grid.point(grid.n) > path.horizon + 1e-12)
    throw std::invalid_argument("sample_on_grid: grid exceeds path horizon");
  std::vector<int> values(grid.size());
  std::size_t j = 0;  // epochs[j] is the next epoch not yet passed
  int level = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double t = grid.point(i);
    while (j < path.epochs.size() && path.epochs[j] <= t) level = path.counts[j++];
    values[i] = level;
  }
  return values;
}

void write_path_csv(const std::string& filename, const QueuePath& path) {
  std::ofstream out(filename);
  if (!out) throw std::runtime_error("write_path_csv: cannot open " + filename);
  out << "epoch,count\n";
  out.precision(17);
  for (std::size_t j = 0; j < path.epochs.size(); ++j)
    out << path.epochs[j] << ',' << path.counts[j] << '\n';
}

}  // namespace isq
