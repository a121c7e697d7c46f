// Acceptance gates: reproduces the simulation cases and numeric guarantees
// end to end, one PASS/FAIL line per criterion.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <numbers>
#include <string>
#include <thread>
#include <vector>

#include "isq/experiment.hpp"
#include "isq/oracle.hpp"
#include "isq/quadrature.hpp"
#include "isq/rng.hpp"
#include "isq/sim.hpp"

namespace {

int g_failures = 0;
std::chrono::steady_clock::time_point g_last = std::chrono::steady_clock::now();

void report(int id, const std::string& what, bool ok, const std::string& detail) {
  const auto now = std::chrono::steady_clock::now();
  const double secs = std::chrono::duration<double>(now - g_last).count();
  g_last = now;
  std::printf("%s criterion %d (%s): %s [%.1fs]\n", ok ? "PASS" : "FAIL", id, what.c_str(),
              detail.c_str(), secs);
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), pattern, a, b, c);
  return buf;
}

const isq::TargetSummary& target_of(const isq::SummaryReport& summary, const std::string& name) {
  for (const auto& t : summary.targets)
    if (t.target == name) return t;
  throw std::runtime_error("missing target " + name);
}

// ---- cases 1a-2b -----------------------------------------------------------

void criterion_1_case1a() {
  nlohmann::json j = isq::ExperimentSpec::preset("case1a").to_json();
  j["estimator"]["x0"] = {1.0};
  const auto result = isq::run(isq::ExperimentSpec::from_json(j), 0);
  const auto& t = target_of(result.summary, "1-G(1)");
  const bool ok = t.mean >= 0.34 && t.mean <= 0.39 && t.sd >= 0.01 && t.sd <= 0.05;
  report(1, "case 1a survival at x0=1", ok,
         fmt("mean=%.4f in [0.34,0.39], sd=%.4f in [0.01,0.05]", t.mean, t.sd));
}

void criterion_2_case1b() {
  const auto result = isq::run(isq::ExperimentSpec::preset("case1b"), 0);
  const auto& t = target_of(result.summary, "1-G(1)");
  const bool ok = t.mean >= 0.25 && t.mean <= 0.50 && t.sd <= 0.6;
  report(2, "case 1b survival at x0=1", ok,
         fmt("mean=%.4f in [0.25,0.50], sd=%.4f <= 0.6", t.mean, t.sd));
}

void criterion_3_case2a() {
  const auto result = isq::run(isq::ExperimentSpec::preset("case2a"), 0);
  const auto& t = target_of(result.summary, "mu");
  const bool ok = t.mean >= 0.93 && t.mean <= 1.13 && t.sd >= 0.55 && t.sd <= 0.95;
  report(3, "case 2a mean service time", ok,
         fmt("mean=%.4f in [0.93,1.13], sd=%.4f in [0.55,0.95]", t.mean, t.sd));
}

void criterion_4_case2b() {
  const auto result = isq::run(isq::ExperimentSpec::preset("case2b"), 0);
  const auto& t = target_of(result.summary, "mu");
  const bool ok = t.mean >= 0.97 && t.mean <= 1.03 && t.sd >= 0.85 && t.sd <= 1.15;
  report(4, "case 2b closed-form mean", ok,
         fmt("mean=%.4f in [0.97,1.03], sd=%.4f in [0.85,1.15]", t.mean, t.sd));
}

// ---- oracle agreement ------------------------------------------------------

struct PairSample {
  std::vector<std::vector<double>> at;  // [time index][replication]
};

PairSample simulate_counts(const isq::RateModel& rate, const isq::ServiceModel& service,
                           const std::vector<double>& times, double T, int reps,
                           std::uint64_t seed) {
  PairSample s;
  s.at.resize(times.size());
  for (auto& v : s.at) v.reserve(static_cast<std::size_t>(reps));
  isq::Rng rng(seed);
  for (int r = 0; r < reps; ++r) {
    const auto arrivals = isq::simulate_arrivals(rate, T, rng);
    const auto path = isq::build_queue_path(arrivals, service, T, rng);
    for (std::size_t k = 0; k < times.size(); ++k)
      s.at[k].push_back(path.at(times[k]));
  }
  return s;
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double se_of(const std::vector<double>& v) {
  const double m = mean_of(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / (static_cast<double>(v.size()) - 1.0) /
                   static_cast<double>(v.size()));
}

void criterion_5_moments() {
  struct Pair {
    isq::RateModel rate;
    isq::ServiceModel service;
    const char* name;
  };
  const std::vector<Pair> pairs = {
      {isq::make_constant(5.0, 0.0), isq::make_exponential_service(1.0), "constant/exp"},
      {isq::make_highlow(4.0, 0.0), isq::make_uniform_service(0.0, 2.0), "highlow/uniform"}};
  const std::vector<double> times = {0.5, 1.0, 2.0, 4.0};
  const std::vector<std::pair<int, int>> cov_pairs = {{1, 2}, {2, 3}, {0, 0}};  // indices

  bool ok = true;
  std::string detail;
  std::uint64_t seed = 60001;
  for (const auto& pr : pairs) {
    const isq::TheoryContext ctx{pr.rate, pr.service};
    const PairSample s = simulate_counts(pr.rate, pr.service, times, 4.0, 100000, seed++);
    for (std::size_t k = 0; k < times.size(); ++k) {
      const double gap = std::abs(mean_of(s.at[k]) - ctx.H(times[k]));
      if (gap > 4.0 * se_of(s.at[k])) {
        ok = false;
        detail += fmt(" mean@t=%.1f off by %.4f(>4SE)", times[k], gap);
      }
    }
    for (const auto& [i, jdx] : cov_pairs) {
      const double mi = mean_of(s.at[i]);
      const double mj = mean_of(s.at[jdx]);
      std::vector<double> prod(s.at[i].size());
      for (std::size_t r = 0; r < prod.size(); ++r)
        prod[r] = (s.at[i][r] - mi) * (s.at[jdx][r] - mj);
      const double gap = std::abs(mean_of(prod) - ctx.cov(times[i], times[jdx]));
      if (gap > 5.0 * se_of(prod)) {
        ok = false;
        detail += fmt(" cov(%.1f,%.1f) beyond 5SE", times[i], times[jdx]);
      }
    }
  }
  if (detail.empty()) detail = "means within 4SE, covariances within 5SE (1e5 reps, 2 pairs)";
  report(5, "simulator matches H and cov", ok, detail);
}

void criterion_6_log_mgf() {
  struct Config {
    isq::RateModel rate;
    isq::ServiceModel service;
  };
  const std::vector<Config> configs = {
      {isq::make_constant(5.0, 0.0), isq::make_exponential_service(1.0)},
      {isq::make_highlow(4.0, 0.0), isq::make_uniform_service(0.0, 2.0)}};
  const std::vector<std::pair<double, double>> thetas = {{0.3, 0.2}, {-0.5, 0.4}};
  const int reps = 1000000;

  bool ok = true;
  std::string detail;
  std::uint64_t seed = 61001;
  for (const auto& cf : configs) {
    const isq::TheoryContext ctx{cf.rate, cf.service};
    const PairSample s = simulate_counts(cf.rate, cf.service, {1.0, 2.0}, 2.0, reps, seed++);
    for (const auto& [th1, th2] : thetas) {
      std::vector<double> y(static_cast<std::size_t>(reps));
      for (int r = 0; r < reps; ++r)
        y[static_cast<std::size_t>(r)] = std::exp(th1 * s.at[0][r] + th2 * s.at[1][r]);

      // bootstrap the log of the sample mean (200 resamples)
      isq::Rng boot(seed * 33 + 7);
      std::vector<double> log_means(200);
      for (auto& lm : log_means) {
        double acc = 0.0;
        for (int r = 0; r < reps; ++r)
          acc += y[boot.next_u64() % static_cast<std::uint64_t>(reps)];
        lm = std::log(acc / reps);
      }
      const double se_boot = [&] {
        const double m = mean_of(log_means);
        double ss = 0.0;
        for (double v : log_means) ss += (v - m) * (v - m);
        return std::sqrt(ss / (log_means.size() - 1.0));
      }();

      const double empirical = std::log(mean_of(y));
      const double target = ctx.joint_log_mgf({1.0, 2.0}, {th1, th2});
      if (std::abs(empirical - target) > 4.0 * se_boot) {
        ok = false;
        detail += fmt(" theta(%.1f,%.1f) gap %.5f > 4 bootstrap SE", th1, th2,
                      std::abs(empirical - target));
      }
    }
  }
  if (detail.empty()) detail = "two-point log-MGF within 4 bootstrap SE (1e6 paths, 2 configs)";
  report(6, "log-MGF formula matches simulation", ok, detail);
}

// ---- numerics --------------------------------------------------------------

void criterion_7_numerics() {
  const std::vector<isq::RateModel> rates = {isq::make_constant(1.0, 0.0),
                                             isq::make_highlow(1.0, 0.0),
                                             isq::make_polynomial(1.0, 1.0)};
  std::vector<double> ts;
  for (double t = -5.0; t <= 5.0 + 1e-9; t += 0.05) ts.push_back(t);

  double worst_inv = 0.0;
  for (const auto& rate : rates) {
    for (double h : {0.25, 0.5, 1.0}) {
      const auto closed = isq::make_L(rate, h);
      const isq::BromwichConfig cfg = isq::choose_config(-rate.sigma_lambda(),
                                                         isq::StripSide::Left);
      const auto numeric = isq::invert_grid([&](std::complex<double> z) {
        return closed.laplace(z);
      }, ts, cfg);
      for (std::size_t i = 0; i < ts.size(); ++i)
        worst_inv = std::max(worst_inv, std::abs(numeric[i] - closed.eval(ts[i])));
    }
  }

  double worst_fd = 0.0;
  const double d = 1e-4;
  auto probe_fd = [&](auto&& kernel, double lo, double hi) {
    for (double t = lo; t <= hi; t += 0.05) {
      const double fd = (kernel.integral(0.0, t + d) - kernel.integral(0.0, t - d)) / (2.0 * d);
      worst_fd = std::max(worst_fd, std::abs(fd - kernel.eval(t)));
    }
  };
  for (double h : {0.4, 0.7, 1.0}) {
    for (const auto& rate : rates) {
      probe_fd(isq::make_L(rate, h), -4.0, 4.0);
      probe_fd(isq::make_J(rate, 2.0, h), -4.0, 6.0);
    }
  }

  const bool ok = worst_inv <= 1e-3 && worst_fd <= 1e-6;
  report(7, "Durbin inversion and antiderivatives", ok,
         fmt("sup inversion error %.2e <= 1e-3, sup FD error %.2e <= 1e-6", worst_inv,
             worst_fd));
}

void criterion_8_kernel_identity() {
  const isq::RateModel rate = isq::make_constant(2.0, 0.0);
  const isq::ServiceModel service = isq::make_exponential_service(1.0);
  const isq::TheoryContext ctx{rate, service};
  const double x0 = 1.0;
  double worst = 0.0;
  for (double h : {0.25, 0.5}) {
    const auto L = isq::make_L(rate, h);
    std::vector<double> breaks;
    for (int k = -4; k <= 4; ++k) breaks.push_back(x0 + k * h);
    const double lhs = isq::integrate_with_breaks(
        [&](double t) { return L.eval(t - x0) * ctx.H(t); }, 0.0, x0 + 12.0 * h + 12.0, breaks,
        1e-8);
    const double rhs = isq::integrate(
        [&](double x) { return isq::GaussianKernel::k((x - x0) / h) / h * service.survival(x); },
        std::max(0.0, x0 - 12.0 * h), x0 + 12.0 * h, 1e-10);
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  report(8, "kernel identity for H vs smoothed survival", worst <= 1e-3,
         fmt("max |LHS - RHS| = %.2e <= 1e-3 at h in {0.25, 0.5}", worst));
}

void criterion_9_rmse_trend() {
  nlohmann::json j = isq::ExperimentSpec::preset("case1a").to_json();
  j["estimator"]["x0"] = {1.0};
  const auto spec = isq::ExperimentSpec::from_json(j);
  const auto curve = isq::rmse_vs_n(spec, {25, 50, 100, 200}, 0);

  std::vector<double> rmse;
  std::string shown = "rmse:";
  for (const auto& [n, summary] : curve) {
    rmse.push_back(target_of(summary, "1-G(1)").rmse);
    shown += fmt(" %.4f", rmse.back());
  }
  int inversions = 0;
  for (std::size_t i = 1; i < rmse.size(); ++i)
    if (rmse[i] >= rmse[i - 1]) ++inversions;
  const bool ok = inversions <= 1 && rmse.back() < rmse.front();
  report(9, "RMSE improves from n=25 to n=200", ok,
         shown + fmt(" (inversions %.0f <= 1)", static_cast<double>(inversions)));
}

}  // namespace

int main() {
  std::printf("acceptance suite: %u hardware threads\n",
              std::max(1u, std::thread::hardware_concurrency()));
  criterion_7_numerics();
  criterion_8_kernel_identity();
  criterion_5_moments();
  criterion_6_log_mgf();
  criterion_4_case2b();
  criterion_3_case2a();
  criterion_2_case1b();
  criterion_1_case1a();
  criterion_9_rmse_trend();
  if (g_failures == 0) {
    std::printf("all acceptance criteria passed\n");
    return 0;
  }
  std::printf("%d acceptance criteria FAILED\n", g_failures);
  return 1;
}
