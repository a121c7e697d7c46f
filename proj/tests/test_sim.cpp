#include <doctest.h>

#include <cmath>
#include <numbers>

#include "isq/kernels.hpp"
#include "isq/oracle.hpp"
#include "isq/sim.hpp"
#include "test_util.hpp"

using isq::QueuePath;

TEST_CASE("thinning reproduces the arrival intensity") {
  const isq::RateModel rate = isq::make_sinusoidal(10.0, 1.0, true);
  const double T = 2.0 * std::numbers::pi;
  isq::Rng rng(101);
  std::vector<double> counts(10000);
  for (auto& c : counts) {
    const auto arrivals = isq::simulate_arrivals(rate, T, rng);
    c = static_cast<double>(arrivals.size());
    for (std::size_t i = 1; i < arrivals.size(); ++i) CHECK(arrivals[i] >= arrivals[i - 1]);
    if (!arrivals.empty()) {
      CHECK(arrivals.front() >= 0.0);
      CHECK(arrivals.back() <= T);
    }
  }
  // integral of 10(1+cos t) over a full period is 20*pi
  const double target = 20.0 * std::numbers::pi;
  CHECK(std::abs(testutil::mean(counts) - target) <= 4.0 * testutil::standard_error(counts));
}

TEST_CASE("zero-horizon simulation is empty") {
  isq::Rng rng(7);
  CHECK(isq::simulate_arrivals(isq::make_constant(10.0, 0.0), 0.0, rng).empty());
}

TEST_CASE("homogeneous counts pass a Poisson goodness-of-fit test") {
  const isq::RateModel rate = isq::make_constant(10.0, 0.0);
  isq::Rng rng(55);
  std::vector<int> counts(10000);
  for (auto& c : counts)
    c = static_cast<int>(isq::simulate_arrivals(rate, 1.0, rng).size());
  const auto [stat, df] = testutil::poisson_chi2(counts, 10.0);
  CHECK(stat <= testutil::chi2_quantile(df, 0.99));
}

TEST_CASE("queue path construction") {
  isq::Rng rng(11);
  const isq::ServiceModel det2 = isq::make_deterministic_service(2.0);

  SUBCASE("no arrivals") {
    const QueuePath p = isq::build_queue_path({}, det2, 5.0, rng);
    CHECK(p.epochs.empty());
    for (double t : {0.0, 2.5, 5.0}) CHECK(p.at(t) == 0);
  }

  SUBCASE("single deterministic job") {
    const QueuePath p = isq::build_queue_path({1.0}, det2, 5.0, rng);
    REQUIRE(p.epochs.size() == 2);
    CHECK(p.epochs[0] == 1.0);
    CHECK(p.epochs[1] == 3.0);
    CHECK(p.at(0.999) == 0);
    CHECK(p.at(1.0) == 1);
    CHECK(p.at(2.999) == 1);
    CHECK(p.at(3.0) == 0);
  }

  SUBCASE("departures beyond the horizon are dropped") {
    const QueuePath p = isq::build_queue_path({4.5}, det2, 5.0, rng);
    REQUIRE(p.epochs.size() == 1);
    CHECK(p.at(5.0) == 1);
  }
}

TEST_CASE("mean queue length matches the convolution formula") {
  const isq::RateModel rate = isq::make_constant(10.0, 0.0);
  const isq::ServiceModel service = isq::make_exponential_service(1.0);
  isq::Rng rng(202);
  std::vector<double> at5(10000);
  for (auto& v : at5) {
    const auto arrivals = isq::simulate_arrivals(rate, 5.0, rng);
    v = isq::build_queue_path(arrivals, service, 5.0, rng).at(5.0);
  }
  const double target = 10.0 * (1.0 - std::exp(-5.0));  // H(5)
  CHECK(std::abs(testutil::mean(at5) - target) <= 4.0 * testutil::standard_error(at5));
}

TEST_CASE("path integrals") {
  QueuePath p;
  p.horizon = 5.0;

  SUBCASE("empty path integrates to zero") {
    const isq::Weight one{[](double) { return 1.0; }, nullptr};
    CHECK(isq::path_integral(p, one, 0.0, 5.0) == 0.0);
  }

  p.epochs = {1.0, 3.0};
  p.counts = {1, 0};

  SUBCASE("unit weight measures occupation time") {
    const isq::Weight one{[](double) { return 1.0; }, nullptr};
    CHECK(isq::path_integral(p, one, 0.0, 5.0) == doctest::Approx(2.0).epsilon(1e-12));
  }

  SUBCASE("exact antiderivative is used when present") {
    const isq::Weight w{[](double t) { return t; }, [](double t) { return 0.5 * t * t; }};
    CHECK(isq::path_integral(p, w, 0.0, 5.0) == doctest::Approx(4.0).epsilon(1e-12));
  }

  SUBCASE("quadrature fallback handles smooth weights") {
    const isq::Weight w{[](double t) { return t * t; }, nullptr};
    CHECK(isq::path_integral(p, w, 0.0, 5.0) == doctest::Approx(26.0 / 3.0).epsilon(1e-10));
  }

  SUBCASE("kernel weight integrates through its exact antiderivative") {
    isq::QueuePath busy;
    busy.horizon = 10.0;
    busy.epochs = {0.0};
    busy.counts = {1};
    const auto L = isq::make_L(isq::make_constant(1.0, 0.0), 1.0);
    const double v = isq::path_integral(busy, L.weight(0.0), 0.0, 10.0);
    const double expected = (1.0 - std::exp(-50.0)) / std::sqrt(2.0 * std::numbers::pi);
    CHECK(v == doctest::Approx(expected).epsilon(1e-12));  // ~0.39894
  }

  SUBCASE("range checks") {
    const isq::Weight one{[](double) { return 1.0; }, nullptr};
    CHECK_THROWS_AS(isq::path_integral(p, one, -1.0, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(isq::path_integral(p, one, 0.0, 6.0), std::invalid_argument);
    CHECK_THROWS_AS(isq::path_integral(p, one, 3.0, 2.0), std::invalid_argument);
  }
}

TEST_CASE("grid sampling") {
  QueuePath p;
  p.horizon = 5.0;
  p.epochs = {1.0, 3.0};
  p.counts = {1, 0};

  const std::vector<int> v = isq::sample_on_grid(p, isq::Grid(1.0, 5));
  CHECK(v == std::vector<int>{0, 1, 1, 0, 0, 0});

  CHECK_THROWS_AS(isq::sample_on_grid(p, isq::Grid(1.0, 6)), std::invalid_argument);

  SUBCASE("agrees with direct queries on a random path") {
    isq::Rng rng(42);
    const auto arrivals = isq::simulate_arrivals(isq::make_constant(6.0, 0.0), 5.0, rng);
    const QueuePath q =
        isq::build_queue_path(arrivals, isq::make_exponential_service(1.0), 5.0, rng);
    const isq::Grid grid(0.25, 20);
    const auto samples = isq::sample_on_grid(q, grid);
    for (std::size_t i = 0; i < samples.size(); ++i) CHECK(samples[i] == q.at(grid.point(i)));
  }
}

TEST_CASE("counts at a fixed time are Poisson for every built-in pair") {
  const std::vector<isq::RateModel> rates = {
      isq::make_constant(5.0, 0.0),       isq::make_polynomial(10.0, 1.0),
      isq::make_sinusoidal(2.0, 1.0),     isq::make_sinusoidal(10.0, 1.0, true),
      isq::make_exponential(1.0, 1.0),    isq::make_highlow(4.0, 0.0)};
  const std::vector<isq::ServiceModel> services = {isq::make_exponential_service(1.0),
                                                   isq::make_uniform_service(0.0, 2.0),
                                                   isq::make_deterministic_service(1.5)};
  const double t_star = 2.0;
  unsigned seed = 900;
  for (const auto& rate : rates) {
    for (const auto& service : services) {
      const isq::TheoryContext ctx{rate, service};
      const double mu = ctx.H(t_star);
      isq::Rng rng(seed++);
      std::vector<int> counts(10000);
      for (auto& c : counts) {
        const auto arrivals = isq::simulate_arrivals(rate, t_star, rng);
        c = isq::build_queue_path(arrivals, service, t_star, rng).at(t_star);
      }
      const auto [stat, df] = testutil::poisson_chi2(counts, mu);
      INFO("rate ", rate.label(), " service ", service.label());
      CHECK(stat <= testutil::chi2_quantile(df, 0.99));
    }
  }
}

TEST_CASE("count covariance matches the overlap integral") {
  struct Pair {
    isq::RateModel rate;
    isq::ServiceModel service;
  };
  const std::vector<Pair> pairs = {{isq::make_constant(5.0, 0.0),
                                    isq::make_exponential_service(1.0)},
                                   {isq::make_highlow(4.0, 0.0),
                                    isq::make_uniform_service(0.0, 2.0)}};
  const std::vector<std::pair<double, double>> times = {{1.0, 2.0}, {2.0, 4.0}, {0.5, 0.5}};
  unsigned seed = 1200;
  for (const auto& [rate, service] : pairs) {
    const isq::TheoryContext ctx{rate, service};
    isq::Rng rng(seed++);
    const int reps = 100000;
    std::vector<std::vector<double>> xs(times.size()), ys(times.size());
    for (int r = 0; r < reps; ++r) {
      const auto arrivals = isq::simulate_arrivals(rate, 4.0, rng);
      const auto path = isq::build_queue_path(arrivals, service, 4.0, rng);
      for (std::size_t k = 0; k < times.size(); ++k) {
        xs[k].push_back(path.at(times[k].first));
        ys[k].push_back(path.at(times[k].second));
      }
    }
    for (std::size_t k = 0; k < times.size(); ++k) {
      const double mx = testutil::mean(xs[k]);
      const double my = testutil::mean(ys[k]);
      std::vector<double> prod(xs[k].size());
      for (std::size_t i = 0; i < prod.size(); ++i)
        prod[i] = (xs[k][i] - mx) * (ys[k][i] - my);
      const double cov_hat = testutil::mean(prod);
      const double se = testutil::standard_error(prod);
      const double cov_true = ctx.cov(times[k].first, times[k].second);
      INFO("rate ", rate.label(), " t1 ", times[k].first, " t2 ", times[k].second);
      CHECK(std::abs(cov_hat - cov_true) <= 5.0 * se);
    }
  }
}

TEST_CASE("identical seeds give identical paths") {
  const isq::RateModel rate = isq::make_sinusoidal(5.0, 1.0);
  const isq::ServiceModel service = isq::make_exponential_service(0.7);
  auto simulate = [&]() {
    isq::Rng rng = isq::Rng::stream(12345, 3);
    const auto arrivals = isq::simulate_arrivals(rate, 10.0, rng);
    return isq::build_queue_path(arrivals, service, 10.0, rng);
  };
  const QueuePath a = simulate();
  const QueuePath b = simulate();
  CHECK(a.epochs == b.epochs);
  CHECK(a.counts == b.counts);
}
