#include <doctest.h>

#include <cmath>
#include <sstream>

#include "isq/experiment.hpp"

using isq::ExperimentSpec;

namespace {

ExperimentSpec tiny_spec() {
  nlohmann::json j = {
      {"scenario", "tiny"},
      {"rate", {{"kind", "constant"}, {"lambda0", 4.0}}},
      {"service", {{"kind", "exponential"}, {"rate", 1.0}}},
      {"n", 6},
      {"T", 12.0},
      {"replications", 6},
      {"seed", 555},
      {"estimator",
       {{"target", "G"}, {"x0", {1.0}}, {"adaptive", {{"h_min", 0.2}, {"alpha", 0.5}}}}}};
  return ExperimentSpec::from_json(j);
}

std::string csv_without_seconds(const std::vector<isq::RunRecord>& records) {
  std::ostringstream os;
  isq::write_records_csv(os, records);
  std::istringstream is(os.str());
  std::ostringstream trimmed;
  std::string line;
  while (std::getline(is, line)) {
    const auto cut = line.rfind(',');
    trimmed << line.substr(0, cut) << '\n';
  }
  return trimmed.str();
}

}  // namespace

TEST_CASE("specs load from config files") {
  const ExperimentSpec spec =
      ExperimentSpec::from_file(std::string(ISQEST_TEST_DATA_DIR) + "/sample_config.json");
  CHECK(spec.scenario == "demo_constant");
  CHECK(spec.n == 25);
  CHECK(std::get<isq::GTarget>(spec.target).x0s.size() == 2);
  CHECK_THROWS_AS(ExperimentSpec::from_file("/nonexistent/config.json"), std::invalid_argument);
}

TEST_CASE("presets parse and round-trip through json") {
  for (const std::string name : {"case1a", "case1b", "case2a", "case2b"}) {
    const ExperimentSpec spec = ExperimentSpec::preset(name);
    CHECK(spec.scenario == name);
    const ExperimentSpec again = ExperimentSpec::from_json(spec.to_json());
    CHECK(again.to_json() == spec.to_json());
  }
  CHECK_THROWS_AS(ExperimentSpec::preset("case9z"), std::invalid_argument);
}

TEST_CASE("config errors name the offending field") {
  nlohmann::json j = tiny_spec().to_json();
  j.erase("rate");
  CHECK_THROWS_WITH_AS(ExperimentSpec::from_json(j), doctest::Contains("rate"),
                       std::invalid_argument);

  nlohmann::json bad_rate = tiny_spec().to_json();
  bad_rate["rate"] = {{"kind", "constant"}};
  CHECK_THROWS_WITH_AS(ExperimentSpec::from_json(bad_rate), doctest::Contains("lambda0"),
                       std::invalid_argument);

  nlohmann::json bad_kind = tiny_spec().to_json();
  bad_kind["service"]["kind"] = "pareto";
  CHECK_THROWS_WITH_AS(ExperimentSpec::from_json(bad_kind), doctest::Contains("pareto"),
                       std::invalid_argument);
}

TEST_CASE("single-replication run produces one record per target") {
  nlohmann::json j = tiny_spec().to_json();
  j["replications"] = 1;
  j["n"] = 1;
  j["estimator"]["x0"] = {0.8};
  j["estimator"].erase("adaptive");
  j["estimator"]["h"] = 0.4;  // adaptive selection needs n >= 2 for the variance
  const auto result = isq::run(ExperimentSpec::from_json(j));
  REQUIRE(result.records.size() == 1);
  const auto& rec = result.records.front();
  CHECK(rec.target == "1-G(0.8)");
  CHECK(rec.truth == doctest::Approx(std::exp(-0.8)));
  REQUIRE(result.summary.targets.size() == 1);
  CHECK(result.summary.targets[0].rmse ==
        doctest::Approx(std::abs(rec.estimate - rec.truth)).epsilon(1e-12));
}

TEST_CASE("runs are deterministic across repeats and thread counts") {
  const ExperimentSpec spec = tiny_spec();
  const auto a = isq::run(spec, 1);
  const auto b = isq::run(spec, 1);
  const auto c = isq::run(spec, 4);

  REQUIRE(a.records.size() == b.records.size());
  REQUIRE(a.records.size() == c.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    CHECK(a.records[i].estimate == b.records[i].estimate);
    CHECK(a.records[i].estimate == c.records[i].estimate);
    CHECK(a.records[i].tuning == c.records[i].tuning);
  }
  CHECK(csv_without_seconds(a.records) == csv_without_seconds(c.records));
  CHECK(isq::summary_to_json(a.summary).dump() == isq::summary_to_json(c.summary).dump());
}

TEST_CASE("summary recomputed from the csv matches the emitted json") {
  const auto result = isq::run(tiny_spec(), 2);
  std::ostringstream csv;
  isq::write_records_csv(csv, result.records);
  std::istringstream csv_in(csv.str());
  const auto reread = isq::read_records_csv(csv_in);
  const auto summary2 = isq::summarize("tiny", reread);
  REQUIRE(summary2.targets.size() == result.summary.targets.size());
  for (std::size_t i = 0; i < summary2.targets.size(); ++i) {
    CHECK(std::abs(summary2.targets[i].mean - result.summary.targets[i].mean) <= 1e-12);
    CHECK(std::abs(summary2.targets[i].sd - result.summary.targets[i].sd) <= 1e-12);
    CHECK(std::abs(summary2.targets[i].rmse - result.summary.targets[i].rmse) <= 1e-12);
  }
}

TEST_CASE("rmse curve") {
  nlohmann::json j = tiny_spec().to_json();
  j["replications"] = 3;
  const ExperimentSpec spec = ExperimentSpec::from_json(j);

  const auto single = isq::rmse_vs_n(spec, {4});
  REQUIRE(single.size() == 1);
  CHECK(single[0].first == 4);
  CHECK(single[0].second.targets.size() == 1);

  CHECK_THROWS_AS(isq::rmse_vs_n(spec, {8, 4}), std::invalid_argument);
}

TEST_CASE("estimates serialise to json records") {
  const isq::DistEstimate d{1.0, 0.25, 0.63, 4e-4};
  const auto jd = isq::estimate_to_json(d);
  CHECK(jd.at("x0") == 1.0);
  CHECK(jd.at("h") == 0.25);
  CHECK(jd.at("value") == 0.63);
  CHECK(jd.at("variance") == 4e-4);

  const isq::MeanEstimate mu{25.0, 1.01};
  const auto jm = isq::estimate_to_json(mu);
  CHECK(jm.at("b") == 25.0);
  CHECK(jm.at("value") == 1.01);
}

TEST_CASE("mu-target spec with the closed high/low estimator") {
  nlohmann::json j = {
      {"scenario", "mini2b"},
      {"rate", {{"kind", "highlow"}, {"lambda0", 1.0}, {"lambda1", 0.0}}},
      {"service", {{"kind", "uniform"}, {"lo", 0.0}, {"hi", 2.0}}},
      {"n", 1},
      {"T", 30.0},
      {"replications", 40},
      {"seed", 9},
      {"estimator", {{"target", "mu"}, {"method", "closed_highlow"}, {"b", 25.0}}}};
  const auto result = isq::run(ExperimentSpec::from_json(j), 2);
  REQUIRE(result.summary.targets.size() == 1);
  CHECK(result.summary.targets[0].target == "mu");
  for (const auto& rec : result.records) {
    CHECK(rec.truth == doctest::Approx(1.0));
    CHECK(rec.estimate == doctest::Approx(std::round(rec.estimate)));  // integer counts
  }
}
