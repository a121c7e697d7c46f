#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "isq/bromwich.hpp"
#include "isq/estimators.hpp"
#include "isq/kernels.hpp"
#include "isq/rates.hpp"
#include "isq/service.hpp"

namespace isq {

RateModel rate_from_json(const nlohmann::json& j);
ServiceModel service_from_json(const nlohmann::json& j);

struct AdaptiveParams {
  double h_min = 0.025;
  double alpha = 0.25;
  int max_steps = -1;  // auto: largest i with h_i <= x0
};

// Distribution target: estimate G at each x0, with a fixed bandwidth or the
// adaptive selector.
struct GTarget {
  std::vector<double> x0s;
  std::optional<double> fixed_h;
  AdaptiveParams adaptive;
};

enum class MuMethod { Kernel, ClosedConstant, ClosedHighLow };

struct MuTarget {
  MuMethod method = MuMethod::Kernel;
  double b = 25.0;
  double h = 0.08;
  double x1 = 0.0;
};

struct ExperimentSpec {
  std::string scenario;
  nlohmann::json rate;
  nlohmann::json service;
  int n = 1;                 // paths per estimate
  double T = 30.0;           // observation horizon
  int replications = 1;      // independent estimates
  std::uint64_t seed = 1;
  std::variant<GTarget, MuTarget> target;
  std::optional<BromwichConfig> bromwich;  // numeric-kernel override

  static ExperimentSpec from_json(const nlohmann::json& j);
  static ExperimentSpec from_file(const std::string& path);
  static ExperimentSpec preset(const std::string& name);  // case1a/1b/2a/2b
  nlohmann::json to_json() const;
};

struct RunRecord {
  std::string scenario;
  int rep = 0;
  std::string target;   // "1-G(x0)" or "mu"
  double estimate = 0.0;
  double truth = 0.0;
  double tuning = 0.0;  // h used (G targets) or b (mu targets)
  double seconds = 0.0;
};

struct TargetSummary {
  std::string target;
  double mean = 0.0;
  double sd = 0.0;
  double rmse = 0.0;
  int n_reps = 0;
};

struct SummaryReport {
  std::string scenario;
  std::vector<TargetSummary> targets;
};

struct RunResult {
  std::vector<RunRecord> records;
  SummaryReport summary;
};

// Runs the scenario: per replication, simulate n paths and evaluate every
// target. Deterministic given (spec, seed), independent of the thread count.
RunResult run(const ExperimentSpec& spec, int threads = 1);

// Re-runs the scenario with each n in n_list; one SummaryReport per n.
std::vector<std::pair<int, SummaryReport>> rmse_vs_n(const ExperimentSpec& spec,
                                                     const std::vector<int>& n_list,
                                                     int threads = 1);

void write_records_csv(std::ostream& out, const std::vector<RunRecord>& records);
std::vector<RunRecord> read_records_csv(std::istream& in);
nlohmann::json summary_to_json(const SummaryReport& summary);
SummaryReport summarize(const std::string& scenario, const std::vector<RunRecord>& records);

// JSON records {x0, h, value, variance} and {b, value}.
nlohmann::json estimate_to_json(const DistEstimate& est);
nlohmann::json estimate_to_json(const MeanEstimate& est);

// The L_h kernels a G-target scenario uses (grid of the largest x0), and the
// J kernel of a mu scenario; exposed for kernel dumps and the CLI.
std::vector<DeconvKernelL> build_L_grid(const ExperimentSpec& spec);
MeanKernelJ build_J(const ExperimentSpec& spec);

}  // namespace isq
