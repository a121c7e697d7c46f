#include "isq/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "isq/oracle.hpp"
#include "isq/rng.hpp"
#include "isq/sim.hpp"

namespace isq {

using nlohmann::json;

namespace {

[[noreturn]] void config_error(const std::string& where, const std::string& what) {
  throw std::invalid_argument("config error at '" + where + "': " + what);
}

double need_number(const json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key)) config_error(where, "missing field '" + key + "'");
  if (!j[key].is_number()) config_error(where + "." + key, "expected a number");
  return j[key].get<double>();
}

std::string fmt_short(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

RateModel rate_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind")) config_error("rate", "missing 'kind'");
  const std::string kind = j["kind"].get<std::string>();
  if (kind == "constant")
    return make_constant(need_number(j, "lambda0", "rate"), j.value("a", 0.0));
  if (kind == "polynomial")
    return make_polynomial(need_number(j, "lambda0", "rate"), need_number(j, "p", "rate"));
  if (kind == "sinusoidal") {
    const std::string phase = j.value("phase", "sin");
    if (phase != "sin" && phase != "cos") config_error("rate.phase", "expected 'sin' or 'cos'");
    return make_sinusoidal(need_number(j, "lambda0", "rate"), need_number(j, "b", "rate"),
                           phase == "cos");
  }
  if (kind == "exponential")
    return make_exponential(need_number(j, "lambda0", "rate"), need_number(j, "theta", "rate"));
  if (kind == "highlow")
    return make_highlow(need_number(j, "lambda0", "rate"), need_number(j, "lambda1", "rate"));
  config_error("rate.kind", "unknown kind '" + kind + "'");
}

ServiceModel service_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind")) config_error("service", "missing 'kind'");
  const std::string kind = j["kind"].get<std::string>();
  if (kind == "exponential") return make_exponential_service(need_number(j, "rate", "service"));
  if (kind == "uniform")
    return make_uniform_service(need_number(j, "lo", "service"),
                                need_number(j, "hi", "service"));
  if (kind == "deterministic")
    return make_deterministic_service(need_number(j, "d", "service"));
  config_error("service.kind", "unknown kind '" + kind + "'");
}

ExperimentSpec ExperimentSpec::from_json(const json& j) {
  ExperimentSpec spec;
  if (!j.contains("scenario")) config_error("", "missing 'scenario'");
  spec.scenario = j["scenario"].get<std::string>();
  if (!j.contains("rate")) config_error(spec.scenario, "missing 'rate'");
  if (!j.contains("service")) config_error(spec.scenario, "missing 'service'");
  spec.rate = j["rate"];
  spec.service = j["service"];
  rate_from_json(spec.rate);        // validate eagerly
  service_from_json(spec.service);
  spec.n = static_cast<int>(need_number(j, "n", spec.scenario));
  spec.T = need_number(j, "T", spec.scenario);
  spec.replications = static_cast<int>(need_number(j, "replications", spec.scenario));
  if (spec.n < 1) config_error(spec.scenario + ".n", "need n >= 1");
  if (spec.replications < 1) config_error(spec.scenario + ".replications", "need >= 1");
  if (!(spec.T > 0.0)) config_error(spec.scenario + ".T", "need T > 0");
  spec.seed = j.value("seed", std::uint64_t{1});

  if (!j.contains("estimator")) config_error(spec.scenario, "missing 'estimator'");
  const json& est = j["estimator"];
  const std::string target = est.value("target", "");
  if (target == "G") {
    GTarget g;
    if (!est.contains("x0")) config_error("estimator", "G target needs 'x0' (list)");
    for (const auto& v : est["x0"]) g.x0s.push_back(v.get<double>());
    if (g.x0s.empty()) config_error("estimator.x0", "empty x0 list");
    for (double x0 : g.x0s)
      if (!(x0 > 0.0)) config_error("estimator.x0", "x0 values must be > 0");
    if (est.contains("h")) {
      g.fixed_h = est["h"].get<double>();
    } else if (est.contains("adaptive")) {
      const json& a = est["adaptive"];
      g.adaptive.h_min = need_number(a, "h_min", "estimator.adaptive");
      g.adaptive.alpha = need_number(a, "alpha", "estimator.adaptive");
      g.adaptive.max_steps = static_cast<int>(a.value("max_steps", -1.0));
    } else {
      config_error("estimator", "G target needs 'h' or 'adaptive'");
    }
    spec.target = g;
  } else if (target == "mu") {
    MuTarget mu;
    const std::string method = est.value("method", "kernel");
    if (method == "kernel")
      mu.method = MuMethod::Kernel;
    else if (method == "closed_constant")
      mu.method = MuMethod::ClosedConstant;
    else if (method == "closed_highlow")
      mu.method = MuMethod::ClosedHighLow;
    else
      config_error("estimator.method", "unknown method '" + method + "'");
    mu.b = need_number(est, "b", "estimator");
    mu.h = est.value("h", 0.08);
    mu.x1 = est.value("x1", 0.0);
    spec.target = mu;
  } else {
    config_error("estimator.target", "expected 'G' or 'mu'");
  }

  if (est.contains("bromwich")) {
    const json& bw = est["bromwich"];
    BromwichConfig cfg;
    cfg.c = need_number(bw, "c", "estimator.bromwich");
    cfg.T_tilde = need_number(bw, "T_tilde", "estimator.bromwich");
    cfg.n_max = static_cast<int>(bw.value("n_max", 20000.0));
    spec.bromwich = cfg;
  }
  return spec;
}

ExperimentSpec ExperimentSpec::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("config parse error in " + path + ": " + e.what());
  }
  return from_json(j);
}

json ExperimentSpec::to_json() const {
  json j;
  j["scenario"] = scenario;
  j["rate"] = rate;
  j["service"] = service;
  j["n"] = n;
  j["T"] = T;
  j["replications"] = replications;
  j["seed"] = seed;
  json est;
  if (const auto* g = std::get_if<GTarget>(&target)) {
    est["target"] = "G";
    est["x0"] = g->x0s;
    if (g->fixed_h) {
      est["h"] = *g->fixed_h;
    } else {
      est["adaptive"] = {{"h_min", g->adaptive.h_min},
                         {"alpha", g->adaptive.alpha},
                         {"max_steps", g->adaptive.max_steps}};
    }
  } else {
    const auto& mu = std::get<MuTarget>(target);
    est["target"] = "mu";
    est["method"] = mu.method == MuMethod::Kernel
                        ? "kernel"
                        : (mu.method == MuMethod::ClosedConstant ? "closed_constant"
                                                                 : "closed_highlow");
    est["b"] = mu.b;
    est["h"] = mu.h;
    est["x1"] = mu.x1;
  }
  if (bromwich)
    est["bromwich"] = {{"c", bromwich->c}, {"T_tilde", bromwich->T_tilde},
                       {"n_max", bromwich->n_max}};
  j["estimator"] = est;
  return j;
}

ExperimentSpec ExperimentSpec::preset(const std::string& name) {
  // T defaults: G scenarios use x0_max + 15, mu scenarios b + 5.
  json j;
  if (name == "case1a") {
    j = {{"scenario", "case1a"},
         {"rate", {{"kind", "sinusoidal"}, {"lambda0", 10.0}, {"b", 1.0}, {"phase", "cos"}}},
         {"service", {{"kind", "exponential"}, {"rate", 1.0}}},
         {"n", 200},
         {"T", 18.5},
         {"replications", 50},
         {"seed", 41001},
         {"estimator",
          {{"target", "G"},
           {"x0", {0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5}},
           {"adaptive", {{"h_min", 0.025}, {"alpha", 0.25}}}}}};
  } else if (name == "case1b") {
    j = {{"scenario", "case1b"},
         {"rate", {{"kind", "polynomial"}, {"lambda0", 10.0}, {"p", 1.0}}},
         {"service", {{"kind", "exponential"}, {"rate", 1.0}}},
         {"n", 400},
         {"T", 16.0},
         {"replications", 50},
         {"seed", 41002},
         {"estimator",
          {{"target", "G"}, {"x0", {1.0}}, {"adaptive", {{"h_min", 0.05}, {"alpha", 0.15}}}}}};
  } else if (name == "case2a") {
    j = {{"scenario", "case2a"},
         {"rate", {{"kind", "sinusoidal"}, {"lambda0", 1.0}, {"b", 1.0}, {"phase", "sin"}}},
         {"service", {{"kind", "exponential"}, {"rate", 1.0}}},
         {"n", 1},
         {"T", 30.0},
         {"replications", 10000},
         {"seed", 41003},
         {"estimator",
          {{"target", "mu"},
           {"method", "kernel"},
           {"b", 25.0},
           {"h", 0.08},
           {"x1", -1.0},
           {"bromwich", {{"c", -1.0}, {"T_tilde", 30.0}, {"n_max", 20000}}}}}};
  } else if (name == "case2b") {
    j = {{"scenario", "case2b"},
         {"rate", {{"kind", "highlow"}, {"lambda0", 1.0}, {"lambda1", 0.0}}},
         {"service", {{"kind", "uniform"}, {"lo", 0.0}, {"hi", 2.0}}},
         {"n", 1},
         {"T", 30.0},
         {"replications", 10000},
         {"seed", 41004},
         {"estimator", {{"target", "mu"}, {"method", "closed_highlow"}, {"b", 25.0}}}};
  } else {
    throw std::invalid_argument("unknown preset '" + name +
                                "' (expected case1a, case1b, case2a or case2b)");
  }
  return from_json(j);
}

std::vector<DeconvKernelL> build_L_grid(const ExperimentSpec& spec) {
  const auto* g = std::get_if<GTarget>(&spec.target);
  if (!g) throw std::invalid_argument("build_L_grid: not a G-target scenario");
  const RateModel rate = rate_from_json(spec.rate);
  const double x0_max = *std::max_element(g->x0s.begin(), g->x0s.end());

  NumericKernelOptions opts;
  opts.window_lo = -x0_max - 1.0;
  opts.window_hi = spec.T + 1.0;
  if (spec.bromwich) opts.bromwich = *spec.bromwich;

  std::vector<double> hs;
  if (g->fixed_h) {
    hs.push_back(*g->fixed_h);
  } else {
    AdaptiveConfig cfg;
    cfg.h_min = g->adaptive.h_min;
    cfg.alpha = g->adaptive.alpha;
    cfg.max_steps = g->adaptive.max_steps;
    hs = adaptive_h_grid(cfg, x0_max);
  }

  std::vector<DeconvKernelL> kernels;
  kernels.reserve(hs.size());
  for (double h : hs) kernels.push_back(make_L(rate, h, opts));
  return kernels;
}

MeanKernelJ build_J(const ExperimentSpec& spec) {
  const auto* mu = std::get_if<MuTarget>(&spec.target);
  if (!mu) throw std::invalid_argument("build_J: not a mu-target scenario");
  const RateModel rate = rate_from_json(spec.rate);
  NumericKernelOptions opts;
  if (spec.bromwich) opts.bromwich = *spec.bromwich;
  return make_J(rate, mu->b, mu->h, mu->x1, opts);
}

namespace {

struct TargetPlan {
  std::string name;
  double truth = 0.0;
};

// Work shared by every replication of a scenario.
struct ScenarioPlan {
  RateModel rate;
  ServiceModel service;
  std::vector<TargetPlan> targets;
  // G targets
  std::vector<double> x0s;
  std::vector<DeconvKernelL> kernels;  // grid of the largest x0
  AdaptiveConfig adaptive;
  bool fixed_h = false;
  // mu targets
  std::optional<MeanKernelJ> J;
  const MuTarget* mu = nullptr;
};

ScenarioPlan make_plan(const ExperimentSpec& spec) {
  ScenarioPlan plan;
  plan.rate = rate_from_json(spec.rate);
  plan.service = service_from_json(spec.service);
  if (const auto* g = std::get_if<GTarget>(&spec.target)) {
    plan.x0s = g->x0s;
    plan.kernels = build_L_grid(spec);
    plan.fixed_h = g->fixed_h.has_value();
    plan.adaptive.h_min = g->adaptive.h_min;
    plan.adaptive.alpha = g->adaptive.alpha;
    plan.adaptive.max_steps = g->adaptive.max_steps;
    for (double x0 : plan.x0s)
      plan.targets.push_back({"1-G(" + fmt_short(x0) + ")", plan.service.survival(x0)});
  } else {
    plan.mu = &std::get<MuTarget>(spec.target);
    if (plan.mu->method == MuMethod::Kernel) plan.J = build_J(spec);
    plan.targets.push_back({"mu", plan.service.mean()});
  }
  return plan;
}

// Kernels with h_i <= x0 (every per-x0 grid is a prefix of the longest one).
// An explicit max_steps disables the auto trim.
std::size_t grid_len_for(const ScenarioPlan& plan, double x0) {
  if (plan.fixed_h || plan.adaptive.max_steps >= 0) return plan.kernels.size();
  std::size_t len = 1;
  while (len < plan.kernels.size() && plan.kernels[len].bandwidth() <= x0) ++len;
  return len;
}

void run_replication(const ExperimentSpec& spec, const ScenarioPlan& plan, int rep,
                     std::vector<RunRecord>& out) {
  const auto t_start = std::chrono::steady_clock::now();
  Rng rng = Rng::stream(spec.seed, static_cast<std::uint64_t>(rep));

  std::vector<QueuePath> paths;
  paths.reserve(static_cast<std::size_t>(spec.n));
  for (int i = 0; i < spec.n; ++i) {
    const std::vector<double> arrivals = simulate_arrivals(plan.rate, spec.T, rng);
    paths.push_back(build_queue_path(arrivals, plan.service, spec.T, rng));
  }

  std::vector<std::pair<double, double>> results;  // (estimate, tuning)
  if (plan.mu) {
    MeanEstimate est{};
    switch (plan.mu->method) {
      case MuMethod::Kernel:
        est = estimate_mu(paths, *plan.J, spec.T);
        break;
      case MuMethod::ClosedConstant:
        est = estimate_mu_closed_constant(paths, plan.mu->b, plan.rate.lambda0());
        break;
      case MuMethod::ClosedHighLow:
        est = estimate_mu_closed_highlow(paths, plan.mu->b, plan.rate.lambda0());
        break;
    }
    results.emplace_back(est.value, est.b);
  } else {
    for (double x0 : plan.x0s) {
      if (plan.fixed_h) {
        const DistEstimate est = estimate_G(paths, plan.kernels.front(), x0, spec.T);
        results.emplace_back(1.0 - est.value, est.h);
      } else {
        const std::vector<DeconvKernelL> grid(plan.kernels.begin(),
                                              plan.kernels.begin() +
                                                  static_cast<std::ptrdiff_t>(
                                                      grid_len_for(plan, x0)));
        const AdaptiveResult sel =
            select_bandwidth_adaptive(paths, grid, x0, spec.T, plan.adaptive);
        results.emplace_back(1.0 - sel.estimate.value, sel.h_selected);
      }
    }
  }

  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  for (std::size_t i = 0; i < plan.targets.size(); ++i) {
    RunRecord rec;
    rec.scenario = spec.scenario;
    rec.rep = rep;
    rec.target = plan.targets[i].name;
    rec.estimate = results[i].first;
    rec.truth = plan.targets[i].truth;
    rec.tuning = results[i].second;
    rec.seconds = secs;
    out[static_cast<std::size_t>(rep) * plan.targets.size() + i] = std::move(rec);
  }
}

}  // namespace

SummaryReport summarize(const std::string& scenario, const std::vector<RunRecord>& records) {
  SummaryReport summary;
  summary.scenario = scenario;
  std::vector<std::string> order;
  for (const auto& rec : records)
    if (std::find(order.begin(), order.end(), rec.target) == order.end())
      order.push_back(rec.target);
  for (const auto& name : order) {
    TargetSummary ts;
    ts.target = name;
    double sum = 0.0, sq_err = 0.0;
    std::vector<double> vals;
    for (const auto& rec : records) {
      if (rec.target != name) continue;
      vals.push_back(rec.estimate);
      sum += rec.estimate;
      sq_err += (rec.estimate - rec.truth) * (rec.estimate - rec.truth);
    }
    const double m = static_cast<double>(vals.size());
    ts.n_reps = static_cast<int>(vals.size());
    ts.mean = sum / m;
    double ss = 0.0;
    for (double v : vals) ss += (v - ts.mean) * (v - ts.mean);
    ts.sd = vals.size() > 1 ? std::sqrt(ss / (m - 1.0)) : 0.0;
    ts.rmse = std::sqrt(sq_err / m);
    summary.targets.push_back(ts);
  }
  return summary;
}

RunResult run(const ExperimentSpec& spec, int threads) {
  const ScenarioPlan plan = make_plan(spec);
  std::vector<RunRecord> records(static_cast<std::size_t>(spec.replications) *
                                 plan.targets.size());

  if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
  threads = std::max(1, std::min(threads, spec.replications));

  if (threads == 1) {
    for (int rep = 0; rep < spec.replications; ++rep)
      run_replication(spec, plan, rep, records);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(threads));
    for (int w = 0; w < threads; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (;;) {
            const int rep = next.fetch_add(1);
            if (rep >= spec.replications) break;
            run_replication(spec, plan, rep, records);
          }
        } catch (...) {
          errors[static_cast<std::size_t>(w)] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& err : errors)
      if (err) std::rethrow_exception(err);
  }

  RunResult result;
  result.summary = summarize(spec.scenario, records);
  result.records = std::move(records);
  return result;
}

std::vector<std::pair<int, SummaryReport>> rmse_vs_n(const ExperimentSpec& spec,
                                                     const std::vector<int>& n_list,
                                                     int threads) {
  for (std::size_t i = 1; i < n_list.size(); ++i)
    if (n_list[i] <= n_list[i - 1])
      throw std::invalid_argument("rmse_vs_n: n_list must be strictly increasing");
  std::vector<std::pair<int, SummaryReport>> curve;
  for (int n : n_list) {
    ExperimentSpec s = spec;
    s.n = n;
    s.seed = spec.seed + static_cast<std::uint64_t>(n) * 0x9e3779b9ULL;
    curve.emplace_back(n, run(s, threads).summary);
  }
  return curve;
}

void write_records_csv(std::ostream& out, const std::vector<RunRecord>& records) {
  out << "scenario,rep,target,estimate,truth,tuning,seconds\n";
  out << std::setprecision(17);
  for (const auto& r : records)
    out << r.scenario << ',' << r.rep << ',' << r.target << ',' << r.estimate << ',' << r.truth
        << ',' << r.tuning << ',' << r.seconds << '\n';
}

std::vector<RunRecord> read_records_csv(std::istream& in) {
  std::vector<RunRecord> records;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("records csv: empty file");
  if (line != "scenario,rep,target,estimate,truth,tuning,seconds")
    throw std::runtime_error("records csv: unexpected header '" + line + "'");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    RunRecord r;
    std::string field;
    std::getline(ls, r.scenario, ',');
    std::getline(ls, field, ',');
    r.rep = std::stoi(field);
    std::getline(ls, r.target, ',');
    std::getline(ls, field, ',');
    r.estimate = std::stod(field);
    std::getline(ls, field, ',');
    r.truth = std::stod(field);
    std::getline(ls, field, ',');
    r.tuning = std::stod(field);
    std::getline(ls, field, ',');
    r.seconds = std::stod(field);
    records.push_back(std::move(r));
  }
  return records;
}

nlohmann::json estimate_to_json(const DistEstimate& est) {
  return json{{"x0", est.x0}, {"h", est.h}, {"value", est.value}, {"variance", est.variance}};
}

nlohmann::json estimate_to_json(const MeanEstimate& est) {
  return json{{"b", est.b}, {"value", est.value}};
}

nlohmann::json summary_to_json(const SummaryReport& summary) {
  json targets = json::array();
  for (const auto& t : summary.targets)
    targets.push_back({{"target", t.target},
                       {"mean", t.mean},
                       {"sd", t.sd},
                       {"rmse", t.rmse},
                       {"n_reps", t.n_reps}});
  return json{{"scenario", summary.scenario}, {"targets", targets}};
}

}  // namespace isq
