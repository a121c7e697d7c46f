#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "isq/experiment.hpp"
#include "isq/oracle.hpp"
#include "isq/rng.hpp"
#include "isq/sim.hpp"

namespace fs = std::filesystem;

namespace {

struct CommonArgs {
  std::string config;
  std::string preset;
  std::string out = ".";
  std::uint64_t seed = 0;
  bool seed_set = false;
  int threads = 0;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool needs_out) {
  cmd->add_option("--config", args.config, "Path to a scenario JSON file");
  cmd->add_option("--preset", args.preset, "Built-in scenario: case1a, case1b, case2a, case2b");
  if (needs_out) cmd->add_option("--out", args.out, "Output directory")->capture_default_str();
  cmd->add_option("--seed", args.seed, "Master seed override")
      ->each([&args](const std::string&) { args.seed_set = true; });
  cmd->add_option("--threads", args.threads, "Worker threads (0 = all cores)")
      ->capture_default_str();
}

isq::ExperimentSpec load_spec(const CommonArgs& args) {
  if (args.config.empty() == args.preset.empty())
    throw CLI::ValidationError("exactly one of --config / --preset is required");
  isq::ExperimentSpec spec = args.config.empty()
                                 ? isq::ExperimentSpec::preset(args.preset)
                                 : isq::ExperimentSpec::from_file(args.config);
  if (args.seed_set) spec.seed = args.seed;
  return spec;
}

void write_outputs(const fs::path& dir, const isq::ExperimentSpec& spec,
                   const isq::RunResult& result) {
  fs::create_directories(dir);
  const fs::path csv_path = dir / (spec.scenario + "_records.csv");
  std::ofstream csv(csv_path);
  isq::write_records_csv(csv, result.records);
  const fs::path json_path = dir / (spec.scenario + "_summary.json");
  std::ofstream js(json_path);
  js << isq::summary_to_json(result.summary).dump(2) << '\n';
  std::cout << "wrote " << csv_path.string() << " and " << json_path.string() << '\n';
}

void print_summary(const isq::SummaryReport& summary) {
  std::cout << "scenario " << summary.scenario << '\n';
  for (const auto& t : summary.targets)
    std::cout << "  " << t.target << ": mean=" << t.mean << " sd=" << t.sd << " rmse=" << t.rmse
              << " reps=" << t.n_reps << '\n';
}

void dump_kernels(const fs::path& dir, const isq::ExperimentSpec& spec) {
  fs::create_directories(dir);
  auto dump = [&](const std::string& name, auto&& eval, double lo, double hi, double step) {
    const fs::path p = dir / name;
    std::ofstream out(p);
    out << "t,value\n";
    out.precision(17);
    for (double t = lo; t <= hi; t += step) out << t << ',' << eval(t) << '\n';
    std::cout << "wrote " << p.string() << '\n';
  };
  if (std::holds_alternative<isq::GTarget>(spec.target)) {
    for (const auto& kernel : isq::build_L_grid(spec)) {
      const auto s = kernel.support();
      std::ostringstream name;
      name << spec.scenario << "_L_h" << kernel.bandwidth() << ".csv";
      dump(name.str(), [&](double t) { return kernel.eval(t); }, s.lo, s.hi,
           kernel.bandwidth() / 20.0);
    }
  } else {
    const isq::MeanKernelJ J = isq::build_J(spec);
    const auto s = J.support();
    std::ostringstream name;
    name << spec.scenario << "_J_b" << J.window_b() << ".csv";
    dump(name.str(), [&](double t) { return J.eval(t); }, s.lo, s.hi, J.smoothing_h() / 20.0);
  }
}

std::vector<int> parse_n_list(const std::string& csv) {
  std::vector<int> ns;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) ns.push_back(std::stoi(tok));
  return ns;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Service-time inference for Mt/G/inf queues from queue-length paths"};
  app.require_subcommand(1);

  CommonArgs run_args;
  bool run_dump_kernels = false;
  int dump_paths = 0;
  CLI::App* cmd_run = app.add_subcommand("run", "Run a scenario and write records + summary");
  add_common(cmd_run, run_args, true);
  cmd_run->add_flag("--dump-kernels", run_dump_kernels, "Also write kernel shape CSVs");
  cmd_run->add_option("--dump-paths", dump_paths,
                      "Write the first N queue paths of replication 0 as CSVs");

  CommonArgs rmse_args;
  std::string n_list_csv = "25,50,100,200";
  CLI::App* cmd_rmse =
      app.add_subcommand("rmse-curve", "RMSE as a function of the number of observed paths");
  add_common(cmd_rmse, rmse_args, true);
  cmd_rmse->add_option("--n-list", n_list_csv, "Comma-separated increasing n values")
      ->capture_default_str();

  CommonArgs kernel_args;
  CLI::App* cmd_kernel = app.add_subcommand("dump-kernel", "Write kernel shape CSVs");
  add_common(cmd_kernel, kernel_args, true);

  CommonArgs validate_args;
  CLI::App* cmd_validate =
      app.add_subcommand("validate-rate", "Check the rate model's growth/transform bounds");
  add_common(cmd_validate, validate_args, false);

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_run->parsed()) {
      const isq::ExperimentSpec spec = load_spec(run_args);
      const isq::RunResult result = isq::run(spec, run_args.threads);
      write_outputs(run_args.out, spec, result);
      print_summary(result.summary);
      if (run_dump_kernels) dump_kernels(run_args.out, spec);
      if (dump_paths > 0) {
        const isq::RateModel rate = isq::rate_from_json(spec.rate);
        const isq::ServiceModel service = isq::service_from_json(spec.service);
        isq::Rng rng = isq::Rng::stream(spec.seed, 0);
        for (int i = 0; i < std::min(dump_paths, spec.n); ++i) {
          const auto arrivals = isq::simulate_arrivals(rate, spec.T, rng);
          const auto path = isq::build_queue_path(arrivals, service, spec.T, rng);
          std::ostringstream name;
          name << spec.scenario << "_rep0_path" << i << ".csv";
          isq::write_path_csv((fs::path(run_args.out) / name.str()).string(), path);
        }
      }
    } else if (cmd_rmse->parsed()) {
      const isq::ExperimentSpec spec = load_spec(rmse_args);
      const auto curve = isq::rmse_vs_n(spec, parse_n_list(n_list_csv), rmse_args.threads);
      fs::create_directories(rmse_args.out);
      const fs::path p = fs::path(rmse_args.out) / (spec.scenario + "_rmse_curve.csv");
      std::ofstream out(p);
      out << "scenario,n,target,mean,sd,rmse,n_reps\n";
      out.precision(17);
      for (const auto& [n, summary] : curve)
        for (const auto& t : summary.targets)
          out << summary.scenario << ',' << n << ',' << t.target << ',' << t.mean << ',' << t.sd
              << ',' << t.rmse << ',' << t.n_reps << '\n';
      std::cout << "wrote " << p.string() << '\n';
      for (const auto& [n, summary] : curve) {
        std::cout << "n = " << n << '\n';
        print_summary(summary);
      }
    } else if (cmd_kernel->parsed()) {
      dump_kernels(kernel_args.out, load_spec(kernel_args));
    } else if (cmd_validate->parsed()) {
      const isq::ExperimentSpec spec = load_spec(validate_args);
      const isq::RateModel rate = isq::rate_from_json(spec.rate);
      const isq::ValidationReport report = isq::validate_assumptions(rate);
      std::cout << "rate '" << rate.label() << "': sigma_lambda=" << rate.sigma_lambda()
                << " gamma=" << rate.gamma() << " k0=" << rate.k0()
                << " lambda0=" << rate.lambda0() << '\n';
      std::cout << report.points_checked << " grid points checked, " << report.violations.size()
                << " violations\n";
      std::size_t shown = 0;
      for (const auto& v : report.violations) {
        if (shown++ == 10) {
          std::cout << "  ...\n";
          break;
        }
        if (v.kind == isq::AssumptionViolation::Kind::Growth)
          std::cout << "  growth bound violated at t=" << v.t << " margin=" << v.margin << '\n';
        else
          std::cout << "  transform bound violated at sigma=" << v.sigma << " omega=" << v.omega
                    << " margin=" << v.margin << '\n';
      }
      return report.ok() ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
