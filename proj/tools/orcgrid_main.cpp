// Command-line front end. Exit codes: 0 ok, 1 input or usage error,
// 2 infeasible, 3 solver limit reached.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <string>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "orcgrid/catalog.hpp"
#include "orcgrid/io/export.hpp"
#include "orcgrid/io/scenario_file.hpp"
#include "orcgrid/milp/mps.hpp"
#include "orcgrid/sorc.hpp"
#include "orcgrid/sweeps.hpp"
#include "orcgrid/tet.hpp"

namespace {

using namespace orcgrid;

enum Exit : int { kOk = 0, kInput = 1, kInfeasible = 2, kLimit = 3 };

struct Common {
  unsigned threads = 0;
  double time_limit = std::numeric_limits<double>::infinity();
  long max_nodes = milp::MilpLimits{}.max_nodes;
};

milp::MilpLimits limits_from(const Common& c) {
  milp::MilpLimits limits;
  limits.time_seconds = c.time_limit;
  limits.max_nodes = c.max_nodes;
  return limits;
}

class Stopwatch {
 public:
  ~Stopwatch() {
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start_;
    std::cerr << fmt::format("wall time {:.3f} s\n", elapsed.count());
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

void print_rows(const std::vector<std::string>& rows) {
  for (const auto& r : rows) std::cerr << "  row " << r << '\n';
}

int limit_or_ok(bool limited) {
  if (limited) std::cerr << "warning: solver limit reached before the gap closed\n";
  return limited ? kLimit : kOk;
}

void summarize(const sorc::SorcSchedule& s) {
  std::cout << fmt::format("{}: {} objective={} gap={} nodes={}\n", s.id, milp::to_string(s.status),
                           io::format_number(s.total_cost), io::format_number(s.gap),
                           s.stats.nodes);
}

io::ResultBundle bundle_for(const io::ScenarioDocument& doc, sorc::DegradationMode mode) {
  io::ResultBundle b;
  b.tool_version = ORCGRID_VERSION;
  b.input_digest = io::input_digest(doc);
  b.currency_label = doc.currency_label;
  b.degradation = mode;
  return b;
}

void report_written(const std::vector<std::filesystem::path>& paths) {
  for (const auto& p : paths) std::cerr << "wrote " << p.string() << '\n';
}

const MicrogridScenario& pick_prosumer(const io::ScenarioDocument& doc, const std::string& id) {
  if (id.empty()) {
    if (doc.prosumers.size() != 1)
      throw std::invalid_argument("--prosumer is required when the scenario has several prosumers");
    return doc.prosumers.front();
  }
  for (const auto& s : doc.prosumers)
    if (s.id == id) return s;
  throw std::invalid_argument(fmt::format("no prosumer '{}' in the scenario", id));
}

int cmd_catalog() {
  std::cout << io::catalog_text(builtin_catalog());
  return kOk;
}

int cmd_solve_sorc(const std::string& path, const std::string& out, bool literal, const Common& c) {
  const auto doc = io::load_scenario(path);
  Stopwatch clock;
  sorc::BuildOptions build;
  if (literal) build.degradation = sorc::DegradationMode::LiteralFactor;
  auto bundle = bundle_for(doc, build.degradation);
  bool limited = false;
  for (const auto& s : doc.prosumers) {
    auto sched = sorc::solve_sorc(s, build, limits_from(c));
    summarize(sched);
    limited |= sched.status == milp::SolveStatus::GapLimit;
    bundle.scenarios.push_back(s);
    bundle.schedules.push_back(std::move(sched));
  }
  if (!out.empty()) report_written(io::export_results(bundle, out));
  return limit_or_ok(limited);
}

int cmd_solve_community(const std::string& path, const std::string& out, const Common& c) {
  const auto doc = io::load_scenario(path);
  if (!doc.network) throw io::InputError("/network", "solve-community needs a network section");
  Stopwatch clock;
  tet::PipelineOptions options;
  options.limits = limits_from(c);
  options.threads = c.threads;
  auto result = tet::run_pipeline(doc.prosumers, *doc.network, options);
  bool limited = false;
  for (const auto& s : result.schedules) {
    summarize(s);
    limited |= s.status == milp::SolveStatus::GapLimit;
  }
  const auto& k = result.kpi;
  std::cout << fmt::format(
      "community: cost={} trading={} grid_only_trading={} no_orc={} savings_vs_no_orc={}\n",
      io::format_number(k.community_cost), io::format_number(k.trading_cost),
      io::format_number(k.grid_only_trading_cost), io::format_number(k.no_orc_cost),
      io::format_number(k.savings_vs_no_orc));
  if (!out.empty()) {
    auto bundle = bundle_for(doc, options.build.degradation);
    bundle.scenarios = doc.prosumers;
    bundle.schedules = std::move(result.schedules);
    bundle.network = doc.network;
    bundle.clearing = std::move(result.clearing);
    bundle.kpi = std::move(result.kpi);
    report_written(io::export_results(bundle, out));
  }
  return limit_or_ok(limited);
}

int cmd_sweep(const std::string& path, const std::string& out, const Common& c) {
  auto sweep = io::load_sweep(path);
  sweep.spec.limits = limits_from(c);
  sweep.spec.threads = c.threads;
  Stopwatch clock;
  io::ResultBundle bundle = bundle_for(sweep.source, sweep.spec.build.degradation);
  bundle.input_digest = io::sha256_hex(io::write_scenario(sweep.source) + '\n' +
                                       nlohmann::json::parse(io::read_text_file(path)).dump());
  bool limited = false;
  if (sweep.spec.axis == sweeps::Axis::Weather) {
    sweeps::LocationOptions options{sweep.spec.build, sweep.spec.limits, sweep.spec.threads};
    bundle.locations = sweeps::compare_locations(sweep.spec.base, sweep.spec.weathers, options);
    for (const auto& r : bundle.locations) {
      if (!r.error.empty()) {
        std::cerr << fmt::format("{}: {}\n", r.label, r.error);
        continue;
      }
      std::cout << fmt::format("{}: objective={} baseline={} savings={}\n", r.label,
                               io::format_number(r.objective), io::format_number(r.baseline),
                               io::format_number(r.savings));
    }
  }
  auto table = sweeps::run_sweep(sweep.spec);
  for (const auto& r : table.rows) {
    if (!r.error.empty()) {
      std::cerr << fmt::format("{}: {}\n", r.label, r.error);
      continue;
    }
    limited |= r.schedule && r.schedule->status == milp::SolveStatus::GapLimit;
    std::string line = r.label + ":";
    for (std::size_t k = 0; k < table.outputs.size(); ++k)
      line += fmt::format(" {}={}", sweeps::to_string(table.outputs[k]), io::format_number(r.metrics[k]));
    std::cout << line << '\n';
  }
  bundle.sweep = std::move(table);
  if (!out.empty()) report_written(io::export_results(bundle, out));
  return limit_or_ok(limited);
}

int cmd_export_mps(const std::string& path, const std::string& stage, const std::string& out,
                   const std::string& prosumer, bool literal, const Common& c) {
  const auto doc = io::load_scenario(path);
  std::string text;
  if (stage == "sorc") {
    sorc::BuildOptions build;
    if (literal) build.degradation = sorc::DegradationMode::LiteralFactor;
    text = milp::write_mps(sorc::build_sorc_model(pick_prosumer(doc, prosumer), build).model);
  } else {
    if (!doc.network) throw io::InputError("/network", "the tet stage needs a network section");
    std::vector<sorc::SorcSchedule> schedules;
    for (const auto& s : doc.prosumers) schedules.push_back(sorc::solve_sorc(s, {}, limits_from(c)));
    text = milp::write_mps(tet::build_tet_model(tet::imbalances_from(schedules), *doc.network).model);
  }
  if (out.empty()) {
    std::cout << text;
    return kOk;
  }
  std::ofstream file(out, std::ios::binary | std::ios::trunc);
  file << text;
  file.close();
  if (!file) throw io::ExportError(fmt::format("cannot write '{}'", out));
  std::cerr << "wrote " << out << '\n';
  return kOk;
}

template <typename Fn>
int guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const io::InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
  } catch (const ValidationError& e) {
    std::cerr << "input error: " << e.what() << '\n';
  } catch (const io::ExportError& e) {
    std::cerr << "output error: " << e.what() << '\n';
  } catch (const sorc::InfeasibleScenario& e) {
    std::cerr << "infeasible: " << e.what() << '\n';
    print_rows(e.rows());
    return kInfeasible;
  } catch (const sorc::SolveFailure& e) {
    std::cerr << "solver: " << e.what() << '\n';
    return e.status() == milp::SolveStatus::GapLimit ? kLimit : kInfeasible;
  } catch (const tet::PipelineError& e) {
    std::cerr << "infeasible: " << e.what() << '\n';
    print_rows(e.rows());
    return e.kind() == tet::PipelineError::Kind::Limit ? kLimit : kInfeasible;
  } catch (const tet::ClearingError& e) {
    std::cerr << "infeasible: " << e.what() << '\n';
    print_rows(e.rows());
    return kInfeasible;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
  }
  return kInput;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Solar ORC microgrid scheduling and peer-to-peer trade clearing"};
  app.require_subcommand(1);
  Common common;
  app.add_option("--threads", common.threads, "worker threads (0: all cores)");
  app.add_option("--time-limit", common.time_limit, "branch-and-bound time limit in seconds")
      ->check(CLI::PositiveNumber);
  app.add_option("--max-nodes", common.max_nodes, "branch-and-bound node limit")
      ->check(CLI::PositiveNumber);

  std::string scenario, out, stage = "sorc", prosumer;
  bool literal = false;

  auto* solve_sorc = app.add_subcommand("solve-sorc", "schedule each prosumer on its own");
  solve_sorc->add_option("scenario", scenario, "scenario JSON")->required();
  solve_sorc->add_option("--out", out, "output directory");
  solve_sorc->add_flag("--paper-literal-degradation", literal,
                       "capacity factor row instead of remaining-capacity tracking");

  auto* community = app.add_subcommand("solve-community", "schedule prosumers, then clear trades");
  community->add_option("scenario", scenario, "scenario JSON with a network section")->required();
  community->add_option("--out", out, "output directory");

  auto* sweep = app.add_subcommand("sweep", "run a parameter sweep");
  sweep->add_option("spec", scenario, "sweep JSON")->required();
  sweep->add_option("--out", out, "output directory");

  auto* mps = app.add_subcommand("export-mps", "write a stage model in MPS format");
  mps->add_option("scenario", scenario, "scenario JSON")->required();
  mps->add_option("--stage", stage, "sorc or tet")->check(CLI::IsMember({"sorc", "tet"}));
  mps->add_option("--out", out, "output file (default: stdout)");
  mps->add_option("--prosumer", prosumer, "prosumer id for the sorc stage");
  mps->add_flag("--paper-literal-degradation", literal, "literal capacity factor row");

  auto* catalog = app.add_subcommand("catalog", "print the built-in fluid, size and collector tables");

  for (auto* sub : {solve_sorc, community, sweep, mps, catalog}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    std::cout << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help();
    return kInput;
  }

  const Common& c = common;
  if (catalog->parsed()) return guarded([] { return cmd_catalog(); });
  if (solve_sorc->parsed()) return guarded([&] { return cmd_solve_sorc(scenario, out, literal, c); });
  if (community->parsed()) return guarded([&] { return cmd_solve_community(scenario, out, c); });
  if (sweep->parsed()) return guarded([&] { return cmd_sweep(scenario, out, c); });
  return guarded([&] { return cmd_export_mps(scenario, stage, out, prosumer, literal, c); });
}
