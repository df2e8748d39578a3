// fogran: Monte Carlo sweeps, single-scenario replay and graph dumps.

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fogran/fogran.hpp"

namespace {

using namespace fogran;

struct RunArgs {
  std::string config;
  std::vector<std::string> schemes;
  std::vector<double> users, files, file_size;
  double rth = -1.0;
  int iterations = -1;
  long long seed = -1;
  std::string out;
  bool no_fading = false;
  int threads = -1;
};

ExperimentSpec build_spec(const RunArgs& a) {
  ExperimentSpec spec;
  for (Scheme s : kAllSchemes) spec.schemes.push_back(s);
  if (!a.config.empty()) {
    const Json j = load_json_file(a.config);
    detail::reject_unknown(j, "", {"scenario", "schemes", "sweep", "iterations", "seed", "threads", "out", "max_slots"});
    if (j.contains("scenario")) spec.base = scenario_config_from_json(j.at("scenario"));
    if (j.contains("schemes")) {
      spec.schemes.clear();
      for (const std::string& s : detail::require_field<std::vector<std::string>>(j, "", "schemes")) {
        try {
          spec.schemes.push_back(parse_scheme(s));
        } catch (const std::invalid_argument& e) {
          throw ConfigError("schemes", e.what());
        }
      }
    }
    if (j.contains("sweep")) {
      const Json& sw = j.at("sweep");
      detail::reject_unknown(sw, "sweep", {"variable", "values"});
      spec.sweep = parse_sweep(detail::require_field<std::string>(sw, "sweep", "variable"));
      detail::read_field(sw, "sweep", "values", spec.values);
    }
    detail::read_field(j, "", "iterations", spec.iterations);
    detail::read_field(j, "", "seed", spec.seed);
    detail::read_field(j, "", "threads", spec.threads);
    detail::read_field(j, "", "out", spec.out);
    detail::read_field(j, "", "max_slots", spec.max_slots);
  }
  if (!a.schemes.empty()) {
    spec.schemes.clear();
    for (const std::string& s : a.schemes) {
      try {
        spec.schemes.push_back(parse_scheme(s));
      } catch (const std::invalid_argument& e) {
        throw ConfigError("--scheme", e.what());
      }
    }
  }
  const int sweeps = !a.users.empty() + !a.files.empty() + !a.file_size.empty();
  if (sweeps > 1) throw ConfigError("--users/--files/--file-size-bits", "sweep one variable at a time");
  if (!a.users.empty()) {
    spec.sweep = SweepVar::users;
    spec.values = a.users;
  } else if (!a.files.empty()) {
    spec.sweep = SweepVar::files;
    spec.values = a.files;
  } else if (!a.file_size.empty()) {
    spec.sweep = SweepVar::file_size;
    spec.values = a.file_size;
  }
  if (a.rth >= 0.0) spec.base.rate_threshold = a.rth;
  if (a.iterations >= 0) spec.iterations = static_cast<std::size_t>(a.iterations);
  if (a.seed >= 0) spec.seed = static_cast<std::uint64_t>(a.seed);
  if (!a.out.empty()) spec.out = a.out;
  if (a.no_fading) spec.base.fading = false;
  if (a.threads >= 0) spec.threads = static_cast<std::size_t>(a.threads);
  spec.validate();
  return spec;
}

int cmd_run(const RunArgs& a) {
  const ExperimentSpec spec = build_spec(a);
  const ExperimentResult res = run_experiment(spec);
  std::ostringstream csv;
  write_csv(csv, res.rows);
  if (spec.out.empty()) {
    std::cout << csv.str();
  } else {
    std::ofstream f(spec.out, std::ios::binary);
    if (!f) throw ConfigError("--out", "cannot write " + spec.out);
    f << csv.str();
  }
  std::ostream& log = spec.out.empty() ? std::cerr : std::cout;
  log << std::left << std::setw(24) << "scheme" << std::setw(12) << sweep_name(spec.sweep) << std::right
      << std::setw(14) << "mean T_o [s]" << std::setw(14) << "ci95 +/-" << std::setw(9) << "stalled" << "\n";
  for (const ExperimentRow& r : res.rows)
    log << std::left << std::setw(24) << scheme_name(r.summary.scheme) << std::setw(12) << format_number(r.sweep_value)
        << std::right << std::setw(14) << format_number(r.summary.mean) << std::setw(14)
        << format_number(r.summary.ci95_hi - r.summary.mean) << std::setw(9) << r.summary.stalled << "\n";
  if (res.any_point_fully_stalled) {
    std::cerr << "error: at least one scheme stalled on every iteration of a parameter point\n";
    return 2;
  }
  return 0;
}

int cmd_replay(const std::string& path, const std::string& scheme_id) {
  const Scenario sc = fixed_scenario_from_json(load_json_file(path));
  const Scheme scheme = parse_scheme(scheme_id);
  const EpisodeResult r = run_episode(sc.instance, sc.side, scheme, 0);
  std::cout << "scheme " << scheme_name(scheme) << ", " << r.num_slots << " slot(s)\n";
  for (std::size_t t = 0; t < r.slots.size(); ++t) {
    std::cout << "slot " << t + 1 << ": T_max = " << format_number(r.slots[t].t_max) << " s\n"
              << describe(r.slots[t].decision, sc.instance.file_size_bits);
  }
  for (std::size_t u = 0; u < r.completion.size(); ++u)
    std::cout << "u" << u + 1 << " completes at " << format_number(r.completion[u]) << " s\n";
  if (r.stalled) {
    std::cout << "stalled: " << r.stall_reason << "\n";
    return 2;
  }
  std::cout << "T_o = " << format_number(r.completion_time) << " s\n";
  return 0;
}

// Collects DOT text for every graph a scheduler reports.
class DotDumper : public GraphObserver {
 public:
  void on_graph(std::string_view label, const GraphCore& g, std::span<const std::size_t> sel) override {
    out_ << "graph \"" << label << "\" {\n  // " << g.size() << " vertices, " << g.num_edges() << " edges\n";
    for (std::size_t v = 0; v < g.size(); ++v) {
      out_ << "  v" << v << " [label=\"v" << v << "\\nw=" << format_number(g.weight(v)) << "\"";
      for (std::size_t s : sel)
        if (s == v) out_ << ", color=red";
      out_ << "];\n";
    }
    for (std::size_t a = 0; a < g.size(); ++a)
      g.for_each_neighbor(a, [&](std::size_t b) {
        if (a < b) out_ << "  v" << a << " -- v" << b << ";\n";
      });
    out_ << "}\n";
  }
  std::string str() const { return out_.str(); }

 private:
  std::ostringstream out_;
};

int cmd_dump_graphs(const std::string& path, const std::string& scheme_id) {
  const Scenario sc = fixed_scenario_from_json(load_json_file(path));
  const Scheme scheme = parse_scheme(scheme_id);
  const SlotChannel ch(sc.instance);
  Rng rng(derive_seed(0, kTieBreakStream, static_cast<std::uint64_t>(scheme)));
  DotDumper dump;
  SchedulerContext ctx{sc.instance, sc.side, ch, rng, &dump};
  const SlotDecision d = schedule(scheme, ctx);
  std::cout << dump.str() << "// slot 1 decision:\n";
  std::istringstream lines(describe(d, sc.instance.file_size_bits));
  for (std::string line; std::getline(lines, line);) std::cout << "//" << line << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Completion-time schedulers for D2D-aided fog RANs"};
  app.require_subcommand(1);

  RunArgs run;
  CLI::App* run_cmd = app.add_subcommand("run", "Monte Carlo sweep, CSV output");
  run_cmd->add_option("--config", run.config, "JSON experiment file (flags override it)");
  run_cmd->add_option("--scheme", run.schemes, "Comma-separated scheme ids")->delimiter(',');
  run_cmd->add_option("--users", run.users, "Sweep values for the number of users")->delimiter(',');
  run_cmd->add_option("--files", run.files, "Sweep values for the number of files")->delimiter(',');
  run_cmd->add_option("--file-size-bits", run.file_size, "Sweep values for the file size")->delimiter(',');
  run_cmd->add_option("--rth", run.rth, "Rate threshold in bits/s/Hz");
  run_cmd->add_option("--iterations", run.iterations, "Episodes per parameter point");
  run_cmd->add_option("--seed", run.seed, "Base seed");
  run_cmd->add_option("--out", run.out, "CSV output path (stdout if omitted)");
  run_cmd->add_flag("--no-fading", run.no_fading, "Use path loss only");
  run_cmd->add_option("--threads", run.threads, "Worker threads");

  std::string scenario, scheme = "joint";
  CLI::App* replay_cmd = app.add_subcommand("replay", "Run one episode on a fixed scenario and print the slot trace");
  replay_cmd->add_option("scenario", scenario, "Fixed scenario JSON")->required();
  replay_cmd->add_option("--scheme", scheme, "Scheme id");
  CLI::App* dump_cmd = app.add_subcommand("dump-graphs", "Print the slot-1 scheduling graphs in DOT format");
  dump_cmd->add_option("scenario", scenario, "Fixed scenario JSON")->required();
  dump_cmd->add_option("--scheme", scheme, "Scheme id");

  CLI11_PARSE(app, argc, argv);
  try {
    if (run_cmd->parsed()) return cmd_run(run);
    if (replay_cmd->parsed()) return cmd_replay(scenario, scheme);
    if (dump_cmd->parsed()) return cmd_dump_graphs(scenario, scheme);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
