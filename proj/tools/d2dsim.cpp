#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mmd2d/config.hpp"
#include "mmd2d/experiment.hpp"
#include "mmd2d/report.hpp"

using namespace mmd2d;
using nlohmann::json;

namespace {

constexpr int kConfigError = 2;
constexpr int kNotConverged = 3;

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials;
  std::optional<unsigned> workers;
  std::string out = "results";
  std::string format = "csv";
  bool trace = false;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("config", c.config, "Experiment configuration (JSON)")->required();
  app->add_option("--seed", c.seed, "Base seed");
  app->add_option("--trials", c.trials, "Number of Monte Carlo trials");
  app->add_option("--workers", c.workers, "Worker threads");
  app->add_option("--out", c.out, "Output directory");
  app->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  app->add_flag("--trace", c.trace, "Record the potential trace of the first LLL run per trial");
}

json read_document(const Common& c) {
  std::ifstream in(c.config);
  if (!in) throw ConfigError("cannot open configuration file " + c.config);
  json doc;
  try {
    doc = json::parse(in, nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw ConfigError(c.config + ": " + e.what());
  }
  if (!doc.is_object()) throw ConfigError(c.config + ": expected a JSON object");
  if (c.seed) set_parameter(doc, "experiment.seed", *c.seed);
  if (c.trials) set_parameter(doc, "experiment.trials", *c.trials);
  if (c.workers) set_parameter(doc, "experiment.workers", *c.workers);
  if (c.trace) set_parameter(doc, "experiment.trace", true);
  return doc;
}

std::vector<std::string> split(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream s(text);
  std::string item;
  while (std::getline(s, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

json parse_value(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error&) {
    return text;
  }
}

void print_summary(const RunResult& r) {
  static const char* keys[] = {"links", "sum_throughput", "mean_throughput", "d2d_bits",
                               "cellular_bits", "lll_iterations", "matched_fraction"};
  std::cout << r.label << "  (" << r.trials.size() << " trials)\n";
  for (const char* k : keys) {
    const Summary& s = r.summary.metric(k);
    std::cout << "  " << std::left << std::setw(18) << k << std::right << std::setprecision(6)
              << s.mean << " +- " << s.std_error << "\n";
  }
}

int finish(const std::vector<RunResult>& runs) {
  for (const auto& r : runs) {
    if (!r.all_converged()) {
      std::cerr << "warning: LLL hit its iteration budget in " << r.label << "\n";
      return kNotConverged;
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Peer association and beamwidth selection simulator for mmWave D2D networks"};
  app.require_subcommand(1);

  Common run_opts, sweep_opts, compare_opts, oracle_opts, validate_opts;
  auto* run = app.add_subcommand("run", "Run one Monte Carlo experiment");
  add_common(run, run_opts);

  auto* sw = app.add_subcommand("sweep", "Repeat an experiment over values of one parameter");
  add_common(sw, sweep_opts);
  std::string param, values;
  sw->add_option("--param", param, "Parameter path, section.key")->required();
  sw->add_option("--values", values, "Comma-separated values")->required();

  auto* cmp = app.add_subcommand("compare", "Run association and beamwidth strategy combinations");
  add_common(cmp, compare_opts);
  std::string assoc = "hpa,daa,mda,rpa", beam = "lll,cbws:15,rbws";
  cmp->add_option("--assoc", assoc, "Association algorithms");
  cmp->add_option("--beam", beam, "Beamwidth strategies");

  auto* oracle = app.add_subcommand("oracle-check", "Compare LLL with exhaustive search");
  add_common(oracle, oracle_opts);

  auto* val = app.add_subcommand("validate", "Check a configuration and print its effective form");
  val->add_option("config", validate_opts.config, "Experiment configuration (JSON)")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      ExperimentConfig config = parse_config(read_document(run_opts));
      std::vector<RunResult> runs{monte_carlo(config)};
      write_runs(run_opts.out, runs, parse_format(run_opts.format));
      print_summary(runs.front());
      return finish(runs);
    }
    if (*sw) {
      json doc = read_document(sweep_opts);
      std::vector<json> parsed;
      for (const auto& v : split(values)) parsed.push_back(parse_value(v));
      auto points = sweep(doc, param, parsed);
      std::vector<RunResult> runs;
      for (auto& p : points) runs.push_back(std::move(p.result));
      write_runs(sweep_opts.out, runs, parse_format(sweep_opts.format),
                 json{{"sweep", {{"param", param}, {"values", parsed}}}});
      for (const auto& r : runs) print_summary(r);
      return finish(runs);
    }
    if (*cmp) {
      json doc = read_document(compare_opts);
      auto runs = compare(doc, split(assoc), split(beam));
      write_runs(compare_opts.out, runs, parse_format(compare_opts.format));
      for (const auto& r : runs) print_summary(r);
      return finish(runs);
    }
    if (*oracle) {
      ExperimentConfig config = parse_config(read_document(oracle_opts));
      auto rows = oracle_check(config);
      write_oracle(oracle_opts.out, config, rows, parse_format(oracle_opts.format));
      std::size_t optimal = 0, converged = 0;
      for (const auto& r : rows) {
        optimal += r.optimal;
        converged += r.converged;
      }
      std::cout << "optimal " << optimal << "/" << rows.size() << ", converged " << converged
                << "/" << rows.size() << "\n";
      return converged == rows.size() ? 0 : kNotConverged;
    }
    if (*val) {
      ExperimentConfig config = parse_config(read_document(validate_opts));
      std::cout << config.document.dump(2) << "\nconfig_hash " << config_hash(config) << "\n";
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const ParameterError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
