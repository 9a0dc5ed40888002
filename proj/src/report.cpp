#include "mmd2d/report.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <locale>
#include <sstream>

namespace mmd2d {

using nlohmann::json;

namespace {

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream s;
  s.imbue(std::locale::classic());
  s << std::setprecision(17) << v;
  return s.str();
}

json jnum(double v) {
  if (std::isfinite(v)) return v;
  return num(v);
}

std::ofstream open(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

json link_json(const LinkOutcome& o) {
  return json{{"frame", o.frame},
              {"tx", o.tx_id},
              {"rx", o.rx_id},
              {"distance_m", jnum(o.distance)},
              {"los", o.los},
              {"beamwidth_deg", jnum(rad_to_deg(o.beamwidth))},
              {"sinr", jnum(o.sinr)},
              {"rate_bps", jnum(o.rate)},
              {"window_throughput", o.window_throughput ? jnum(*o.window_throughput) : json(nullptr)},
              {"requested_bits", jnum(o.requested_bits)},
              {"delivered_bits", o.delivered_bits},
              {"stability_s", jnum(o.stability_time)},
              {"alignment_s", jnum(o.alignment_time)},
              {"penalty", o.penalty_active}};
}

std::string timestamp() {
  std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

OutputFormat parse_format(const std::string& name) {
  if (name == "csv") return OutputFormat::Csv;
  if (name == "json") return OutputFormat::Json;
  throw ConfigError("unknown output format '" + name + "'");
}

json manifest(const ExperimentConfig& config, std::span<const std::string> labels) {
  return json{{"tool", "d2dsim"},
              {"version", kVersion},
              {"config_hash", config_hash(config)},
              {"seed", config.seed},
              {"trials", config.trials},
              {"experiments", std::vector<std::string>(labels.begin(), labels.end())},
              {"config", config.document},
              {"generated_at", timestamp()}};
}

void write_runs(const std::filesystem::path& dir, std::span<const RunResult> runs,
                OutputFormat format, const json& extra) {
  if (runs.empty()) throw std::invalid_argument("no runs to write");
  std::filesystem::create_directories(dir);
  std::vector<std::string> labels;
  for (const auto& r : runs) labels.push_back(r.label);
  json m = manifest(runs.front().config, labels);
  for (auto it = extra.begin(); it != extra.end(); ++it) m[it.key()] = it.value();
  open(dir / "manifest.json") << m.dump(2) << "\n";

  if (format == OutputFormat::Json) {
    json results = json::array();
    for (const auto& r : runs) {
      json run{{"experiment", r.label}, {"config_hash", config_hash(r.config)}};
      json trials = json::array();
      for (const auto& t : r.trials) {
        json row{{"trial", t.trial}, {"seed", t.seed}};
        for (const auto& [k, v] : trial_scalars(t)) row[k] = jnum(v);
        json links = json::array();
        for (const auto& o : t.link_outcomes) links.push_back(link_json(o));
        row["links"] = std::move(links);
        json trace = json::array();
        for (const auto& p : t.theta_trace)
          trace.push_back({{"iteration", p.iteration},
                           {"potential", jnum(p.potential)},
                           {"best_response_gap", jnum(p.best_response_gap)}});
        row["theta_trace"] = std::move(trace);
        trials.push_back(std::move(row));
      }
      run["trials"] = std::move(trials);
      json agg = json::array();
      for (const auto& s : r.summary.metrics)
        agg.push_back({{"metric", s.name},
                       {"count", s.count},
                       {"mean", jnum(s.mean)},
                       {"std_error", jnum(s.std_error)},
                       {"min", jnum(s.min)},
                       {"max", jnum(s.max)}});
      run["aggregate"] = std::move(agg);
      json cdfs = json::object();
      for (const auto& [name, points] : r.summary.cdfs) {
        json pts = json::array();
        for (const auto& p : points) pts.push_back({jnum(p.value), jnum(p.probability)});
        cdfs[name] = std::move(pts);
      }
      run["cdf"] = std::move(cdfs);
      results.push_back(std::move(run));
    }
    open(dir / "results.json") << results.dump(1) << "\n";
    return;
  }

  auto trials = open(dir / "trials.csv");
  auto links = open(dir / "links.csv");
  auto agg = open(dir / "aggregate.csv");
  auto cdf = open(dir / "cdf.csv");
  auto trace = open(dir / "theta_trace.csv");
  trials << "experiment,trial,seed";
  for (const auto& [k, v] : trial_scalars(TrialMetrics{})) trials << "," << k;
  trials << "\n";
  links << "experiment,trial,frame,tx,rx,distance_m,los,beamwidth_deg,sinr,rate_bps,"
           "window_throughput,requested_bits,delivered_bits,stability_s,alignment_s,penalty\n";
  agg << "experiment,metric,count,mean,std_error,min,max\n";
  cdf << "experiment,metric,value,probability\n";
  trace << "experiment,trial,iteration,potential,best_response_gap\n";

  for (const auto& r : runs) {
    for (const auto& t : r.trials) {
      trials << r.label << "," << t.trial << "," << t.seed;
      for (const auto& [k, v] : trial_scalars(t)) trials << "," << num(v);
      trials << "\n";
      for (const auto& o : t.link_outcomes) {
        links << r.label << "," << t.trial << "," << o.frame << "," << o.tx_id << "," << o.rx_id
              << "," << num(o.distance) << "," << (o.los ? 1 : 0) << ","
              << num(rad_to_deg(o.beamwidth)) << "," << num(o.sinr) << "," << num(o.rate) << ","
              << (o.window_throughput ? num(*o.window_throughput) : "") << ","
              << num(o.requested_bits) << "," << o.delivered_bits << ","
              << num(o.stability_time) << "," << num(o.alignment_time) << ","
              << (o.penalty_active ? 1 : 0) << "\n";
      }
      for (const auto& p : t.theta_trace)
        trace << r.label << "," << t.trial << "," << p.iteration << "," << num(p.potential) << ","
              << num(p.best_response_gap) << "\n";
    }
    for (const auto& s : r.summary.metrics)
      agg << r.label << "," << s.name << "," << s.count << "," << num(s.mean) << ","
          << num(s.std_error) << "," << num(s.min) << "," << num(s.max) << "\n";
    for (const auto& [name, points] : r.summary.cdfs)
      for (const auto& p : points)
        cdf << r.label << "," << name << "," << num(p.value) << "," << num(p.probability) << "\n";
  }
}

void write_oracle(const std::filesystem::path& dir, const ExperimentConfig& config,
                  std::span<const OracleRow> rows, OutputFormat format) {
  std::filesystem::create_directories(dir);
  std::string label = config.name;
  open(dir / "manifest.json") << manifest(config, std::span<const std::string>(&label, 1)).dump(2)
                              << "\n";
  if (format == OutputFormat::Json) {
    json out = json::array();
    for (const auto& r : rows)
      out.push_back({{"trial", r.trial},
                     {"players", r.players},
                     {"profiles", r.profiles},
                     {"lll_potential", jnum(r.lll_potential)},
                     {"optimum", jnum(r.optimum)},
                     {"ratio", jnum(r.ratio)},
                     {"iterations", r.iterations},
                     {"converged", r.converged},
                     {"optimal", r.optimal},
                     {"nash", r.nash}});
    open(dir / "oracle.json") << out.dump(1) << "\n";
    return;
  }
  auto csv = open(dir / "oracle.csv");
  csv << "trial,players,profiles,lll_potential,optimum,ratio,iterations,converged,optimal,nash\n";
  for (const auto& r : rows)
    csv << r.trial << "," << r.players << "," << r.profiles << "," << num(r.lll_potential) << ","
        << num(r.optimum) << "," << num(r.ratio) << "," << r.iterations << ","
        << (r.converged ? 1 : 0) << "," << (r.optimal ? 1 : 0) << "," << (r.nash ? 1 : 0) << "\n";
}

}  // namespace mmd2d
