#include "mmd2d/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace mmd2d {

using nlohmann::json;

namespace {

json base_document() {
  return json{
      {"preset", "desk"},
      {"name", "experiment"},
      {"scenario",
       {{"kind", "network"},
        {"arena_side_m", 2000.0},
        {"user_density_km2", 40.0},
        {"transmitter_probability", 0.5},
        {"transmitter_density_km2", 10.0},
        {"link_density_km2", 20.0},
        {"link_count", 0},
        {"link_distance_min_m", 30.0},
        {"link_distance_max_m", 80.0},
        {"link_data_max_mb", 300.0}}},
      {"channel",
       {{"carrier_ghz", 28.0},
        {"bandwidth_mhz", 100.0},
        {"noise_dbm_hz", -174.0},
        {"tx_power_dbm", 15.0},
        {"pathloss_intercept_db", -61.7},
        {"pathloss_exponent", 2.0},
        {"nakagami_shape", 3.0},
        {"blockage_beta", 0.0027}}},
      {"antenna", {{"beamwidths_deg", {15.0, 25.0, 35.0, 45.0}}, {"wide_beamwidth_deg", 90.0}}},
      {"timing",
       {{"pilot_us", 10.0},
        {"reply_ms", 1.0},
        {"decide_ms", 1.0},
        {"ack_ms", 1.0},
        {"misalignment_threshold", 0.5}}},
      {"mobility", {{"speed_min_mph", 1.0}, {"speed_max_mph", 3.0}}},
      {"content",
       {{"catalog_size", 5},
        {"segments", 100},
        {"content_mb", 125.0},
        {"cache_probability", 0.2},
        {"partial_fraction", 1.0},
        {"max_trials", 3}}},
      {"association",
       {{"algorithm", "hpa"},
        {"coverage_m", 50.0},
        {"stability_norm_s", 60.0},
        {"availability_norm", 0.0},
        {"baselines_los_aware", false}}},
      {"beamwidth",
       {{"strategy", "lll"},
        {"interference_threshold_dbm", -90.0},
        {"utility_unit_bps", 1e7},
        {"update_cap", 8},
        {"stagnation_window", 50},
        {"prob_threshold", 0.99},
        {"max_iterations", 5000},
        {"tau_schedule", "inverse"},
        {"tau", 1.0},
        {"exhaustive_budget", 10000000}}},
      {"experiment",
       {{"trials", 200}, {"seed", 1}, {"workers", 1}, {"max_frames", 10}, {"trace", false}}},
  };
}

bool same_kind(const json& expected, const json& given) {
  if (expected.is_number()) return given.is_number();
  if (expected.is_array()) return given.is_array();
  return expected.type() == given.type();
}

void overlay(json& target, const json& patch, const std::string& where) {
  if (!patch.is_object()) throw ConfigError(where + ": expected an object");
  for (auto it = patch.begin(); it != patch.end(); ++it) {
    std::string key = where.empty() ? it.key() : where + "." + it.key();
    if (!target.contains(it.key())) throw ConfigError("unknown key '" + key + "'");
    json& slot = target[it.key()];
    if (slot.is_object()) {
      overlay(slot, it.value(), key);
    } else {
      if (!same_kind(slot, it.value()))
        throw ConfigError("key '" + key + "' expects a " + std::string(slot.type_name()));
      slot = it.value();
    }
  }
}

double number(const json& doc, const char* section, const char* key) {
  return doc.at(section).at(key).get<double>();
}

int integer(const json& doc, const char* section, const char* key) {
  const json& v = doc.at(section).at(key);
  double d = v.get<double>();
  if (d != std::floor(d) || std::abs(d) > 2e9)
    throw ConfigError(std::string(section) + "." + key + " must be an integer");
  return static_cast<int>(d);
}

std::uint64_t unsigned_integer(const json& doc, const char* section, const char* key) {
  const json& v = doc.at(section).at(key);
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  double d = v.get<double>();
  if (d < 0 || d != std::floor(d) || d > 9.0e15)
    throw ConfigError(std::string(section) + "." + key + " must be a non-negative integer");
  return static_cast<std::uint64_t>(d);
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

}  // namespace

Scenario parse_scenario(const std::string& name) {
  if (name == "network") return Scenario::Network;
  if (name == "test_requester") return Scenario::TestRequester;
  if (name == "links") return Scenario::Links;
  throw ConfigError("scenario.kind: unknown scenario '" + name + "'");
}

const char* to_string(Scenario s) {
  switch (s) {
    case Scenario::Network: return "network";
    case Scenario::TestRequester: return "test_requester";
    case Scenario::Links: return "links";
  }
  return "?";
}

BeamStrategy BeamStrategy::parse(const std::string& text) {
  BeamStrategy s;
  if (text == "lll") return s;
  if (text == "rbws") {
    s.kind = Kind::Rbws;
    return s;
  }
  if (text == "exhaustive") {
    s.kind = Kind::Exhaustive;
    return s;
  }
  if (text.rfind("cbws:", 0) == 0) {
    s.kind = Kind::Cbws;
    try {
      std::size_t used = 0;
      double deg = std::stod(text.substr(5), &used);
      if (used != text.size() - 5 || !(deg > 0.0)) throw std::invalid_argument(text);
      s.beamwidth = deg_to_rad(deg);
    } catch (const std::exception&) {
      throw ConfigError("beamwidth strategy '" + text + "' needs a positive angle in degrees");
    }
    return s;
  }
  throw ConfigError("unknown beamwidth strategy '" + text + "'");
}

std::string BeamStrategy::to_string() const {
  switch (kind) {
    case Kind::Lll: return "lll";
    case Kind::Rbws: return "rbws";
    case Kind::Exhaustive: return "exhaustive";
    case Kind::Cbws: {
      char buf[64];
      std::snprintf(buf, sizeof buf, "cbws:%g", rad_to_deg(beamwidth));
      return buf;
    }
  }
  return "?";
}

json default_document(const std::string& preset) {
  json doc = base_document();
  if (preset == "desk") return doc;
  if (preset == "full_scale") {
    doc["preset"] = "full_scale";
    doc["scenario"]["user_density_km2"] = 80.0;
    doc["scenario"]["link_density_km2"] = 30.0;
    doc["experiment"]["trials"] = 10000;
    return doc;
  }
  throw ConfigError("preset: unknown preset '" + preset + "'");
}

ExperimentConfig parse_config(const json& input) {
  require(input.is_object(), "configuration must be a JSON object");
  std::string preset = "desk";
  if (input.contains("preset")) {
    require(input["preset"].is_string(), "key 'preset' expects a string");
    preset = input["preset"].get<std::string>();
  }
  json doc = default_document(preset);
  overlay(doc, input, "");

  ExperimentConfig c;
  c.name = doc.at("name").get<std::string>();

  c.scenario = parse_scenario(doc["scenario"]["kind"].get<std::string>());
  c.arena.side = number(doc, "scenario", "arena_side_m");
  c.user_density = number(doc, "scenario", "user_density_km2");
  c.transmitter_probability = number(doc, "scenario", "transmitter_probability");
  c.transmitter_density = number(doc, "scenario", "transmitter_density_km2");
  c.link_density = number(doc, "scenario", "link_density_km2");
  c.link_count = integer(doc, "scenario", "link_count");
  c.link_distance_min = number(doc, "scenario", "link_distance_min_m");
  c.link_distance_max = number(doc, "scenario", "link_distance_max_m");
  c.link_data_max_bits = number(doc, "scenario", "link_data_max_mb") * kBitsPerMegabyte;
  require(c.arena.side > 0.0, "scenario.arena_side_m must be positive");
  require(c.user_density >= 0.0, "scenario.user_density_km2 must be non-negative");
  require(c.transmitter_probability >= 0.0 && c.transmitter_probability <= 1.0,
          "scenario.transmitter_probability must lie in [0, 1]");
  require(c.transmitter_density >= 0.0, "scenario.transmitter_density_km2 must be non-negative");
  require(c.link_density >= 0.0, "scenario.link_density_km2 must be non-negative");
  require(c.link_count >= 0, "scenario.link_count must be non-negative");
  require(c.link_distance_min > 0.0 && c.link_distance_min <= c.link_distance_max,
          "scenario.link_distance_min_m must be positive and at most link_distance_max_m");
  require(c.link_distance_max < c.arena.side / 2.0,
          "scenario.link_distance_max_m must be below half the arena side");
  require(c.link_data_max_bits >= 0.0, "scenario.link_data_max_mb must be non-negative");

  c.carrier_hz = number(doc, "channel", "carrier_ghz") * 1e9;
  try {
    c.channel = ChannelParams::from_db(
        number(doc, "channel", "pathloss_intercept_db"), number(doc, "channel", "pathloss_exponent"),
        number(doc, "channel", "nakagami_shape"), number(doc, "channel", "blockage_beta"),
        number(doc, "channel", "bandwidth_mhz") * 1e6, number(doc, "channel", "noise_dbm_hz"),
        number(doc, "channel", "tx_power_dbm"));
    c.channel.validate();
  } catch (const ParameterError& e) {
    throw ConfigError(std::string("channel: ") + e.what());
  }
  require(c.carrier_hz > 0.0, "channel.carrier_ghz must be positive");

  c.wide_beamwidth = deg_to_rad(number(doc, "antenna", "wide_beamwidth_deg"));
  require(c.wide_beamwidth > 0.0 && c.wide_beamwidth <= kPi,
          "antenna.wide_beamwidth_deg must lie in (0, 180]");
  const json& set = doc["antenna"]["beamwidths_deg"];
  require(!set.empty(), "antenna.beamwidths_deg must not be empty");
  for (const auto& v : set) {
    require(v.is_number(), "antenna.beamwidths_deg must hold numbers");
    double phi = deg_to_rad(v.get<double>());
    require(phi > 0.0 && phi <= c.wide_beamwidth,
            "antenna.beamwidths_deg entries must lie in (0, wide_beamwidth_deg]");
    c.beamwidths.push_back(phi);
  }
  std::sort(c.beamwidths.begin(), c.beamwidths.end());
  c.beamwidths.erase(std::unique(c.beamwidths.begin(), c.beamwidths.end()), c.beamwidths.end());

  c.timing.t_pilot = number(doc, "timing", "pilot_us") * 1e-6;
  c.timing.t_reply = number(doc, "timing", "reply_ms") * 1e-3;
  c.timing.t_decide = number(doc, "timing", "decide_ms") * 1e-3;
  c.timing.t_ack = number(doc, "timing", "ack_ms") * 1e-3;
  c.timing.misalignment_threshold = number(doc, "timing", "misalignment_threshold");
  try {
    c.timing.validate();
  } catch (const ParameterError& e) {
    throw ConfigError(std::string("timing: ") + e.what());
  }

  c.mobility.speed_min = mph_to_mps(number(doc, "mobility", "speed_min_mph"));
  c.mobility.speed_max = mph_to_mps(number(doc, "mobility", "speed_max_mph"));
  require(c.mobility.speed_min >= 0.0 && c.mobility.speed_min <= c.mobility.speed_max,
          "mobility: speed_min_mph must be non-negative and at most speed_max_mph");

  c.catalog_size = integer(doc, "content", "catalog_size");
  c.segments = integer(doc, "content", "segments");
  double content_bits = number(doc, "content", "content_mb") * kBitsPerMegabyte;
  c.cache_probability = number(doc, "content", "cache_probability");
  c.partial_fraction = number(doc, "content", "partial_fraction");
  c.max_trials = integer(doc, "content", "max_trials");
  require(c.catalog_size >= 1, "content.catalog_size must be at least 1");
  require(c.segments >= 1, "content.segments must be at least 1");
  require(content_bits >= c.segments, "content.content_mb must give at least one bit per segment");
  c.content_bits = static_cast<std::uint64_t>(content_bits);
  require(c.cache_probability >= 0.0 && c.cache_probability <= 1.0,
          "content.cache_probability must lie in [0, 1]");
  require(c.partial_fraction > 0.0 && c.partial_fraction <= 1.0,
          "content.partial_fraction must lie in (0, 1]");
  require(c.max_trials >= 1, "content.max_trials must be at least 1");

  try {
    c.association = parse_association(doc["association"]["algorithm"].get<std::string>());
  } catch (const ParameterError& e) {
    throw ConfigError(std::string("association.algorithm: ") + e.what());
  }
  c.coverage = number(doc, "association", "coverage_m");
  c.pa_utility.stability_norm = number(doc, "association", "stability_norm_s");
  c.pa_utility.availability_norm = number(doc, "association", "availability_norm");
  c.baselines_los_aware = doc["association"]["baselines_los_aware"].get<bool>();
  require(c.coverage > 0.0, "association.coverage_m must be positive");
  require(c.pa_utility.stability_norm > 0.0, "association.stability_norm_s must be positive");
  require(c.pa_utility.availability_norm >= 0.0,
          "association.availability_norm must be non-negative (0 selects the segment count)");

  c.strategy = BeamStrategy::parse(doc["beamwidth"]["strategy"].get<std::string>());
  c.interference_threshold = dbm_to_watts(number(doc, "beamwidth", "interference_threshold_dbm"));
  c.rate_unit = number(doc, "beamwidth", "utility_unit_bps");
  require(c.rate_unit > 0.0, "beamwidth.utility_unit_bps must be positive");
  int cap = integer(doc, "beamwidth", "update_cap");
  require(cap >= 1, "beamwidth.update_cap must be at least 1");
  c.lll.update_cap = static_cast<std::size_t>(cap);
  c.lll.stagnation_window = integer(doc, "beamwidth", "stagnation_window");
  require(c.lll.stagnation_window >= 1, "beamwidth.stagnation_window must be at least 1");
  c.lll.prob_threshold = number(doc, "beamwidth", "prob_threshold");
  require(c.lll.prob_threshold > 0.5 && c.lll.prob_threshold < 1.0,
          "beamwidth.prob_threshold must lie in (0.5, 1)");
  c.lll.max_iterations = integer(doc, "beamwidth", "max_iterations");
  require(c.lll.max_iterations >= 1, "beamwidth.max_iterations must be at least 1");
  std::string schedule = doc["beamwidth"]["tau_schedule"].get<std::string>();
  if (schedule == "inverse") {
    c.lll.tau.kind = TauSchedule::Kind::InverseIteration;
  } else if (schedule == "fixed") {
    c.lll.tau.kind = TauSchedule::Kind::Fixed;
  } else {
    throw ConfigError("beamwidth.tau_schedule must be 'inverse' or 'fixed'");
  }
  c.lll.tau.value = number(doc, "beamwidth", "tau");
  require(c.lll.tau.value > 0.0, "beamwidth.tau must be positive");
  c.exhaustive_budget = unsigned_integer(doc, "beamwidth", "exhaustive_budget");

  c.trials = unsigned_integer(doc, "experiment", "trials");
  c.seed = unsigned_integer(doc, "experiment", "seed");
  int workers = integer(doc, "experiment", "workers");
  require(workers >= 1, "experiment.workers must be at least 1");
  c.workers = static_cast<unsigned>(workers);
  c.max_frames = integer(doc, "experiment", "max_frames");
  require(c.trials >= 1, "experiment.trials must be at least 1");
  require(c.max_frames >= 1, "experiment.max_frames must be at least 1");
  c.trace = doc["experiment"]["trace"].get<bool>();
  c.lll.record_trace = c.trace;

  c.document = std::move(doc);
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open configuration file " + path.string());
  json doc;
  try {
    doc = json::parse(in, nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return parse_config(doc);
}

void set_parameter(json& doc, const std::string& path, const json& value) {
  auto dot = path.find('.');
  if (dot == std::string::npos) {
    doc[path] = value;
    return;
  }
  std::string section = path.substr(0, dot);
  std::string key = path.substr(dot + 1);
  require(!section.empty() && !key.empty() && key.find('.') == std::string::npos,
          "parameter path '" + path + "' must have the form section.key");
  doc[section][key] = value;
}

std::string config_hash(const ExperimentConfig& config) {
  json doc = config.document;
  // Run-shape keys do not change any trial's outcome.
  doc["experiment"].erase("workers");
  std::string text = doc.dump();
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

GameParams game_params(const ExperimentConfig& config) {
  GameParams p;
  p.channel = config.channel;
  p.timing = config.timing;
  p.wide_beamwidth = config.wide_beamwidth;
  p.coverage = config.coverage;
  p.interference_threshold = config.interference_threshold;
  p.rate_unit = config.rate_unit;
  return p;
}

}  // namespace mmd2d
