#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "mmd2d/association.hpp"
#include "mmd2d/channel.hpp"
#include "mmd2d/game.hpp"
#include "mmd2d/geometry.hpp"
#include "mmd2d/linkdyn.hpp"

namespace mmd2d {

/// Raised for malformed or out-of-range configuration. `what()` names the key.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Scenario {
  Network,        // Poisson users, each a transmitter or requester
  TestRequester,  // one requester at the origin among Poisson transmitters
  Links,          // pre-established pairs, no association
};
Scenario parse_scenario(const std::string& name);
const char* to_string(Scenario s);

struct BeamStrategy {
  enum class Kind { Lll, Cbws, Rbws, Exhaustive };
  Kind kind = Kind::Lll;
  double beamwidth = 0.0;  // rad, Cbws only
  /// "lll", "rbws", "exhaustive" or "cbws:<deg>".
  static BeamStrategy parse(const std::string& text);
  std::string to_string() const;
};

struct ExperimentConfig {
  std::string name;
  Scenario scenario = Scenario::Network;
  Arena arena;
  double user_density = 40.0;            // nodes/km^2, Network
  double transmitter_probability = 0.5;  // Network role mix
  double transmitter_density = 10.0;     // Transmitters/km^2, TestRequester
  double link_density = 20.0;            // links/km^2, Links
  int link_count = 0;                    // exact link count when > 0
  double link_distance_min = 30.0;
  double link_distance_max = 80.0;
  double link_data_max_bits = 300 * kBitsPerMegabyte;

  double carrier_hz = 28e9;  // nominal; no frequency-dependent term uses it
  ChannelParams channel;
  std::vector<double> beamwidths;  // rad, ascending
  double wide_beamwidth = deg_to_rad(90.0);
  TimingBudget timing;
  MobilityParams mobility;

  int catalog_size = 5;
  int segments = 100;
  std::uint64_t content_bits = 0;
  double cache_probability = 0.2;
  double partial_fraction = 1.0;
  int max_trials = 3;

  AssociationAlgorithm association = AssociationAlgorithm::Hpa;
  double coverage = 50.0;
  PAUtilityParams pa_utility;
  bool baselines_los_aware = false;

  BeamStrategy strategy;
  double interference_threshold = dbm_to_watts(-90.0);
  double rate_unit = 1e7;
  LllOptions lll;
  std::uint64_t exhaustive_budget = 10'000'000;

  std::size_t trials = 100;
  std::uint64_t seed = 1;
  unsigned workers = 1;
  int max_frames = 10;
  bool trace = false;

  /// Effective document with every key explicit; the basis of the hash.
  nlohmann::json document;
};

/// Defaults for a named preset: "desk" or "full_scale".
nlohmann::json default_document(const std::string& preset = "desk");

/// Overlays `doc` on its preset's defaults, rejects unknown keys and
/// mistyped values, and validates ranges.
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Sets "section.key" in `doc`, creating the section if absent.
void set_parameter(nlohmann::json& doc, const std::string& path, const nlohmann::json& value);

/// FNV-1a of the canonical effective document, as 16 hex digits.
std::string config_hash(const ExperimentConfig& config);

GameParams game_params(const ExperimentConfig& config);

}  // namespace mmd2d
