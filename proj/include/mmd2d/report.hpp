#pragma once

#include <filesystem>
#include <span>
#include <string>

#include <json.hpp>

#include "mmd2d/experiment.hpp"

namespace mmd2d {

inline constexpr const char* kVersion = "1.0.0";

enum class OutputFormat { Csv, Json };
OutputFormat parse_format(const std::string& name);

/// Column layout of every CSV file written by `write_runs`, one line per file.
///   trials.csv      experiment,trial,seed,<trial_scalars names>
///   links.csv       experiment,trial,frame,tx,rx,distance_m,los,beamwidth_deg,sinr,rate_bps,
///                   window_throughput,requested_bits,delivered_bits,stability_s,alignment_s,penalty
///   aggregate.csv   experiment,metric,count,mean,std_error,min,max
///   cdf.csv         experiment,metric,value,probability
///   theta_trace.csv experiment,trial,iteration,potential,best_response_gap
/// Json output puts the same records in results.json. Both write manifest.json.
void write_runs(const std::filesystem::path& dir, std::span<const RunResult> runs,
                OutputFormat format, const nlohmann::json& extra = nlohmann::json::object());

/// oracle.csv: trial,players,profiles,lll_potential,optimum,ratio,iterations,converged,optimal,nash
void write_oracle(const std::filesystem::path& dir, const ExperimentConfig& config,
                  std::span<const OracleRow> rows, OutputFormat format);

/// Run manifest: tool version, config hash, seed, trial count, labels and a
/// `generated_at` timestamp, the only field that varies between reruns.
nlohmann::json manifest(const ExperimentConfig& config, std::span<const std::string> labels);

}  // namespace mmd2d
