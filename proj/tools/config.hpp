#pragma once

// Effective run configuration: built-in defaults, then an optional JSON
// config file, then command-line flags.

#include <cstdint>
#include <string>

#include "jnr/calibration.hpp"
#include "jnr/pipeline.hpp"
#include "jnr/synthgen.hpp"
#include "jnr/tuning.hpp"
#include "json.hpp"

namespace jnr::cli {

struct CalibrationSettings {
  TemperatureSearch search;
  double holdout_fraction = 0.3;
};

struct RunConfig {
  std::uint64_t seed = 0;
  unsigned jobs = 1;
  PipelineConfig pipeline;
  GridSpec grid;
  CalibrationSettings calibration;
  SynthConfig synth;
};

nlohmann::ordered_json ToJson(const RunConfig& cfg);

/// Overlays the keys present in `j` onto `cfg`. Unknown keys and wrongly
/// typed values raise ValidationError naming the key path.
void MergeJson(RunConfig& cfg, const nlohmann::json& j);

/// Reads a config file written by --show-config (or any subset of it).
void MergeConfigFile(RunConfig& cfg, const std::string& path);

const char* MethodName(Method m);
const char* FilterModeName(FilterMode m);
const char* PriorModeName(PriorMode m);
const char* BallActionName(BallAction a);
Method ParseMethod(const std::string& s);
FilterMode ParseFilterMode(const std::string& s);
PriorMode ParsePriorMode(const std::string& s);
BallAction ParseBallAction(const std::string& s);

}  // namespace jnr::cli
