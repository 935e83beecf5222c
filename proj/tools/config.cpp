#include "config.hpp"

#include <fstream>
#include <functional>
#include <map>

namespace jnr::cli {
namespace {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

template <typename T>
T Get(const json& j, const std::string& path) {
  try {
    return j.get<T>();
  } catch (const json::exception&) {
    throw ValidationError("config key \"" + path + "\" has the wrong type");
  }
}

// Walks the keys of `j`, dispatching each to a handler; unknown keys fail.
void Visit(const json& j, const std::string& prefix,
           const std::map<std::string, std::function<void(const json&, const std::string&)>>& handlers) {
  if (!j.is_object()) throw ValidationError("config key \"" + prefix + "\" must be an object");
  for (const auto& [key, value] : j.items()) {
    const std::string path = prefix.empty() ? key : prefix + "." + key;
    auto it = handlers.find(key);
    if (it == handlers.end()) throw ValidationError("unknown config key \"" + path + "\"");
    it->second(value, path);
  }
}

template <typename T>
std::function<void(const json&, const std::string&)> Into(T& target) {
  return [&target](const json& v, const std::string& path) { target = Get<T>(v, path); };
}

template <typename E>
std::function<void(const json&, const std::string&)> IntoEnum(E& target, E (*parse)(const std::string&)) {
  return [&target, parse](const json& v, const std::string& path) { target = parse(Get<std::string>(v, path)); };
}

}  // namespace

const char* MethodName(Method m) { return m == Method::kHeuristic ? "heuristic" : "probabilistic"; }
const char* FilterModeName(FilterMode m) { return m == FilterMode::kRadialZScore ? "radial" : "mahalanobis"; }
const char* PriorModeName(PriorMode m) { return m == PriorMode::kPerFrame ? "per-frame" : "once"; }
const char* BallActionName(BallAction a) { return a == BallAction::kLabelOne ? "label-one" : "flag"; }

Method ParseMethod(const std::string& s) {
  if (s == "heuristic") return Method::kHeuristic;
  if (s == "probabilistic") return Method::kProbabilistic;
  throw ValidationError("unknown method \"" + s + "\" (expected heuristic or probabilistic)");
}

FilterMode ParseFilterMode(const std::string& s) {
  if (s == "radial") return FilterMode::kRadialZScore;
  if (s == "mahalanobis") return FilterMode::kIsotropicMahalanobis;
  throw ValidationError("unknown filter mode \"" + s + "\" (expected radial or mahalanobis)");
}

PriorMode ParsePriorMode(const std::string& s) {
  if (s == "per-frame") return PriorMode::kPerFrame;
  if (s == "once") return PriorMode::kOnce;
  throw ValidationError("unknown prior mode \"" + s + "\" (expected per-frame or once)");
}

BallAction ParseBallAction(const std::string& s) {
  if (s == "label-one") return BallAction::kLabelOne;
  if (s == "flag") return BallAction::kFlag;
  throw ValidationError("unknown ball action \"" + s + "\" (expected label-one or flag)");
}

nlohmann::ordered_json ToJson(const RunConfig& cfg) {
  const PipelineConfig& p = cfg.pipeline;
  ojson ball = nullptr;
  if (p.ball) ball = {{"mean_w", p.ball->mean_w}, {"mean_h", p.ball->mean_h}, {"rel_tolerance", p.ball->rel_tolerance}};

  ojson out;
  out["seed"] = cfg.seed;
  out["jobs"] = cfg.jobs;
  out["pipeline"] = {
      {"ball", ball},
      {"ball_action", BallActionName(p.ball_action)},
      {"filter",
       {{"enabled", p.filter_enabled},
        {"rounds", p.filter.rounds},
        {"threshold", p.filter.threshold},
        {"mode", FilterModeName(p.filter.mode)}}},
      {"legibility_threshold", p.legibility_threshold},
      {"method", MethodName(p.method)},
      {"heuristic",
       {{"tau", p.heuristic.illegible_threshold},
        {"one_digit_weight", p.heuristic.one_digit_weight},
        {"use_bias", p.heuristic.use_bias},
        {"use_threshold", p.heuristic.use_threshold}}},
      {"probabilistic",
       {{"prior_bias", p.prior_bias},
        {"p_single", p.p_single},
        {"prior_mode", PriorModeName(p.prior_mode)},
        {"temperature", p.temperature}}},
  };
  out["grid"] = {{"k_values", cfg.grid.k_values},
                 {"n_values", cfg.grid.n_values},
                 {"holdout_fraction", cfg.grid.holdout_fraction}};
  out["calibration"] = {{"min_temperature", cfg.calibration.search.min_temperature},
                        {"max_temperature", cfg.calibration.search.max_temperature},
                        {"log_tolerance", cfg.calibration.search.log_tolerance},
                        {"holdout_fraction", cfg.calibration.holdout_fraction}};
  const SynthConfig& s = cfg.synth;
  out["synth"] = {{"n_tracklets", s.n_tracklets},
                  {"frames_per_tracklet", s.frames_per_tracklet},
                  {"p_single", s.p_single},
                  {"legible_frac", s.legible_frac},
                  {"illegible_tracklet_frac", s.illegible_tracklet_frac},
                  {"eps_trunc", s.eps_trunc},
                  {"eps_distract", s.eps_distract},
                  {"sharpness", s.sharpness},
                  {"embed_dim", s.embed_dim},
                  {"cluster_sep", s.cluster_sep},
                  {"embed_noise", s.embed_noise},
                  {"ball_tracklets", s.ball_tracklets},
                  {"ball_w", s.ball_w},
                  {"ball_h", s.ball_h}};
  return out;
}

void MergeJson(RunConfig& cfg, const nlohmann::json& j) {
  PipelineConfig& p = cfg.pipeline;
  SynthConfig& s = cfg.synth;
  Visit(j, "",
        {
            {"seed", Into(cfg.seed)},
            {"jobs", Into(cfg.jobs)},
            {"pipeline",
             [&](const json& v, const std::string& path) {
               Visit(v, path,
                     {
                         {"ball",
                          [&](const json& b, const std::string& bpath) {
                            if (b.is_null()) {
                              p.ball.reset();
                              return;
                            }
                            BallReference ref = p.ball.value_or(BallReference{});
                            Visit(b, bpath,
                                  {{"mean_w", Into(ref.mean_w)},
                                   {"mean_h", Into(ref.mean_h)},
                                   {"rel_tolerance", Into(ref.rel_tolerance)}});
                            p.ball = ref;
                          }},
                         {"ball_action", IntoEnum(p.ball_action, ParseBallAction)},
                         {"filter",
                          [&](const json& f, const std::string& fpath) {
                            Visit(f, fpath,
                                  {{"enabled", Into(p.filter_enabled)},
                                   {"rounds", Into(p.filter.rounds)},
                                   {"threshold", Into(p.filter.threshold)},
                                   {"mode", IntoEnum(p.filter.mode, ParseFilterMode)}});
                          }},
                         {"legibility_threshold", Into(p.legibility_threshold)},
                         {"method", IntoEnum(p.method, ParseMethod)},
                         {"heuristic",
                          [&](const json& h, const std::string& hpath) {
                            Visit(h, hpath,
                                  {{"tau", Into(p.heuristic.illegible_threshold)},
                                   {"one_digit_weight", Into(p.heuristic.one_digit_weight)},
                                   {"use_bias", Into(p.heuristic.use_bias)},
                                   {"use_threshold", Into(p.heuristic.use_threshold)}});
                          }},
                         {"probabilistic",
                          [&](const json& q, const std::string& qpath) {
                            Visit(q, qpath,
                                  {{"prior_bias", Into(p.prior_bias)},
                                   {"p_single", Into(p.p_single)},
                                   {"prior_mode", IntoEnum(p.prior_mode, ParsePriorMode)},
                                   {"temperature", Into(p.temperature)}});
                          }},
                     });
             }},
            {"grid",
             [&](const json& v, const std::string& path) {
               Visit(v, path,
                     {{"k_values", Into(cfg.grid.k_values)},
                      {"n_values", Into(cfg.grid.n_values)},
                      {"holdout_fraction", Into(cfg.grid.holdout_fraction)}});
             }},
            {"calibration",
             [&](const json& v, const std::string& path) {
               Visit(v, path,
                     {{"min_temperature", Into(cfg.calibration.search.min_temperature)},
                      {"max_temperature", Into(cfg.calibration.search.max_temperature)},
                      {"log_tolerance", Into(cfg.calibration.search.log_tolerance)},
                      {"holdout_fraction", Into(cfg.calibration.holdout_fraction)}});
             }},
            {"synth",
             [&](const json& v, const std::string& path) {
               Visit(v, path,
                     {{"n_tracklets", Into(s.n_tracklets)},
                      {"frames_per_tracklet", Into(s.frames_per_tracklet)},
                      {"p_single", Into(s.p_single)},
                      {"legible_frac", Into(s.legible_frac)},
                      {"illegible_tracklet_frac", Into(s.illegible_tracklet_frac)},
                      {"eps_trunc", Into(s.eps_trunc)},
                      {"eps_distract", Into(s.eps_distract)},
                      {"sharpness", Into(s.sharpness)},
                      {"embed_dim", Into(s.embed_dim)},
                      {"cluster_sep", Into(s.cluster_sep)},
                      {"embed_noise", Into(s.embed_noise)},
                      {"ball_tracklets", Into(s.ball_tracklets)},
                      {"ball_w", Into(s.ball_w)},
                      {"ball_h", Into(s.ball_h)}});
             }},
        });
}

void MergeConfigFile(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw FormatError("config file " + path + ": " + e.what());
  }
  MergeJson(cfg, j);
}

}  // namespace jnr::cli
