#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "config.hpp"
#include "jnr/calibration.hpp"
#include "jnr/evaluation.hpp"
#include "jnr/geometry.hpp"
#include "jnr/interchange.hpp"
#include "jnr/pipeline.hpp"
#include "jnr/synthgen.hpp"
#include "jnr/tuning.hpp"
#include "json.hpp"
#include "manifest.hpp"
#include "report.hpp"

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace jnr::cli {
namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitIo = 2;
constexpr int kExitUsage = 64;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flags left unset keep the value from the config file or the default.
struct PipelineFlags {
  std::optional<std::string> method;
  std::optional<std::string> prior_mode;
  std::optional<double> p_single;
  std::optional<double> temperature;
  std::optional<double> tau;
  std::optional<double> one_digit_weight;
  std::optional<double> legibility_threshold;
  std::optional<std::string> filter;
  std::optional<int> rounds;
  std::optional<double> threshold;
  std::optional<std::string> filter_mode;
  std::optional<std::string> bias;
  std::optional<std::string> tau_rule;
  std::optional<std::string> ball_ref;
  std::optional<double> ball_tolerance;
  std::optional<std::string> ball_action;
};

struct SynthFlags {
  std::optional<std::size_t> n_tracklets;
  std::optional<std::size_t> frames_per_tracklet;
  std::optional<double> p_single;
  std::optional<double> legible_frac;
  std::optional<double> illegible_tracklet_frac;
  std::optional<double> eps_trunc;
  std::optional<double> eps_distract;
  std::optional<double> sharpness;
  std::optional<std::size_t> embed_dim;
  std::optional<double> cluster_sep;
  std::optional<double> embed_noise;
  std::optional<std::size_t> ball_tracklets;
  std::optional<std::string> ball_size;
};

struct GlobalFlags {
  std::optional<std::string> config;
  bool show_config = false;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> jobs;
  std::optional<std::string> manifest;
  std::string format = "text";
};

struct IoFlags {
  std::string frames;
  std::optional<std::string> embeddings;
  std::optional<std::string> gt;
  std::optional<std::string> pred;
  std::optional<std::string> out;
  std::optional<std::string> emit_intermediate;
  std::optional<std::string> keypoints;
  std::optional<std::string> image;
  int pad = kDefaultTorsoPad;
  std::optional<std::vector<int>> k_values;
  std::optional<std::vector<double>> n_values;
  std::optional<double> holdout;
};

bool OnOff(const std::string& value, const char* flag) {
  if (value == "on") return true;
  if (value == "off") return false;
  throw UsageError(std::string("--") + flag + " expects on or off, got \"" + value + "\"");
}

std::pair<double, double> ParsePair(const std::string& text, const char* flag) {
  std::string s = text;
  for (char& c : s) {
    if (c == ',' || c == 'x') c = ' ';
  }
  std::istringstream in(s);
  double a = 0.0;
  double b = 0.0;
  std::string rest;
  if (!(in >> a >> b) || (in >> rest)) {
    throw UsageError(std::string("--") + flag + " expects two numbers as w,h, got \"" + text + "\"");
  }
  return {a, b};
}

void AddPipelineFlags(CLI::App* sub, PipelineFlags& f) {
  sub->add_option("--method", f.method, "Consolidation method: heuristic or probabilistic");
  sub->add_option("--prior-mode", f.prior_mode, "Prior weighting: per-frame or once");
  sub->add_option("--p-single", f.p_single, "Prior probability of a one-digit number");
  sub->add_option("--temperature", f.temperature, "Calibration temperature");
  sub->add_option("--tau", f.tau, "Illegibility threshold on summed confidence");
  sub->add_option("--one-digit-weight", f.one_digit_weight, "Vote weight of one-digit reads in mixed tracklets");
  sub->add_option("--legibility-threshold", f.legibility_threshold, "Minimum legibility score of a frame");
  sub->add_option("--filter", f.filter, "Subject filter: on or off");
  sub->add_option("-K,--rounds", f.rounds, "Subject filter rounds");
  sub->add_option("-N,--threshold", f.threshold, "Subject filter threshold in standard deviations");
  sub->add_option("--filter-mode", f.filter_mode, "Outlier score: radial or mahalanobis");
  sub->add_option("--bias", f.bias, "One-digit bias (vote weight and prior): on or off");
  sub->add_option("--tau-rule", f.tau_rule, "Illegibility threshold rule: on or off");
  sub->add_option("--ball-ref", f.ball_ref, "Reference ball size w,h; enables ball detection");
  sub->add_option("--ball-tolerance", f.ball_tolerance, "Relative tolerance of the ball size band");
  sub->add_option("--ball-action", f.ball_action, "Ball tracklets: label-one or flag");
}

void ApplyPipelineFlags(const PipelineFlags& f, PipelineConfig& p) {
  if (f.method) p.method = ParseMethod(*f.method);
  if (f.prior_mode) p.prior_mode = ParsePriorMode(*f.prior_mode);
  if (f.p_single) p.p_single = *f.p_single;
  if (f.temperature) p.temperature = *f.temperature;
  if (f.tau) p.heuristic.illegible_threshold = *f.tau;
  if (f.one_digit_weight) p.heuristic.one_digit_weight = *f.one_digit_weight;
  if (f.legibility_threshold) p.legibility_threshold = *f.legibility_threshold;
  if (f.filter) p.filter_enabled = OnOff(*f.filter, "filter");
  if (f.rounds) p.filter.rounds = *f.rounds;
  if (f.threshold) p.filter.threshold = *f.threshold;
  if (f.filter_mode) p.filter.mode = ParseFilterMode(*f.filter_mode);
  if (f.bias) {
    const bool on = OnOff(*f.bias, "bias");
    p.heuristic.use_bias = on;
    p.prior_bias = on;
  }
  if (f.tau_rule) p.heuristic.use_threshold = OnOff(*f.tau_rule, "tau-rule");
  if (f.ball_ref) {
    const auto [w, h] = ParsePair(*f.ball_ref, "ball-ref");
    BallReference ref = p.ball.value_or(BallReference{});
    ref.mean_w = w;
    ref.mean_h = h;
    p.ball = ref;
  }
  if (f.ball_tolerance) {
    if (!p.ball) throw UsageError("--ball-tolerance needs --ball-ref");
    p.ball->rel_tolerance = *f.ball_tolerance;
  }
  if (f.ball_action) p.ball_action = ParseBallAction(*f.ball_action);
}

void AddSynthFlags(CLI::App* sub, SynthFlags& f) {
  sub->add_option("--n-tracklets", f.n_tracklets, "Number of player tracklets");
  sub->add_option("--frames-per-tracklet", f.frames_per_tracklet, "Frames in each tracklet");
  sub->add_option("--p-single", f.p_single, "Probability that a jersey number has one digit");
  sub->add_option("--legible-frac", f.legible_frac, "Probability that a frame is legible");
  sub->add_option("--illegible-tracklet-frac", f.illegible_tracklet_frac,
                  "Probability that a player never shows the number");
  sub->add_option("--eps-trunc", f.eps_trunc, "Probability that a two-digit number reads as its first digit");
  sub->add_option("--eps-distract", f.eps_distract, "Probability that a frame shows another player");
  sub->add_option("--sharpness", f.sharpness, "Concentration of generated character distributions");
  sub->add_option("--embed-dim", f.embed_dim, "Embedding dimension");
  sub->add_option("--cluster-sep", f.cluster_sep, "Distance between player and distractor embeddings");
  sub->add_option("--embed-noise", f.embed_noise, "Per-dimension embedding noise");
  sub->add_option("--ball-tracklets", f.ball_tracklets, "Extra tracklets of ball detections");
  sub->add_option("--ball-size", f.ball_size, "Ball box size w,h");
}

void ApplySynthFlags(const SynthFlags& f, SynthConfig& s) {
  if (f.n_tracklets) s.n_tracklets = *f.n_tracklets;
  if (f.frames_per_tracklet) s.frames_per_tracklet = *f.frames_per_tracklet;
  if (f.p_single) s.p_single = *f.p_single;
  if (f.legible_frac) s.legible_frac = *f.legible_frac;
  if (f.illegible_tracklet_frac) s.illegible_tracklet_frac = *f.illegible_tracklet_frac;
  if (f.eps_trunc) s.eps_trunc = *f.eps_trunc;
  if (f.eps_distract) s.eps_distract = *f.eps_distract;
  if (f.sharpness) s.sharpness = *f.sharpness;
  if (f.embed_dim) s.embed_dim = *f.embed_dim;
  if (f.cluster_sep) s.cluster_sep = *f.cluster_sep;
  if (f.embed_noise) s.embed_noise = *f.embed_noise;
  if (f.ball_tracklets) s.ball_tracklets = *f.ball_tracklets;
  if (f.ball_size) std::tie(s.ball_w, s.ball_h) = ParsePair(*f.ball_size, "ball-size");
}

// Shared state of one invocation.
struct Run {
  RunConfig cfg;
  GlobalFlags global;
  IoFlags io;
  std::string command;

  std::optional<fs::path> ManifestPath(const std::optional<fs::path>& primary_output) const {
    if (global.manifest) return fs::path(*global.manifest);
    if (primary_output) return fs::path(primary_output->string() + ".manifest.json");
    return std::nullopt;
  }

  RunManifest NewManifest() const { return RunManifest(command, ToJson(cfg), cfg.seed); }

  std::vector<Tracklet> LoadInputs(RunManifest& manifest) const {
    std::optional<fs::path> emb;
    std::optional<fs::path> gt;
    manifest.AddInput(io.frames);
    if (io.embeddings) {
      emb = *io.embeddings;
      manifest.AddInput(*emb);
    }
    if (io.gt) {
      gt = *io.gt;
      manifest.AddInput(*gt);
    }
    return LoadTracklets(io.frames, emb, gt);
  }

  // Frame records alone, for stages that never look at embeddings.
  std::vector<Tracklet> LoadRecordsOnly(RunManifest& manifest, bool with_gt = true) const {
    manifest.AddInput(io.frames);
    std::ifstream in(io.frames);
    if (!in) throw IoError("cannot open " + io.frames);
    auto tracklets = ParseFrameRecords(in);
    if (with_gt && io.gt) {
      manifest.AddInput(*io.gt);
      ApplyGroundTruth(tracklets, LoadLabelMap(*io.gt));
    }
    return tracklets;
  }

  // Writes to --out when given, stdout otherwise.
  void Emit(const std::string& text, RunManifest& manifest) const {
    if (io.out) {
      std::ofstream out(*io.out, std::ios::trunc);
      if (!out) throw IoError("cannot write " + *io.out);
      out << text;
      out.close();
      manifest.AddOutput(*io.out);
    } else {
      std::cout << text;
    }
  }

  void Finish(const RunManifest& manifest) const {
    const auto path = ManifestPath(io.out ? std::optional<fs::path>(*io.out) : std::nullopt);
    if (path) manifest.Write(*path);
  }

  bool Json() const { return global.format == "json"; }
};

std::string Dump(const ojson& j) { return j.dump(2) + "\n"; }

int CmdSynth(Run& run) {
  SynthConfig sc = run.cfg.synth;
  sc.seed = run.cfg.seed;
  RunManifest manifest = run.NewManifest();
  const fs::path dir = *run.io.out;
  const SynthCorpus corpus = GenerateCorpus(sc);
  SaveSynthCorpus(dir, corpus);
  for (const char* f : {"frames.jsonl", "embeddings.bin", "gt.json", "provenance.json"}) manifest.AddOutput(dir / f);
  manifest.Write(run.global.manifest ? fs::path(*run.global.manifest) : dir / "manifest.json");
  std::size_t frames = 0;
  for (const Tracklet& t : corpus.tracklets) frames += t.frames.size();
  std::cerr << "wrote " << corpus.tracklets.size() << " tracklets, " << frames << " frames to " << dir.string()
            << "\n";
  return kExitOk;
}

int CmdFilter(Run& run) {
  CheckFilterConfig(run.cfg.pipeline.filter);
  RunManifest manifest = run.NewManifest();
  const auto tracklets = run.LoadInputs(manifest);
  ojson out = ojson::object();
  std::size_t dropped_total = 0;
  std::size_t frames_total = 0;
  for (const Tracklet& t : tracklets) {
    const auto kept = FilterTrackletFrames(t, run.cfg.pipeline.filter);
    ojson keep = ojson::array();
    ojson drop = ojson::array();
    std::size_t next = 0;
    for (std::size_t i = 0; i < t.frames.size(); ++i) {
      if (next < kept.size() && kept[next] == i) {
        keep.push_back(t.frames[i].frame_idx);
        ++next;
      } else {
        drop.push_back(t.frames[i].frame_idx);
      }
    }
    dropped_total += drop.size();
    frames_total += t.frames.size();
    out[t.tracklet_id] = {{"kept", keep}, {"dropped", drop}};
  }
  run.Emit(Dump(out), manifest);
  std::cerr << "dropped " << dropped_total << " of " << frames_total << " frames\n";
  run.Finish(manifest);
  return kExitOk;
}

int CmdCalibrate(Run& run) {
  if (!run.io.gt) throw UsageError("calibrate needs --gt");
  CheckPipelineConfig(run.cfg.pipeline);
  PipelineConfig pipeline = run.cfg.pipeline;
  pipeline.ball.reset();
  if (!run.io.embeddings && pipeline.filter_enabled) {
    std::cerr << "no --embeddings given; calibrating without the subject filter\n";
    pipeline.filter_enabled = false;
  }
  RunManifest manifest = run.NewManifest();
  const auto tracklets = run.io.embeddings ? run.LoadInputs(manifest) : run.LoadRecordsOnly(manifest);

  std::vector<std::vector<LabeledFrame>> per_tracklet;
  for (const Tracklet& t : tracklets) {
    if (!t.gt_label || t.gt_label->is_illegible()) continue;
    const auto targets = PositionTargets(*t.gt_label);
    const TrackletResult r = ProcessTracklet(t, pipeline);
    std::vector<LabeledFrame> frames;
    for (std::size_t i : r.legible) frames.push_back({t.frames[i].char_dists, targets});
    if (!frames.empty()) per_tracklet.push_back(std::move(frames));
  }
  const HoldoutSplit split =
      SplitHoldout(per_tracklet.size(), run.cfg.calibration.holdout_fraction, run.cfg.seed);
  auto gather = [&](const std::vector<std::size_t>& idx) {
    std::vector<LabeledFrame> out;
    for (std::size_t i : idx) out.insert(out.end(), per_tracklet[i].begin(), per_tracklet[i].end());
    return out;
  };
  const auto fit = gather(split.tune);
  const auto held = gather(split.holdout);
  const double t = FitTemperature(fit, run.cfg.calibration.search).temperature();

  ojson out;
  out["temperature"] = t;
  out["fit_tracklets"] = split.tune.size();
  out["fit_frames"] = fit.size();
  out["holdout_tracklets"] = split.holdout.size();
  out["holdout_frames"] = held.size();
  out["holdout_nll_identity"] = NegativeLogLikelihood(held, 1.0);
  out["holdout_nll_fitted"] = NegativeLogLikelihood(held, t);
  run.Emit(Dump(out), manifest);
  run.Finish(manifest);
  return kExitOk;
}

int CmdConsolidate(Run& run) {
  CheckPipelineConfig(run.cfg.pipeline);
  RunManifest manifest = run.NewManifest();
  const auto tracklets = run.LoadInputs(manifest);
  const auto results = RunPipeline(tracklets, run.cfg.pipeline, run.cfg.jobs);

  std::ostringstream labels;
  WriteLabelMap(labels, ToLabelMap(results));
  run.Emit(labels.str(), manifest);

  if (run.io.emit_intermediate) {
    const fs::path dir = *run.io.emit_intermediate;
    fs::create_directories(dir);
    const fs::path path = dir / "stages.jsonl";
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    for (std::size_t n = 0; n < results.size(); ++n) {
      const TrackletResult& r = results[n];
      const Tracklet& t = tracklets[n];
      auto frame_ids = [&](const std::vector<std::size_t>& positions) {
        ojson arr = ojson::array();
        for (std::size_t i : positions) arr.push_back(t.frames[i].frame_idx);
        return arr;
      };
      ojson line;
      line["tracklet_id"] = r.tracklet_id;
      line["is_ball"] = r.is_ball;
      line["kept"] = frame_ids(r.kept);
      line["legible"] = frame_ids(r.legible);
      line["label"] = r.label.value();
      out << line.dump() << '\n';
    }
    out.close();
    manifest.AddOutput(path);
  }
  run.Finish(manifest);
  return kExitOk;
}

int CmdEvaluate(Run& run) {
  if (!run.io.pred || !run.io.gt) throw UsageError("evaluate needs --pred and --gt");
  RunManifest manifest = run.NewManifest();
  manifest.AddInput(*run.io.pred);
  manifest.AddInput(*run.io.gt);
  const LabelMap pred = LoadLabelMap(*run.io.pred);
  const LabelMap gt = LoadLabelMap(*run.io.gt);
  EvalReport report = EvaluateAccuracy(pred, gt);
  if (!run.io.frames.empty()) {
    const auto tracklets = run.LoadRecordsOnly(manifest, false);
    report.digit_confusion = ComputeDigitConfusion(tracklets, gt, run.cfg.pipeline.legibility_threshold);
  }
  run.Emit(run.Json() ? Dump(EvalReportJson(report)) : EvalReportText(report), manifest);
  run.Finish(manifest);
  return kExitOk;
}

int CmdGridSearch(Run& run) {
  if (!run.io.gt) throw UsageError("gridsearch needs --gt");
  GridSpec spec = run.cfg.grid;
  spec.seed = run.cfg.seed;
  RunManifest manifest = run.NewManifest();
  const auto tracklets = run.LoadInputs(manifest);
  const GridSearchResult r = GridSearchFilter(tracklets, spec, run.cfg.pipeline, run.cfg.jobs);
  run.Emit(run.Json() ? Dump(GridSearchJson(r)) : GridSearchText(r), manifest);
  run.Finish(manifest);
  return kExitOk;
}

int CmdAblate(Run& run) {
  if (!run.io.gt) throw UsageError("ablate needs --gt");
  RunManifest manifest = run.NewManifest();
  const auto tracklets = run.LoadInputs(manifest);
  std::vector<Tracklet> labeled;
  for (const Tracklet& t : tracklets) {
    if (t.gt_label) labeled.push_back(t);
  }
  const auto rows = RunAblation(labeled, run.cfg.pipeline, run.cfg.jobs);
  run.Emit(run.Json() ? Dump(AblationJson(rows)) : AblationText(rows), manifest);
  run.Finish(manifest);
  return kExitOk;
}

ojson BoxJson(const TorsoBox& b) { return {{"x0", b.x0}, {"y0", b.y0}, {"x1", b.x1}, {"y1", b.y1}}; }

int CmdCrop(Run& run) {
  if (!run.io.image) throw UsageError("crop needs --image W,H");
  const auto [w, h] = ParsePair(*run.io.image, "image");
  const ImageSize image{static_cast<int>(w), static_cast<int>(h)};
  RunManifest manifest = run.NewManifest();
  if (run.io.keypoints) {
    Keypoints kp;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(*run.io.keypoints);
      for (const auto& [name, xy] : j.items()) kp[name] = {xy.at(0).get<double>(), xy.at(1).get<double>()};
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(std::string("--keypoints must be a JSON object of [x, y] pairs: ") + e.what());
    }
    const TorsoBox box = TorsoCrop(kp, image, run.io.pad);
    run.Emit(BoxJson(box).dump() + "\n", manifest);
    run.Finish(manifest);
    return kExitOk;
  }
  if (run.io.frames.empty()) throw UsageError("crop needs --keypoints or --frames");
  const auto tracklets = run.LoadRecordsOnly(manifest, false);
  std::ostringstream out;
  std::size_t failures = 0;
  for (const Tracklet& t : tracklets) {
    for (const FramePrediction& f : t.frames) {
      ojson line;
      line["tracklet_id"] = t.tracklet_id;
      line["frame_idx"] = f.frame_idx;
      if (!f.keypoints) {
        line["error"] = "no keypoints";
        ++failures;
      } else {
        try {
          line["box"] = BoxJson(TorsoCrop(*f.keypoints, image, run.io.pad));
        } catch (const ValidationError& e) {
          line["error"] = e.what();
          ++failures;
        }
      }
      out << line.dump() << '\n';
    }
  }
  run.Emit(out.str(), manifest);
  run.Finish(manifest);
  if (failures > 0) std::cerr << failures << " frames without a valid torso crop\n";
  return failures == 0 ? kExitOk : kExitValidation;
}

int CmdBallFilter(Run& run) {
  if (!run.cfg.pipeline.ball) throw UsageError("ball-filter needs --ball-ref w,h");
  CheckPipelineConfig(run.cfg.pipeline);
  RunManifest manifest = run.NewManifest();
  const auto tracklets = run.LoadRecordsOnly(manifest, false);
  ojson balls = ojson::array();
  for (const Tracklet& t : tracklets) {
    if (DetectBallTracklet(t, *run.cfg.pipeline.ball)) balls.push_back(t.tracklet_id);
  }
  ojson out;
  out["checked"] = tracklets.size();
  out["ball_tracklets"] = balls;
  run.Emit(Dump(out), manifest);
  run.Finish(manifest);
  return kExitOk;
}

int CmdValidate(Run& run) {
  std::ifstream in(run.io.frames);
  if (!in) throw IoError("cannot open " + run.io.frames);
  std::optional<EmbeddingMatrix> embeddings;
  if (run.io.embeddings) {
    std::ifstream emb(*run.io.embeddings, std::ios::binary);
    if (!emb) throw IoError("cannot open " + *run.io.embeddings);
    embeddings = ReadEmbeddings(emb);
  }

  std::size_t records = 0;
  std::vector<std::string> problems;
  std::string line;
  for (std::size_t line_no = 1; std::getline(in, line); ++line_no) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    ++records;
    const std::string where = "line " + std::to_string(line_no) + ": ";
    try {
      const FramePrediction rec = ParseFrameRecord(line);
      for (const Violation& v : ValidateRecord(rec)) problems.push_back(where + v.field + ": " + v.message);
      if (embeddings && rec.embedding_ref && *rec.embedding_ref >= embeddings->rows()) {
        problems.push_back(where + "embedding_ref: " + std::to_string(*rec.embedding_ref) + " is outside the " +
                           std::to_string(embeddings->rows()) + "-row sidecar");
      }
    } catch (const FormatError& e) {
      problems.push_back(where + e.what());
    }
  }
  for (const std::string& p : problems) std::cout << p << '\n';
  std::cout << records << " records, " << problems.size() << " violations\n";
  return problems.empty() ? kExitOk : kExitValidation;
}

int Main(int argc, char** argv) {
  CLI::App app{"Tracklet-level jersey number inference"};
  app.require_subcommand(0, 1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(JNR_VERSION));

  Run run;
  PipelineFlags pf;
  SynthFlags sf;
  GlobalFlags& g = run.global;
  IoFlags& io = run.io;

  app.add_option("--config", g.config, "JSON config file (same shape as --show-config)");
  app.add_flag("--show-config", g.show_config, "Print the effective configuration and exit");
  app.add_option("--seed", g.seed, "Seed for generation and splits");
  app.add_option("--jobs", g.jobs, "Worker threads");
  app.add_option("--manifest", g.manifest, "Run manifest path (default: <out>.manifest.json)");
  app.add_option("--format", g.format, "Report format: text or json")->check(CLI::IsMember({"text", "json"}));

  auto frames_opt = [&](CLI::App* sub, bool required) {
    auto* o = sub->add_option("--frames", io.frames, "Frame records (JSON lines)");
    if (required) o->required();
  };

  CLI::App* synth = app.add_subcommand("synth", "Generate a synthetic corpus with planted ground truth");
  synth->add_option("--out", io.out, "Output directory")->required();
  AddSynthFlags(synth, sf);

  CLI::App* filter = app.add_subcommand("filter", "Run the subject filter and list kept frames");
  frames_opt(filter, true);
  filter->add_option("--embeddings", io.embeddings, "Embedding sidecar")->required();
  filter->add_option("--out", io.out, "Output JSON (default stdout)");
  AddPipelineFlags(filter, pf);

  CLI::App* calibrate = app.add_subcommand("calibrate", "Fit the calibration temperature on labeled tracklets");
  frames_opt(calibrate, true);
  calibrate->add_option("--embeddings", io.embeddings, "Embedding sidecar");
  calibrate->add_option("--gt", io.gt, "Ground-truth labels")->required();
  calibrate->add_option("--out", io.out, "Output JSON (default stdout)");
  AddPipelineFlags(calibrate, pf);

  CLI::App* consolidate = app.add_subcommand("consolidate", "Predict one label per tracklet");
  frames_opt(consolidate, true);
  consolidate->add_option("--embeddings", io.embeddings, "Embedding sidecar");
  consolidate->add_option("--out", io.out, "Label map JSON (default stdout)");
  consolidate->add_option("--emit-intermediate", io.emit_intermediate, "Directory for per-stage outputs");
  AddPipelineFlags(consolidate, pf);

  CLI::App* evaluate = app.add_subcommand("evaluate", "Score predictions against ground truth");
  evaluate->add_option("--pred", io.pred, "Predicted label map")->required();
  evaluate->add_option("--gt", io.gt, "Ground-truth label map")->required();
  frames_opt(evaluate, false);
  evaluate->add_option("--out", io.out, "Report file (default stdout)");
  AddPipelineFlags(evaluate, pf);

  CLI::App* gridsearch = app.add_subcommand("gridsearch", "Tune subject filter (K, N) on a holdout split");
  frames_opt(gridsearch, true);
  gridsearch->add_option("--embeddings", io.embeddings, "Embedding sidecar");
  gridsearch->add_option("--gt", io.gt, "Ground-truth labels")->required();
  gridsearch->add_option("--k-values", io.k_values, "Grid of filter rounds");
  gridsearch->add_option("--n-values", io.n_values, "Grid of filter thresholds");
  gridsearch->add_option("--holdout", io.holdout, "Holdout fraction");
  gridsearch->add_option("--out", io.out, "Report file (default stdout)");
  AddPipelineFlags(gridsearch, pf);

  CLI::App* ablate = app.add_subcommand("ablate", "Accuracy of each pipeline variant");
  frames_opt(ablate, true);
  ablate->add_option("--embeddings", io.embeddings, "Embedding sidecar");
  ablate->add_option("--gt", io.gt, "Ground-truth labels")->required();
  ablate->add_option("--out", io.out, "Report file (default stdout)");
  AddPipelineFlags(ablate, pf);

  CLI::App* crop = app.add_subcommand("crop", "Torso crop rectangle from pose keypoints");
  crop->add_option("--keypoints", io.keypoints, "JSON object {joint: [x, y]}");
  frames_opt(crop, false);
  crop->add_option("--image", io.image, "Image size W,H");
  crop->add_option("--pad", io.pad, "Padding on the left, right and bottom");
  crop->add_option("--out", io.out, "Output file (default stdout)");

  CLI::App* ball = app.add_subcommand("ball-filter", "List tracklets whose boxes match the ball size");
  frames_opt(ball, true);
  ball->add_option("--out", io.out, "Output JSON (default stdout)");
  AddPipelineFlags(ball, pf);

  CLI::App* validate = app.add_subcommand("validate", "Check frame records against the interchange schema");
  frames_opt(validate, true);
  validate->add_option("--embeddings", io.embeddings, "Embedding sidecar to check references against");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (g.config) MergeConfigFile(run.cfg, *g.config);
    if (g.seed) run.cfg.seed = *g.seed;
    if (g.jobs) run.cfg.jobs = *g.jobs;
    ApplyPipelineFlags(pf, run.cfg.pipeline);
    ApplySynthFlags(sf, run.cfg.synth);
    if (io.k_values) run.cfg.grid.k_values = *io.k_values;
    if (io.n_values) run.cfg.grid.n_values = *io.n_values;
    if (io.holdout) run.cfg.grid.holdout_fraction = *io.holdout;

    if (g.show_config) {
      std::cout << ToJson(run.cfg).dump(2) << '\n';
      return kExitOk;
    }
    const auto subs = app.get_subcommands();
    if (subs.empty()) {
      std::cerr << app.help();
      return kExitUsage;
    }
    run.command = subs.front()->get_name();
    const std::string& c = run.command;
    if (c == "synth") return CmdSynth(run);
    if (c == "filter") return CmdFilter(run);
    if (c == "calibrate") return CmdCalibrate(run);
    if (c == "consolidate") return CmdConsolidate(run);
    if (c == "evaluate") return CmdEvaluate(run);
    if (c == "gridsearch") return CmdGridSearch(run);
    if (c == "ablate") return CmdAblate(run);
    if (c == "crop") return CmdCrop(run);
    if (c == "ball-filter") return CmdBallFilter(run);
    if (c == "validate") return CmdValidate(run);
    return kExitUsage;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kExitIo;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  }
}

}  // namespace
}  // namespace jnr::cli

int main(int argc, char** argv) { return jnr::cli::Main(argc, argv); }
