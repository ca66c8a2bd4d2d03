// anchortrack: track, evaluate and synthesise single-object sequences.
//
//   anchortrack track --seq frames/ --init 10,20,30,40 --out run/
//   anchortrack track --batch sequences/ --out runs/ --jobs 4
//   anchortrack eval --results run/results.csv --gt frames/groundtruth_rect.txt --out run/metrics.csv
//   anchortrack synth --preset occlusion --out frames/
//
// Exit codes: 0 success, 1 usage error, 2 data error.

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "anchortrack/anchor_model.hpp"
#include "anchortrack/config.hpp"
#include "anchortrack/errors.hpp"
#include "anchortrack/eval.hpp"
#include "anchortrack/localization.hpp"
#include "anchortrack/pipeline.hpp"
#include "anchortrack/sequence_io.hpp"
#include "anchortrack/synth.hpp"

namespace at = anchortrack;
namespace fs = std::filesystem;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr const char* kGroundTruthName = "groundtruth_rect.txt";

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TrackOptions {
  std::string seq;
  std::string batch;
  std::string init;
  std::string config;
  std::string out;
  bool dump_heatmaps = false;
  bool annotate = false;
  bool dump_model = false;
  bool dump_gate = false;
  int jobs = 1;
};

struct EvalOptions {
  std::string results;
  std::string gt;
  std::string out;
};

struct SynthOptions {
  std::string preset;
  std::string spec;
  std::string out;
  std::string format = "png";
};

std::string frame_name(std::size_t i, const std::string& ext) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04zu.%s", i + 1, ext.c_str());
  return buf;
}

void draw_box(std::vector<std::uint8_t>& rgb, int w, int h, const at::BoundingBox& box) {
  const int x0 = static_cast<int>(std::lround(box.left()));
  const int y0 = static_cast<int>(std::lround(box.top()));
  const int x1 = static_cast<int>(std::lround(box.right())) - 1;
  const int y1 = static_cast<int>(std::lround(box.bottom())) - 1;
  const auto put = [&](int x, int y) {
    if (x < 0 || y < 0 || x >= w || y >= h) return;
    const std::size_t o = (static_cast<std::size_t>(y) * w + x) * 3;
    rgb[o] = 255;
    rgb[o + 1] = 0;
    rgb[o + 2] = 0;
  };
  for (int t = 0; t < 2; ++t) {
    for (int x = x0; x <= x1; ++x) {
      put(x, y0 + t);
      put(x, y1 - t);
    }
    for (int y = y0; y <= y1; ++y) {
      put(x0 + t, y);
      put(x1 - t, y);
    }
  }
}

fs::path frames_dir_of(const fs::path& seq_dir) {
  // OTB layout keeps frames under img/.
  return fs::is_directory(seq_dir / "img") ? seq_dir / "img" : seq_dir;
}

void track_one(const fs::path& seq_dir, const at::BoundingBox& init, const at::TrackerConfig& cfg,
               const fs::path& out, const TrackOptions& opt) {
  const at::DirectorySequence frames(frames_dir_of(seq_dir));
  fs::create_directories(out);
  if (opt.dump_heatmaps) fs::create_directories(out / "heatmaps");
  if (opt.annotate) fs::create_directories(out / "annotated");

  const auto observer = [&](const at::Frame& frame, const at::FrameResult& r, const at::StepTrace* trace) {
    const auto i = static_cast<std::size_t>(r.frame_index);
    if (opt.dump_heatmaps && trace && trace->scores) {
      const auto gray = at::heatmap(*trace->scores);
      std::vector<std::uint8_t> rgb(gray.size() * 3);
      for (std::size_t k = 0; k < gray.size(); ++k) rgb[3 * k] = rgb[3 * k + 1] = rgb[3 * k + 2] = gray[k];
      at::atomic_write_image(out / "heatmaps" / frame_name(i, "png"), frame.width(), frame.height(), rgb);
    }
    if (opt.annotate) {
      std::vector<std::uint8_t> rgb(frame.rgb().begin(), frame.rgb().end());
      draw_box(rgb, frame.width(), frame.height(), r.box);
      at::atomic_write_image(out / "annotated" / frame_name(i, "png"), frame.width(), frame.height(), rgb);
    }
  };

  at::TrackerState final_state;
  const auto results = at::run_sequence(frames, init, cfg, observer, opt.dump_heatmaps, &final_state);

  at::atomic_write(out / "results.csv", [&](std::ostream& os) { at::write_results_csv(os, results); });
  if (opt.dump_gate) {
    at::atomic_write(out / "gate.csv", [&](std::ostream& os) {
      os << "frame_index,lbsp_similarity,hist_distance,passed\n";
      for (const auto& r : results) {
        os << r.frame_index << ',';
        if (r.gate) {
          os << r.gate->lbsp_similarity << ',' << r.gate->hist_distance << ',' << (r.gate->passed ? 1 : 0);
        } else {
          os << ",,";
        }
        os << '\n';
      }
    });
  }
  if (opt.dump_model) {
    at::atomic_write(out / "model.tsv", [&](std::ostream& os) { at::write_model_dump(os, final_state.model); });
  }
}

int run_track(const TrackOptions& opt) {
  at::TrackerConfig cfg;
  if (!opt.config.empty()) cfg = at::load_config(opt.config);

  if (opt.batch.empty()) {
    if (opt.seq.empty()) throw UsageError("track: --seq or --batch is required");
    if (opt.init.empty()) throw UsageError("track: --init is required with --seq");
    const at::BoundingBox init = at::parse_box(opt.init);
    track_one(opt.seq, init, cfg, opt.out, opt);
    return 0;
  }

  std::vector<fs::path> sequences;
  for (const auto& e : fs::directory_iterator(opt.batch)) {
    if (e.is_directory() && fs::exists(e.path() / kGroundTruthName)) sequences.push_back(e.path());
  }
  std::sort(sequences.begin(), sequences.end());
  if (sequences.empty()) throw at::MissingFrames("no sequences with " + std::string(kGroundTruthName) + " under " + opt.batch);

  std::atomic<std::size_t> next{0};
  std::mutex err_mutex;
  std::vector<std::string> errors;
  const auto worker = [&] {
    for (std::size_t i = next++; i < sequences.size(); i = next++) {
      const fs::path& seq = sequences[i];
      try {
        const auto gt = at::load_gt(seq / kGroundTruthName);
        if (gt.empty()) throw at::ParseError((seq / kGroundTruthName).string(), 1, "empty ground truth");
        const fs::path out = fs::path(opt.out) / seq.filename();
        track_one(seq, gt.front(), cfg, out, opt);
      } catch (const std::exception& e) {
        std::lock_guard lock(err_mutex);
        errors.push_back(seq.filename().string() + ": " + e.what());
      }
    }
  };
  const int jobs = std::max(1, opt.jobs);
  std::vector<std::jthread> pool;
  for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
  pool.clear();

  if (!errors.empty()) {
    std::sort(errors.begin(), errors.end());
    for (const auto& e : errors) std::cerr << "error: " << e << '\n';
    return kExitData;
  }
  return 0;
}

int run_eval(const EvalOptions& opt) {
  const auto results = at::load_result_boxes(opt.results);
  const auto gt = at::load_gt(opt.gt);
  const auto curves = at::evaluate(results, gt);
  at::atomic_write(opt.out, [&](std::ostream& os) { at::write_metrics_csv(os, curves); });
  std::cout << "precision@20 " << curves.precision_at_20 << "  auc " << curves.auc
            << "  mean center error " << curves.mean_center_error << '\n';
  return 0;
}

int run_synth(const SynthOptions& opt) {
  if (opt.preset.empty() == opt.spec.empty()) throw UsageError("synth: give exactly one of --preset or --spec");
  const at::SynthParams params =
      opt.preset.empty() ? at::parse_synth_params(at::read_text(opt.spec), opt.spec) : at::preset(opt.preset);
  const auto seq = at::generate(at::make_spec(params));
  const fs::path out = opt.out;
  fs::create_directories(out);
  for (std::size_t i = 0; i < seq.frames.size(); ++i) {
    const auto& f = seq.frames[i];
    at::atomic_write_image(out / frame_name(i, opt.format), f.width(), f.height(), f.rgb());
  }
  at::atomic_write(out / kGroundTruthName, [&](std::ostream& os) { at::save_gt(os, seq.truth); });
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Keypoint anchor-point tracker: track, evaluate and synthesise sequences"};
  app.require_subcommand(1);

  TrackOptions track;
  auto* track_cmd = app.add_subcommand("track", "Track one sequence (--seq) or every sequence under a directory (--batch)");
  track_cmd->add_option("--seq", track.seq, "Directory of numbered frames");
  track_cmd->add_option("--batch", track.batch, "Directory of sequences, each with groundtruth_rect.txt");
  track_cmd->add_option("--init", track.init, "Initial box x,y,w,h (1-based, as in ground-truth files)");
  track_cmd->add_option("--config", track.config, "Tracker config file (key = value)");
  track_cmd->add_option("--out", track.out, "Output directory")->required();
  track_cmd->add_flag("--dump-heatmaps", track.dump_heatmaps, "Write score-matrix heat maps");
  track_cmd->add_flag("--annotate", track.annotate, "Write frames with the tracked box drawn");
  track_cmd->add_flag("--dump-model", track.dump_model, "Write the final anchor model as model.tsv");
  track_cmd->add_flag("--dump-gate", track.dump_gate, "Write per-frame gate readings as gate.csv");
  track_cmd->add_option("--jobs", track.jobs, "Parallel sequences in batch mode")->check(CLI::PositiveNumber);
  track_cmd->get_option("--seq")->excludes(track_cmd->get_option("--batch"));

  EvalOptions eval;
  auto* eval_cmd = app.add_subcommand("eval", "Compute precision and success curves");
  eval_cmd->add_option("--results", eval.results, "results.csv from track")->required();
  eval_cmd->add_option("--gt", eval.gt, "Ground-truth file")->required();
  eval_cmd->add_option("--out", eval.out, "metrics.csv to write")->required();

  SynthOptions synth;
  auto* synth_cmd = app.add_subcommand("synth", "Render a synthetic sequence with exact ground truth");
  synth_cmd->add_option("--preset", synth.preset, "translation, fast_motion, scale_ramp, occlusion, blur, gain_ramp");
  synth_cmd->add_option("--spec", synth.spec, "Synthetic spec file (key = value)");
  synth_cmd->add_option("--out", synth.out, "Output directory")->required();
  synth_cmd->add_option("--format", synth.format, "Frame format")->check(CLI::IsMember({"png", "ppm"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*track_cmd) return run_track(track);
    if (*eval_cmd) return run_eval(eval);
    if (*synth_cmd) return run_synth(synth);
  } catch (const UsageError& e) {
    const CLI::App* sub = *track_cmd ? track_cmd : *synth_cmd ? synth_cmd : &app;
    std::cerr << "error: " << e.what() << "\n\n" << sub->help();
    return kExitUsage;
  } catch (const at::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitData;
  } catch (const at::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}
