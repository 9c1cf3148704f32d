// Copyright 2026 The kitsfuse Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>
#include <unordered_set>

#include "CLI11.hpp"
#include "kitsfuse/fusion.hpp"
#include "kitsfuse/metrics.hpp"
#include "kitsfuse/phantom.hpp"
#include "kitsfuse/preprocess.hpp"
#include "kitsfuse/resample.hpp"
#include "kitsfuse/vol_io.hpp"

namespace kitsfuse::cli {
namespace {

namespace fs = std::filesystem;

// An Error raised while processing one manifest case.
class CaseError : public std::runtime_error {
 public:
  CaseError(std::string case_id, const Error& e)
      : std::runtime_error(e.what()), case_id_(std::move(case_id)), code_(e.code()) {}
  const std::string& case_id() const noexcept { return case_id_; }
  ErrorCode code() const noexcept { return code_; }

 private:
  std::string case_id_;
  ErrorCode code_;
};

int exit_code_for(ErrorCode code) {
  return code == ErrorCode::kIo ? kExitIo : kExitValidation;
}

std::string one_line(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  std::replace(s.begin(), s.end(), '"', '\'');
  return s;
}

void report(std::ostream& err, std::string_view code, std::string_view case_id,
            const std::string& message) {
  err << "kitsfuse: error code=" << code;
  if (!case_id.empty()) err << " case=" << case_id;
  err << " message=\"" << one_line(message) << "\"\n";
}

/// Runs fn(i) for i in [0, n) on up to `jobs` threads. Rethrows the failure
/// of the lowest index so the reported error does not depend on timing.
template <typename Fn>
void parallel_for(std::size_t n, int jobs, Fn fn) {
  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, jobs))));
  std::vector<std::exception_ptr> failures(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  for (auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }
}

template <typename Fn>
auto for_case(const std::string& id, Fn fn) {
  try {
    return fn();
  } catch (const Error& e) {
    throw CaseError(id, e);
  }
}

void write_text(const fs::path& path, const std::string& text) {
  write_file_bytes(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()),
                                   text.size()));
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create " + dir.string() + ": " + ec.message());
}

FusionConfig load_config(const std::string& spec) {
  if (spec == "default") return FusionConfig{};
  return FusionConfig::load(spec);
}

LabelCodeMap label_map(const std::string& spec) {
  return spec.empty() ? LabelCodeMap() : LabelCodeMap::parse(spec);
}

// --- preprocess -------------------------------------------------------------

struct PreprocessArgs {
  std::string manifest;
  std::string out_dir;
  std::string spacing = "fullres";
  std::string stats = "computed";
  std::string label_map;
  int jobs = 1;
};

void run_preprocess(const PreprocessArgs& a, std::ostream& out) {
  const auto cases = load_manifest(a.manifest, 2, 2);
  const auto target = TargetSpec::parse(a.spacing);
  const auto codes = label_map(a.label_map);
  ensure_dir(a.out_dir);

  std::vector<std::optional<std::pair<ImageVolume, LabelVolume>>> loaded(cases.size());
  parallel_for(cases.size(), a.jobs, [&](std::size_t i) {
    loaded[i] = for_case(cases[i].id, [&] {
      auto image = read_image(cases[i].paths[0]);
      auto labels = read_labels(cases[i].paths[1], codes);
      require_same_geometry(image.geometry(), labels.geometry(), "image vs labels");
      return std::make_pair(std::move(image), std::move(labels));
    });
  });

  std::optional<IntensityStats> stats;
  if (a.stats == "computed") {
    std::vector<std::pair<ImageVolume, LabelVolume>> pairs;
    pairs.reserve(loaded.size());
    for (auto& c : loaded) pairs.push_back(*c);
    stats = compute_foreground_stats(pairs);
  } else if (a.stats == "kits23") {
    stats = IntensityStats::kits23();
  } else {
    stats = IntensityStats::from_text(read_text(a.stats));
  }
  write_text(fs::path(a.out_dir) / "stats.txt", stats->to_text());

  parallel_for(cases.size(), a.jobs, [&](std::size_t i) {
    for_case(cases[i].id, [&] {
      const auto& [image, labels] = *loaded[i];
      const auto resampled = resample_image(image, target);
      const auto normalized = clip_and_normalize(resampled, *stats);
      const auto resampled_labels = resample_labels(labels, target);
      write_nifti(normalized, fs::path(a.out_dir) / (cases[i].id + "_image.nii.gz"));
      write_nifti(resampled_labels,
                  fs::path(a.out_dir) / (cases[i].id + "_labels.nii.gz"));
      return 0;
    });
  });
  out << "preprocessed " << cases.size() << " case(s) into " << a.out_dir << "\n";
}

// --- resample ---------------------------------------------------------------

struct ResampleArgs {
  std::string in;
  std::string out;
  std::string spacing;
  std::string kind = "image";
  std::string label_map;
};

void run_resample(const ResampleArgs& a, std::ostream& out) {
  const auto target = TargetSpec::parse(a.spacing);
  if (a.kind == "label") {
    const auto v = resample_labels(read_labels(a.in, label_map(a.label_map)), target);
    write_volume(v, a.out);
    out << to_string(v.geometry()) << "\n";
  } else {
    const auto v = resample_image(read_image(a.in), target);
    write_volume(v, a.out);
    out << to_string(v.geometry()) << "\n";
  }
}

// --- fuse -------------------------------------------------------------------

struct FuseArgs {
  std::string full;
  std::string low;
  std::string low2;
  std::string out;
  std::string config = "default";
  std::string config_out;
  std::string label_map;
};

void run_fuse(const FuseArgs& a, std::ostream& out) {
  const auto cfg = load_config(a.config);
  const auto codes = label_map(a.label_map);
  const auto full = read_labels(a.full, codes);
  const auto low = read_labels(a.low, codes);
  LabelVolume result = postprocess_pair(full, low, cfg);
  if (!a.low2.empty()) {
    const auto low2 = read_labels(a.low2, codes);
    const std::vector<LabelVolume> pair_results = {result,
                                                   postprocess_pair(full, low2, cfg)};
    result = ensemble_join(pair_results, cfg);
  }
  write_volume(result, a.out);
  if (!a.config_out.empty()) write_text(a.config_out, cfg.to_text());
  const auto h = result.histogram();
  out << "fused " << to_string(result.geometry()) << " kidney=" << h[kKidney]
      << " tumor=" << h[kTumor] << " cyst=" << h[kCyst] << "\n";
}

// --- evaluate ---------------------------------------------------------------

struct EvaluateArgs {
  std::string pred;
  std::string gt;
  double tolerance_mm = -1.0;
  std::string out;
  std::string summary;
  std::string label_map;
  int jobs = 1;
};

void run_evaluate(const EvaluateArgs& a, std::ostream& out) {
  const auto preds = load_manifest(a.pred, 1, 1);
  const auto gts = load_manifest(a.gt, 1, 1);
  std::map<std::string, fs::path> gt_by_id;
  for (const auto& g : gts) gt_by_id[g.id] = g.paths[0];
  for (const auto& p : preds) {
    if (!gt_by_id.contains(p.id)) {
      throw CaseError(p.id, Error(ErrorCode::kInvalidArgument,
                                  "no ground truth entry for this case"));
    }
  }
  const auto codes = label_map(a.label_map);
  std::vector<CaseReport> reports(preds.size());
  parallel_for(preds.size(), a.jobs, [&](std::size_t i) {
    reports[i] = for_case(preds[i].id, [&] {
      const auto pred = read_labels(preds[i].paths[0], codes);
      const auto gt = read_labels(gt_by_id.at(preds[i].id), codes);
      return evaluate_case(pred, gt, a.tolerance_mm, preds[i].id);
    });
  });
  const auto table = format_case_table(reports);
  const auto summary = format_summary(aggregate(reports));
  if (a.out.empty()) {
    out << table;
  } else {
    write_text(a.out, table);
  }
  if (a.summary.empty()) {
    out << summary;
  } else {
    write_text(a.summary, summary);
  }
}

// --- phantom ----------------------------------------------------------------

struct PhantomArgs {
  std::string scenario;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::string format = "nii.gz";
};

void run_phantom(const PhantomArgs& a, std::ostream& out) {
  ScenarioSpec spec;
  if (fs::exists(a.scenario)) {
    spec = ScenarioSpec::from_text(read_text(a.scenario));
    if (a.seed) spec.phantom.seed = *a.seed;
  } else {
    spec = ScenarioSpec::named(a.scenario, a.seed.value_or(0));
  }
  if (a.format != "nii.gz" && a.format != "nii" && a.format != "raw") {
    throw Error(ErrorCode::kInvalidArgument,
                "format must be nii.gz, nii or raw, got '" + a.format + "'");
  }
  const auto result = generate_scenario(spec);
  ensure_dir(a.out_dir);
  const fs::path dir(a.out_dir);
  const std::string ext = "." + a.format;
  write_volume(result.truth.image, dir / ("image" + ext));
  write_volume(result.truth.labels, dir / ("truth" + ext));
  write_volume(result.full_prediction, dir / ("full" + ext));
  write_volume(result.low_prediction, dir / ("low" + ext));
  write_text(dir / "scenario.txt", spec.to_text());
  std::ostringstream info;
  info.precision(17);
  info << "full_fp_components = " << result.full_fp_components << "\n"
       << "full_fp_voxels = " << result.full_fp_voxels << "\n";
  if (result.expected_full_tumor_dice) {
    info << "expected_full_tumor_dice = " << *result.expected_full_tumor_dice << "\n";
  }
  write_text(dir / "info.txt", info.str());
  out << "wrote scenario '" << spec.name << "' to " << a.out_dir << "\n";
}

}  // namespace

std::vector<ManifestEntry> parse_manifest(std::string_view text,
                                          const fs::path& base_dir,
                                          std::size_t min_paths,
                                          std::size_t max_paths) {
  std::vector<ManifestEntry> entries;
  std::unordered_set<std::string> seen;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::string id;
    if (!(fields >> id) || id.front() == '#') continue;
    ManifestEntry e;
    e.id = id;
    std::string p;
    while (fields >> p) {
      fs::path path(p);
      e.paths.push_back(path.is_absolute() ? path : base_dir / path);
    }
    if (e.paths.size() < min_paths || e.paths.size() > max_paths) {
      throw Error(ErrorCode::kInvalidArgument,
                  "manifest line " + std::to_string(line_no) + " (case " + id +
                      ") has " + std::to_string(e.paths.size()) + " path(s), expected " +
                      std::to_string(min_paths) +
                      (max_paths != min_paths ? ".." + std::to_string(max_paths) : ""));
    }
    if (!seen.insert(id).second) {
      throw Error(ErrorCode::kInvalidArgument,
                  "manifest line " + std::to_string(line_no) + ": duplicate case id " + id);
    }
    entries.push_back(std::move(e));
  }
  return entries;
}

std::vector<ManifestEntry> load_manifest(const fs::path& path, std::size_t min_paths,
                                         std::size_t max_paths) {
  auto entries = parse_manifest(read_text(path), path.parent_path(), min_paths, max_paths);
  if (entries.empty()) {
    throw Error(ErrorCode::kEmptyInput, "manifest " + path.string() + " has no cases");
  }
  for (const auto& e : entries) {
    for (const auto& p : e.paths) {
      if (!fs::exists(p)) {
        throw CaseError(e.id, Error(ErrorCode::kIo, "missing file " + p.string()));
      }
    }
  }
  return entries;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multi-scale kidney segmentation post-processing", "kitsfuse"};
  app.require_subcommand(1);
  const std::string label_map_help =
      "Translate stored label codes, e.g. 2:3,3:2 (canonical: 0 background, "
      "1 kidney, 2 tumor, 3 cyst)";

  PreprocessArgs pre;
  auto* pre_cmd = app.add_subcommand("preprocess", "Resample and normalize a dataset");
  pre_cmd->add_option("--manifest", pre.manifest, "Lines of: id image labels")->required();
  pre_cmd->add_option("--out-dir", pre.out_dir, "Output directory")->required();
  pre_cmd->add_option("--spacing", pre.spacing, "lowres, fullres or x,y,z (mm)");
  pre_cmd->add_option("--stats", pre.stats,
                      "computed (from the manifest), kits23, or a stats file");
  pre_cmd->add_option("--label-map", pre.label_map, label_map_help);
  pre_cmd->add_option("--jobs", pre.jobs, "Cases processed in parallel")
      ->check(CLI::PositiveNumber);

  ResampleArgs rs;
  auto* rs_cmd = app.add_subcommand("resample", "Resample one volume");
  rs_cmd->add_option("--in", rs.in, "Input volume")->required();
  rs_cmd->add_option("--out", rs.out, "Output volume")->required();
  rs_cmd->add_option("--spacing", rs.spacing, "lowres, fullres or x,y,z (mm)")->required();
  rs_cmd->add_option("--kind", rs.kind, "image (trilinear) or label (nearest)")
      ->check(CLI::IsMember({"image", "label"}));
  rs_cmd->add_option("--label-map", rs.label_map, label_map_help);

  FuseArgs fu;
  auto* fu_cmd = app.add_subcommand("fuse", "Multi-scale post-processing of predictions");
  fu_cmd->add_option("--full", fu.full, "Full-resolution prediction")->required();
  fu_cmd->add_option("--low", fu.low, "Low-resolution prediction")->required();
  fu_cmd->add_option("--low2", fu.low2,
                     "Second low-resolution prediction; fuses both pairs and joins them");
  fu_cmd->add_option("--out", fu.out, "Output label volume")->required();
  fu_cmd->add_option("--config", fu.config, "Config file, or 'default'");
  fu_cmd->add_option("--config-out", fu.config_out, "Write the resolved config here");
  fu_cmd->add_option("--label-map", fu.label_map, label_map_help);

  EvaluateArgs ev;
  auto* ev_cmd = app.add_subcommand("evaluate", "Dice and Surface Dice per region");
  ev_cmd->add_option("--pred", ev.pred, "Manifest of: id prediction")->required();
  ev_cmd->add_option("--gt", ev.gt, "Manifest of: id ground_truth")->required();
  ev_cmd->add_option("--tolerance-mm", ev.tolerance_mm, "Surface Dice tolerance (mm)")
      ->required()
      ->check(CLI::NonNegativeNumber);
  ev_cmd->add_option("--out", ev.out, "Per-case table (default: stdout)");
  ev_cmd->add_option("--summary", ev.summary, "Summary table (default: stdout)");
  ev_cmd->add_option("--label-map", ev.label_map, label_map_help);
  ev_cmd->add_option("--jobs", ev.jobs, "Cases processed in parallel")
      ->check(CLI::PositiveNumber);

  PhantomArgs ph;
  std::uint64_t seed = 0;
  auto* ph_cmd = app.add_subcommand("phantom", "Write a synthetic scenario");
  ph_cmd->add_option("--scenario", ph.scenario,
                     "consistent, fp_tumors, missing_tumor, or a scenario file")
      ->required();
  ph_cmd->add_option("--out-dir", ph.out_dir, "Output directory")->required();
  auto* seed_opt = ph_cmd->add_option("--seed", seed, "Phantom seed");
  ph_cmd->add_option("--format", ph.format, "nii.gz, nii or raw");

  if (!args.empty() && !args.front().empty() && args.front().front() != '-') {
    const auto subs = app.get_subcommands([](CLI::App*) { return true; });
    const bool known = std::any_of(subs.begin(), subs.end(), [&](CLI::App* s) {
      return s->get_name() == args.front();
    });
    if (!known) {
      report(err, "usage", "", "unknown subcommand '" + args.front() + "'");
      err << app.help();
      return kExitUsage;
    }
  }

  // CLI11 wants argv order reversed in the vector overload.
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    report(err, "usage", "", e.what());
    err << app.help();
    return kExitUsage;
  }
  if (seed_opt->count() > 0) ph.seed = seed;

  try {
    if (*pre_cmd) run_preprocess(pre, out);
    if (*rs_cmd) run_resample(rs, out);
    if (*fu_cmd) run_fuse(fu, out);
    if (*ev_cmd) run_evaluate(ev, out);
    if (*ph_cmd) run_phantom(ph, out);
  } catch (const CaseError& e) {
    report(err, error_code_name(e.code()), e.case_id(), e.what());
    return exit_code_for(e.code());
  } catch (const Error& e) {
    report(err, error_code_name(e.code()), "", e.what());
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    report(err, "internal", "", e.what());
    return kExitValidation;
  }
  return kExitOk;
}

}  // namespace kitsfuse::cli
