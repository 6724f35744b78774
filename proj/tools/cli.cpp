#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <nlohmann/json.hpp>
#include <ostream>
#include <string>
#include <vector>

#include "exgs/camera_rig.hpp"
#include "exgs/codec.hpp"
#include "exgs/error.hpp"
#include "exgs/file_io.hpp"
#include "exgs/image.hpp"
#include "exgs/metrics.hpp"
#include "exgs/ply_io.hpp"
#include "exgs/pruner.hpp"
#include "exgs/rasterizer.hpp"
#include "exgs/restore.hpp"
#include "exgs/scene_synth.hpp"
#include "exgs/significance.hpp"

namespace exgs::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct UsageError : Error {
  using Error::Error;
};

GaussianCloud load_scene(const fs::path& path, std::ostream& err) {
  const auto bytes = read_file(path);
  if (looks_like_exgs(bytes)) return decompress(bytes);
  std::vector<std::string> warnings;
  GaussianCloud cloud = load_ply(bytes, &warnings);
  for (const auto& w : warnings) err << "warning: " << w << "\n";
  return cloud;
}

// "rig.json#3" -> (rig.json, 3); no suffix selects camera 0.
Camera load_camera_ref(const std::string& ref) {
  fs::path path = ref;
  std::size_t index = 0;
  const auto hash = ref.rfind('#');
  if (hash != std::string::npos) {
    path = ref.substr(0, hash);
    const std::string num = ref.substr(hash + 1);
    if (num.empty() || !std::all_of(num.begin(), num.end(), [](char c) { return c >= '0' && c <= '9'; })) {
      throw UsageError("camera reference '" + ref + "' needs a numeric index after '#'");
    }
    index = std::stoul(num);
  }
  const auto cams = load_camera_rig(path);
  if (index >= cams.size()) {
    throw UsageError("camera index " + std::to_string(index) + " out of range (rig has " +
                     std::to_string(cams.size()) + ")");
  }
  return cams[index];
}

BudgetMode parse_budget(const std::string& s) {
  return s == "exact" ? BudgetMode::Exact : BudgetMode::GuaranteedOver;
}

std::string view_name(const char* stem, std::size_t i) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s_%03zu.png", stem, i);
  return buf;
}

struct PruneFlags {
  double ratio = 0.1;
  double voxel_size = 0.0;
  bool voxel_auto = false;
  std::uint32_t min_count = 4;
  std::string budget = "exact";
  double amplify = 0.0;

  PruneConfig config() const {
    PruneConfig cfg;
    cfg.ratio = ratio;
    if (voxel_size > 0.0 && !voxel_auto) cfg.voxel_size = voxel_size;
    cfg.min_count = min_count;
    cfg.budget = parse_budget(budget);
    return cfg;
  }
};

void add_prune_flags(CLI::App* cmd, PruneFlags& f, bool ratio_required) {
  auto* ratio = cmd->add_option("--ratio", f.ratio, "Fraction of Gaussians to retain, in (0, 1]")
                    ->check(CLI::Range(0.0, 1.0));
  if (ratio_required) ratio->required();
  auto* size = cmd->add_option("--voxel-size", f.voxel_size, "Voxel edge length (world units)")
                   ->check(CLI::PositiveNumber);
  cmd->add_flag("--voxel-auto", f.voxel_auto, "Voxel edge = longest bounding-box edge / 64 (default)")
      ->excludes(size);
  cmd->add_option("--min-count", f.min_count, "Members needed for a voxel's coverage guarantee")
      ->check(CLI::Range(1u, 1u << 30));
  cmd->add_option("--budget", f.budget, "exact | guaranteed-over")
      ->check(CLI::IsMember({"exact", "guaranteed-over"}));
  cmd->add_option("--amplify", f.amplify, "Opacity amplification strength lambda (>= 0)")
      ->check(CLI::NonNegativeNumber);
}

PruneResult prune_and_amplify(const GaussianCloud& cloud, std::span<const float> scores, const PruneFlags& f) {
  PruneResult r = prune(cloud, scores, f.config());
  if (f.amplify > 0.0 && !r.kept.empty()) r.cloud = amplify(r.cloud, r.kept, r.index, f.amplify);
  return r;
}

// Moves a finished staging directory into place. The destination must be absent or empty.
void publish_directory(const fs::path& staging, const fs::path& dest) {
  if (fs::exists(dest)) fs::remove(dest);  // only succeeds when empty; checked up front
  fs::rename(staging, dest);
}

json report_json(const ImageQualityReport& r) {
  return {{"psnr", r.psnr}, {"ssim", r.ssim}, {"width", r.width}, {"height", r.height}};
}

int run_pipeline(const fs::path& scene_path, const fs::path& rig_path, const fs::path& out_arg,
                 const std::string& mode_text, const PruneFlags& pf, double threshold, int iters,
                 std::ostream& out, std::ostream& err) {
  // "out/" would otherwise stage into "out/.partial".
  const fs::path out_dir = out_arg.has_filename() ? out_arg : out_arg.parent_path();
  if (out_dir.empty()) throw UsageError("pipeline: output directory is empty");
  if (fs::exists(out_dir) && (!fs::is_directory(out_dir) || !fs::is_empty(out_dir))) {
    throw IoError("output directory " + out_dir.string() + " exists and is not empty");
  }
  const auto source = read_file(scene_path);
  std::vector<std::string> warnings;
  const GaussianCloud cloud = load_ply(source, &warnings);
  for (const auto& w : warnings) err << "warning: " << w << "\n";
  const auto cams = load_camera_rig(rig_path);
  if (cams.empty()) throw UsageError("camera rig has no cameras");

  fs::path staging = out_dir;
  staging += ".partial";
  fs::remove_all(staging);
  fs::create_directories(staging);
  try {
    const ScoringMode mode = parse_scoring_mode(mode_text);
    const SignificanceVector sig = compute_significance(cloud, cams, mode);
    const PruneResult pruned = prune_and_amplify(cloud, sig.scores, pf);
    const auto exgs_bytes = compress(pruned.cloud);
    const GaussianCloud decoded = decompress(exgs_bytes);

    write_file(staging / "scores.bin", encode_scores(sig.scores));
    write_file(staging / "kept.bin", encode_kept_indices(pruned.kept));
    write_file(staging / "pruned.ply", save_ply(pruned.cloud));
    write_file(staging / "scene.exgs", exgs_bytes);

    json views = json::array();
    double sum_degraded_psnr = 0, sum_degraded_ssim = 0, sum_restored_psnr = 0, sum_restored_ssim = 0;
    for (std::size_t i = 0; i < cams.size(); ++i) {
      const RenderOutput reference = render(cloud, cams[i]);
      const RenderOutput degraded = render(decoded, cams[i]);
      const RestoreResult restored = inpaint_baseline({degraded.color, degraded.accum_opacity, threshold, iters});
      if (restored.no_boundary) err << "warning: view " << i << " has no trusted pixels; restore skipped\n";
      write_png(staging / view_name("reference", i), reference.color);
      write_png(staging / view_name("render", i), degraded.color);
      write_png(staging / view_name("mask", i), degraded.accum_opacity);
      write_png(staging / view_name("restored", i), restored.image);

      json v = {{"view", i}};
      if (cams[i].width >= 11 && cams[i].height >= 11) {
        const auto d = evaluate(degraded.color, reference.color);
        const auto r = evaluate(restored.image, reference.color);
        v["degraded"] = report_json(d);
        v["restored"] = report_json(r);
        sum_degraded_psnr += d.psnr;
        sum_degraded_ssim += d.ssim;
        sum_restored_psnr += r.psnr;
        sum_restored_ssim += r.ssim;
      }
      views.push_back(v);
    }

    const RatioReport ratio = ratio_report(source.size(), exgs_bytes.size());
    const double n = static_cast<double>(cams.size());
    json metrics = {
        {"schema", 1},
        {"source_bytes", ratio.original_bytes},
        {"exgs_bytes", ratio.compressed_bytes},
        {"compression_ratio", ratio.ratio},
        {"source_mb", ratio.original_mb},
        {"exgs_mb", ratio.compressed_mb},
        {"gaussians", cloud.size()},
        {"kept", pruned.kept.size()},
        {"retain_ratio", pf.ratio},
        {"scoring_mode", std::string(to_string(mode))},
        {"amplify", pf.amplify},
        {"views", views},
        {"mean", {{"degraded_psnr", sum_degraded_psnr / n},
                  {"degraded_ssim", sum_degraded_ssim / n},
                  {"restored_psnr", sum_restored_psnr / n},
                  {"restored_ssim", sum_restored_ssim / n}}},
    };
    write_file(staging / "metrics.json", metrics.dump(2) + "\n");
    publish_directory(staging, out_dir);
    out << "kept " << pruned.kept.size() << " of " << cloud.size() << " Gaussians; " << source.size() << " -> "
        << exgs_bytes.size() << " bytes (" << ratio.ratio << "x)\n";
  } catch (...) {
    std::error_code ec;
    fs::remove_all(staging, ec);
    throw;
  }
  return kOk;
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Gaussian splat scene compression toolkit", "exgs"};
  app.require_subcommand(1);

  // info
  std::string info_path;
  auto* info = app.add_subcommand("info", "Print Gaussian count, SH degree and file size");
  info->add_option("scene", info_path, "Scene (.ply or .exgs)")->required();

  // score
  std::string score_scene, score_rig, score_mode = "literal", score_out, score_csv;
  auto* score = app.add_subcommand("score", "Compute global significance scores");
  score->add_option("scene", score_scene)->required();
  score->add_option("--cameras", score_rig, "Camera rig JSON")->required();
  score->add_option("--mode", score_mode)->check(CLI::IsMember({"literal", "contribution"}));
  score->add_option("-o,--output", score_out, "Binary score file")->required();
  score->add_option("--csv", score_csv, "Also write index,score CSV");

  // prune
  std::string prune_scene, prune_scores, prune_out, prune_kept;
  PruneFlags prune_flags;
  auto* prune_cmd = app.add_subcommand("prune", "Voxel-guaranteed pruning with optional amplification");
  prune_cmd->add_option("scene", prune_scene)->required();
  prune_cmd->add_option("--scores", prune_scores, "Binary score file from 'score'")->required();
  add_prune_flags(prune_cmd, prune_flags, true);
  prune_cmd->add_option("-o,--output", prune_out, "Pruned PLY")->required();
  prune_cmd->add_option("--kept", prune_kept, "Also write kept indices (binary)");

  // compress / decompress
  std::string comp_in, comp_out;
  std::uint32_t preset = 6;
  auto* comp = app.add_subcommand("compress", "Write an EXGS container");
  comp->add_option("scene", comp_in)->required();
  comp->add_option("-o,--output", comp_out)->required();
  comp->add_option("--preset", preset, "LZMA preset 0-9")->check(CLI::Range(0u, 9u));
  std::string decomp_in, decomp_out;
  auto* decomp = app.add_subcommand("decompress", "Expand an EXGS container to PLY");
  decomp->add_option("scene", decomp_in)->required();
  decomp->add_option("-o,--output", decomp_out)->required();

  // render
  std::string render_scene, render_cam, render_out, render_mask;
  auto* render_cmd = app.add_subcommand("render", "Render a view and optionally its visibility mask");
  render_cmd->add_option("scene", render_scene)->required();
  render_cmd->add_option("--camera", render_cam, "rig.json#index")->required();
  render_cmd->add_option("-o,--output", render_out)->required();
  render_cmd->add_option("--mask", render_mask, "Accumulated-opacity mask PNG");

  // restore
  std::string restore_in, restore_mask, restore_out;
  double restore_threshold = 0.5;
  int restore_iters = 200;
  auto* restore_cmd = app.add_subcommand("restore", "Harmonic fill of low-coverage pixels");
  restore_cmd->add_option("degraded", restore_in)->required();
  restore_cmd->add_option("--mask", restore_mask)->required();
  restore_cmd->add_option("--threshold", restore_threshold)->check(CLI::Range(0.0, 1.0));
  restore_cmd->add_option("--iters", restore_iters)->check(CLI::PositiveNumber);
  restore_cmd->add_option("-o,--output", restore_out)->required();

  // eval
  std::string eval_a, eval_b, eval_out, eval_resize;
  auto* eval_cmd = app.add_subcommand("eval", "PSNR and SSIM between two images");
  eval_cmd->add_option("a", eval_a)->required();
  eval_cmd->add_option("b", eval_b)->required();
  eval_cmd->add_option("-o,--output", eval_out)->required();
  eval_cmd->add_option("--resize", eval_resize, "Resample both images to WxH before comparing");

  // pipeline
  std::string pipe_scene, pipe_rig, pipe_out, pipe_mode = "literal";
  PruneFlags pipe_flags;
  pipe_flags.amplify = 1.0;
  double pipe_threshold = 0.5;
  int pipe_iters = 200;
  auto* pipe = app.add_subcommand("pipeline", "score -> prune -> amplify -> compress -> render -> restore -> eval");
  pipe->add_option("scene", pipe_scene)->required();
  pipe->add_option("--cameras", pipe_rig)->required();
  add_prune_flags(pipe, pipe_flags, true);
  pipe->add_option("--mode", pipe_mode)->check(CLI::IsMember({"literal", "contribution"}));
  pipe->add_option("--threshold", pipe_threshold)->check(CLI::Range(0.0, 1.0));
  pipe->add_option("--iters", pipe_iters)->check(CLI::PositiveNumber);
  pipe->add_option("-o,--output", pipe_out, "Output directory")->required();

  // synth
  std::string synth_kind = "textured-room", synth_out, synth_rig;
  std::size_t synth_count = 10000;
  std::uint64_t synth_seed = 1;
  double synth_extent = 4.0, synth_radius = 1.0;
  int synth_degree = 3, synth_views = 8, synth_size = 256;
  auto* synth = app.add_subcommand("synth", "Generate a deterministic synthetic scene and orbit rig");
  synth->add_option("--kind", synth_kind)->check(CLI::IsMember({"textured-room", "random-blob", "planar-grid"}));
  synth->add_option("--count", synth_count)->check(CLI::PositiveNumber);
  synth->add_option("--seed", synth_seed);
  synth->add_option("--extent", synth_extent)->check(CLI::PositiveNumber);
  synth->add_option("--sh-degree", synth_degree)->check(CLI::Range(0, 3));
  synth->add_option("-o,--output", synth_out, "Scene PLY")->required();
  synth->add_option("--rig", synth_rig, "Also write an orbit camera rig JSON");
  synth->add_option("--views", synth_views)->check(CLI::PositiveNumber);
  synth->add_option("--radius", synth_radius, "Orbit radius")->check(CLI::PositiveNumber);
  synth->add_option("--size", synth_size, "Square image size in pixels")->check(CLI::Range(1, 4096));

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  if (*info) {
    const auto bytes = read_file(info_path);
    const GaussianCloud cloud = load_scene(info_path, err);
    out << "count: " << cloud.size() << "\nsh_degree: " << cloud.sh_degree << "\nraw_bytes: " << bytes.size()
        << "\n";
  } else if (*score) {
    const GaussianCloud cloud = load_scene(score_scene, err);
    const auto cams = load_camera_rig(score_rig);
    const SignificanceVector sig = compute_significance(cloud, cams, parse_scoring_mode(score_mode));
    write_file(score_out, encode_scores(sig.scores));
    if (!score_csv.empty()) write_file(score_csv, scores_to_csv(sig.scores));
  } else if (*prune_cmd) {
    const GaussianCloud cloud = load_scene(prune_scene, err);
    const auto scores = decode_scores(read_file(prune_scores));
    const PruneResult r = prune_and_amplify(cloud, scores, prune_flags);
    write_file(prune_out, save_ply(r.cloud));
    if (!prune_kept.empty()) write_file(prune_kept, encode_kept_indices(r.kept));
    out << "kept " << r.kept.size() << " of " << cloud.size() << " Gaussians\n";
  } else if (*comp) {
    const GaussianCloud cloud = load_scene(comp_in, err);
    write_file(comp_out, compress(cloud, {preset}));
  } else if (*decomp) {
    write_file(decomp_out, save_ply(decompress(read_file(decomp_in))));
  } else if (*render_cmd) {
    const GaussianCloud cloud = load_scene(render_scene, err);
    const RenderOutput r = render(cloud, load_camera_ref(render_cam));
    write_png(render_out, r.color);
    if (!render_mask.empty()) write_png(render_mask, r.accum_opacity);
  } else if (*restore_cmd) {
    if (!(restore_threshold > 0.0 && restore_threshold < 1.0)) throw UsageError("--threshold must be in (0, 1)");
    const Image degraded = read_png(restore_in, 3);
    const Image mask = read_png(restore_mask, 1);
    const RestoreResult r = inpaint_baseline({degraded, mask, restore_threshold, restore_iters});
    if (r.no_boundary) err << "warning: mask has no trusted pixels; image left unchanged\n";
    write_png(restore_out, r.image);
  } else if (*eval_cmd) {
    Image a = read_png(eval_a, 3);
    Image b = read_png(eval_b, 3);
    if (!eval_resize.empty()) {
      int w = 0, h = 0;
      if (std::sscanf(eval_resize.c_str(), "%dx%d", &w, &h) != 2 || w <= 0 || h <= 0) {
        throw UsageError("--resize expects WxH");
      }
      a = resize_bilinear(a, w, h);
      b = resize_bilinear(b, w, h);
    }
    const ImageQualityReport report = evaluate(a, b);
    write_file(eval_out, to_json(report));
    out << "psnr " << report.psnr << " dB, ssim " << report.ssim << "\n";
  } else if (*pipe) {
    if (!(pipe_threshold > 0.0 && pipe_threshold < 1.0)) throw UsageError("--threshold must be in (0, 1)");
    return run_pipeline(pipe_scene, pipe_rig, pipe_out, pipe_mode, pipe_flags, pipe_threshold, pipe_iters, out, err);
  } else if (*synth) {
    SynthSpec spec;
    spec.kind = parse_scene_kind(synth_kind);
    spec.gaussian_count = synth_count;
    spec.seed = synth_seed;
    spec.extent = synth_extent;
    spec.sh_degree = synth_degree;
    write_file(synth_out, save_ply(make_scene(spec)));
    if (!synth_rig.empty()) {
      Intrinsics in;
      in.width = in.height = synth_size;
      in.fx = in.fy = synth_size;
      in.cx = in.cy = synth_size / 2.0;
      save_camera_rig(synth_rig, make_orbit_cameras(synth_views, synth_radius, {0.0, 0.0, 0.0}, in));
    }
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    return dispatch(args, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const InvalidParameterError& e) {
    err << "error: " << e.what() << "\n";
    return kInvariant;
  } catch (const InvariantError& e) {
    err << "error: " << e.what() << "\n";
    return kInvariant;
  } catch (const CapacityError& e) {
    err << "error: " << e.what() << "\n";
    return kInvariant;
  } catch (const FormatError& e) {
    err << "error: " << e.what() << "\n";
    return kIoFormat;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kIoFormat;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kIoFormat;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace exgs::cli
