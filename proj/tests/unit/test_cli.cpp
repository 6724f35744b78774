#include <gtest/gtest.h>

#include <algorithm>
#include <nlohmann/json.hpp>
#include <sstream>

#include "cli.hpp"
#include "exgs/camera_rig.hpp"
#include "exgs/codec.hpp"
#include "exgs/file_io.hpp"
#include "exgs/image.hpp"
#include "exgs/ply_io.hpp"
#include "exgs/pruner.hpp"
#include "exgs/scene_synth.hpp"
#include "test_support.hpp"

using namespace exgs;
namespace fs = std::filesystem;

namespace {

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    SynthSpec spec;
    spec.gaussian_count = 3000;
    spec.seed = 4;
    write_file(dir_ / "scene.ply", save_ply(make_scene(spec)));
    Intrinsics in;
    in.width = in.height = 48;
    in.fx = in.fy = 48;
    in.cx = in.cy = 24;
    save_camera_rig(dir_ / "rig.json", make_orbit_cameras(3, 1.0, {0, 0, 0}, in));
  }
  std::string p(const std::string& name) const { return (dir_ / name).string(); }

  fixtures::TempDir dir_{"cli"};
};

}  // namespace

TEST_F(CliTest, Info) {
  const CliResult r = invoke({"info", p("scene.ply")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("count: 3000"), std::string::npos);
  EXPECT_NE(r.out.find("sh_degree: 3"), std::string::npos);
}

TEST_F(CliTest, ScorePruneCompressDecompressChain) {
  ASSERT_EQ(invoke({"score", p("scene.ply"), "--cameras", p("rig.json"), "-o", p("s.bin"), "--csv", p("s.csv")}).code, 0);
  const CliResult pr = invoke({"prune", p("scene.ply"), "--scores", p("s.bin"), "--ratio", "0.2", "--voxel-auto", "--amplify",
                      "0.5", "-o", p("pruned.ply"), "--kept", p("kept.bin")});
  ASSERT_EQ(pr.code, 0) << pr.err;
  const GaussianCloud pruned = load_ply(read_file(p("pruned.ply")));
  EXPECT_EQ(pruned.size(), 600u);
  EXPECT_EQ(decode_kept_indices(read_file(p("kept.bin"))).size(), 600u);
  ASSERT_EQ(invoke({"compress", p("pruned.ply"), "-o", p("scene.exgs")}).code, 0);
  ASSERT_EQ(invoke({"decompress", p("scene.exgs"), "-o", p("back.ply")}).code, 0);
  EXPECT_EQ(load_ply(read_file(p("back.ply"))), half_round_trip(pruned));
  const CliResult info = invoke({"info", p("scene.exgs")});
  EXPECT_NE(info.out.find("count: 600"), std::string::npos);
}

TEST_F(CliTest, RenderRestoreEval) {
  ASSERT_EQ(invoke({"render", p("scene.ply"), "--camera", p("rig.json") + "#1", "-o", p("a.png"), "--mask", p("m.png")}).code, 0);
  ASSERT_EQ(invoke({"restore", p("a.png"), "--mask", p("m.png"), "--threshold", "0.6", "--iters", "20", "-o", p("r.png")}).code, 0);
  const CliResult ev = invoke({"eval", p("a.png"), p("a.png"), "-o", p("rep.json")});
  ASSERT_EQ(ev.code, 0) << ev.err;
  const auto j = nlohmann::json::parse(std::string(reinterpret_cast<const char*>(read_file(p("rep.json")).data()),
                                                   read_file(p("rep.json")).size()));
  EXPECT_EQ(j.at("psnr").get<double>(), 99.0);
  EXPECT_EQ(j.at("ssim").get<double>(), 1.0);
  ASSERT_EQ(invoke({"eval", p("a.png"), p("r.png"), "-o", p("rep2.json"), "--resize", "24x24"}).code, 0);
}

TEST_F(CliTest, RenderEmptySceneIsBlack) {
  write_file(p("empty.ply"), save_ply(GaussianCloud(0, 3)));
  ASSERT_EQ(invoke({"render", p("empty.ply"), "--camera", p("rig.json"), "-o", p("e.png"), "--mask", p("em.png")}).code, 0);
  for (float v : read_png(p("e.png"), 3).data) EXPECT_EQ(v, 0.0f);
  for (float v : read_png(p("em.png"), 1).data) EXPECT_EQ(v, 0.0f);
}

TEST_F(CliTest, PipelineWritesEverythingAndIsDeterministic) {
  const CliResult a = invoke({"pipeline", p("scene.ply"), "--cameras", p("rig.json"), "--ratio", "0.1", "-o", p("out1")});
  ASSERT_EQ(a.code, 0) << a.err;
  const CliResult b = invoke({"pipeline", p("scene.ply"), "--cameras", p("rig.json"), "--ratio", "0.1", "-o", p("out2")});
  ASSERT_EQ(b.code, 0) << b.err;
  for (const char* name : {"pruned.ply", "scene.exgs", "scores.bin", "kept.bin", "metrics.json", "reference_000.png",
                           "render_002.png", "mask_001.png", "restored_002.png"}) {
    ASSERT_TRUE(fs::exists(dir_ / "out1" / name)) << name;
    EXPECT_EQ(read_file(dir_ / "out1" / name), read_file(dir_ / "out2" / name)) << name;
  }
  EXPECT_FALSE(fs::exists(dir_ / "out1.partial"));
  const auto text = read_file(dir_ / "out1" / "metrics.json");
  const auto m = nlohmann::json::parse(text.begin(), text.end());
  EXPECT_EQ(m.at("schema").get<int>(), 1);
  EXPECT_EQ(m.at("kept").get<int>(), 300);
  EXPECT_EQ(m.at("views").size(), 3u);
  EXPECT_GT(m.at("compression_ratio").get<double>(), 50.0);
}

TEST_F(CliTest, PipelineAcceptsTrailingSlash) {
  const CliResult r = invoke({"pipeline", p("scene.ply"), "--cameras", p("rig.json"), "--ratio", "0.1", "-o", p("slash") + "/"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(dir_ / "slash" / "metrics.json"));
  EXPECT_FALSE(fs::exists(dir_ / "slash.partial"));
  EXPECT_FALSE(fs::exists(dir_ / "slash" / ".partial"));
}

TEST_F(CliTest, PipelineRefusesNonEmptyOutputAndLeavesNoPartialOnFailure) {
  fs::create_directories(dir_ / "busy");
  write_file(dir_ / "busy" / "x", std::string_view("x"));
  EXPECT_EQ(invoke({"pipeline", p("scene.ply"), "--cameras", p("rig.json"), "--ratio", "0.1", "-o", p("busy")}).code, 3);

  write_file(p("bad_rig.json"), std::string_view(R"({"cameras": []})"));
  const CliResult r = invoke({"pipeline", p("scene.ply"), "--cameras", p("bad_rig.json"), "--ratio", "0.1", "-o", p("fail")});
  EXPECT_NE(r.code, 0);
  EXPECT_FALSE(fs::exists(dir_ / "fail"));
  EXPECT_FALSE(fs::exists(dir_ / "fail.partial"));
}

TEST_F(CliTest, ExitCodes) {
  EXPECT_EQ(invoke({}).code, 2);
  EXPECT_EQ(invoke({"frobnicate"}).code, 2);
  EXPECT_EQ(invoke({"prune", p("scene.ply"), "-o", p("x.ply")}).code, 2);  // missing --scores/--ratio
  EXPECT_EQ(invoke({"render", p("scene.ply"), "--camera", p("rig.json") + "#7", "-o", p("x.png")}).code, 2);
  EXPECT_EQ(invoke({"info", p("nope.ply")}).code, 3);
  write_file(p("junk.ply"), std::string_view("not a ply"));
  EXPECT_EQ(invoke({"info", p("junk.ply")}).code, 3);
  write_file(p("skew.json"),
             std::string_view(R"({"cameras": [{"width": 4, "height": 4, "fx": 1, "fy": 1, "cx": 2, "cy": 2,
                                 "world_to_camera": [2,0,0,0, 0,1,0,0, 0,0,1,0, 0,0,0,1]}]})"));
  const CliResult inv = invoke({"render", p("scene.ply"), "--camera", p("skew.json"), "-o", p("x.png")});
  EXPECT_EQ(inv.code, 4);
  EXPECT_EQ(std::count(inv.err.begin(), inv.err.end(), '\n'), 1);
  EXPECT_EQ(invoke({"--help"}).code, 0);
}

TEST_F(CliTest, SynthWritesSceneAndRig) {
  ASSERT_EQ(invoke({"synth", "--kind", "planar-grid", "--count", "100", "--extent", "1", "-o", p("grid.ply"), "--rig",
                 p("grid.json"), "--views", "2", "--size", "32"})
                .code,
            0);
  EXPECT_EQ(load_ply(read_file(p("grid.ply"))).size(), 100u);
  EXPECT_EQ(load_camera_rig(p("grid.json")).size(), 2u);
}
