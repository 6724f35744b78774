#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "exgs/camera_rig.hpp"
#include "exgs/codec.hpp"
#include "exgs/error.hpp"
#include "exgs/rasterizer.hpp"
#include "exgs/scene_synth.hpp"
#include "test_support.hpp"

using namespace exgs;

TEST(Rng, SeededSequencesRepeat) {
  XorShift64Star a(5), b(5), c(6);
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next();
    EXPECT_EQ(x, b.next());
    EXPECT_NE(x, c.next());
  }
  XorShift64Star zero(0);
  EXPECT_NE(zero.next(), 0u);
  XorShift64Star u(9);
  for (int i = 0; i < 1000; ++i) {
    const double v = u.uniform();
    EXPECT_GE(v, 0.0);
    EXPECT_LT(v, 1.0);
  }
}

TEST(Synth, SameSpecSameCloud) {
  for (SceneKind kind : {SceneKind::TexturedRoom, SceneKind::RandomBlob, SceneKind::PlanarGrid}) {
    SynthSpec spec;
    spec.kind = kind;
    spec.gaussian_count = 500;
    spec.seed = 77;
    const GaussianCloud a = make_scene(spec);
    EXPECT_EQ(a, make_scene(spec));
    EXPECT_EQ(a.size(), 500u);
    EXPECT_EQ(a.sh_degree, 3);
    EXPECT_NO_THROW(a.validate());
    spec.seed = 78;
    if (kind != SceneKind::PlanarGrid) EXPECT_NE(a, make_scene(spec));
  }
}

TEST(Synth, PlanarGridLattice) {
  SynthSpec spec;
  spec.kind = SceneKind::PlanarGrid;
  spec.gaussian_count = 100;
  spec.extent = 1.0;
  const GaussianCloud c = make_scene(spec);
  std::set<long> xs, ys;
  for (std::size_t i = 0; i < 100; ++i) {
    const double x = c.means[3 * i], y = c.means[3 * i + 1];
    EXPECT_EQ(c.means[3 * i + 2], 0.0f);
    const double gx = (x + 0.5) * 9.0, gy = (y + 0.5) * 9.0;
    EXPECT_NEAR(gx, std::round(gx), 1e-5);
    EXPECT_NEAR(gy, std::round(gy), 1e-5);
    xs.insert(std::lround(gx));
    ys.insert(std::lround(gy));
  }
  EXPECT_EQ(xs.size(), 10u);
  EXPECT_EQ(ys.size(), 10u);
  EXPECT_NEAR(c.means[3] - c.means[0], 1.0 / 9.0, 1e-6);
}

TEST(Synth, RoomPayloadCompresses) {
  SynthSpec spec;
  spec.gaussian_count = 5000;
  const GaussianCloud c = make_scene(spec);
  const auto bytes = compress(c);
  const double raw = static_cast<double>(c.size() * kExgsValuesPerGaussian * 2);
  EXPECT_GT(raw / static_cast<double>(bytes.size() - kExgsHeaderBytes), 1.0);
}

TEST(Synth, RejectsBadSpecs) {
  SynthSpec spec;
  spec.gaussian_count = 0;
  EXPECT_THROW(make_scene(spec), InvalidParameterError);
  spec.gaussian_count = 10;
  spec.extent = -1;
  EXPECT_THROW(make_scene(spec), InvalidParameterError);
  EXPECT_THROW(parse_scene_kind("forest"), InvalidParameterError);
}

TEST(Orbit, SingleCameraLooksAtTarget) {
  const auto cams = make_orbit_cameras(1, 5.0, {0, 0, 0}, Intrinsics{});
  ASSERT_EQ(cams.size(), 1u);
  const Vec3 p = cams[0].position();
  EXPECT_NEAR(p[0], 5.0, 1e-12);
  EXPECT_NEAR(p[1], 0.0, 1e-12);
  EXPECT_NEAR(p[2], 0.0, 1e-12);
  Gaussian g;
  g.scale_log = {-3, -3, -3};
  const auto s = project_gaussian(g, cams[0]);
  ASSERT_TRUE(s);
  EXPECT_NEAR(s->mean2d[0], cams[0].cx, 1e-9);
  EXPECT_NEAR(s->mean2d[1], cams[0].cy, 1e-9);
  EXPECT_NEAR(s->depth, 5.0, 1e-9);
}

TEST(Orbit, FourCamerasAreQuarterTurnsApart) {
  const Vec3 target{1, 2, 3};
  const auto cams = make_orbit_cameras(4, 2.0, target, Intrinsics{});
  for (int i = 0; i < 4; ++i) {
    const Vec3 a = cams[i].position() - target;
    const Vec3 b = cams[(i + 1) % 4].position() - target;
    EXPECT_NEAR(norm(a), 2.0, 1e-12);
    EXPECT_NEAR(std::acos(dot(a, b) / (norm(a) * norm(b))), std::numbers::pi / 2, 1e-9);
  }
}

TEST(Orbit, RotationsOrthonormalAndUpright) {
  const auto cams = make_orbit_cameras(17, 3.0, {0, 0, 0}, Intrinsics{});
  for (const Camera& cam : cams) {
    EXPECT_NO_THROW(cam.validate());
    const Mat3 r = cam.rotation();
    const Mat3 rtr = r.transposed() * r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) EXPECT_NEAR(rtr(i, j), i == j ? 1.0 : 0.0, 1e-6);
    // Image "down" points to world -z.
    EXPECT_NEAR(r(1, 2), -1.0, 1e-12);
  }
  EXPECT_THROW(make_orbit_cameras(0, 1.0, {0, 0, 0}, Intrinsics{}), InvalidParameterError);
  EXPECT_THROW(make_orbit_cameras(2, 0.0, {0, 0, 0}, Intrinsics{}), InvalidParameterError);
}

TEST(CameraRig, JsonRoundTrip) {
  const auto cams = make_orbit_cameras(3, 2.5, {0.5, 0, 0}, Intrinsics{64, 48, 60, 61, 31.5, 23.5});
  const auto back = parse_camera_rig(camera_rig_to_json(cams));
  ASSERT_EQ(back.size(), 3u);
  for (std::size_t i = 0; i < cams.size(); ++i) EXPECT_EQ(back[i], cams[i]);
  fixtures::TempDir dir("rig");
  save_camera_rig(dir / "rig.json", cams);
  EXPECT_EQ(load_camera_rig(dir / "rig.json"), cams);
}

TEST(CameraRig, RejectsMalformedDocuments) {
  EXPECT_THROW(parse_camera_rig("{"), FormatError);
  EXPECT_THROW(parse_camera_rig("{\"views\": []}"), FormatError);
  EXPECT_THROW(parse_camera_rig("{\"cameras\": [{\"width\": 4}]}"), FormatError);
  const std::string skewed =
      R"({"cameras": [{"width": 4, "height": 4, "fx": 1, "fy": 1, "cx": 2, "cy": 2,
          "world_to_camera": [2,0,0,0, 0,1,0,0, 0,0,1,0, 0,0,0,1]}]})";
  EXPECT_THROW(parse_camera_rig(skewed), InvariantError);
  const std::string short_matrix =
      R"({"cameras": [{"width": 4, "height": 4, "fx": 1, "fy": 1, "cx": 2, "cy": 2,
          "world_to_camera": [1,0,0,0]}]})";
  EXPECT_THROW(parse_camera_rig(short_matrix), FormatError);
}
