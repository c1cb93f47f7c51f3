// Copyright 2026 The ccreid Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <random>

#include "ccreid/error.h"
#include "ccreid/geometry.h"
#include "ccreid/scoring.h"
#include "doctest.h"
#include "oracle/compare.h"
#include "test_util.h"

namespace ccreid {
namespace {

using testing::AddUnit;
using testing::Id;

FaceObservation Face(Box box, double det, std::optional<Keypoints> kp,
                     std::size_t index = 0) {
  FaceObservation f;
  f.sample_id = "c";
  f.box = box;
  f.det_conf = det;
  f.face_index = index;
  if (kp) {
    f.left_eye = kp->left_eye;
    f.right_eye = kp->right_eye;
    f.nose = kp->nose;
  }
  return f;
}

const Keypoints kKp{{20, 20}, {40, 20}, {30, 30}};

TEST_CASE("face_inside_check") {
  const Box box{10, 10, 50, 50};
  CHECK(FaceInsideCheck(box, {20, 20}, {40, 20}, {30, 30}));
  CHECK_FALSE(FaceInsideCheck(box, {20, 20}, {40, 20}, {60, 30}));
  CHECK(FaceInsideCheck(box, {10, 10}, {40, 20}, {30, 30}));
  CHECK(FaceInsideCheck(box, {20, 20}, {50, 50}, {30, 30}));
  CHECK_FALSE(FaceInsideCheck(box, {20, 20}, {40, 20}, {30, 50.000001}));
}

TEST_CASE("face_inside_check is translation invariant") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-100, 100);
  for (int i = 0; i < 500; ++i) {
    // Integer-valued offsets keep the translated comparisons exact.
    const double dx = std::round(u(rng)), dy = std::round(u(rng));
    Box b{std::round(u(rng)), std::round(u(rng)), 0, 0};
    b.x2 = b.x1 + std::round(std::fabs(u(rng))) + 1;
    b.y2 = b.y1 + std::round(std::fabs(u(rng))) + 1;
    Point p[3];
    for (auto& q : p) q = {std::round(u(rng)), std::round(u(rng))};
    Box t{b.x1 + dx, b.y1 + dy, b.x2 + dx, b.y2 + dy};
    Point s[3];
    for (int k = 0; k < 3; ++k) s[k] = {p[k].x + dx, p[k].y + dy};
    CHECK(FaceInsideCheck(b, p[0], p[1], p[2]) == FaceInsideCheck(t, s[0], s[1], s[2]));
  }
}

TEST_CASE("select_main_face") {
  SUBCASE("single matching face") {
    std::vector<FaceObservation> faces{Face({10, 10, 50, 50}, 0.9, kKp)};
    auto r = SelectMainFace(faces, kKp);
    CHECK(r.matched);
    CHECK(*r.chosen_face_index == 0);
  }
  SUBCASE("only the second face contains the keypoints") {
    std::vector<FaceObservation> faces{Face({60, 10, 90, 40}, 0.99, kKp, 0),
                                       Face({10, 10, 50, 50}, 0.6, kKp, 1)};
    auto r = SelectMainFace(faces, kKp);
    CHECK(r.matched);
    CHECK(*r.chosen_face_index == 1);
  }
  SUBCASE("face not containing the keypoints") {
    std::vector<FaceObservation> faces{Face({60, 10, 90, 40}, 0.9, kKp)};
    auto r = SelectMainFace(faces, kKp);
    CHECK_FALSE(r.matched);
    CHECK_FALSE(r.chosen_face_index.has_value());
  }
  SUBCASE("no keypoints") {
    std::vector<FaceObservation> faces{Face({10, 10, 50, 50}, 0.9, std::nullopt)};
    CHECK_FALSE(SelectMainFace(faces).matched);
    CHECK_FALSE(SelectMainFace(faces, std::nullopt).matched);
  }
  SUBCASE("several containing faces: highest det_conf, then lowest index") {
    std::vector<FaceObservation> faces{Face({10, 10, 50, 50}, 0.7, kKp, 0),
                                       Face({0, 0, 60, 60}, 0.9, kKp, 1),
                                       Face({5, 5, 55, 55}, 0.9, kKp, 2)};
    CHECK(*SelectMainFace(faces).chosen_face_index == 1);
  }
  SUBCASE("no faces") { CHECK_FALSE(SelectMainFace({}, kKp).matched); }
}

TEST_CASE("cosine_similarity") {
  using V = std::vector<double>;
  CHECK(CosineSimilarity(V{1, 0}, V{1, 0}) == 1.0);
  CHECK(CosineSimilarity(V{1, 0}, V{0, 1}) == 0.0);
  CHECK(CosineSimilarity(V{0.6, 0.8}, V{1, 0}) == doctest::Approx(0.6).epsilon(1e-15));
  CHECK_THROWS_AS(CosineSimilarity(V{1, 0}, V{1, 0, 0}), ValidationError);
}

TEST_CASE("identity_confidence") {
  Gallery g(Modality::kReid);
  AddUnit(g, "A", {1, 0});
  AddUnit(g, "A", {0, 1});
  CHECK(IdentityConfidence(std::vector<double>{1, 0}, g, Id("A")) == 1.0);
  CHECK(IdentityConfidence(std::vector<double>{0.6, 0.8}, g, Id("A")) ==
        doctest::Approx(0.8).epsilon(1e-15));
  CHECK(IdentityConfidence(std::vector<double>{1, 0}, g, Id("B")) == 0.0);
}

TEST_CASE("track_score_vector") {
  Gallery g(Modality::kReid);
  AddUnit(g, "A", {1, 0, 0});
  AddUnit(g, "B", {0, 1, 0});
  std::vector<double> a{1, 0, 0}, b{0, 1, 0}, c{0, 0, 1};

  std::vector<std::span<const double>> two{a, b};
  ScoreVector v = TrackScoreVector(two, g);
  CHECK(v.at(Id("A")) == 0.5);
  CHECK(v.at(Id("B")) == 0.5);

  std::vector<std::span<const double>> one{a};
  CHECK(TrackScoreVector(one, g).at(Id("A")) == 1.0);

  std::vector<std::span<const double>> ortho{c, c};
  ScoreVector z = TrackScoreVector(ortho, g);
  CHECK(z.at(Id("A")) == 0.0);
  CHECK(z.at(Id("B")) == 0.0);

  CHECK_THROWS_AS(TrackScoreVector({}, g), ValidationError);
}

TEST_CASE("track_score_vector is invariant to image order") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n;
  auto unit = [&](std::size_t dim) {
    std::vector<double> v(dim);
    for (double& x : v) x = n(rng);
    return Normalized(v);
  };
  for (int trial = 0; trial < 30; ++trial) {
    Gallery g(Modality::kReid);
    for (int i = 0; i < 12; ++i) AddUnit(g, "p" + std::to_string(i % 4), unit(8));
    std::vector<std::vector<double>> images;
    for (int i = 0; i < 15; ++i) images.push_back(unit(8));
    std::vector<std::span<const double>> spans(images.begin(), images.end());
    ScoreVector before = TrackScoreVector(spans, g);
    std::shuffle(spans.begin(), spans.end(), rng);
    ScoreVector after = TrackScoreVector(spans, g);
    CHECK(before.scores == after.scores);
  }
}

TEST_CASE("fuse") {
  ScoreVector r{{{Id("A"), 0.8}, {Id("B"), 0.4}}, ScoreSource::kReid};
  ScoreVector f{{{Id("A"), 0.2}, {Id("B"), 0.9}}, ScoreSource::kFace};
  ScoreVector v = Fuse(r, f, 0.75);
  CHECK(v.source == ScoreSource::kFused);
  CHECK(v.at(Id("A")) == doctest::Approx(0.65).epsilon(1e-15));
  CHECK(v.at(Id("B")) == doctest::Approx(0.525).epsilon(1e-15));
  CHECK(Fuse(r, f, 1.0).scores == r.scores);
  CHECK(Fuse(r, f, 0.0).scores == f.scores);
  CHECK_THROWS_AS(Fuse(r, f, 1.5), ValidationError);
  CHECK_THROWS_AS(Fuse(r, f, -0.1), ValidationError);

  // Missing identities count as zero.
  ScoreVector only_face{{{Id("C"), 0.4}}, ScoreSource::kFace};
  ScoreVector u = Fuse(r, only_face, 0.5);
  CHECK(u.scores.size() == 3);
  CHECK(u.at(Id("C")) == 0.2);
  CHECK(u.at(Id("A")) == 0.4);
}

TEST_CASE("predict_identity") {
  CHECK(PredictIdentity({{{Id("A"), 0.65}, {Id("B"), 0.525}}}) == Id("A"));
  CHECK(PredictIdentity({{{Id("B"), 0.5}, {Id("A"), 0.5}}}) == Id("A"));
  CHECK(PredictIdentity({{{Id("A"), 0.0}}}) == Id("A"));
  CHECK(PredictIdentity({{{Id("Unknown"), 0.9}, {Id("A"), 0.1}}}).is_unknown());
  CHECK_THROWS_AS(PredictIdentity({}), ValidationError);
}

// Builds a one-face-per-crop track whose faces and ReID vectors are given.
struct TrackFixture {
  EmbeddingSet reid{Modality::kReid};
  EmbeddingSet face{Modality::kFace};
  FaceObservationSet obs;
  Track track;

  void AddCrop(const std::string& name, std::vector<double> reid_vec,
               std::optional<std::vector<double>> face_vec, double det = 0.9) {
    reid.Add(name, reid_vec);
    CropRecord c = testing::Crop(name, 1, static_cast<std::int64_t>(track.crops.size()));
    track.crops.push_back(c);
    if (face_vec) {
      FaceObservation f = Face({10, 10, 50, 50}, det, kKp);
      f.sample_id = name;
      obs.Add(f);
      face.Add(FaceEmbeddingKey(name, 0), *face_vec);
    }
  }
};

TEST_CASE("predict_track concordant case") {
  Gallery g_reid(Modality::kReid), g_face(Modality::kFace);
  AddUnit(g_reid, "A", {1, 0});
  AddUnit(g_reid, "B", {0, 1});
  AddUnit(g_face, "A", {1, 0});
  AddUnit(g_face, "B", {0, 1});
  TrackFixture t;
  t.AddCrop("c0", {0.9, 0.1}, std::vector<double>{0.95, 0.05});
  t.AddCrop("c1", {0.8, 0.2}, std::vector<double>{0.9, 0.1});
  Prediction p = PredictTrack(t.track, t.reid, t.face, t.obs, g_reid, g_face, {});
  CHECK(p.label == Id("A"));
  CHECK(p.n_images == 2);
  CHECK(p.n_faces == 2);
}

TEST_CASE("predict_track without faces uses alpha * v_reid") {
  Gallery g_reid(Modality::kReid), g_face(Modality::kFace);
  AddUnit(g_reid, "A", {1, 0});
  AddUnit(g_reid, "B", {0, 1});
  AddUnit(g_face, "A", {1, 0});
  TrackFixture t;
  t.AddCrop("c0", {0.2, 0.9}, std::nullopt);
  t.AddCrop("c1", {0.1, 0.9}, std::nullopt);
  ScoringOptions opts;
  Prediction p = PredictTrack(t.track, t.reid, t.face, t.obs, g_reid, g_face, opts);
  CHECK(p.label == Id("B"));
  CHECK(p.n_faces == 0);
  for (const auto& [id, s] : p.fused_scores.scores) {
    CHECK(s == opts.alpha * p.reid_scores.at(id));
  }
}

TEST_CASE("predict_track ignores faces below det_inference") {
  Gallery g_reid(Modality::kReid), g_face(Modality::kFace);
  AddUnit(g_reid, "A", {1, 0});
  AddUnit(g_reid, "B", {0, 1});
  AddUnit(g_face, "A", {1, 0});
  AddUnit(g_face, "B", {0, 1});
  TrackFixture t;
  t.AddCrop("c0", {0.6, 0.4}, std::vector<double>{0, 1}, 0.69);
  t.AddCrop("c1", {0.6, 0.4}, std::vector<double>{0, 1}, 0.70);
  Prediction p = PredictTrack(t.track, t.reid, t.face, t.obs, g_reid, g_face, {});
  CHECK(p.n_faces == 1);
  CHECK(p.face_scores.at(Id("B")) == 1.0);
}

TEST_CASE("predict_track errors on a crop without ReID embedding") {
  Gallery g_reid(Modality::kReid), g_face(Modality::kFace);
  AddUnit(g_reid, "A", {1, 0});
  TrackFixture t;
  t.track.crops.push_back(testing::Crop("ghost", 1, 0));
  CHECK_THROWS_AS(PredictTrack(t.track, t.reid, t.face, t.obs, g_reid, g_face, {}),
                  ValidationError);
}

TEST_CASE("predict_track matches the brute-force oracle") {
  for (std::uint64_t seed = 1000; seed < 1100; ++seed) {
    CAPTURE(seed);
    CHECK(oracle::CheckScoringInstance(seed) == "");
  }
}

}  // namespace
}  // namespace ccreid
