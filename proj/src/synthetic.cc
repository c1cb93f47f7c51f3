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

#include "ccreid/synthetic.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

#include "ccreid/error.h"
#include "text_util.h"

namespace ccreid {
namespace {

constexpr int kMaxPlacementAttempts = 10000;

// Crop-local geometry shared by every synthetic crop.
constexpr Box kCropBox{0, 0, 128, 256};
constexpr Box kMainFaceBox{40, 10, 88, 58};
constexpr Box kDistractorFaceBox{90, 60, 122, 92};
constexpr Point kLeftEye{54, 30};
constexpr Point kRightEye{74, 30};
constexpr Point kNose{64, 42};

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  double Uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng_);
  }
  bool Bernoulli(double p) { return Uniform(0.0, 1.0) < p; }

  std::vector<double> Gaussian(std::size_t dim, double stddev) {
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> v(dim);
    for (double& x : v) x = normal(rng_) * stddev;
    return v;
  }

  std::vector<double> UnitVector(std::size_t dim) {
    while (true) {
      auto v = Gaussian(dim, 1.0);
      double sq = 0;
      for (double x : v) sq += x * x;
      if (sq > 1e-12) {
        const double n = std::sqrt(sq);
        for (double& x : v) x /= n;
        return v;
      }
    }
  }

 private:
  std::mt19937_64 rng_;
};

double Dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

std::string Name(const char* prefix, std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s_%02zu", prefix, i);
  return buf;
}

struct Person {
  std::string name;
  bool known = true;
  std::vector<double> u;
  std::vector<std::vector<double>> clothes;
};

void CheckRate(double v, const char* name) {
  if (!(v >= 0 && v <= 1)) throw ValidationError(std::string(name) + " outside [0, 1]");
}

}  // namespace

void SyntheticSpec::Validate() const {
  if (n_identities == 0) throw ValidationError("n_identities must be positive");
  if (n_clothes_per_identity == 0) {
    throw ValidationError("n_clothes_per_identity must be positive");
  }
  if (dim == 0) throw ValidationError("dim must be positive");
  if (crops_per_track == 0 || tracks_per_identity == 0 ||
      gallery_crops_per_identity == 0) {
    throw ValidationError("crop and track counts must be positive");
  }
  if (!(face_noise_sigma >= 0) || !(reid_noise_sigma >= 0) || !(noisy_face_sigma >= 0)) {
    throw ValidationError("noise sigmas must be non-negative");
  }
  CheckRate(reid_clothes_weight, "reid_clothes_weight");
  CheckRate(face_visibility_rate, "face_visibility_rate");
  CheckRate(noisy_face_rate, "noisy_face_rate");
  CheckRate(distractor_face_rate, "distractor_face_rate");
  if (!(max_identity_cosine > 0 && max_identity_cosine <= 1)) {
    throw ValidationError("max_identity_cosine outside (0, 1]");
  }
}

SyntheticDataset GenerateSynthetic(const SyntheticSpec& spec) {
  spec.Validate();
  Sampler sampler(spec.seed);
  const std::size_t dim = spec.dim;

  std::vector<Person> people;
  const std::size_t total = spec.n_identities + spec.n_unknown_identities;
  for (std::size_t i = 0; i < total; ++i) {
    Person p;
    p.known = i < spec.n_identities;
    p.name = p.known ? Name("id", i) : Name("unk", i - spec.n_identities);
    for (int attempt = 0;; ++attempt) {
      if (attempt == kMaxPlacementAttempts) {
        throw ValidationError(
            "cannot place identity vectors within max_identity_cosine; raise dim "
            "or the bound");
      }
      p.u = sampler.UnitVector(dim);
      const bool separated = std::all_of(people.begin(), people.end(), [&](const Person& q) {
        return std::abs(Dot(p.u, q.u)) <= spec.max_identity_cosine;
      });
      if (separated) break;
    }
    for (std::size_t c = 0; c < spec.n_clothes_per_identity; ++c) {
      p.clothes.push_back(sampler.UnitVector(dim));
    }
    people.push_back(std::move(p));
  }

  SyntheticDataset ds;
  ds.spec = spec;
  const double w = spec.reid_clothes_weight;
  const double reid_sd = spec.reid_noise_sigma / std::sqrt(static_cast<double>(dim));

  auto emit_crop = [&](const Person& person, std::size_t clothes, CropRecord crop) {
    auto noise = sampler.Gaussian(dim, reid_sd);
    std::vector<double> reid(dim);
    for (std::size_t j = 0; j < dim; ++j) {
      reid[j] = (1 - w) * person.u[j] + w * person.clothes[clothes][j] + noise[j];
    }
    ds.reid.Add(crop.im_name, reid);
    ds.clothes[crop.im_name] =
        ClothesRecord{person.name + "_c" + std::to_string(clothes), std::nullopt};

    if (sampler.Bernoulli(spec.face_visibility_rate)) {
      const bool noisy = sampler.Bernoulli(spec.noisy_face_rate);
      const double det = noisy ? sampler.Uniform(0.3, 0.7) : sampler.Uniform(0.8, 1.0);
      const double sigma = noisy ? spec.noisy_face_sigma : spec.face_noise_sigma;
      std::size_t index = 0;
      if (sampler.Bernoulli(spec.distractor_face_rate)) {
        FaceObservation distractor{crop.im_name, kDistractorFaceBox,
                                   sampler.Uniform(0.5, 1.0), kLeftEye, kRightEye, kNose};
        ds.face.Add(FaceEmbeddingKey(crop.im_name, 0), sampler.UnitVector(dim));
        ds.face_obs.Add(distractor);
        index = 1;
      }
      auto face_noise = sampler.Gaussian(dim, sigma / std::sqrt(static_cast<double>(dim)));
      std::vector<double> face(dim);
      for (std::size_t j = 0; j < dim; ++j) face[j] = person.u[j] + face_noise[j];
      ds.face.Add(FaceEmbeddingKey(crop.im_name, index), face);
      ds.face_obs.Add(FaceObservation{crop.im_name, kMainFaceBox, det, kLeftEye,
                                      kRightEye, kNose});
    }
  };

  auto base_crop = [&](std::string im_name, std::string vid, std::int64_t track,
                       std::int64_t crop_id) {
    CropRecord c;
    c.im_name = std::move(im_name);
    c.frame_num = crop_id;
    c.x1 = kCropBox.x1;
    c.y1 = kCropBox.y1;
    c.x2 = kCropBox.x2;
    c.y2 = kCropBox.y2;
    c.conf = 0.9;
    c.vid_name = std::move(vid);
    c.track_id = track;
    c.crop_id = crop_id;
    return c;
  };

  std::vector<CropRecord> gallery;
  for (std::size_t i = 0; i < people.size(); ++i) {
    const Person& p = people[i];
    if (!p.known) continue;
    for (std::size_t k = 0; k < spec.gallery_crops_per_identity; ++k) {
      CropRecord c = base_crop("g_" + p.name + "_" + std::to_string(k), "gallery",
                               static_cast<std::int64_t>(i + 1),
                               static_cast<std::int64_t>(k));
      c.label = IdentityLabel::Named(p.name);
      emit_crop(p, 0, c);
      gallery.push_back(std::move(c));
    }
  }

  std::vector<CropRecord> query;
  std::int64_t track_id = 0;
  for (const Person& p : people) {
    for (std::size_t t = 0; t < spec.tracks_per_identity; ++t) {
      ++track_id;
      const std::size_t clothes =
          spec.n_clothes_per_identity == 1 ? 0 : 1 + t % (spec.n_clothes_per_identity - 1);
      for (std::size_t k = 0; k < spec.crops_per_track; ++k) {
        CropRecord c = base_crop("q_" + std::to_string(track_id) + "_" + std::to_string(k),
                                 "query", track_id, static_cast<std::int64_t>(k));
        c.label = IdentityLabel::Named(p.name);
        emit_crop(p, clothes, c);
        query.push_back(std::move(c));
      }
    }
  }

  ds.gallery = CropManifest(std::move(gallery));
  ds.query = CropManifest(std::move(query));
  return ds;
}

void WriteSyntheticDataset(const SyntheticDataset& dataset,
                           const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error("cannot create " + out_dir.string() + ": " + ec.message());

  auto open = [&](const char* name) {
    std::ofstream out(out_dir / name, std::ios::binary);
    if (!out) throw Error("cannot write " + (out_dir / name).string());
    return out;
  };
  {
    auto out = open("gallery.csv");
    WriteCropManifest(out, dataset.gallery);
  }
  {
    auto out = open("query.csv");
    WriteCropManifest(out, dataset.query);
  }
  {
    auto out = open("reid.jsonl");
    WriteEmbeddings(out, dataset.reid);
  }
  {
    auto out = open("face.jsonl");
    WriteEmbeddings(out, dataset.face);
  }
  {
    auto out = open("faces.jsonl");
    WriteFaceObservations(out, dataset.face_obs);
  }
  {
    auto out = open("clothes.jsonl");
    for (const auto& [id, rec] : dataset.clothes) {
      internal::OrderedJson j;
      j["sample_id"] = id;
      j["clothes_id"] = rec.clothes_id ? internal::OrderedJson(*rec.clothes_id)
                                       : internal::OrderedJson(nullptr);
      out << j.dump() << '\n';
    }
  }
  {
    auto out = open("config.json");
    internal::OrderedJson cfg;
    cfg["gallery_manifest"] = "gallery.csv";
    cfg["query_manifest"] = "query.csv";
    cfg["reid_embeddings"] = "reid.jsonl";
    cfg["face_embeddings"] = "face.jsonl";
    cfg["face_observations"] = "faces.jsonl";
    cfg["clothes_file"] = "clothes.jsonl";
    cfg["output_dir"] = "predictions";
    cfg["alpha"] = 0.75;
    cfg["thresholds"] = "42street";
    cfg["open_set"] = dataset.spec.n_unknown_identities > 0;
    cfg["min_track_len"] = std::min<std::size_t>(10, dataset.spec.crops_per_track);
    cfg["seed"] = dataset.spec.seed;
    out << cfg.dump(2) << '\n';
  }
}

}  // namespace ccreid
