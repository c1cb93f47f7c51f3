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

// Brute-force reference implementations used as test oracles. They work on
// plain structs holding raw (unnormalized) vectors, compute cosine similarity
// as a.b / (|a| |b|), and share no code with the engine.

#ifndef CCREID_TESTS_ORACLE_REFERENCE_H_
#define CCREID_TESTS_ORACLE_REFERENCE_H_

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace oracle {

struct RefFace {
  double box[4] = {0, 0, 0, 0};
  double det = 0;
  std::optional<std::vector<double>> embedding;
};

struct RefCrop {
  std::string name;
  std::optional<std::string> label;
  std::vector<double> reid;
  bool has_keypoints = false;
  double keypoints[6] = {0, 0, 0, 0, 0, 0};  // left eye, right eye, nose
  std::vector<RefFace> faces;
};

struct RefItem {
  std::string label;
  std::vector<double> vec;
};

inline double Cosine(const std::vector<double>& a, const std::vector<double>& b) {
  double ab = 0, aa = 0, bb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ab += a[i] * b[i];
    aa += a[i] * a[i];
    bb += b[i] * b[i];
  }
  double c = ab / (std::sqrt(aa) * std::sqrt(bb));
  return std::max(-1.0, std::min(1.0, c));
}

inline bool Inside(const double box[4], double x, double y) {
  return box[0] <= x && x <= box[2] && box[1] <= y && y <= box[3];
}

// Index of the crop's main face, or -1.
inline int MainFace(const RefCrop& crop) {
  if (!crop.has_keypoints) return -1;
  int best = -1;
  for (int i = 0; i < static_cast<int>(crop.faces.size()); ++i) {
    const RefFace& f = crop.faces[i];
    bool ok = true;
    for (int p = 0; p < 3; ++p) {
      if (!Inside(f.box, crop.keypoints[2 * p], crop.keypoints[2 * p + 1])) ok = false;
    }
    if (!ok) continue;
    if (best < 0 || f.det > crop.faces[best].det) best = i;
  }
  return best;
}

// Max similarity of `q` to each label present in `gallery`.
inline std::map<std::string, double> PerLabelMax(const std::vector<double>& q,
                                                 const std::vector<RefItem>& gallery) {
  std::map<std::string, double> out;
  for (const RefItem& g : gallery) {
    double c = Cosine(q, g.vec);
    auto it = out.find(g.label);
    if (it == out.end()) {
      out[g.label] = c;
    } else if (c > it->second) {
      it->second = c;
    }
  }
  return out;
}

struct RefPrediction {
  std::string label;
  std::map<std::string, double> reid, face, fused;
  std::size_t n_faces = 0;
};

inline RefPrediction PredictTrack(const std::vector<RefCrop>& crops,
                                  const std::vector<RefItem>& g_enriched,
                                  const std::vector<RefItem>& g_face, double alpha,
                                  double det_inference) {
  RefPrediction p;
  std::vector<std::string> labels;
  for (const auto& g : g_enriched) labels.push_back(g.label);
  for (const auto& g : g_face) labels.push_back(g.label);
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());

  for (const auto& l : labels) p.reid[l] = p.face[l] = 0.0;
  for (const RefCrop& c : crops) {
    auto m = PerLabelMax(c.reid, g_enriched);
    for (const auto& [l, s] : m) p.reid[l] += s / static_cast<double>(crops.size());
  }
  std::vector<const std::vector<double>*> faces;
  if (!g_face.empty()) {
    for (const RefCrop& c : crops) {
      int i = MainFace(c);
      if (i < 0) continue;
      const RefFace& f = c.faces[i];
      if (!f.embedding || f.det < det_inference) continue;
      faces.push_back(&*f.embedding);
    }
  }
  p.n_faces = faces.size();
  for (const auto* f : faces) {
    auto m = PerLabelMax(*f, g_face);
    for (const auto& [l, s] : m) p.face[l] += s / static_cast<double>(faces.size());
  }
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& l : labels) {
    double v = alpha * p.reid[l] + (1 - alpha) * p.face[l];
    p.fused[l] = v;
    if (v > best) {
      best = v;
      p.label = l;
    }
  }
  return p;
}

struct RefThresholds {
  double det_enrich, sim_min, rank_diff, unknown_sim;
  bool open_set;
};

struct RefDecision {
  std::string sample_id;
  std::string outcome;  // labeled, unknown, no_face, low_detection, low_similarity, ambiguous
  std::string label;
  double best_sim = std::numeric_limits<double>::quiet_NaN();
  double rank_gap = std::numeric_limits<double>::quiet_NaN();
};

struct RefEnrichment {
  std::vector<RefItem> g_face;
  std::vector<RefItem> g_enriched;
  std::vector<RefDecision> decisions;
};

// Step 1: label the face gallery. Step 2-3: label each query by face and
// decide. Step 4: gather ReID vectors of labeled plus accepted queries.
inline RefEnrichment Enrich(const std::vector<RefCrop>& labeled,
                            const std::vector<RefCrop>& queries,
                            const RefThresholds& t) {
  RefEnrichment r;
  for (const RefCrop& c : labeled) {
    int i = MainFace(c);
    if (i < 0) continue;
    const RefFace& f = c.faces[i];
    if (f.det < t.det_enrich || !f.embedding) continue;
    r.g_face.push_back({*c.label, *f.embedding});
  }
  for (const RefCrop& c : labeled) r.g_enriched.push_back({*c.label, c.reid});

  for (const RefCrop& q : queries) {
    RefDecision d;
    d.sample_id = q.name;
    int i = MainFace(q);
    if (i < 0 || !q.faces[i].embedding) {
      d.outcome = "no_face";
      r.decisions.push_back(d);
      continue;
    }
    const RefFace& f = q.faces[i];
    auto m = PerLabelMax(*f.embedding, r.g_face);
    std::vector<std::pair<double, std::string>> ranked;
    for (const auto& [l, s] : m) ranked.push_back({s, l});
    // Descending score, ascending label on ties.
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first > b.first;
      return a.second < b.second;
    });
    d.best_sim = ranked[0].first;
    d.rank_gap = ranked.size() > 1 ? ranked[0].first - ranked[1].first
                                   : std::numeric_limits<double>::infinity();
    if (f.det < t.det_enrich) {
      d.outcome = "low_detection";
    } else if (t.open_set && d.best_sim < t.unknown_sim) {
      d.outcome = "unknown";
      r.g_enriched.push_back({"Unknown", q.reid});
    } else if (d.best_sim < t.sim_min) {
      d.outcome = "low_similarity";
    } else if (d.rank_gap < t.rank_diff) {
      d.outcome = "ambiguous";
    } else {
      d.outcome = "labeled";
      d.label = ranked[0].second;
      r.g_enriched.push_back({d.label, q.reid});
    }
    r.decisions.push_back(d);
  }
  return r;
}

// Random instances --------------------------------------------------------

struct RandomInstance {
  std::size_t dim = 0;
  std::vector<std::string> identities;
  std::vector<RefItem> g_enriched, g_face;
  std::vector<RefCrop> labeled;  // gallery crops (enrichment instances)
  std::vector<RefCrop> track;    // query crops
  double alpha = 0.75;
  double det_inference = 0.7;
};

class InstanceGenerator {
 public:
  explicit InstanceGenerator(std::uint64_t seed) : rng_(seed) {}

  std::size_t Int(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_);
  }
  double Real(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng_);
  }
  bool Coin(double p) { return Real(0, 1) < p; }

  std::vector<double> Vec(std::size_t dim) {
    std::normal_distribution<double> n(0, 1);
    std::vector<double> v(dim);
    double sq = 0;
    do {
      sq = 0;
      for (double& x : v) {
        x = n(rng_) * Real(0.5, 2.0);
        sq += x * x;
      }
    } while (sq < 1e-6);
    return v;
  }

  std::vector<double> Near(const std::vector<double>& base, double noise) {
    std::normal_distribution<double> n(0, noise);
    double norm = 0;
    for (double x : base) norm += x * x;
    norm = std::sqrt(norm / static_cast<double>(base.size()));
    std::vector<double> v(base);
    for (double& x : v) x += n(rng_) * norm;
    return v;
  }

  // A crop with 0-3 faces; the main person's face (when present) derives
  // from `face_center`.
  RefCrop Crop(const std::string& name, const std::vector<double>& reid,
               const std::vector<double>& face_center, std::size_t dim) {
    RefCrop c;
    c.name = name;
    c.reid = reid;
    c.has_keypoints = Coin(0.85);
    const double kx = Real(20, 80), ky = Real(20, 80);
    c.keypoints[0] = kx - 5;
    c.keypoints[1] = ky;
    c.keypoints[2] = kx + 5;
    c.keypoints[3] = ky;
    c.keypoints[4] = kx;
    c.keypoints[5] = ky + 6;
    const std::size_t n_faces = Int(0, 3);
    for (std::size_t f = 0; f < n_faces; ++f) {
      RefFace face;
      const int kind = static_cast<int>(Int(0, 3));
      if (kind == 0) {
        // Far from the keypoints.
        face.box[0] = kx + 30;
        face.box[1] = ky + 30;
        face.box[2] = kx + 60;
        face.box[3] = ky + 60;
      } else if (kind == 1) {
        // Exactly touching the extreme keypoints.
        face.box[0] = kx - 5;
        face.box[1] = ky;
        face.box[2] = kx + 5;
        face.box[3] = ky + 6;
      } else {
        face.box[0] = kx - Real(6, 20);
        face.box[1] = ky - Real(1, 20);
        face.box[2] = kx + Real(6, 20);
        face.box[3] = ky + Real(7, 20);
      }
      // Coarse det values so exact ties happen.
      face.det = Coin(0.3) ? 0.8 : std::round(Real(0.3, 1.0) * 20) / 20;
      if (Coin(0.9)) {
        face.embedding = Coin(0.7) ? Near(face_center, Real(0.05, 1.5)) : Vec(dim);
      }
      c.faces.push_back(face);
    }
    return c;
  }

  // Scoring instance: <= 10 identities, <= 50 gallery vectors, <= 20 crops.
  RandomInstance Scoring() {
    RandomInstance inst;
    inst.dim = Int(4, 64);
    const std::size_t n_ids = Int(1, 10);
    std::vector<std::vector<double>> reid_centers, face_centers;
    for (std::size_t i = 0; i < n_ids; ++i) {
      inst.identities.push_back("p" + std::to_string(i));
      reid_centers.push_back(Vec(inst.dim));
      face_centers.push_back(Vec(inst.dim));
    }
    if (Coin(0.3)) {
      inst.identities.push_back("Unknown");
      reid_centers.push_back(Vec(inst.dim));
      face_centers.push_back(Vec(inst.dim));
    }
    const std::size_t n_reid = Int(1, 50);
    for (std::size_t g = 0; g < n_reid; ++g) {
      std::size_t i = Int(0, inst.identities.size() - 1);
      inst.g_enriched.push_back({inst.identities[i], Near(reid_centers[i], Real(0.1, 1.0))});
    }
    if (Coin(0.85)) {
      const std::size_t n_face = Int(1, 50);
      for (std::size_t g = 0; g < n_face; ++g) {
        std::size_t i = Int(0, n_ids - 1);  // Unknown never enters G_face
        inst.g_face.push_back({inst.identities[i], Near(face_centers[i], Real(0.1, 1.0))});
      }
    }
    const std::size_t truth = Int(0, inst.identities.size() - 1);
    const std::size_t n_crops = Int(1, 20);
    for (std::size_t k = 0; k < n_crops; ++k) {
      inst.track.push_back(Crop("c" + std::to_string(k),
                                Near(reid_centers[truth], Real(0.2, 2.0)),
                                face_centers[truth], inst.dim));
    }
    inst.alpha = Coin(0.2) ? (Coin(0.5) ? 0.0 : 1.0) : Real(0, 1);
    inst.det_inference = std::round(Real(0.3, 0.9) * 20) / 20;
    return inst;
  }

  // Enrichment instance: labeled crops with labels plus unlabeled queries,
  // some from out-of-gallery people.
  RandomInstance Enrichment(RefThresholds* thresholds) {
    RandomInstance inst;
    inst.dim = Int(4, 64);
    const std::size_t n_ids = Int(1, 8);
    std::vector<std::vector<double>> reid_centers, face_centers;
    for (std::size_t i = 0; i < n_ids + 2; ++i) {
      reid_centers.push_back(Vec(inst.dim));
      face_centers.push_back(Vec(inst.dim));
      if (i < n_ids) inst.identities.push_back("p" + std::to_string(i));
    }
    const std::size_t n_labeled = Int(n_ids, 30);
    for (std::size_t k = 0; k < n_labeled; ++k) {
      std::size_t i = k < n_ids ? k : Int(0, n_ids - 1);
      RefCrop c = Crop("l" + std::to_string(k), Near(reid_centers[i], 0.3), face_centers[i],
                       inst.dim);
      // Guarantee at least one usable gallery face.
      if (k == 0) {
        c.has_keypoints = true;
        c.faces.clear();
        RefFace f;
        f.box[0] = c.keypoints[0] - 1;
        f.box[1] = c.keypoints[1] - 1;
        f.box[2] = c.keypoints[2] + 1;
        f.box[3] = c.keypoints[5] + 1;
        f.det = 1.0;
        f.embedding = Near(face_centers[i], 0.1);
        c.faces.push_back(f);
      }
      c.label = inst.identities[i];
      inst.labeled.push_back(c);
    }
    const std::size_t n_queries = Int(0, 40);
    for (std::size_t k = 0; k < n_queries; ++k) {
      std::size_t i = Int(0, n_ids + 1);
      inst.track.push_back(
          Crop("q" + std::to_string(k), Near(reid_centers[i], 0.3), face_centers[i], inst.dim));
    }
    thresholds->det_enrich = std::round(Real(0.3, 0.9) * 20) / 20;
    thresholds->unknown_sim = Real(-0.2, 0.4);
    thresholds->sim_min = thresholds->unknown_sim + Real(0, 0.5);
    thresholds->rank_diff = Coin(0.2) ? 0.0 : Real(0, 0.3);
    thresholds->open_set = Coin(0.5);
    return inst;
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace oracle

#endif  // CCREID_TESTS_ORACLE_REFERENCE_H_
