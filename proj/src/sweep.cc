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

#include "ccreid/sweep.h"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <set>

#include "ccreid/error.h"
#include "ccreid/geometry.h"
#include "text_util.h"

namespace ccreid {
namespace {

// "a:b:step" (inclusive) or a single value.
std::vector<double> ParseRange(std::string_view text) {
  auto parts = internal::Split(text, ':');
  std::vector<double> nums;
  for (auto p : parts) {
    auto v = internal::ToDouble(p);
    if (!v || !std::isfinite(*v)) {
      throw ValidationError("bad grid number '" + std::string(p) + "'");
    }
    nums.push_back(*v);
  }
  if (nums.size() == 1) return nums;
  if (nums.size() != 3) {
    throw ValidationError("grid range must be start:stop:step, got '" +
                          std::string(text) + "'");
  }
  const double start = nums[0], stop = nums[1], step = nums[2];
  if (!(step > 0)) throw ValidationError("grid step must be positive");
  if (stop < start) throw ValidationError("grid range stop < start");
  std::vector<double> out;
  const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9));
  for (std::size_t i = 0; i <= count; ++i) {
    // Rounded to 1e-9 so 0.1 steps print as 0.7, not 0.7000000000000001.
    out.push_back(std::round((start + static_cast<double>(i) * step) * 1e9) / 1e9);
  }
  return out;
}

// Face statistics of one probe that do not depend on the thresholds.
struct ProbeFace {
  IdentityLabel truth;
  double det_conf;
  EnrichmentDecision base;  // decided with det and sim gates disabled
};

}  // namespace

ThresholdGrid ParseGrid(std::string_view text) {
  std::vector<double> dets, sims;
  bool have_det = false, have_sim = false;
  for (auto item : internal::Split(text, ',')) {
    auto eq = item.find('=');
    if (eq == std::string_view::npos) {
      throw ValidationError("grid axis must be name=range, got '" + std::string(item) + "'");
    }
    auto name = item.substr(0, eq);
    auto values = ParseRange(item.substr(eq + 1));
    if (name == "det") {
      dets = std::move(values);
      have_det = true;
    } else if (name == "sim") {
      sims = std::move(values);
      have_sim = true;
    } else {
      throw ValidationError("unknown grid axis '" + std::string(name) + "'");
    }
  }
  if (!have_det || !have_sim) throw ValidationError("grid needs both det and sim axes");
  ThresholdGrid grid;
  for (double d : dets) {
    for (double s : sims) grid.emplace_back(d, s);
  }
  if (grid.empty()) throw ValidationError("empty threshold grid");
  return grid;
}

std::vector<SweepPoint> ThresholdSweep(std::span<const CropRecord> gallery,
                                       std::span<const CropRecord> probes,
                                       const EmbeddingSet& face_embeddings,
                                       const FaceObservationSet& face_obs,
                                       const EnrichmentThresholds& base,
                                       const ThresholdGrid& grid) {
  if (grid.empty()) throw ValidationError("empty threshold grid");
  base.Validate();
  const Gallery g_face = BuildFaceGallery(gallery, face_embeddings, face_obs, base);

  // Similarities do not depend on the grid, so each probe is scored once with
  // the detection and similarity gates open; each grid point then re-applies
  // the gates in the same order DecideQueryLabel does.
  EnrichmentThresholds open = base;
  open.det_enrich = 0.0;
  open.sim_min = -1.0;
  open.unknown_sim_max = -1.0;
  std::vector<ProbeFace> faces;
  for (const CropRecord& crop : probes) {
    if (!crop.label) continue;
    auto face = FindVerifiedFace(face_obs, face_embeddings, crop.im_name);
    if (!face) continue;
    faces.push_back({*crop.label, face->det_conf,
                     DecideQueryLabel(face->embedding, face->det_conf, g_face, open)});
  }

  std::vector<SweepPoint> points;
  points.reserve(grid.size());
  for (const auto& [det, sim] : grid) {
    EnrichmentThresholds t = base;
    t.det_enrich = det;
    t.sim_min = sim;
    t.unknown_sim_max = std::min(base.unknown_sim_max, sim);
    SweepPoint p;
    p.det = det;
    p.sim = sim;
    std::size_t correct = 0;
    std::set<IdentityLabel> unique;
    for (const ProbeFace& f : faces) {
      if (f.det_conf < t.det_enrich) continue;
      const double s1 = f.base.best_sim;
      if (t.open_set && s1 < t.unknown_sim_max) continue;
      if (s1 < t.sim_min) continue;
      if (f.base.rank_gap < t.rank_diff_min) continue;
      const IdentityLabel& label = *f.base.label;
      ++p.n_decisions;
      unique.insert(label);
      correct += (label == f.truth);
    }
    p.unique_identities = unique.size();
    if (p.n_decisions > 0) {
      p.accuracy = static_cast<double>(correct) / static_cast<double>(p.n_decisions);
    }
    points.push_back(p);
  }

  std::stable_sort(points.begin(), points.end(), [](const SweepPoint& a, const SweepPoint& b) {
    if (a.accuracy.has_value() != b.accuracy.has_value()) return a.accuracy.has_value();
    if (a.accuracy && *a.accuracy != *b.accuracy) return *a.accuracy > *b.accuracy;
    if (a.unique_identities != b.unique_identities) {
      return a.unique_identities > b.unique_identities;
    }
    if (a.det != b.det) return a.det < b.det;
    return a.sim < b.sim;
  });
  return points;
}

void WriteSweepReport(std::ostream& out, std::span<const SweepPoint> points) {
  for (const SweepPoint& p : points) {
    internal::OrderedJson rec;
    rec["det"] = p.det;
    rec["sim"] = p.sim;
    rec["accuracy"] = p.accuracy ? internal::OrderedJson(*p.accuracy)
                                 : internal::OrderedJson(nullptr);
    rec["unique_identities"] = p.unique_identities;
    rec["n_decisions"] = p.n_decisions;
    out << rec.dump() << '\n';
  }
}

}  // namespace ccreid
