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

// Engine-vs-oracle comparisons shared by the unit and acceptance suites. Each
// returns an empty string on agreement, else a description of the mismatch.

#ifndef CCREID_TESTS_ORACLE_COMPARE_H_
#define CCREID_TESTS_ORACLE_COMPARE_H_

#include <cmath>
#include <sstream>
#include <string>

#include "ccreid/enrichment.h"
#include "ccreid/scoring.h"
#include "oracle/adapter.h"
#include "oracle/reference.h"

namespace oracle {

inline bool Close(double a, double b, double tol) {
  if (std::isnan(a) || std::isnan(b)) return std::isnan(a) && std::isnan(b);
  if (std::isinf(a) || std::isinf(b)) return a == b;
  return std::fabs(a - b) <= tol;
}

inline std::string CompareScores(const char* what,
                                 const std::map<std::string, double>& expected,
                                 const ccreid::ScoreVector& actual, double tol) {
  std::ostringstream err;
  for (const auto& [label, value] : expected) {
    const double got = actual.at(ccreid::IdentityLabel::Parse(label));
    if (!Close(value, got, tol)) {
      err << what << "[" << label << "]: expected " << value << " got " << got << "; ";
    }
  }
  for (const auto& [id, value] : actual.scores) {
    if (!expected.count(id.str())) err << what << " has extra identity " << id.str() << "; ";
  }
  return err.str();
}

inline std::string CheckScoringInstance(std::uint64_t seed, double tol = 1e-9) {
  InstanceGenerator gen(seed);
  RandomInstance inst = gen.Scoring();
  RefPrediction want =
      PredictTrack(inst.track, inst.g_enriched, inst.g_face, inst.alpha, inst.det_inference);

  EngineInputs in = ToEngine({}, inst.track);
  ccreid::Gallery g_reid = ToGallery(inst.g_enriched, ccreid::Modality::kReid);
  ccreid::Gallery g_face = ToGallery(inst.g_face, ccreid::Modality::kFace);
  ccreid::ScoringOptions opts;
  opts.alpha = inst.alpha;
  opts.det_inference = inst.det_inference;
  ccreid::Prediction got =
      ccreid::PredictTrack(ToTrack(in), in.reid, in.face, in.obs, g_reid, g_face, opts);

  std::string err;
  if (got.label.str() != want.label) {
    err += "label: expected " + want.label + " got " + got.label.str() + "; ";
  }
  if (got.n_images != inst.track.size()) err += "n_images mismatch; ";
  if (got.n_faces != want.n_faces) err += "n_faces mismatch; ";
  err += CompareScores("reid", want.reid, got.reid_scores, tol);
  err += CompareScores("face", want.face, got.face_scores, tol);
  err += CompareScores("fused", want.fused, got.fused_scores, tol);
  return err;
}

inline std::string CheckEnrichmentInstance(std::uint64_t seed, double tol = 1e-9) {
  InstanceGenerator gen(seed);
  RefThresholds t{};
  RandomInstance inst = gen.Enrichment(&t);
  RefEnrichment want = Enrich(inst.labeled, inst.track, t);

  EngineInputs in = ToEngine(inst.labeled, inst.track);
  ccreid::EnrichmentThresholds th;
  th.det_enrich = t.det_enrich;
  th.sim_min = t.sim_min;
  th.rank_diff_min = t.rank_diff;
  th.unknown_sim_max = t.unknown_sim;
  th.open_set = t.open_set;
  ccreid::EnrichmentResult got = ccreid::EnrichGallery(
      in.labeled, in.queries, in.reid, in.face, in.obs, th, 1.0, seed);

  std::ostringstream err;
  if (got.face_gallery.size() != want.g_face.size()) {
    err << "|G_face| expected " << want.g_face.size() << " got " << got.face_gallery.size()
        << "; ";
  }
  if (got.enriched.size() != want.g_enriched.size()) {
    err << "|G_enriched| expected " << want.g_enriched.size() << " got "
        << got.enriched.size() << "; ";
  }
  // Per-identity counts of both galleries.
  auto counts = [](const std::vector<RefItem>& items) {
    std::map<std::string, std::size_t> c;
    for (const auto& i : items) ++c[i.label];
    return c;
  };
  for (const auto& [label, n] : counts(want.g_enriched)) {
    const auto* block = got.enriched.Find(ccreid::IdentityLabel::Parse(label));
    if (block == nullptr || block->size() != n) err << "G_enriched[" << label << "] count; ";
  }
  for (const auto& [label, n] : counts(want.g_face)) {
    const auto* block = got.face_gallery.Find(ccreid::IdentityLabel::Parse(label));
    if (block == nullptr || block->size() != n) err << "G_face[" << label << "] count; ";
  }
  if (got.decisions.size() != want.decisions.size()) {
    err << "decision count mismatch; ";
    return err.str();
  }
  for (std::size_t i = 0; i < want.decisions.size(); ++i) {
    const RefDecision& w = want.decisions[i];
    const ccreid::EnrichmentDecision& g = got.decisions[i];
    std::string outcome(g.outcome == ccreid::DecisionOutcome::kSkipped
                            ? ccreid::SkipReasonName(g.reason)
                            : ccreid::OutcomeName(g.outcome));
    if (g.sample_id != w.sample_id || outcome != w.outcome) {
      err << w.sample_id << ": expected " << w.outcome << " got " << outcome << "; ";
    }
    if (w.outcome == "labeled" && (!g.label || g.label->str() != w.label)) {
      err << w.sample_id << ": label mismatch; ";
    }
    if (!Close(w.best_sim, g.best_sim, tol) || !Close(w.rank_gap, g.rank_gap, tol)) {
      err << w.sample_id << ": best_sim/rank_gap mismatch; ";
    }
  }
  return err.str();
}

}  // namespace oracle

#endif  // CCREID_TESTS_ORACLE_COMPARE_H_
