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

#ifndef CCREID_SWEEP_H_
#define CCREID_SWEEP_H_

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "ccreid/embeddings.h"
#include "ccreid/enrichment.h"
#include "ccreid/face_observation.h"
#include "ccreid/manifest.h"

namespace ccreid {

struct SweepPoint {
  double det = 0;
  double sim = 0;
  // Share of labeled decisions that match the withheld label; empty when no
  // probe was labeled.
  std::optional<double> accuracy;
  std::size_t unique_identities = 0;
  std::size_t n_decisions = 0;
};

using ThresholdGrid = std::vector<std::pair<double, double>>;

// Parses "det=a:b:step,sim=c:d:step" (ends inclusive) into the cartesian
// product of detection and similarity values. A bare value "det=0.8" is a
// one-point axis. Throws ValidationError on malformed text or an empty grid.
ThresholdGrid ParseGrid(std::string_view text);

// Evaluates each (det, sim) pair: G_face is built once from `gallery` at
// base.det_enrich, then every probe crop is decided with det_enrich = det and
// sim_min = sim (other fields from `base`) with its label withheld. Sorted by
// accuracy descending (empty last), then unique identities descending, then
// det and sim ascending. Throws ValidationError on an empty grid.
std::vector<SweepPoint> ThresholdSweep(std::span<const CropRecord> gallery,
                                       std::span<const CropRecord> probes,
                                       const EmbeddingSet& face_embeddings,
                                       const FaceObservationSet& face_obs,
                                       const EnrichmentThresholds& base,
                                       const ThresholdGrid& grid);

// Line-delimited {det, sim, accuracy|null, unique_identities, n_decisions}.
void WriteSweepReport(std::ostream& out, std::span<const SweepPoint> points);

}  // namespace ccreid

#endif  // CCREID_SWEEP_H_
