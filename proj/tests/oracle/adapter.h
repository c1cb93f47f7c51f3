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

// Converts oracle instances into engine inputs.

#ifndef CCREID_TESTS_ORACLE_ADAPTER_H_
#define CCREID_TESTS_ORACLE_ADAPTER_H_

#include <string>
#include <vector>

#include "ccreid/embeddings.h"
#include "ccreid/face_observation.h"
#include "ccreid/gallery.h"
#include "ccreid/identity.h"
#include "ccreid/manifest.h"
#include "ccreid/track.h"
#include "oracle/reference.h"

namespace oracle {

struct EngineInputs {
  ccreid::EmbeddingSet reid{ccreid::Modality::kReid};
  ccreid::EmbeddingSet face{ccreid::Modality::kFace};
  ccreid::FaceObservationSet obs;
  std::vector<ccreid::CropRecord> labeled;
  std::vector<ccreid::CropRecord> queries;
};

inline ccreid::CropRecord ToRecord(const RefCrop& c, std::int64_t crop_id) {
  ccreid::CropRecord r;
  if (c.label) r.label = ccreid::IdentityLabel::Parse(*c.label);
  r.im_name = c.name;
  r.frame_num = crop_id;
  r.x2 = 64;
  r.y2 = 128;
  r.conf = 0.9;
  r.vid_name = "v";
  r.track_id = 1;
  r.crop_id = crop_id;
  return r;
}

inline void AddCrop(const RefCrop& c, EngineInputs* in) {
  in->reid.Add(c.name, c.reid);
  for (std::size_t i = 0; i < c.faces.size(); ++i) {
    const RefFace& f = c.faces[i];
    ccreid::FaceObservation o;
    o.sample_id = c.name;
    o.box = {f.box[0], f.box[1], f.box[2], f.box[3]};
    o.det_conf = f.det;
    o.face_index = i;
    if (c.has_keypoints) {
      o.left_eye = ccreid::Point{c.keypoints[0], c.keypoints[1]};
      o.right_eye = ccreid::Point{c.keypoints[2], c.keypoints[3]};
      o.nose = ccreid::Point{c.keypoints[4], c.keypoints[5]};
    }
    in->obs.Add(o);
    if (f.embedding) in->face.Add(ccreid::FaceEmbeddingKey(c.name, i), *f.embedding);
  }
}

inline EngineInputs ToEngine(const std::vector<RefCrop>& labeled,
                             const std::vector<RefCrop>& queries) {
  EngineInputs in;
  std::int64_t id = 0;
  for (const RefCrop& c : labeled) {
    AddCrop(c, &in);
    in.labeled.push_back(ToRecord(c, id++));
  }
  for (const RefCrop& c : queries) {
    AddCrop(c, &in);
    in.queries.push_back(ToRecord(c, id++));
  }
  return in;
}

inline ccreid::Gallery ToGallery(const std::vector<RefItem>& items, ccreid::Modality m) {
  ccreid::Gallery g(m);
  for (std::size_t i = 0; i < items.size(); ++i) {
    g.Add(ccreid::IdentityLabel::Parse(items[i].label), "g" + std::to_string(i),
          ccreid::Normalized(items[i].vec), ccreid::Provenance::kOriginalLabeled);
  }
  return g;
}

inline ccreid::Track ToTrack(const EngineInputs& in) {
  ccreid::Track t;
  t.vid_name = "v";
  t.track_id = 1;
  t.crops = in.queries;
  return t;
}

}  // namespace oracle

#endif  // CCREID_TESTS_ORACLE_ADAPTER_H_
