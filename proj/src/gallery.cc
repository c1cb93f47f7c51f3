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

#include "ccreid/gallery.h"

#include "ccreid/error.h"

namespace ccreid {

std::string_view ProvenanceName(Provenance p) {
  return p == Provenance::kOriginalLabeled ? "original_labeled"
                                           : "enriched_from_query";
}

void Gallery::Add(const IdentityLabel& identity, std::string sample_id,
                  std::span<const double> unit_vector, Provenance provenance) {
  if (unit_vector.empty()) throw ValidationError("empty gallery vector");
  if (dim_ == 0) {
    dim_ = unit_vector.size();
  } else if (unit_vector.size() != dim_) {
    throw ValidationError("gallery dimension mismatch for '" + sample_id + "'");
  }
  Block& block = entries_[identity];
  block.vectors.insert(block.vectors.end(), unit_vector.begin(), unit_vector.end());
  block.sample_ids.push_back(std::move(sample_id));
  block.provenance.push_back(provenance);
  ++size_;
}

const Gallery::Block* Gallery::Find(const IdentityLabel& identity) const {
  auto it = entries_.find(identity);
  return it == entries_.end() ? nullptr : &it->second;
}

std::vector<IdentityLabel> Gallery::Identities() const {
  std::vector<IdentityLabel> out;
  out.reserve(entries_.size());
  for (const auto& [id, block] : entries_) out.push_back(id);
  return out;
}

std::size_t Gallery::CountProvenance(Provenance p) const {
  std::size_t n = 0;
  for (const auto& [id, block] : entries_) {
    for (Provenance q : block.provenance) n += (q == p);
  }
  return n;
}

}  // namespace ccreid
