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

#ifndef CCREID_GALLERY_H_
#define CCREID_GALLERY_H_

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ccreid/embeddings.h"
#include "ccreid/identity.h"

namespace ccreid {

enum class Provenance { kOriginalLabeled, kEnrichedFromQuery };

std::string_view ProvenanceName(Provenance p);

// Identity -> unit embeddings of a single modality. Each identity's vectors are
// packed row-major so per-identity max-similarity scans stay contiguous.
class Gallery {
 public:
  struct Block {
    std::vector<double> vectors;
    std::vector<std::string> sample_ids;
    std::vector<Provenance> provenance;

    std::size_t size() const { return sample_ids.size(); }
  };

  explicit Gallery(Modality modality) : modality_(modality) {}

  // `unit_vector` must already be normalized. Throws ValidationError on a
  // dimension mismatch.
  void Add(const IdentityLabel& identity, std::string sample_id,
           std::span<const double> unit_vector, Provenance provenance);

  Modality modality() const { return modality_; }
  std::size_t dim() const { return dim_; }
  // Total number of embeddings over all identities.
  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }

  const std::map<IdentityLabel, Block>& entries() const { return entries_; }
  const Block* Find(const IdentityLabel& identity) const;
  std::span<const double> Row(const Block& block, std::size_t i) const {
    return {block.vectors.data() + i * dim_, dim_};
  }
  std::vector<IdentityLabel> Identities() const;
  std::size_t CountProvenance(Provenance p) const;

 private:
  Modality modality_;
  std::size_t dim_ = 0;
  std::size_t size_ = 0;
  std::map<IdentityLabel, Block> entries_;
};

}  // namespace ccreid

#endif  // CCREID_GALLERY_H_
