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

#include "ccreid/clustering.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <random>

#include "ccreid/error.h"
#include "text_util.h"

namespace ccreid {
namespace {

double SquaredDistance(const double* a, const double* b, std::size_t dim) {
  double s = 0;
  for (std::size_t i = 0; i < dim; ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

// Nearest centroid, ties to the lowest cluster id.
std::size_t Nearest(const double* point, const std::vector<double>& centroids,
                    std::size_t k, std::size_t dim, double* dist_out) {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < k; ++c) {
    const double d = SquaredDistance(point, centroids.data() + c * dim, dim);
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  *dist_out = best_d;
  return best;
}

}  // namespace

ClusterReport ClusterFaceFeatures(std::span<const double> vectors,
                                  std::size_t dim, const ClusterOptions& options) {
  if (dim == 0 || vectors.size() % dim != 0) {
    throw ValidationError("vector data does not match dim");
  }
  const std::size_t n = vectors.size() / dim;
  const std::size_t k = options.k;
  if (k == 0) throw ValidationError("k must be positive");
  if (k > n) {
    throw ValidationError("k = " + std::to_string(k) + " exceeds " +
                          std::to_string(n) + " vectors");
  }
  const double* data = vectors.data();

  // Seeding.
  std::vector<std::size_t> seeds;
  seeds.reserve(k);
  std::vector<bool> chosen(n, false);
  std::mt19937_64 rng(options.seed);
  seeds.push_back(std::uniform_int_distribution<std::size_t>(0, n - 1)(rng));
  chosen[seeds[0]] = true;
  std::vector<double> nearest_d(n, std::numeric_limits<double>::infinity());
  while (seeds.size() < k) {
    const double* last = data + seeds.back() * dim;
    std::size_t far = n;
    double far_d = -1;
    for (std::size_t i = 0; i < n; ++i) {
      nearest_d[i] = std::min(nearest_d[i], SquaredDistance(data + i * dim, last, dim));
      if (!chosen[i] && nearest_d[i] > far_d) {
        far_d = nearest_d[i];
        far = i;
      }
    }
    seeds.push_back(far);
    chosen[far] = true;
  }

  ClusterReport report;
  report.dim = dim;
  report.centroids.resize(k * dim);
  for (std::size_t c = 0; c < k; ++c) {
    std::copy_n(data + seeds[c] * dim, dim, report.centroids.begin() + c * dim);
  }

  report.assignment.assign(n, 0);
  auto assign = [&](bool* changed) {
    double sse = 0;
    for (std::size_t i = 0; i < n; ++i) {
      double d = 0;
      const std::size_t c = Nearest(data + i * dim, report.centroids, k, dim, &d);
      if (c != report.assignment[i]) *changed = true;
      report.assignment[i] = c;
      sse += d;
    }
    return sse;
  };
  bool changed = false;
  report.sse_history.push_back(assign(&changed));

  std::vector<std::size_t> counts(k);
  while (report.iterations < options.max_iterations) {
    // Update step; empty clusters keep their centroid.
    std::vector<double> sums(k * dim, 0.0);
    std::fill(counts.begin(), counts.end(), 0);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t c = report.assignment[i];
      ++counts[c];
      for (std::size_t j = 0; j < dim; ++j) sums[c * dim + j] += data[i * dim + j];
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] == 0) continue;
      for (std::size_t j = 0; j < dim; ++j) {
        report.centroids[c * dim + j] = sums[c * dim + j] / static_cast<double>(counts[c]);
      }
    }
    changed = false;
    report.sse_history.push_back(assign(&changed));
    ++report.iterations;
    if (!changed) {
      report.converged = true;
      break;
    }
  }

  report.members.assign(k, {});
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t c = report.assignment[i];
    const double d = std::sqrt(
        SquaredDistance(data + i * dim, report.centroids.data() + c * dim, dim));
    report.members[c].push_back({i, d});
  }
  for (auto& m : report.members) {
    std::stable_sort(m.begin(), m.end(), [](const ClusterMember& a, const ClusterMember& b) {
      return a.distance < b.distance;
    });
  }
  return report;
}

void WriteClusterReport(std::ostream& out, const ClusterReport& report,
                        const std::vector<std::string>& sample_ids) {
  for (std::size_t c = 0; c < report.members.size(); ++c) {
    for (const ClusterMember& m : report.members[c]) {
      internal::OrderedJson rec;
      rec["cluster_id"] = c;
      rec["sample_id"] = m.index < sample_ids.size() ? sample_ids[m.index]
                                                     : std::to_string(m.index);
      rec["distance"] = m.distance;
      out << rec.dump() << '\n';
    }
  }
}

}  // namespace ccreid
