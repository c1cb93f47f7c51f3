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

#include "ccreid/evaluation.h"

#include <algorithm>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>

#include "ccreid/error.h"
#include "text_util.h"

namespace ccreid {

ClothesMode ParseClothesMode(std::string_view text) {
  if (text == "general") return ClothesMode::kGeneral;
  if (text == "sc" || text == "same_clothes") return ClothesMode::kSameClothes;
  if (text == "cc" || text == "clothes_changing") return ClothesMode::kClothesChanging;
  throw ValidationError("unknown clothes setting '" + std::string(text) + "'");
}

SetMode ParseSetMode(std::string_view text) {
  if (text == "open") return SetMode::kOpen;
  if (text == "closed") return SetMode::kClosed;
  throw ValidationError("unknown set mode '" + std::string(text) + "'");
}

std::string_view ClothesModeName(ClothesMode m) {
  switch (m) {
    case ClothesMode::kGeneral:
      return "general";
    case ClothesMode::kSameClothes:
      return "same_clothes";
    case ClothesMode::kClothesChanging:
      return "clothes_changing";
  }
  return "";
}

std::string_view SetModeName(SetMode m) {
  return m == SetMode::kOpen ? "open" : "closed";
}

void EvalSetting::Validate() const {
  if (min_track_len < 1) throw ValidationError("min_track_len must be >= 1");
}

std::map<std::string, ClothesRecord, std::less<>> ParseClothesFile(
    std::istream& in, const std::string& source) {
  std::map<std::string, ClothesRecord, std::less<>> out;
  std::string line;
  std::size_t line_no = 0;
  auto optional_string = [](const internal::Json& rec, const char* key)
      -> std::optional<std::string> {
    auto it = rec.find(key);
    if (it == rec.end() || it->is_null()) return std::nullopt;
    if (it->is_string()) return it->get<std::string>();
    return it->dump();
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (internal::IsBlank(line)) continue;
    try {
      auto rec = internal::Json::parse(line);
      std::string id = rec.at("sample_id").get<std::string>();
      ClothesRecord c{optional_string(rec, "clothes_id"),
                      optional_string(rec, "camera_id")};
      if (!out.emplace(id, c).second) {
        throw ParseError(source, line_no, "duplicate sample_id '" + id + "'");
      }
    } catch (const internal::Json::exception& e) {
      throw ParseError(source, line_no, e.what());
    }
  }
  return out;
}

std::map<std::string, ClothesRecord, std::less<>> LoadClothesFile(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open clothes file " + path.string());
  return ParseClothesFile(in, path.string());
}

std::vector<std::size_t> ApplySettingFilter(const SampleMeta& query,
                                            std::span<const SampleMeta> gallery,
                                            ClothesMode mode) {
  std::vector<std::size_t> kept;
  kept.reserve(gallery.size());
  if (mode == ClothesMode::kGeneral) {
    for (std::size_t i = 0; i < gallery.size(); ++i) kept.push_back(i);
    return kept;
  }
  if (!query.clothes_id) {
    throw ValidationError("query '" + query.sample_id + "' has no clothes_id");
  }
  for (std::size_t i = 0; i < gallery.size(); ++i) {
    const SampleMeta& g = gallery[i];
    if (g.identity != query.identity) {
      kept.push_back(i);
      continue;
    }
    if (!g.clothes_id) {
      throw ValidationError("gallery sample '" + g.sample_id + "' has no clothes_id");
    }
    const bool same = *g.clothes_id == *query.clothes_id;
    if (mode == ClothesMode::kSameClothes ? same : !same) kept.push_back(i);
  }
  return kept;
}

double AveragePrecision(const std::vector<bool>& relevance) {
  std::size_t hits = 0;
  double sum = 0;
  for (std::size_t k = 0; k < relevance.size(); ++k) {
    if (!relevance[k]) continue;
    ++hits;
    sum += static_cast<double>(hits) / static_cast<double>(k + 1);
  }
  return hits == 0 ? 0.0 : sum / static_cast<double>(hits);
}

std::optional<RankOutcome> RankMetrics(std::span<const double> query_vec,
                                       const SampleMeta& query_meta,
                                       const RankingGallery& gallery,
                                       ClothesMode mode) {
  if (query_vec.size() != gallery.dim && !gallery.meta.empty()) {
    throw ValidationError("query dim does not match gallery dim");
  }
  std::vector<std::size_t> kept = ApplySettingFilter(query_meta, gallery.meta, mode);
  const bool any_relevant = std::any_of(kept.begin(), kept.end(), [&](std::size_t i) {
    return gallery.meta[i].identity == query_meta.identity;
  });
  if (!any_relevant) return std::nullopt;

  std::vector<std::pair<double, std::size_t>> scored;
  scored.reserve(kept.size());
  for (std::size_t i : kept) {
    double s = 0;
    auto row = gallery.row(i);
    for (std::size_t j = 0; j < gallery.dim; ++j) s += query_vec[j] * row[j];
    scored.emplace_back(std::clamp(s, -1.0, 1.0), i);
  }
  std::stable_sort(scored.begin(), scored.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  std::vector<bool> relevance(scored.size());
  for (std::size_t r = 0; r < scored.size(); ++r) {
    relevance[r] = gallery.meta[scored[r].second].identity == query_meta.identity;
  }
  RankOutcome out;
  out.top1_hit = relevance.front();
  out.average_precision = AveragePrecision(relevance);
  return out;
}

MetricsReport EvaluateRanking(std::span<const SampleMeta> queries,
                              std::span<const double> query_vectors,
                              const RankingGallery& gallery, ClothesMode mode) {
  const std::size_t dim = gallery.dim;
  if (dim == 0 || query_vectors.size() != queries.size() * dim) {
    throw ValidationError("query vectors do not match gallery dim");
  }
  MetricsReport report;
  std::size_t hits = 0;
  double ap_sum = 0;
  for (std::size_t q = 0; q < queries.size(); ++q) {
    auto outcome = RankMetrics(query_vectors.subspan(q * dim, dim), queries[q],
                               gallery, mode);
    if (!outcome) {
      ++report.n_queries_excluded;
      continue;
    }
    ++report.n_queries_evaluated;
    hits += outcome->top1_hit;
    ap_sum += outcome->average_precision;
  }
  if (report.n_queries_evaluated > 0) {
    const auto n = static_cast<double>(report.n_queries_evaluated);
    report.top1 = static_cast<double>(hits) / n;
    report.map = ap_sum / n;
  }
  return report;
}

MetricsReport WeightedGeneral(const MetricsReport& same_clothes,
                              const MetricsReport& clothes_changing) {
  MetricsReport out;
  out.n_queries_evaluated =
      same_clothes.n_queries_evaluated + clothes_changing.n_queries_evaluated;
  out.n_queries_excluded =
      same_clothes.n_queries_excluded + clothes_changing.n_queries_excluded;
  if (out.n_queries_evaluated == 0) return out;
  const auto ws = static_cast<double>(same_clothes.n_queries_evaluated);
  const auto wc = static_cast<double>(clothes_changing.n_queries_evaluated);
  const double total = ws + wc;
  out.top1 = (ws * same_clothes.top1 + wc * clothes_changing.top1) / total;
  if (same_clothes.map || clothes_changing.map) {
    out.map = (ws * same_clothes.map.value_or(0) + wc * clothes_changing.map.value_or(0)) /
              total;
  }
  return out;
}

std::optional<IdentityLabel> ExpectedLabel(const IdentityLabel& truth,
                                           const std::set<IdentityLabel>& gallery_ids,
                                           SetMode mode) {
  const bool in_gallery = !truth.is_unknown() && gallery_ids.contains(truth);
  if (in_gallery) return truth;
  if (mode == SetMode::kClosed) return std::nullopt;
  return IdentityLabel::Unknown();
}

AccuracyResult PerImageAccuracy(
    const std::map<std::string, IdentityLabel, std::less<>>& predictions,
    const std::map<std::string, IdentityLabel, std::less<>>& ground_truth,
    const std::set<IdentityLabel>& gallery_ids, SetMode mode) {
  for (const auto& [id, label] : predictions) {
    if (!ground_truth.contains(id)) {
      throw ValidationError("prediction for unknown sample '" + id + "'");
    }
  }
  AccuracyResult result;
  for (const auto& [id, truth] : ground_truth) {
    auto expected = ExpectedLabel(truth, gallery_ids, mode);
    if (!expected) {
      ++result.excluded;
      continue;
    }
    auto it = predictions.find(id);
    if (it == predictions.end()) {
      throw ValidationError("no prediction for sample '" + id + "'");
    }
    ++result.evaluated;
    result.correct += (it->second == *expected);
  }
  return result;
}

AccuracyResult PerTrackAccuracy(std::span<const TrackOutcome> tracks,
                                const std::set<IdentityLabel>& gallery_ids,
                                const EvalSetting& setting) {
  AccuracyResult result;
  for (const TrackOutcome& t : tracks) {
    if (t.n_crops < setting.min_track_len || !t.truth) {
      ++result.excluded;
      continue;
    }
    auto expected = ExpectedLabel(*t.truth, gallery_ids, setting.set_mode);
    if (!expected) {
      ++result.excluded;
      continue;
    }
    ++result.evaluated;
    result.correct += (t.predicted == *expected);
  }
  return result;
}

IdentityLabel ImageModelTrackVote(std::span<const ScoreVector> per_image) {
  if (per_image.empty()) throw ValidationError("track vote over no images");
  const IdentityLabel* best = nullptr;
  double best_score = 0;
  for (const ScoreVector& v : per_image) {
    for (const auto& [id, s] : v.scores) {
      if (best == nullptr || s > best_score || (s == best_score && id < *best)) {
        best = &id;
        best_score = s;
      }
    }
  }
  if (best == nullptr) throw ValidationError("track vote over empty score vectors");
  return *best;
}

void WriteMetricsReport(std::ostream& out, const MetricsReport& report) {
  auto opt = [](const std::optional<double>& v) -> internal::OrderedJson {
    if (!v) return nullptr;
    return *v;
  };
  internal::OrderedJson rec;
  rec["top1"] = report.top1;
  rec["map"] = opt(report.map);
  rec["per_image_acc"] = opt(report.per_image_acc);
  rec["per_track_acc"] = opt(report.per_track_acc);
  rec["n_queries_evaluated"] = report.n_queries_evaluated;
  rec["n_queries_excluded"] = report.n_queries_excluded;
  out << rec.dump() << '\n';
}

}  // namespace ccreid
