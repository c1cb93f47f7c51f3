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

// Command-line front end: synth, validate, enrich, annotate, evaluate, sweep,
// cluster. Exit status 0 on success, 1 on a data or I/O error, 2 on a usage
// error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "ccreid/clustering.h"
#include "ccreid/enrichment.h"
#include "ccreid/error.h"
#include "ccreid/evaluation.h"
#include "ccreid/pipeline.h"
#include "ccreid/sweep.h"
#include "ccreid/synthetic.h"
#include "ccreid/track.h"
#include "json.hpp"

namespace {

using ccreid::RunConfig;
using Json = nlohmann::ordered_json;

constexpr int kUsageError = 2;

// Flags shared by every run-style subcommand. Each overrides the config file
// field of the same meaning when given.
struct RunFlags {
  std::string config;
  std::string gallery, query, reid, face, faces, clothes, out;
  std::optional<double> alpha, fraction, det_enrich, det_inference, sim_min, rank_diff,
      unknown_sim;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> min_track_len, threads;
  std::optional<bool> enrichment, open_set;
  std::string preset, granularity, setting, set_mode;

  void Register(CLI::App* app) {
    app->add_option("--config", config, "JSON run configuration")->check(CLI::ExistingFile);
    app->add_option("--gallery", gallery, "Labeled gallery crop manifest");
    app->add_option("--query", query, "Query crop manifest");
    app->add_option("--reid", reid, "ReID embedding file");
    app->add_option("--face", face, "Face embedding file");
    app->add_option("--faces", faces, "Face observation file");
    app->add_option("--clothes", clothes, "Clothes metadata file");
    app->add_option("--out", out, "Output path");
    app->add_option("--alpha", alpha, "ReID weight in score fusion")->check(CLI::Range(0.0, 1.0));
    app->add_option("--fraction", fraction, "Share of the query pool used for enrichment")
        ->check(CLI::Range(0.0, 1.0));
    app->add_option("--seed", seed, "Random seed");
    app->add_option("--thresholds", preset,
                    "Threshold preset: 42street, ccvid, ltcc, prcc, last");
    app->add_option("--det-enrich", det_enrich, "Detection threshold for enrichment");
    app->add_option("--det-inference", det_inference, "Detection threshold at inference");
    app->add_option("--sim-min", sim_min, "Similarity threshold for enrichment");
    app->add_option("--rank-diff", rank_diff, "Minimum rank-1 / rank-2 similarity gap");
    app->add_option("--unknown-sim", unknown_sim, "Similarity below which a face is Unknown");
    app->add_option("--open-set", open_set, "Open-set labeling and evaluation (true/false)");
    app->add_option("--enrichment", enrichment, "Enrich the gallery (true/false)");
    app->add_option("--granularity", granularity, "track or image")
        ->check(CLI::IsMember({"track", "image"}));
    app->add_option("--setting", setting, "general, sc or cc")
        ->check(CLI::IsMember({"general", "sc", "cc", "same_clothes", "clothes_changing"}));
    app->add_option("--set-mode", set_mode, "open or closed")
        ->check(CLI::IsMember({"open", "closed"}));
    app->add_option("--min-track-len", min_track_len, "Shortest track counted per track");
    app->add_option("--threads", threads, "Worker threads (0 = all cores)");
  }

  RunConfig Build() const {
    RunConfig c;
    if (!config.empty()) c = ccreid::LoadRunConfig(config);
    if (!gallery.empty()) c.gallery_manifest = gallery;
    if (!query.empty()) c.query_manifest = query;
    if (!reid.empty()) c.reid_embeddings = reid;
    if (!face.empty()) c.face_embeddings = face;
    if (!faces.empty()) c.face_observations = faces;
    if (!clothes.empty()) c.clothes_file = clothes;
    if (!out.empty()) c.output_dir = out;
    if (!preset.empty()) {
      const bool open = c.thresholds.open_set;
      c.thresholds = ccreid::EnrichmentThresholds::Preset(preset);
      c.thresholds.open_set = open;
    }
    if (alpha) c.alpha = *alpha;
    if (fraction) c.enrichment_fraction = *fraction;
    if (seed) c.seed = *seed;
    if (det_enrich) c.thresholds.det_enrich = *det_enrich;
    if (det_inference) c.thresholds.det_inference = *det_inference;
    if (sim_min) c.thresholds.sim_min = *sim_min;
    if (rank_diff) c.thresholds.rank_diff_min = *rank_diff;
    if (unknown_sim) c.thresholds.unknown_sim_max = *unknown_sim;
    if (open_set) {
      c.thresholds.open_set = *open_set;
      c.eval.set_mode = *open_set ? ccreid::SetMode::kOpen : ccreid::SetMode::kClosed;
    }
    if (enrichment) c.enrichment = *enrichment;
    if (!granularity.empty()) c.granularity = ccreid::ParseGranularity(granularity);
    if (!setting.empty()) c.eval.clothes_mode = ccreid::ParseClothesMode(setting);
    if (!set_mode.empty()) c.eval.set_mode = ccreid::ParseSetMode(set_mode);
    if (min_track_len) c.eval.min_track_len = *min_track_len;
    if (threads) c.threads = *threads;
    c.thresholds.Validate();
    c.eval.Validate();
    return c;
  }
};

// Writes to `path`, or standard output when it is empty.
template <typename Fn>
void Emit(const std::filesystem::path& path, Fn&& fn) {
  if (path.empty()) {
    fn(std::cout);
    std::cout.flush();
    return;
  }
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ccreid::Error("cannot write " + path.string());
  fn(out);
}

Json MetricsJson(const ccreid::MetricsReport& r) {
  std::ostringstream s;
  ccreid::WriteMetricsReport(s, r);
  return Json::parse(s.str());
}

int RunValidate(const RunFlags& flags, const std::string& manifest_only) {
  if (!manifest_only.empty()) {
    auto m = ccreid::LoadCropManifest(manifest_only);
    auto tracks = ccreid::BuildTracks(m);
    std::cout << manifest_only << ": " << m.size() << " crops, " << tracks.size()
              << " tracks\n";
    return 0;
  }
  RunConfig c = flags.Build();
  ccreid::RunInputs in = ccreid::LoadRunInputs(c);
  auto gallery_tracks = ccreid::BuildTracks(in.gallery);
  auto query_tracks = ccreid::BuildTracks(in.query);
  for (const auto* manifest : {&in.gallery, &in.query}) {
    for (const auto& crop : manifest->records()) {
      if (!crop.invalid && !in.reid.Find(crop.im_name)) {
        throw ccreid::ValidationError("crop '" + crop.im_name + "' has no ReID embedding");
      }
    }
  }
  std::cout << "gallery: " << in.gallery.size() << " crops, " << gallery_tracks.size()
            << " tracks\n"
            << "query: " << in.query.size() << " crops, " << query_tracks.size()
            << " tracks\n"
            << "reid embeddings: " << in.reid.size() << " (dim " << in.reid.dim() << ")\n"
            << "face embeddings: " << in.face.size() << ", face observations: "
            << in.face_obs.num_faces() << "\n";
  return 0;
}

int RunEnrich(const RunFlags& flags) {
  RunConfig c = flags.Build();
  ccreid::RunInputs in = ccreid::LoadRunInputs(c);
  if (in.face_obs.empty()) throw ccreid::ValidationError("enrich needs face data");
  auto labeled = ccreid::LabeledCrops(in.gallery);
  auto pool = ccreid::ValidCrops(in.query);
  auto result = ccreid::EnrichGallery(labeled, pool, in.reid, in.face, in.face_obs,
                                      c.thresholds, c.enrichment_fraction, c.seed);
  const auto dir = c.output_dir.empty() ? std::filesystem::path("enrichment") : c.output_dir;
  std::filesystem::create_directories(dir);
  Emit(dir / "decisions.jsonl",
       [&](std::ostream& o) { ccreid::WriteDecisions(o, result.decisions); });
  Emit(dir / "gallery.jsonl",
       [&](std::ostream& o) { ccreid::WriteGallery(o, result.enriched); });
  std::cerr << "enriched gallery: "
            << result.enriched.CountProvenance(ccreid::Provenance::kOriginalLabeled)
            << " labeled + "
            << result.enriched.CountProvenance(ccreid::Provenance::kEnrichedFromQuery)
            << " from queries\n";
  return 0;
}

int RunAnnotate(const RunFlags& flags) {
  RunConfig c = flags.Build();
  ccreid::RunInputs in = ccreid::LoadRunInputs(c);
  if (in.face_obs.empty()) {
    std::cerr << "note: no face data; running the ReID module alone\n";
  }
  auto predictions = ccreid::Annotate(c, in);
  const auto dir = c.output_dir.empty() ? std::filesystem::path("predictions") : c.output_dir;
  ccreid::WriteAnnotations(predictions, dir);
  std::cerr << "annotated " << predictions.tracks.size() << " tracks into " << dir.string()
            << "\n";
  return 0;
}

int RunEvaluate(const RunFlags& flags, const std::string& predictions_dir) {
  RunConfig c = flags.Build();
  ccreid::RunInputs in = ccreid::LoadRunInputs(c);
  Json out;
  if (!predictions_dir.empty()) {
    auto predictions = ccreid::LoadAnnotations(predictions_dir);
    out = MetricsJson(ccreid::EvaluatePredictions(predictions, in, c.eval));
  } else {
    out = MetricsJson(ccreid::EvaluateRankingRun(c, in, c.eval.clothes_mode));
    if (c.eval.clothes_mode == ccreid::ClothesMode::kGeneral && !c.clothes_file.empty()) {
      auto sc = ccreid::EvaluateRankingRun(c, in, ccreid::ClothesMode::kSameClothes);
      auto cc = ccreid::EvaluateRankingRun(c, in, ccreid::ClothesMode::kClothesChanging);
      out["weighted_sc_cc"] = MetricsJson(ccreid::WeightedGeneral(sc, cc));
    }
  }
  std::cout << out.dump() << '\n';
  return 0;
}

int RunSweep(const RunFlags& flags, const std::string& grid_text) {
  auto grid = ccreid::ParseGrid(grid_text);
  RunConfig c = flags.Build();
  ccreid::RunInputs in = ccreid::LoadRunInputs(c);
  auto gallery = ccreid::LabeledCrops(in.gallery);
  auto probes = ccreid::LabeledCrops(in.query);
  auto points = ccreid::ThresholdSweep(gallery, probes, in.face, in.face_obs, c.thresholds, grid);
  Emit(flags.out, [&](std::ostream& o) { ccreid::WriteSweepReport(o, points); });
  return 0;
}

int RunCluster(const RunFlags& flags, std::size_t k, std::size_t max_iter) {
  RunConfig c = flags.Build();
  if (c.face_embeddings.empty()) throw ccreid::ValidationError("cluster needs --face");
  auto faces = ccreid::LoadEmbeddings(c.face_embeddings, ccreid::Modality::kFace);
  std::vector<double> data;
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < faces.size(); ++i) {
    auto row = faces.row(i);
    data.insert(data.end(), row.begin(), row.end());
    ids.push_back(faces.id(i));
  }
  auto report = ccreid::ClusterFaceFeatures(data, faces.dim(), {k, c.seed, max_iter});
  Emit(flags.out, [&](std::ostream& o) { ccreid::WriteClusterReport(o, report, ids); });
  std::cerr << "k-means: " << report.iterations << " iterations, sse " << report.sse()
            << (report.converged ? "" : " (not converged)") << "\n";
  return 0;
}

ccreid::SyntheticSpec LoadSyntheticSpec(const std::string& path) {
  ccreid::SyntheticSpec s;
  if (path.empty()) return s;
  std::ifstream in(path);
  if (!in) throw ccreid::Error("cannot open " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
    for (const auto& [key, v] : j.items()) {
      if (key == "n_identities") s.n_identities = v.get<std::size_t>();
      else if (key == "n_unknown_identities") s.n_unknown_identities = v.get<std::size_t>();
      else if (key == "n_clothes_per_identity") s.n_clothes_per_identity = v.get<std::size_t>();
      else if (key == "dim") s.dim = v.get<std::size_t>();
      else if (key == "face_noise_sigma") s.face_noise_sigma = v.get<double>();
      else if (key == "reid_noise_sigma") s.reid_noise_sigma = v.get<double>();
      else if (key == "reid_clothes_weight") s.reid_clothes_weight = v.get<double>();
      else if (key == "face_visibility_rate") s.face_visibility_rate = v.get<double>();
      else if (key == "noisy_face_rate") s.noisy_face_rate = v.get<double>();
      else if (key == "noisy_face_sigma") s.noisy_face_sigma = v.get<double>();
      else if (key == "distractor_face_rate") s.distractor_face_rate = v.get<double>();
      else if (key == "max_identity_cosine") s.max_identity_cosine = v.get<double>();
      else if (key == "crops_per_track") s.crops_per_track = v.get<std::size_t>();
      else if (key == "tracks_per_identity") s.tracks_per_identity = v.get<std::size_t>();
      else if (key == "gallery_crops_per_identity") {
        s.gallery_crops_per_identity = v.get<std::size_t>();
      } else if (key == "seed") {
        s.seed = v.get<std::uint64_t>();
      } else {
        throw ccreid::ValidationError(path + ": unknown synthetic key '" + key + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ccreid::ValidationError(path + ": " + e.what());
  }
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Clothes-changing person re-identification engine"};
  app.require_subcommand(1);

  RunFlags flags;
  std::string manifest_only, predictions_dir, grid_text;
  std::size_t k = 0, max_iter = 100;

  auto* synth = app.add_subcommand("synth", "Generate a synthetic dataset");
  std::string synth_config, synth_out;
  ccreid::SyntheticSpec cli_spec;
  std::map<std::string, CLI::Option*> spec_opts;
  synth->add_option("--config", synth_config, "JSON synthetic spec")->check(CLI::ExistingFile);
  synth->add_option("--out", synth_out, "Output directory")->required();
  spec_opts["n_identities"] = synth->add_option("--identities", cli_spec.n_identities);
  spec_opts["n_unknown_identities"] = synth->add_option("--unknown", cli_spec.n_unknown_identities);
  spec_opts["n_clothes_per_identity"] =
      synth->add_option("--clothes-per-identity", cli_spec.n_clothes_per_identity);
  spec_opts["dim"] = synth->add_option("--dim", cli_spec.dim);
  spec_opts["face_noise_sigma"] = synth->add_option("--face-noise", cli_spec.face_noise_sigma);
  spec_opts["reid_noise_sigma"] = synth->add_option("--reid-noise", cli_spec.reid_noise_sigma);
  spec_opts["reid_clothes_weight"] =
      synth->add_option("--clothes-weight", cli_spec.reid_clothes_weight);
  spec_opts["face_visibility_rate"] =
      synth->add_option("--face-visibility", cli_spec.face_visibility_rate);
  spec_opts["noisy_face_rate"] = synth->add_option("--noisy-face-rate", cli_spec.noisy_face_rate);
  spec_opts["noisy_face_sigma"] = synth->add_option("--noisy-face-sigma", cli_spec.noisy_face_sigma);
  spec_opts["distractor_face_rate"] =
      synth->add_option("--distractor-rate", cli_spec.distractor_face_rate);
  spec_opts["max_identity_cosine"] =
      synth->add_option("--max-identity-cosine", cli_spec.max_identity_cosine);
  spec_opts["crops_per_track"] = synth->add_option("--crops-per-track", cli_spec.crops_per_track);
  spec_opts["tracks_per_identity"] =
      synth->add_option("--tracks-per-identity", cli_spec.tracks_per_identity);
  spec_opts["gallery_crops_per_identity"] =
      synth->add_option("--gallery-crops", cli_spec.gallery_crops_per_identity);
  spec_opts["seed"] = synth->add_option("--seed", cli_spec.seed);

  auto* validate = app.add_subcommand("validate", "Load and check every input");
  flags.Register(validate);
  validate->add_option("--manifest", manifest_only, "Check a single crop manifest");

  auto* enrich = app.add_subcommand("enrich", "Build the enriched gallery and decision log");
  flags.Register(enrich);
  auto* annotate = app.add_subcommand("annotate", "Predict an identity for every query track");
  flags.Register(annotate);
  auto* evaluate = app.add_subcommand("evaluate", "Print a metrics report");
  flags.Register(evaluate);
  evaluate->add_option("--predictions", predictions_dir,
                       "Directory written by annotate; without it, rank the ReID gallery");
  auto* sweep = app.add_subcommand("sweep", "Detection / similarity threshold sweep");
  flags.Register(sweep);
  sweep->add_option("--grid", grid_text, "e.g. det=0.5:0.9:0.1,sim=0.3:0.8:0.05")->required();
  auto* cluster = app.add_subcommand("cluster", "K-means over face embeddings");
  flags.Register(cluster);
  cluster->add_option("--k", k, "Number of clusters")->required();
  cluster->add_option("--max-iter", max_iter, "Lloyd iteration cap");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }

  try {
    if (*synth) {
      ccreid::SyntheticSpec spec = LoadSyntheticSpec(synth_config);
      // Flags given on the command line override the spec file.
#define CCREID_OVERRIDE(field) \
  if (spec_opts[#field]->count() > 0) spec.field = cli_spec.field;
      CCREID_OVERRIDE(n_identities)
      CCREID_OVERRIDE(n_unknown_identities)
      CCREID_OVERRIDE(n_clothes_per_identity)
      CCREID_OVERRIDE(dim)
      CCREID_OVERRIDE(face_noise_sigma)
      CCREID_OVERRIDE(reid_noise_sigma)
      CCREID_OVERRIDE(reid_clothes_weight)
      CCREID_OVERRIDE(face_visibility_rate)
      CCREID_OVERRIDE(noisy_face_rate)
      CCREID_OVERRIDE(noisy_face_sigma)
      CCREID_OVERRIDE(distractor_face_rate)
      CCREID_OVERRIDE(max_identity_cosine)
      CCREID_OVERRIDE(crops_per_track)
      CCREID_OVERRIDE(tracks_per_identity)
      CCREID_OVERRIDE(gallery_crops_per_identity)
      CCREID_OVERRIDE(seed)
#undef CCREID_OVERRIDE
      ccreid::WriteSyntheticDataset(ccreid::GenerateSynthetic(spec), synth_out);
      return 0;
    }
    if (*validate) return RunValidate(flags, manifest_only);
    if (*enrich) return RunEnrich(flags);
    if (*annotate) return RunAnnotate(flags);
    if (*evaluate) return RunEvaluate(flags, predictions_dir);
    if (*sweep) return RunSweep(flags, grid_text);
    if (*cluster) return RunCluster(flags, k, max_iter);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kUsageError;
}
