/**
 * Copyright 2026 The pvqa Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <fmt/format.h>

#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "pvqa/commands.h"
#include "pvqa/eval_harness.h"
#include "pvqa/inference_client.h"

namespace {

using namespace pvqa;

struct GenerationFlags {
  int max_scenes = 4;
  int max_frames = 5;
  std::string mix = "R1";
  int resolution = 336;
  bool lossless = false;
  AffineBounds bounds;

  void Add(CLI::App* cmd) {
    cmd->add_option("-S,--max-scenes", max_scenes, "Maximum scenes per video")
        ->capture_default_str();
    cmd->add_option("-F,--max-frames", max_frames, "Maximum frames per scene")
        ->capture_default_str();
    cmd->add_option("--mix", mix, "Question mix, e.g. R1:2,R3:1")
        ->capture_default_str();
    cmd->add_option("--resolution", resolution, "Square frame side in pixels")
        ->capture_default_str();
    cmd->add_flag("--lossless", lossless, "Write PNG frames instead of JPEG");
    cmd->add_option("--rotation-step", bounds.rotation_step_deg)
        ->capture_default_str();
    cmd->add_option("--rotation-clamp", bounds.rotation_clamp_deg)
        ->capture_default_str();
    cmd->add_option("--scale-step", bounds.scale_step)->capture_default_str();
    cmd->add_option("--scale-min", bounds.scale_min)->capture_default_str();
    cmd->add_option("--scale-max", bounds.scale_max)->capture_default_str();
    cmd->add_option("--translation-step", bounds.translation_step_frac)
        ->capture_default_str();
    cmd->add_option("--translation-clamp", bounds.translation_clamp_frac)
        ->capture_default_str();
  }

  GenerationConfig ToConfig(uint64_t seed) const {
    GenerationConfig config;
    config.max_scenes = max_scenes;
    config.max_frames_per_scene = max_frames;
    config.output_resolution = resolution;
    config.lossless_frames = lossless;
    config.affine_bounds = bounds;
    config.master_seed = seed;
    config.question_mix = ParseQuestionMix(mix);
    return config;
  }
};

void AddCorpusFlags(CLI::App* cmd, CorpusSource& source) {
  cmd->add_option("--coco", source.coco_annotations,
                  "COCO captions annotation file");
  cmd->add_option("--corpus-manifest", source.generic_manifest,
                  "Line-delimited {id, image, caption} corpus");
  cmd->add_option("--images", source.image_root, "Image root directory");
}

void WriteText(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) {
    throw Error(ErrorCode::kIo, fmt::format("cannot write {}", path.string()));
  }
}

// Applies a flat config file as option defaults; explicit flags still win.
// Keys naming no option at all are rejected.
void ApplyConfig(CLI::App& app, const std::map<std::string, std::string>& values) {
  for (const auto& [key, value] : values) {
    if (key == "config") continue;
    bool matched = false;
    auto apply = [&](CLI::App* cmd) {
      if (CLI::Option* opt = cmd->get_option_no_throw("--" + key)) {
        opt->run_callback_for_default()->default_val(value);
        matched = true;
      }
    };
    apply(&app);
    for (CLI::App* sub : app.get_subcommands({})) apply(sub);
    if (!matched) {
      throw CLI::ValidationError("--config", "unknown key '" + key + "'");
    }
  }
}

std::string FindConfigArg(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    std::string_view arg = argv[i];
    if (arg == "--config" && i + 1 < argc) return argv[i + 1];
    if (arg.starts_with("--config=")) return std::string(arg.substr(9));
  }
  return {};
}

int Run(int argc, char** argv) {
  CLI::App app{"Pseudo-video MCQA dataset generator and temporal benchmark scorer"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  uint64_t seed = 0;
  std::filesystem::path out;
  int jobs = 1;
  app.add_option("--config", config_path, "Flat key = value config file");
  app.add_option("--seed", seed, "Master seed")->capture_default_str();
  app.add_option("--out", out, "Output directory (generate) or file");
  app.add_option("--jobs", jobs, "Worker threads")->capture_default_str()
      ->check(CLI::PositiveNumber);

  // generate
  CLI::App* generate = app.add_subcommand("generate", "Generate a pseudo-video MCQA dataset");
  CorpusSource gen_corpus;
  GenerationFlags gen_flags;
  uint64_t n_items = 1;
  bool spec_only = false;
  AddCorpusFlags(generate, gen_corpus);
  gen_flags.Add(generate);
  generate->add_option("-n,--n", n_items, "Number of items N")->capture_default_str();
  generate->add_flag("--spec-only", spec_only,
                     "Write video specs instead of rendering frames");

  // verify
  CLI::App* verify = app.add_subcommand("verify", "Re-derive every answer with the oracle");
  CorpusSource verify_corpus;
  GenerationFlags verify_flags;
  std::filesystem::path verify_manifest;
  AddCorpusFlags(verify, verify_corpus);
  verify_flags.Add(verify);
  verify->add_option("--manifest", verify_manifest)->required();

  // stats
  CLI::App* stats = app.add_subcommand("stats", "Dataset statistics");
  std::filesystem::path stats_manifest, stats_csv;
  stats->add_option("--manifest", stats_manifest)->required();
  stats->add_option("--csv", stats_csv, "Also write statistics as CSV");

  // shuffle
  CLI::App* shuffle = app.add_subcommand("shuffle", "Shuffled-frame variant of a manifest");
  std::filesystem::path shuffle_manifest;
  shuffle->add_option("--manifest", shuffle_manifest)->required();

  // infer
  CLI::App* infer = app.add_subcommand("infer", "Query an inference endpoint");
  std::filesystem::path infer_manifest;
  EndpointConfig endpoint;
  infer->add_option("--manifest", infer_manifest)->required();
  infer->add_option("--url", endpoint.url, "POST route of the endpoint")->required();
  infer->add_option("--token-env", endpoint.token_env,
                    "Environment variable holding the bearer token");
  infer->add_option("--max-in-flight", endpoint.max_in_flight)
      ->capture_default_str()->check(CLI::PositiveNumber);
  infer->add_option("--timeout-ms", endpoint.timeout_ms)->capture_default_str();
  infer->add_option("--retries", endpoint.max_retries)->capture_default_str();
  infer->add_option("--backoff-ms", endpoint.backoff_initial_ms)->capture_default_str();
  infer->add_flag("--inline-images", endpoint.inline_images);
  infer->add_option("--frame-root", endpoint.frame_root);

  // score / report
  CLI::App* score = app.add_subcommand("score", "Score predictions against a manifest");
  std::filesystem::path score_manifest, score_predictions, score_csv;
  std::string score_label = "Model";
  score->add_option("--manifest", score_manifest)->required();
  score->add_option("--predictions", score_predictions)->required();
  score->add_option("--csv", score_csv);
  score->add_option("--label", score_label)->capture_default_str();

  CLI::App* report = app.add_subcommand("report", "Chance-level (and optional score) table");
  std::filesystem::path report_manifest, report_predictions, report_csv;
  std::string report_label = "Model";
  report->add_option("--manifest", report_manifest)->required();
  report->add_option("--predictions", report_predictions);
  report->add_option("--csv", report_csv);
  report->add_option("--label", report_label)->capture_default_str();

  try {
    std::string pre_config = FindConfigArg(argc, argv);
    if (!pre_config.empty()) ApplyConfig(app, ReadFlatConfig(pre_config));
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (*generate) {
      if (out.empty()) throw CLI::RequiredError("--out");
      GenerateOptions options;
      options.corpus = gen_corpus;
      options.config = gen_flags.ToConfig(seed);
      options.n_items = n_items;
      options.out_dir = out;
      options.spec_only = spec_only;
      options.jobs = jobs;
      Corpus corpus = LoadCorpus(gen_corpus);
      RunGenerate(options, corpus);
      std::cout << fmt::format("wrote {} items to {}\n", n_items,
                               (out / kManifestFile).string());
      return kExitOk;
    }
    if (*verify) {
      GenerationConfig config = verify_flags.ToConfig(seed);
      Corpus corpus = LoadCorpus(verify_corpus);
      std::vector<ManifestRecord> records = ReadManifest(verify_manifest);
      VerifyReport result = RunVerify(records, corpus, config);
      if (!result.unknown_sources.empty()) {
        std::cerr << fmt::format("corpus mismatch: {} unknown source id(s)\n",
                                 result.unknown_sources.size());
        for (const std::string& s : result.unknown_sources) {
          std::cerr << "  " << s << '\n';
        }
        return kExitValidation;
      }
      for (const std::string& v : result.violations) std::cout << v << '\n';
      std::cout << fmt::format("checked {} items, {} violations\n",
                               result.n_items, result.violations.size());
      return result.violations.empty() ? kExitOk : kExitValidation;
    }
    if (*stats) {
      DatasetStats s = ComputeDatasetStats(ReadManifest(stats_manifest));
      std::cout << s.ToText();
      if (!stats_csv.empty()) WriteText(stats_csv, s.ToCsv());
      return kExitOk;
    }
    if (*shuffle) {
      if (out.empty()) throw CLI::RequiredError("--out");
      WriteManifest(MakeShuffledVariant(ReadManifest(shuffle_manifest), seed), out);
      return kExitOk;
    }
    if (*infer) {
      if (out.empty()) throw CLI::RequiredError("--out");
      InferResult result = InferRemote(ReadManifest(infer_manifest), endpoint);
      WritePredictions(result.predictions, out);
      std::cout << fmt::format("{} predictions, {} failed\n",
                               result.predictions.size(), result.n_failed);
      if (result.aborted) {
        std::cerr << "aborted: more than half of the requests failed; partial "
                     "predictions saved\n";
        return kExitIo;
      }
      return kExitOk;
    }
    if (*score || *report) {
      bool scoring = score->parsed();
      std::vector<ManifestRecord> records =
          ReadManifest(scoring ? score_manifest : report_manifest);
      std::filesystem::path predictions_path =
          scoring ? score_predictions : report_predictions;
      ScoreReport result;
      if (predictions_path.empty()) {
        result = ChanceReport(records);
      } else {
        result = Score(records, ReadPredictions(predictions_path));
      }
      for (const std::string& w : result.warnings) {
        std::cerr << "warning: " << w << '\n';
      }
      ReportTable table = RenderReport(result, scoring ? score_label : report_label,
                                       !predictions_path.empty());
      std::cout << table.text;
      if (!predictions_path.empty()) {
        std::cout << fmt::format("items {}  correct {}  unparseable {}  missing {}\n",
                                 result.n_items, result.n_correct,
                                 result.n_unparseable, result.n_missing);
      }
      std::filesystem::path csv = scoring ? score_csv : report_csv;
      if (!csv.empty()) WriteText(csv, table.csv);
      return kExitOk;
    }
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  } catch (const Error& e) {
    std::cerr << ErrorCodeName(e.code()) << ": " << e.what() << '\n';
    return ExitCodeFor(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  }
  return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) { return Run(argc, argv); }
