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

#include "pvqa/commands.h"

#include <fmt/format.h>

#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <mutex>
#include <thread>

#include "pvqa/question_engine.h"

namespace pvqa {

namespace {

constexpr uint64_t kKindStream = 1;
constexpr uint64_t kQuestionStream = 2;
constexpr size_t kChunkSize = 4096;

std::string_view TrimView(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

// Runs body(i) for i in [begin, end) on `jobs` threads. The exception of the
// lowest failing index is rethrown, so failures are reported identically for
// any thread count.
template <typename Body>
void ParallelFor(size_t begin, size_t end, int jobs, Body body) {
  size_t n_threads = std::min<size_t>(std::max(jobs, 1), end - begin);
  if (n_threads <= 1) {
    for (size_t i = begin; i < end; ++i) body(i);
    return;
  }
  std::atomic<size_t> next{begin};
  std::mutex mu;
  size_t failed_index = end;
  std::exception_ptr failure;
  auto worker = [&] {
    for (size_t i = next++; i < end; i = next++) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (i < failed_index) {
          failed_index = i;
          failure = std::current_exception();
        }
      }
    }
  };
  std::vector<std::thread> threads;
  for (size_t t = 0; t < n_threads; ++t) threads.emplace_back(worker);
  for (std::thread& t : threads) t.join();
  if (failure) std::rethrow_exception(failure);
}

void WriteGenerationConfig(const GenerateOptions& options,
                           const std::filesystem::path& path) {
  const GenerationConfig& c = options.config;
  const AffineBounds& b = c.affine_bounds;
  std::string text = "# pvqa generation settings; reusable with --config\n";
  text += fmt::format("seed = {}\n", c.master_seed);
  text += fmt::format("max-scenes = {}\n", c.max_scenes);
  text += fmt::format("max-frames = {}\n", c.max_frames_per_scene);
  text += fmt::format("mix = {}\n", FormatQuestionMix(c.question_mix));
  text += fmt::format("n = {}\n", options.n_items);
  text += fmt::format("resolution = {}\n", c.output_resolution);
  text += fmt::format("lossless = {}\n", c.lossless_frames);
  text += fmt::format("spec-only = {}\n", options.spec_only);
  text += fmt::format("rotation-step = {}\n", b.rotation_step_deg);
  text += fmt::format("rotation-clamp = {}\n", b.rotation_clamp_deg);
  text += fmt::format("scale-step = {}\n", b.scale_step);
  text += fmt::format("scale-min = {}\n", b.scale_min);
  text += fmt::format("scale-max = {}\n", b.scale_max);
  text += fmt::format("translation-step = {}\n", b.translation_step_frac);
  text += fmt::format("translation-clamp = {}\n", b.translation_clamp_frac);
  auto absolute = [](const std::filesystem::path& p) {
    return std::filesystem::absolute(p).lexically_normal().string();
  };
  if (!options.corpus.coco_annotations.empty()) {
    text += fmt::format("coco = {}\n", absolute(options.corpus.coco_annotations));
  }
  if (!options.corpus.generic_manifest.empty()) {
    text += fmt::format("corpus-manifest = {}\n",
                        absolute(options.corpus.generic_manifest));
  }
  if (!options.corpus.image_root.empty()) {
    text += fmt::format("images = {}\n", absolute(options.corpus.image_root));
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) {
    throw Error(ErrorCode::kIo, fmt::format("cannot write {}", path.string()));
  }
}

}  // namespace

int ExitCodeFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kIo:
    case ErrorCode::kRender:
    case ErrorCode::kEndpoint:
      return kExitIo;
    default:
      return kExitValidation;
  }
}

Corpus LoadCorpus(const CorpusSource& source) {
  bool coco = !source.coco_annotations.empty();
  bool generic = !source.generic_manifest.empty();
  if (coco == generic) {
    throw Error(ErrorCode::kInput,
                "exactly one of a COCO annotation file or a corpus manifest "
                "is required");
  }
  return coco ? LoadCocoCaptions(source.coco_annotations, source.image_root)
              : LoadGeneric(source.generic_manifest, source.image_root);
}

std::vector<std::pair<QuestionKind, double>> ParseQuestionMix(
    std::string_view text) {
  std::vector<std::pair<QuestionKind, double>> mix;
  while (!text.empty()) {
    size_t comma = text.find(',');
    std::string_view entry = TrimView(text.substr(0, comma));
    text = comma == std::string_view::npos ? std::string_view()
                                           : text.substr(comma + 1);
    if (entry.empty()) continue;
    size_t colon = entry.find(':');
    std::string_view name = TrimView(entry.substr(0, colon));
    std::optional<QuestionKind> kind = ParseQuestionKind(name);
    if (!kind) {
      throw Error(ErrorCode::kInput,
                  fmt::format("unknown question kind '{}'", name));
    }
    double weight = 1.0;
    if (colon != std::string_view::npos) {
      std::string value(TrimView(entry.substr(colon + 1)));
      try {
        size_t used = 0;
        weight = std::stod(value, &used);
        if (used != value.size() || !std::isfinite(weight) || weight < 0) {
          throw std::invalid_argument(value);
        }
      } catch (const std::exception&) {
        throw Error(ErrorCode::kInput,
                    fmt::format("bad weight '{}' for {}", value, name));
      }
    }
    for (const auto& [existing, w] : mix) {
      if (existing == *kind) {
        throw Error(ErrorCode::kInput,
                    fmt::format("{} listed twice in the question mix", name));
      }
    }
    mix.emplace_back(*kind, weight);
  }
  if (mix.empty()) throw Error(ErrorCode::kInput, "empty question mix");
  return mix;
}

std::string FormatQuestionMix(
    const std::vector<std::pair<QuestionKind, double>>& mix) {
  std::vector<std::string> parts;
  for (const auto& [kind, weight] : mix) {
    parts.push_back(fmt::format("{}:{}", QuestionKindName(kind), weight));
  }
  return fmt::format("{}", fmt::join(parts, ","));
}

std::map<std::string, std::string> ReadFlatConfig(
    const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kIo, fmt::format("cannot open config {}", path.string()));
  }
  std::map<std::string, std::string> values;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = TrimView(line);
    if (view.empty() || view.front() == '#') continue;
    size_t eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::kParse,
                  fmt::format("{}: line {}: expected key = value",
                              path.string(), line_no));
    }
    std::string key(TrimView(view.substr(0, eq)));
    std::string value(TrimView(view.substr(eq + 1)));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
      value = value.substr(1, value.size() - 2);
    }
    if (key.empty()) {
      throw Error(ErrorCode::kParse,
                  fmt::format("{}: line {}: empty key", path.string(), line_no));
    }
    values[key] = value;
  }
  return values;
}

GeneratedItem GenerateItem(const GenerationConfig& config,
                           const Corpus& corpus, uint64_t index) {
  uint64_t item_seed = DeriveSeed(config.master_seed, index);
  std::vector<double> weights;
  for (const auto& [kind, weight] : config.question_mix) weights.push_back(weight);
  Rng kind_rng(DeriveSeed(item_seed, kKindStream));
  QuestionKind kind = config.question_mix[kind_rng.WeightedIndex(weights)].first;

  GeneratedItem out;
  out.spec = SampleStructureFromSeed(config, kind, corpus, item_seed,
                                     VideoId(index));
  Rng question_rng(DeriveSeed(item_seed, kQuestionStream));
  MCQItem item = MakeQuestion(out.spec, kind, question_rng);
  item.frames = FramePaths(out.spec, config.lossless_frames);
  out.record = ToRecord(item, out.spec);
  return out;
}

void RunGenerate(const GenerateOptions& options, const Corpus& corpus) {
  options.config.Validate();
  if (options.n_items < 1) {
    throw Error(ErrorCode::kValidation, "dataset size N must be >= 1");
  }
  std::error_code ec;
  std::filesystem::create_directories(options.out_dir, ec);
  if (ec) {
    throw Error(ErrorCode::kIo, fmt::format("cannot create {}: {}",
                                            options.out_dir.string(),
                                            ec.message()));
  }
  WriteGenerationConfig(options, options.out_dir / kGenerationConfigFile);

  std::filesystem::path manifest_path = options.out_dir / kManifestFile;
  std::ofstream manifest(manifest_path, std::ios::binary | std::ios::trunc);
  std::ofstream specs;
  if (options.spec_only) {
    specs.open(options.out_dir / kSpecsFile, std::ios::binary | std::ios::trunc);
  }
  if (!manifest || (options.spec_only && !specs)) {
    throw Error(ErrorCode::kIo,
                fmt::format("cannot write into {}", options.out_dir.string()));
  }

  RenderOptions render{options.config.output_resolution,
                       options.config.lossless_frames};
  std::vector<std::string> lines;
  std::vector<std::string> spec_lines;
  for (uint64_t chunk = 0; chunk < options.n_items; chunk += kChunkSize) {
    size_t count =
        static_cast<size_t>(std::min<uint64_t>(kChunkSize, options.n_items - chunk));
    lines.assign(count, {});
    spec_lines.assign(options.spec_only ? count : 0, {});
    ParallelFor(0, count, options.jobs, [&](size_t i) {
      GeneratedItem item = GenerateItem(options.config, corpus, chunk + i);
      lines[i] = SerializeRecord(item.record);
      if (options.spec_only) {
        spec_lines[i] = SpecToJson(item.spec).dump();
      } else {
        RenderFrames(item.spec, corpus, options.out_dir, render);
      }
    });
    for (size_t i = 0; i < count; ++i) {
      manifest << lines[i] << '\n';
      if (options.spec_only) specs << spec_lines[i] << '\n';
    }
  }
  manifest.flush();
  specs.flush();
  if (!manifest || (options.spec_only && !specs)) {
    throw Error(ErrorCode::kIo,
                fmt::format("write into {} failed", options.out_dir.string()));
  }
}

VerifyReport RunVerify(const std::vector<ManifestRecord>& records,
                       const Corpus& corpus, const GenerationConfig& config) {
  VerifyReport report;
  report.n_items = records.size();
  for (const ManifestRecord& r : records) {
    for (const std::string& id : r.source_ids) {
      if (!corpus.IndexOf(id)) {
        report.unknown_sources.push_back(fmt::format("{} (item {})", id, r.id));
      }
    }
  }
  if (!report.unknown_sources.empty()) return report;

  for (size_t i = 0; i < records.size(); ++i) {
    const ManifestRecord& r = records[i];
    auto violation = [&](const std::string& what) {
      report.violations.push_back(
          fmt::format("line {}: item {}: {}", i + 1, r.id, what));
    };
    std::optional<QuestionKind> kind = ParseQuestionKind(r.task);
    if (!kind) {
      violation(fmt::format("task {} is not a generated question kind", r.task));
      continue;
    }
    PseudoVideoSpec spec;
    try {
      spec = SampleStructureFromSeed(config, *kind, corpus, r.seed, r.video_id);
    } catch (const Error& e) {
      violation(fmt::format("cannot regenerate from seed: {}", e.what()));
      continue;
    }
    std::vector<std::string> regenerated_ids;
    for (const SceneSpec& scene : spec.scenes) {
      regenerated_ids.push_back(scene.sample_id);
    }
    if (regenerated_ids != r.source_ids || spec.durations() != r.durations) {
      violation("timeline regenerated from the seed differs from the record");
      continue;
    }
    MCQItem item;
    item.item_id = r.id;
    item.video_id = r.video_id;
    item.kind = *kind;
    item.question = r.question;
    item.options = r.options;
    try {
      int derived = OracleVerify(item, spec);
      if (derived != r.answer) {
        violation(fmt::format("recorded answer {} but the oracle derives {}",
                              r.answer, derived));
      }
    } catch (const Error& e) {
      violation(e.what());
    }
  }
  return report;
}

}  // namespace pvqa
