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

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "pvqa/corpus.h"
#include "pvqa/dataset_io.h"
#include "pvqa/error.h"
#include "pvqa/inference_client.h"
#include "pvqa/pseudo_video.h"

namespace pvqa {

// Process exit statuses.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitIo = 3;

int ExitCodeFor(ErrorCode code);

struct CorpusSource {
  std::filesystem::path coco_annotations;  // COCO captions JSON, or
  std::filesystem::path generic_manifest;  // line-delimited id/image/caption
  std::filesystem::path image_root;
};

Corpus LoadCorpus(const CorpusSource& source);

// "R1:2,R3" -> {(R1, 2), (R3, 1)}.
std::vector<std::pair<QuestionKind, double>> ParseQuestionMix(
    std::string_view text);
std::string FormatQuestionMix(
    const std::vector<std::pair<QuestionKind, double>>& mix);

// Flat "key = value" file; '#' starts a comment line.
std::map<std::string, std::string> ReadFlatConfig(
    const std::filesystem::path& path);

struct GeneratedItem {
  PseudoVideoSpec spec;
  ManifestRecord record;
};

// Item `index` of a dataset. A pure function of (config, corpus, index).
GeneratedItem GenerateItem(const GenerationConfig& config,
                           const Corpus& corpus, uint64_t index);

struct GenerateOptions {
  CorpusSource corpus;
  GenerationConfig config;
  uint64_t n_items = 1;
  std::filesystem::path out_dir;
  bool spec_only = false;
  int jobs = 1;
};

inline constexpr std::string_view kManifestFile = "manifest.jsonl";
inline constexpr std::string_view kSpecsFile = "specs.jsonl";
inline constexpr std::string_view kGenerationConfigFile = "generation.cfg";

// Writes manifest.jsonl, generation.cfg and either rendered frames or, in
// spec-only mode, specs.jsonl into out_dir. Output bytes do not depend on
// `jobs`.
void RunGenerate(const GenerateOptions& options, const Corpus& corpus);

struct VerifyReport {
  size_t n_items = 0;
  std::vector<std::string> violations;
  std::vector<std::string> unknown_sources;
};

// Regenerates every item's timeline from its recorded seed and checks it
// against the record, then re-derives the answer with the oracle.
VerifyReport RunVerify(const std::vector<ManifestRecord>& records,
                       const Corpus& corpus, const GenerationConfig& config);

}  // namespace pvqa
