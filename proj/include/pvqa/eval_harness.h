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
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pvqa/dataset_io.h"

namespace pvqa {

struct PredictionRecord {
  std::string id;
  std::string output;
  // Set when the answer could not be obtained (e.g. endpoint failure).
  std::optional<std::string> error;

  bool operator==(const PredictionRecord&) const = default;
};

void WritePredictions(const std::vector<PredictionRecord>& predictions,
                      const std::filesystem::path& path);

// Throws ErrorCode::kInput on duplicate ids.
std::vector<PredictionRecord> ReadPredictions(const std::filesystem::path& path);

// Maps raw model text to an option index; nullopt means unparseable. Rules,
// first match wins:
//   1. a leading option letter, optionally parenthesized;
//   2. "answer is X" / "answer: X";
//   3. the whole trimmed text equals an option (case-insensitive);
//   4. exactly one option occurs as a substring (case-insensitive).
std::optional<int> ParseAnswer(std::string_view raw_text,
                               const std::vector<std::string>& options);

struct ChanceLevels {
  std::map<std::string, double> per_task;  // percent
  double macro = 0;
};

// Per task, the mean of 100 / option count over its items.
ChanceLevels ComputeChanceLevels(const std::vector<ManifestRecord>& records);

struct TaskScore {
  std::string task;
  size_t n_items = 0;
  size_t n_correct = 0;
  size_t n_unparseable = 0;
  size_t n_missing = 0;
  double accuracy = 0;  // percent
  double chance = 0;    // percent
};

struct ScoreReport {
  std::vector<TaskScore> tasks;  // report column order
  size_t n_items = 0;
  size_t n_correct = 0;
  size_t n_unparseable = 0;
  size_t n_missing = 0;
  double micro_accuracy = 0;
  double macro_accuracy = 0;
  double micro_chance = 0;
  double macro_chance = 0;
  std::vector<std::string> warnings;
};

// Throws ErrorCode::kInput when a prediction id repeats. Predictions for
// unknown ids only produce warnings.
ScoreReport Score(const std::vector<ManifestRecord>& manifest,
                  const std::vector<PredictionRecord>& predictions);

// Report with chance levels only (no predictions).
ScoreReport ChanceReport(const std::vector<ManifestRecord>& manifest);

// Fills micro/macro aggregates from per-task counts and chance levels.
void Aggregate(ScoreReport& report);

// Reorders frames of every record with a per-item permutation drawn from
// (seed, id) and records it in `permutation`.
std::vector<ManifestRecord> MakeShuffledVariant(
    const std::vector<ManifestRecord>& manifest, uint64_t seed);

// One decimal, halves rounded up.
std::string FormatPercent(double value);

struct ReportTable {
  std::string text;
  std::string csv;
};

// Columns are tasks followed by micro and macro averages; rows are the
// chance level and, when include_scores is set, `label`.
ReportTable RenderReport(const ScoreReport& report, std::string_view label,
                         bool include_scores = true);

}  // namespace pvqa
