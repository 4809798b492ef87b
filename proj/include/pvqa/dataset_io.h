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
#include <vector>

#include "pvqa/pseudo_video.h"
#include "pvqa/question_engine.h"

namespace pvqa {

// One manifest line: a single MCQA item together with its video timeline.
// Field order here is the serialized key order.
struct ManifestRecord {
  std::string id;
  std::string video_id;
  std::string task;
  std::string question;
  std::vector<std::string> options;
  int answer = 0;
  std::vector<std::string> frames;
  int n_scenes = 0;
  std::vector<int> scene_boundaries;
  std::vector<int> durations;
  std::vector<std::string> source_ids;
  uint64_t seed = 0;
  // Present only in shuffled variants: frames[k] was original frame
  // permutation[k].
  std::optional<std::vector<int>> permutation;

  bool operator==(const ManifestRecord&) const = default;
};

ManifestRecord ToRecord(const MCQItem& item, const PseudoVideoSpec& spec);

// Canonical single-line JSON encoding, without the trailing LF.
std::string SerializeRecord(const ManifestRecord& record);

// Throws ErrorCode::kValidation describing the first violated invariant.
void CheckRecord(const ManifestRecord& record);

void WriteManifest(const std::vector<ManifestRecord>& records,
                   const std::filesystem::path& path);

std::vector<ManifestRecord> ReadManifest(const std::filesystem::path& path);

struct Summary {
  double min = 0;
  double max = 0;
  double mean = 0;
};

struct DatasetStats {
  size_t n_items = 0;
  std::map<std::string, size_t> items_per_task;
  std::map<int, size_t> n_scenes;
  std::map<int, size_t> durations;
  std::map<int, size_t> total_frames;
  std::map<int, size_t> option_counts;

  Summary n_scenes_summary;
  Summary durations_summary;
  Summary total_frames_summary;
  Summary option_counts_summary;

  std::string ToText() const;
  std::string ToCsv() const;
};

DatasetStats ComputeDatasetStats(const std::vector<ManifestRecord>& records);

}  // namespace pvqa
