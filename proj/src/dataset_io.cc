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

#include "pvqa/dataset_io.h"

#include <fmt/format.h>

#include <algorithm>
#include <fstream>
#include <numeric>
#include <set>

#include "json.hpp"
#include "pvqa/error.h"
#include "pvqa/task.h"

namespace pvqa {

namespace {

using ordered_json = nlohmann::ordered_json;

template <typename T>
T Field(const ordered_json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw Error(ErrorCode::kParse, fmt::format("missing field {}", key));
  }
  try {
    return it->get<T>();
  } catch (const nlohmann::json::exception&) {
    throw Error(ErrorCode::kParse, fmt::format("field {} has the wrong type", key));
  }
}

ManifestRecord ParseRecord(std::string_view line) {
  ordered_json obj;
  try {
    obj = ordered_json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kParse,
                fmt::format("malformed record at byte {}", (e.byte ? e.byte - 1 : 0)));
  }
  if (!obj.is_object()) {
    throw Error(ErrorCode::kParse, "record is not an object");
  }
  ManifestRecord r;
  r.id = Field<std::string>(obj, "id");
  r.video_id = Field<std::string>(obj, "video_id");
  r.task = Field<std::string>(obj, "task");
  r.question = Field<std::string>(obj, "question");
  r.options = Field<std::vector<std::string>>(obj, "options");
  r.answer = Field<int>(obj, "answer");
  r.frames = Field<std::vector<std::string>>(obj, "frames");
  r.n_scenes = Field<int>(obj, "n_scenes");
  r.scene_boundaries = Field<std::vector<int>>(obj, "scene_boundaries");
  r.durations = Field<std::vector<int>>(obj, "durations");
  r.source_ids = Field<std::vector<std::string>>(obj, "source_ids");
  auto seed = obj.find("seed");
  if (seed == obj.end() || !seed->is_number_integer() ||
      (seed->is_number_integer() && !seed->is_number_unsigned())) {
    throw Error(ErrorCode::kParse, "field seed must be an unsigned integer");
  }
  r.seed = seed->get<uint64_t>();
  if (obj.contains("permutation")) {
    r.permutation = Field<std::vector<int>>(obj, "permutation");
  }
  return r;
}

Summary Summarize(const std::map<int, size_t>& histogram) {
  Summary s;
  size_t count = 0;
  double total = 0;
  for (const auto& [value, n] : histogram) {
    count += n;
    total += static_cast<double>(value) * n;
  }
  if (count == 0) return s;
  s.min = histogram.begin()->first;
  s.max = histogram.rbegin()->first;
  s.mean = total / count;
  return s;
}

}  // namespace

ManifestRecord ToRecord(const MCQItem& item, const PseudoVideoSpec& spec) {
  ManifestRecord r;
  r.id = item.item_id;
  r.video_id = item.video_id;
  r.task = std::string(QuestionKindName(item.kind));
  r.question = item.question;
  r.options = item.options;
  r.answer = item.answer_index;
  r.frames = item.frames;
  r.n_scenes = spec.n_scenes();
  r.scene_boundaries = spec.scene_boundaries;
  r.durations = spec.durations();
  for (const SceneSpec& scene : spec.scenes) r.source_ids.push_back(scene.sample_id);
  r.seed = spec.item_seed;
  return r;
}

std::string SerializeRecord(const ManifestRecord& r) {
  ordered_json obj;
  obj["id"] = r.id;
  obj["video_id"] = r.video_id;
  obj["task"] = r.task;
  obj["question"] = r.question;
  obj["options"] = r.options;
  obj["answer"] = r.answer;
  obj["frames"] = r.frames;
  obj["n_scenes"] = r.n_scenes;
  obj["scene_boundaries"] = r.scene_boundaries;
  obj["durations"] = r.durations;
  obj["source_ids"] = r.source_ids;
  obj["seed"] = r.seed;
  if (r.permutation) obj["permutation"] = *r.permutation;
  return obj.dump();
}

void CheckRecord(const ManifestRecord& r) {
  auto fail = [&](const std::string& what) {
    throw Error(ErrorCode::kValidation, fmt::format("record {}: {}", r.id, what));
  };
  if (r.options.size() < 2) fail("fewer than two options");
  if (r.answer < 0 || static_cast<size_t>(r.answer) >= r.options.size()) {
    fail(fmt::format("answer {} out of range for {} options", r.answer,
                     r.options.size()));
  }
  // An empty timeline marks an external item without scene structure.
  if (!r.durations.empty()) {
    int64_t total = std::accumulate(r.durations.begin(), r.durations.end(),
                                    int64_t{0});
    if (static_cast<int64_t>(r.frames.size()) != total) {
      fail(fmt::format("{} frames but durations sum to {}", r.frames.size(),
                       total));
    }
    if (static_cast<size_t>(r.n_scenes) != r.durations.size()) {
      fail("n_scenes does not match durations");
    }
    if (std::any_of(r.durations.begin(), r.durations.end(),
                    [](int d) { return d < 1; })) {
      fail("non-positive scene duration");
    }
    if (r.scene_boundaries.size() != r.durations.size()) {
      fail("scene_boundaries does not match durations");
    }
    int start = 0;
    for (size_t i = 0; i < r.durations.size(); ++i) {
      if (r.scene_boundaries[i] != start) fail("scene_boundaries inconsistent");
      start += r.durations[i];
    }
    if (!r.source_ids.empty() && r.source_ids.size() != r.durations.size()) {
      fail("source_ids does not match durations");
    }
  }
  if (r.permutation) {
    std::vector<int> sorted = *r.permutation;
    std::sort(sorted.begin(), sorted.end());
    for (size_t i = 0; i < sorted.size(); ++i) {
      if (sorted[i] != static_cast<int>(i)) fail("permutation is not a permutation");
    }
    if (sorted.size() != r.frames.size()) fail("permutation length mismatch");
  }
}

void WriteManifest(const std::vector<ManifestRecord>& records,
                   const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(ErrorCode::kIo, fmt::format("cannot write {}", path.string()));
  }
  for (const ManifestRecord& r : records) {
    out << SerializeRecord(r) << '\n';
  }
  out.flush();
  if (!out) {
    throw Error(ErrorCode::kIo, fmt::format("write to {} failed", path.string()));
  }
}

std::vector<ManifestRecord> ReadManifest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kIo, fmt::format("cannot open {}", path.string()));
  }
  std::vector<ManifestRecord> records;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    try {
      records.push_back(ParseRecord(line));
      CheckRecord(records.back());
    } catch (const Error& e) {
      throw Error(e.code(), fmt::format("{}: line {}: {}", path.string(),
                                        line_no, e.what()));
    }
  }
  return records;
}

DatasetStats ComputeDatasetStats(const std::vector<ManifestRecord>& records) {
  DatasetStats stats;
  stats.n_items = records.size();
  for (const ManifestRecord& r : records) {
    ++stats.items_per_task[r.task];
    ++stats.n_scenes[r.n_scenes];
    for (int d : r.durations) ++stats.durations[d];
    ++stats.total_frames[static_cast<int>(r.frames.size())];
    ++stats.option_counts[static_cast<int>(r.options.size())];
  }
  stats.n_scenes_summary = Summarize(stats.n_scenes);
  stats.durations_summary = Summarize(stats.durations);
  stats.total_frames_summary = Summarize(stats.total_frames);
  stats.option_counts_summary = Summarize(stats.option_counts);
  return stats;
}

std::string DatasetStats::ToText() const {
  std::string out = fmt::format("items: {}\n", n_items);
  std::vector<std::string> tasks;
  for (const auto& [task, n] : items_per_task) tasks.push_back(task);
  out += "per-task counts:\n";
  for (const std::string& task : SortTasks(tasks)) {
    out += fmt::format("  {:<8} {:>10}\n", task, items_per_task.at(task));
  }
  auto section = [&](std::string_view name, const std::map<int, size_t>& hist,
                     const Summary& s) {
    out += fmt::format("{}: min {:g}  max {:g}  mean {:.3f}\n", name, s.min,
                       s.max, s.mean);
    for (const auto& [value, n] : hist) {
      out += fmt::format("  {:>8} {:>10}\n", value, n);
    }
  };
  section("n_scenes", n_scenes, n_scenes_summary);
  section("durations", durations, durations_summary);
  section("total_frames", total_frames, total_frames_summary);
  section("option_counts", option_counts, option_counts_summary);
  return out;
}

std::string DatasetStats::ToCsv() const {
  std::string out = "section,key,value\n";
  out += fmt::format("items,total,{}\n", n_items);
  std::vector<std::string> tasks;
  for (const auto& [task, n] : items_per_task) tasks.push_back(task);
  for (const std::string& task : SortTasks(tasks)) {
    out += fmt::format("task,{},{}\n", task, items_per_task.at(task));
  }
  auto section = [&](std::string_view name, const std::map<int, size_t>& hist,
                     const Summary& s) {
    for (const auto& [value, n] : hist) {
      out += fmt::format("{},{},{}\n", name, value, n);
    }
    out += fmt::format("{}_summary,min,{:g}\n", name, s.min);
    out += fmt::format("{}_summary,max,{:g}\n", name, s.max);
    out += fmt::format("{}_summary,mean,{:.6f}\n", name, s.mean);
  };
  section("n_scenes", n_scenes, n_scenes_summary);
  section("durations", durations, durations_summary);
  section("total_frames", total_frames, total_frames_summary);
  section("option_counts", option_counts, option_counts_summary);
  return out;
}

}  // namespace pvqa
