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

#include <algorithm>
#include <fstream>
#include <set>
#include <unordered_map>

#include "json.hpp"
#include "pvqa/error.h"
#include "pvqa/eval_harness.h"
#include "pvqa/question_kind.h"
#include "pvqa/task.h"

namespace pvqa {

namespace {

// (group, position) sort key; group 2 sorts by name.
std::pair<int, int> TaskRank(std::string_view task) {
  for (size_t i = 0; i < kTvBenchTasks.size(); ++i) {
    if (kTvBenchTasks[i] == task) return {0, static_cast<int>(i)};
  }
  for (size_t i = 0; i < kAllQuestionKinds.size(); ++i) {
    if (QuestionKindName(kAllQuestionKinds[i]) == task) {
      return {1, static_cast<int>(i)};
    }
  }
  return {2, 0};
}

}  // namespace

std::string_view TvBenchTaskName(std::string_view abbreviation) {
  static const std::unordered_map<std::string_view, std::string_view> kNames = {
      {"AC", "Action Count"},        {"OC", "Object Count"},
      {"AS", "Action Sequence"},     {"OS", "Object Shuffle"},
      {"ST", "Scene Transition"},    {"AL", "Action Localization"},
      {"AA", "Action Antonym"},      {"UA", "Unexpected Action"},
      {"ES", "Egocentric Sequence"}, {"MD", "Moving Direction"}};
  auto it = kNames.find(abbreviation);
  return it == kNames.end() ? std::string_view() : it->second;
}

bool IsKnownTask(std::string_view task) { return TaskRank(task).first < 2; }

bool TaskLess(std::string_view a, std::string_view b) {
  auto ra = TaskRank(a);
  auto rb = TaskRank(b);
  if (ra != rb) return ra < rb;
  return a < b;
}

std::vector<std::string> SortTasks(std::vector<std::string> tasks) {
  std::sort(tasks.begin(), tasks.end(), TaskLess);
  return tasks;
}

void WritePredictions(const std::vector<PredictionRecord>& predictions,
                      const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(ErrorCode::kIo, fmt::format("cannot write {}", path.string()));
  }
  for (const PredictionRecord& p : predictions) {
    nlohmann::ordered_json obj;
    obj["id"] = p.id;
    obj["output"] = p.output;
    if (p.error) obj["error"] = *p.error;
    out << obj.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace)
        << '\n';
  }
  out.flush();
  if (!out) {
    throw Error(ErrorCode::kIo, fmt::format("write to {} failed", path.string()));
  }
}

std::vector<PredictionRecord> ReadPredictions(
    const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kIo, fmt::format("cannot open {}", path.string()));
  }
  std::vector<PredictionRecord> out;
  std::set<std::string> seen;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(ErrorCode::kParse,
                  fmt::format("{}: line {}: malformed record at byte {}",
                              path.string(), line_no, (e.byte ? e.byte - 1 : 0)));
    }
    if (!obj.is_object() || !obj.contains("id") || !obj["id"].is_string() ||
        !obj.contains("output") || !obj["output"].is_string()) {
      throw Error(ErrorCode::kParse,
                  fmt::format("{}: line {}: expected string fields id and output",
                              path.string(), line_no));
    }
    PredictionRecord p;
    p.id = obj["id"].get<std::string>();
    p.output = obj["output"].get<std::string>();
    if (obj.contains("error") && obj["error"].is_string()) {
      p.error = obj["error"].get<std::string>();
    }
    if (!seen.insert(p.id).second) {
      throw Error(ErrorCode::kInput,
                  fmt::format("{}: line {}: duplicate prediction id {}",
                              path.string(), line_no, p.id));
    }
    out.push_back(std::move(p));
  }
  return out;
}

ChanceLevels ComputeChanceLevels(const std::vector<ManifestRecord>& records) {
  std::map<std::string, std::pair<double, size_t>> sums;
  for (const ManifestRecord& r : records) {
    auto& [sum, count] = sums[r.task];
    sum += 100.0 / static_cast<double>(r.options.size());
    ++count;
  }
  ChanceLevels levels;
  for (const auto& [task, acc] : sums) {
    levels.per_task[task] = acc.first / static_cast<double>(acc.second);
  }
  if (!levels.per_task.empty()) {
    double total = 0;
    for (const auto& [task, chance] : levels.per_task) total += chance;
    levels.macro = total / static_cast<double>(levels.per_task.size());
  }
  return levels;
}

void Aggregate(ScoreReport& report) {
  std::sort(report.tasks.begin(), report.tasks.end(),
            [](const TaskScore& a, const TaskScore& b) {
              return TaskLess(a.task, b.task);
            });
  report.n_items = report.n_correct = report.n_unparseable = report.n_missing = 0;
  double chance_items = 0;
  double accuracy_sum = 0;
  double chance_sum = 0;
  for (TaskScore& t : report.tasks) {
    t.accuracy = t.n_items ? 100.0 * static_cast<double>(t.n_correct) /
                                 static_cast<double>(t.n_items)
                           : 0.0;
    report.n_items += t.n_items;
    report.n_correct += t.n_correct;
    report.n_unparseable += t.n_unparseable;
    report.n_missing += t.n_missing;
    chance_items += t.chance * static_cast<double>(t.n_items);
    accuracy_sum += t.accuracy;
    chance_sum += t.chance;
  }
  if (report.tasks.empty()) return;
  double n_tasks = static_cast<double>(report.tasks.size());
  report.macro_accuracy = accuracy_sum / n_tasks;
  report.macro_chance = chance_sum / n_tasks;
  if (report.n_items > 0) {
    report.micro_accuracy = 100.0 * static_cast<double>(report.n_correct) /
                            static_cast<double>(report.n_items);
    report.micro_chance = chance_items / static_cast<double>(report.n_items);
  }
}

ScoreReport ChanceReport(const std::vector<ManifestRecord>& manifest) {
  ChanceLevels chance = ComputeChanceLevels(manifest);
  std::map<std::string, TaskScore> tasks;
  for (const ManifestRecord& r : manifest) {
    TaskScore& t = tasks[r.task];
    t.task = r.task;
    ++t.n_items;
  }
  ScoreReport report;
  for (auto& [name, t] : tasks) {
    t.chance = chance.per_task.at(name);
    report.tasks.push_back(t);
  }
  Aggregate(report);
  return report;
}

ScoreReport Score(const std::vector<ManifestRecord>& manifest,
                  const std::vector<PredictionRecord>& predictions) {
  std::unordered_map<std::string_view, const PredictionRecord*> by_id;
  for (const PredictionRecord& p : predictions) {
    if (!by_id.emplace(p.id, &p).second) {
      throw Error(ErrorCode::kInput,
                  fmt::format("duplicate prediction id {}", p.id));
    }
  }
  ChanceLevels chance = ComputeChanceLevels(manifest);
  std::map<std::string, TaskScore> tasks;
  std::set<std::string_view> manifest_ids;
  for (const ManifestRecord& r : manifest) {
    manifest_ids.insert(r.id);
    TaskScore& t = tasks[r.task];
    t.task = r.task;
    ++t.n_items;
    auto it = by_id.find(r.id);
    if (it == by_id.end()) {
      ++t.n_missing;
      continue;
    }
    std::optional<int> parsed = ParseAnswer(it->second->output, r.options);
    if (!parsed) {
      ++t.n_unparseable;
    } else if (*parsed == r.answer) {
      ++t.n_correct;
    }
  }
  ScoreReport report;
  for (auto& [name, t] : tasks) {
    t.chance = chance.per_task.at(name);
    report.tasks.push_back(t);
  }
  for (const PredictionRecord& p : predictions) {
    if (!manifest_ids.contains(p.id)) {
      report.warnings.push_back(
          fmt::format("prediction {} has no manifest item; ignored", p.id));
    }
  }
  Aggregate(report);
  return report;
}

std::vector<ManifestRecord> MakeShuffledVariant(
    const std::vector<ManifestRecord>& manifest, uint64_t seed) {
  std::vector<ManifestRecord> out;
  out.reserve(manifest.size());
  for (const ManifestRecord& r : manifest) {
    Rng rng(DeriveSeed(seed, r.id));
    std::vector<int> perm = PermuteFrames(static_cast<int>(r.frames.size()), rng);
    ManifestRecord shuffled = r;
    for (size_t k = 0; k < perm.size(); ++k) {
      shuffled.frames[k] = r.frames[perm[k]];
    }
    shuffled.permutation = std::move(perm);
    out.push_back(std::move(shuffled));
  }
  return out;
}

}  // namespace pvqa
