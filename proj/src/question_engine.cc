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

#include "pvqa/question_engine.h"

#include <fmt/format.h>

#include <algorithm>
#include <numeric>
#include <set>

#include "pvqa/error.h"

namespace pvqa {

namespace {

// Places `correct` at a uniformly drawn slot; distractors fill the remaining
// slots in their given order.
void PlaceOptions(MCQItem& item, std::string correct,
                  std::vector<std::string> distractors, Rng& rng) {
  size_t n_options = distractors.size() + 1;
  size_t slot = rng.UniformIndex(n_options);
  item.options.clear();
  item.options.reserve(n_options);
  auto next = distractors.begin();
  for (size_t i = 0; i < n_options; ++i) {
    item.options.push_back(i == slot ? std::move(correct) : std::move(*next++));
  }
  item.answer_index = static_cast<int>(slot);

  std::set<std::string_view> seen(item.options.begin(), item.options.end());
  if (seen.size() != item.options.size()) {
    throw Error(ErrorCode::kIntegrity,
                fmt::format("{}: duplicate option text", item.item_id));
  }
}

MCQItem Skeleton(const PseudoVideoSpec& spec, QuestionKind kind) {
  MCQItem item;
  item.video_id = spec.video_id;
  item.item_id = fmt::format("{}-{}", spec.video_id, QuestionKindName(kind));
  item.kind = kind;
  item.n_scenes = spec.n_scenes();
  item.frames = FramePaths(spec, /*lossless=*/false);
  return item;
}

std::string OrderOption(const PseudoVideoSpec& spec,
                        const std::vector<int>& order) {
  std::string out;
  for (size_t pos = 0; pos < order.size(); ++pos) {
    if (pos > 0) out += ' ';
    out += fmt::format("Scene {}: {}", pos + 1, spec.scenes[order[pos]].caption);
  }
  return out;
}

void RequireScenes(const PseudoVideoSpec& spec, QuestionKind kind) {
  if (spec.n_scenes() < MinScenes(kind)) {
    throw Error(ErrorCode::kPrecondition,
                fmt::format("{} needs at least {} scenes, video {} has {}",
                            QuestionKindName(kind), MinScenes(kind),
                            spec.video_id, spec.n_scenes()));
  }
}

// Up to `count` distinct non-identity permutations of n elements, drawn
// uniformly without replacement.
std::vector<std::vector<int>> WrongOrders(int n, size_t count, Rng& rng) {
  std::vector<int> identity(n);
  std::iota(identity.begin(), identity.end(), 0);
  std::vector<std::vector<int>> out;
  if (n <= 5) {
    std::vector<std::vector<int>> all;
    std::vector<int> perm = identity;
    while (std::next_permutation(perm.begin(), perm.end())) all.push_back(perm);
    for (size_t pick : SampleWithoutReplacement(
             all.size(), std::min(count, all.size()), rng)) {
      out.push_back(all[pick]);
    }
    return out;
  }
  // n! - 1 >= 719 here, so rejection terminates quickly.
  while (out.size() < count) {
    std::vector<int> perm = identity;
    rng.Shuffle(perm);
    if (perm == identity) continue;
    if (std::find(out.begin(), out.end(), perm) != out.end()) continue;
    out.push_back(std::move(perm));
  }
  return out;
}

}  // namespace

std::string R4Sentinel(std::string_view direction) {
  if (direction == kBefore) {
    return "The given scene is the first scene in the video, so there is no "
           "scene before it.";
  }
  return "The given scene is the last scene in the video, so there is no "
         "scene after it.";
}

MCQItem MakeR1(const PseudoVideoSpec& spec, Rng& rng) {
  RequireScenes(spec, QuestionKind::kR1);
  MCQItem item = Skeleton(spec, QuestionKind::kR1);
  item.question = std::string(kR1Stem);
  int n = spec.n_scenes();
  std::vector<int> truth(n);
  std::iota(truth.begin(), truth.end(), 0);
  item.metadata.queried_scenes = truth;

  std::vector<std::string> distractors;
  for (const std::vector<int>& order : WrongOrders(n, 3, rng)) {
    distractors.push_back(OrderOption(spec, order));
  }
  PlaceOptions(item, OrderOption(spec, truth), std::move(distractors), rng);
  return item;
}

MCQItem MakeR2(const PseudoVideoSpec& spec, Rng& rng) {
  RequireScenes(spec, QuestionKind::kR2);
  MCQItem item = Skeleton(spec, QuestionKind::kR2);
  std::vector<size_t> pair = SampleWithoutReplacement(spec.scenes.size(), 2, rng);
  int a = static_cast<int>(pair[0]);
  int b = static_cast<int>(pair[1]);
  item.metadata.queried_scenes = {a, b};
  item.question = fmt::format(
      "In the given video, does the scene that can be captioned as \"{}\" "
      "happen before or after the scene that can be captioned as \"{}\"?",
      spec.scenes[a].caption, spec.scenes[b].caption);
  // Fixed option order; the uniform (a, b) draw already balances the slots.
  item.options = {std::string(kBefore), std::string(kAfter)};
  item.answer_index = a < b ? 0 : 1;
  item.metadata.direction = item.options[item.answer_index];
  return item;
}

MCQItem MakeR3(const PseudoVideoSpec& spec, Rng& rng) {
  RequireScenes(spec, QuestionKind::kR3);
  MCQItem item = Skeleton(spec, QuestionKind::kR3);
  int n = spec.n_scenes();
  int wrong = static_cast<int>(std::min<int64_t>(rng.UniformInt(1, 3), n - 1));
  std::vector<size_t> listed =
      SampleWithoutReplacement(spec.scenes.size(), wrong + 1, rng);
  bool first = rng.UniformIndex(2) == 0;
  item.metadata.direction = first ? "first" : "last";

  std::vector<std::string> stem_captions;
  for (size_t scene : listed) {
    stem_captions.push_back(spec.scenes[scene].caption);
    item.metadata.queried_scenes.push_back(static_cast<int>(scene));
  }
  item.question = fmt::format(
      "The following scenes appear in the video, not necessarily in this "
      "order: {}. Of those scenes, which occurs {}?",
      fmt::join(stem_captions, ", "), item.metadata.direction);

  size_t target = first ? *std::min_element(listed.begin(), listed.end())
                        : *std::max_element(listed.begin(), listed.end());
  std::vector<size_t> others;
  for (size_t scene : listed) {
    if (scene != target) others.push_back(scene);
  }
  rng.Shuffle(others);
  std::vector<std::string> distractors;
  for (size_t scene : others) distractors.push_back(spec.scenes[scene].caption);
  PlaceOptions(item, spec.scenes[target].caption, std::move(distractors), rng);
  return item;
}

MCQItem MakeR4(const PseudoVideoSpec& spec, Rng& rng) {
  RequireScenes(spec, QuestionKind::kR4);
  MCQItem item = Skeleton(spec, QuestionKind::kR4);
  int n = spec.n_scenes();
  int target = static_cast<int>(rng.UniformIndex(n));
  bool before = rng.UniformIndex(2) == 0;
  std::string_view direction = before ? kBefore : kAfter;
  item.metadata.queried_scenes = {target};
  item.metadata.direction = std::string(direction);
  item.question = fmt::format(
      "One of the scenes in the video can be described as \"{}\". Describe "
      "the scene immediately {} it.",
      spec.scenes[target].caption, direction);

  int neighbor = before ? target - 1 : target + 1;
  bool at_edge = neighbor < 0 || neighbor >= n;
  std::string sentinel = R4Sentinel(direction);

  std::vector<int> pool;
  for (int scene = 0; scene < n; ++scene) {
    if (scene != target && scene != neighbor) pool.push_back(scene);
  }
  constexpr size_t kOptions = 4;
  size_t fill = kOptions - (at_edge ? 1 : 2);
  std::vector<std::string> distractors;
  if (!at_edge) distractors.push_back(sentinel);
  for (size_t pick :
       SampleWithoutReplacement(pool.size(), std::min(fill, pool.size()), rng)) {
    distractors.push_back(spec.scenes[pool[pick]].caption);
  }
  rng.Shuffle(distractors);
  std::string correct = at_edge ? sentinel : spec.scenes[neighbor].caption;
  PlaceOptions(item, std::move(correct), std::move(distractors), rng);
  return item;
}

MCQItem MakeA1(const PseudoVideoSpec& spec, Rng& rng) {
  RequireScenes(spec, QuestionKind::kA1);
  MCQItem item = Skeleton(spec, QuestionKind::kA1);
  item.question = std::string(kA1Stem);
  int n = spec.n_scenes();
  int hi = std::max(spec.max_scenes, n + 3);
  std::vector<int> pool;
  for (int v = 1; v <= hi; ++v) {
    if (v != n) pool.push_back(v);
  }
  std::vector<std::string> distractors;
  for (size_t pick : SampleWithoutReplacement(pool.size(), 3, rng)) {
    distractors.push_back(std::to_string(pool[pick]));
  }
  PlaceOptions(item, std::to_string(n), std::move(distractors), rng);
  return item;
}

MCQItem MakeA2(const PseudoVideoSpec& spec, Rng& rng) {
  RequireScenes(spec, QuestionKind::kA2);
  MCQItem item = Skeleton(spec, QuestionKind::kA2);
  int n = spec.n_scenes();
  int queried = static_cast<int>(rng.UniformInt(1, n));
  item.metadata.queried_scenes = {queried - 1};
  item.question = fmt::format(
      "There are {} scenes in the video. What does scene {} depict?", n,
      queried);
  std::vector<int> others;
  for (int scene = 0; scene < n; ++scene) {
    if (scene != queried - 1) others.push_back(scene);
  }
  std::vector<std::string> distractors;
  for (size_t pick : SampleWithoutReplacement(
           others.size(), std::min<size_t>(3, others.size()), rng)) {
    distractors.push_back(spec.scenes[others[pick]].caption);
  }
  PlaceOptions(item, spec.scenes[queried - 1].caption, std::move(distractors),
               rng);
  return item;
}

MCQItem MakeQuestion(const PseudoVideoSpec& spec, QuestionKind kind, Rng& rng) {
  RequireScenes(spec, kind);
  switch (kind) {
    case QuestionKind::kR1: return MakeR1(spec, rng);
    case QuestionKind::kR2: return MakeR2(spec, rng);
    case QuestionKind::kR3: return MakeR3(spec, rng);
    case QuestionKind::kR4: return MakeR4(spec, rng);
    case QuestionKind::kA1: return MakeA1(spec, rng);
    case QuestionKind::kA2: return MakeA2(spec, rng);
  }
  throw Error(ErrorCode::kPrecondition, "unknown question kind");
}

std::string RenderPrompt(const MCQItem& item) {
  if (item.options.size() > 26) {
    throw Error(ErrorCode::kUnsupported,
                fmt::format("{}: {} options exceed the letter range A-Z",
                            item.item_id, item.options.size()));
  }
  std::string prompt = item.question;
  prompt += '\n';
  for (size_t i = 0; i < item.options.size(); ++i) {
    prompt += fmt::format("{}. {}\n", static_cast<char>('A' + i),
                          item.options[i]);
  }
  prompt += "Answer with the option's letter from the given choices directly.";
  return prompt;
}

}  // namespace pvqa
