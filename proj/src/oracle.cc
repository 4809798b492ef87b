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

// Answer oracle. Everything here works from the rendered question text and
// the scene timeline; nothing is shared with the item constructors.

#include <fmt/format.h>

#include <charconv>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include "pvqa/error.h"
#include "pvqa/question_engine.h"

namespace pvqa {

namespace {

[[noreturn]] void Fail(const MCQItem& item, std::string_view why) {
  throw Error(ErrorCode::kIntegrity,
              fmt::format("item {} ({}): {}", item.item_id,
                          QuestionKindName(item.kind), why));
}

// Removes `prefix` and `suffix` from `text`; nullopt if either is absent.
std::optional<std::string_view> Between(std::string_view text,
                                        std::string_view prefix,
                                        std::string_view suffix) {
  if (text.size() < prefix.size() + suffix.size()) return std::nullopt;
  if (text.substr(0, prefix.size()) != prefix) return std::nullopt;
  if (text.substr(text.size() - suffix.size()) != suffix) return std::nullopt;
  return text.substr(prefix.size(),
                     text.size() - prefix.size() - suffix.size());
}

std::optional<int> ParseInt(std::string_view text) {
  int value = 0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(),
                                   value);
  if (ec != std::errc() || end != text.data() + text.size()) {
    return std::nullopt;
  }
  return value;
}

// Unique scene index whose caption equals `caption`.
int SceneWithCaption(const MCQItem& item, const PseudoVideoSpec& spec,
                     std::string_view caption) {
  int found = -1;
  for (int i = 0; i < spec.n_scenes(); ++i) {
    if (spec.scenes[i].caption == caption) {
      if (found >= 0) Fail(item, "caption occurs in two scenes");
      found = i;
    }
  }
  if (found < 0) {
    Fail(item, fmt::format("caption \"{}\" is not in the video", caption));
  }
  return found;
}

int UniqueMatch(const MCQItem& item,
                const std::function<bool(const std::string&)>& is_correct) {
  int match = -1;
  int count = 0;
  for (size_t i = 0; i < item.options.size(); ++i) {
    if (is_correct(item.options[i])) {
      match = static_cast<int>(i);
      ++count;
    }
  }
  if (count != 1) {
    Fail(item, fmt::format("{} options verify as correct", count));
  }
  return match;
}

int CheckR1(const MCQItem& item, const PseudoVideoSpec& spec) {
  if (item.question !=
      "Which of the following options best describes the order of scenes in "
      "the video?") {
    Fail(item, "unexpected stem");
  }
  std::string truth;
  for (int i = 0; i < spec.n_scenes(); ++i) {
    if (i) truth.push_back(' ');
    truth += "Scene " + std::to_string(i + 1) + ": " + spec.scenes[i].caption;
  }
  return UniqueMatch(item, [&](const std::string& o) { return o == truth; });
}

int CheckR2(const MCQItem& item, const PseudoVideoSpec& spec) {
  constexpr std::string_view kMiddle =
      "\" happen before or after the scene that can be captioned as \"";
  auto body = Between(item.question,
                      "In the given video, does the scene that can be "
                      "captioned as \"",
                      "\"?");
  if (!body) Fail(item, "unexpected stem");
  size_t split = body->find(kMiddle);
  if (split == std::string_view::npos) Fail(item, "unexpected stem");
  int first = SceneWithCaption(item, spec, body->substr(0, split));
  int second = SceneWithCaption(item, spec, body->substr(split + kMiddle.size()));
  if (first == second) Fail(item, "both captions name the same scene");
  std::string expected = first < second ? "before" : "after";
  return UniqueMatch(item, [&](const std::string& o) { return o == expected; });
}

int CheckR3(const MCQItem& item, const PseudoVideoSpec& spec) {
  constexpr std::string_view kPrefix =
      "The following scenes appear in the video, not necessarily in this "
      "order: ";
  bool first;
  if (Between(item.question, kPrefix, ". Of those scenes, which occurs first?")) {
    first = true;
  } else if (Between(item.question, kPrefix,
                     ". Of those scenes, which occurs last?")) {
    first = false;
  } else {
    Fail(item, "unexpected stem");
  }
  // Each option must be a listed caption; the stem lists exactly the options.
  int extreme = -1;
  for (const std::string& option : item.options) {
    if (item.question.find(option) == std::string::npos) {
      Fail(item, "option missing from the listed scenes");
    }
    int scene = SceneWithCaption(item, spec, option);
    if (extreme < 0 || (first ? scene < extreme : scene > extreme)) {
      extreme = scene;
    }
  }
  const std::string& expected = spec.scenes[extreme].caption;
  return UniqueMatch(item, [&](const std::string& o) { return o == expected; });
}

int CheckR4(const MCQItem& item, const PseudoVideoSpec& spec) {
  constexpr std::string_view kPrefix =
      "One of the scenes in the video can be described as \"";
  bool before;
  std::optional<std::string_view> caption;
  if ((caption = Between(item.question, kPrefix,
                         "\". Describe the scene immediately before it."))) {
    before = true;
  } else if ((caption = Between(item.question, kPrefix,
                                "\". Describe the scene immediately after "
                                "it."))) {
    before = false;
  } else {
    Fail(item, "unexpected stem");
  }
  int target = SceneWithCaption(item, spec, *caption);
  int neighbor = before ? target - 1 : target + 1;
  std::string expected;
  if (neighbor < 0) {
    expected = "The given scene is the first scene in the video, so there is "
               "no scene before it.";
  } else if (neighbor >= spec.n_scenes()) {
    expected = "The given scene is the last scene in the video, so there is "
               "no scene after it.";
  } else {
    expected = spec.scenes[neighbor].caption;
  }
  return UniqueMatch(item, [&](const std::string& o) { return o == expected; });
}

int CheckA1(const MCQItem& item, const PseudoVideoSpec& spec) {
  if (item.question != "How many different scenes appear in the video?") {
    Fail(item, "unexpected stem");
  }
  return UniqueMatch(item, [&](const std::string& o) {
    std::optional<int> value = ParseInt(o);
    return value && *value == spec.n_scenes();
  });
}

int CheckA2(const MCQItem& item, const PseudoVideoSpec& spec) {
  auto body = Between(item.question, "There are ", " depict?");
  if (!body) Fail(item, "unexpected stem");
  constexpr std::string_view kMiddle = " scenes in the video. What does scene ";
  size_t split = body->find(kMiddle);
  if (split == std::string_view::npos) Fail(item, "unexpected stem");
  std::optional<int> stated = ParseInt(body->substr(0, split));
  std::optional<int> queried = ParseInt(body->substr(split + kMiddle.size()));
  if (!stated || !queried) Fail(item, "unreadable scene numbers");
  if (*stated != spec.n_scenes()) Fail(item, "stated scene count is wrong");
  if (*queried < 1 || *queried > spec.n_scenes()) {
    Fail(item, "queried scene out of range");
  }
  const std::string& expected = spec.scenes[*queried - 1].caption;
  return UniqueMatch(item, [&](const std::string& o) { return o == expected; });
}

}  // namespace

int OracleVerify(const MCQItem& item, const PseudoVideoSpec& spec) {
  if (item.options.size() < 2) Fail(item, "fewer than two options");
  switch (item.kind) {
    case QuestionKind::kR1: return CheckR1(item, spec);
    case QuestionKind::kR2: return CheckR2(item, spec);
    case QuestionKind::kR3: return CheckR3(item, spec);
    case QuestionKind::kR4: return CheckR4(item, spec);
    case QuestionKind::kA1: return CheckA1(item, spec);
    case QuestionKind::kA2: return CheckA2(item, spec);
  }
  Fail(item, "unknown kind");
}

}  // namespace pvqa
