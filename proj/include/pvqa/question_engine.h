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

#include <string>
#include <string_view>
#include <vector>

#include "pvqa/pseudo_video.h"
#include "pvqa/question_kind.h"
#include "pvqa/rng.h"

namespace pvqa {

// Kind-specific details recorded at construction time. Scene indices are
// 0-based; `direction` is "first"/"last" for R3 and "before"/"after" for R4.
struct QuestionMetadata {
  std::vector<int> queried_scenes;
  std::string direction;
};

struct MCQItem {
  std::string item_id;
  std::string video_id;
  QuestionKind kind = QuestionKind::kR1;
  std::string question;
  std::vector<std::string> options;
  int answer_index = 0;
  int n_scenes = 0;
  std::vector<std::string> frames;
  QuestionMetadata metadata;
};

// Fixed template text.
inline constexpr std::string_view kR1Stem =
    "Which of the following options best describes the order of scenes in "
    "the video?";
inline constexpr std::string_view kA1Stem =
    "How many different scenes appear in the video?";
inline constexpr std::string_view kBefore = "before";
inline constexpr std::string_view kAfter = "after";

// Option asserting that the queried scene has no neighbor in `direction`.
std::string R4Sentinel(std::string_view direction);

// Dispatches to the kind-specific constructor. Throws
// ErrorCode::kPrecondition when the spec has fewer scenes than the kind needs.
MCQItem MakeQuestion(const PseudoVideoSpec& spec, QuestionKind kind, Rng& rng);

MCQItem MakeR1(const PseudoVideoSpec& spec, Rng& rng);
MCQItem MakeR2(const PseudoVideoSpec& spec, Rng& rng);
MCQItem MakeR3(const PseudoVideoSpec& spec, Rng& rng);
MCQItem MakeR4(const PseudoVideoSpec& spec, Rng& rng);
MCQItem MakeA1(const PseudoVideoSpec& spec, Rng& rng);
MCQItem MakeA2(const PseudoVideoSpec& spec, Rng& rng);

// Letter-format prompt: the question, one "X. option" line per option and
// the answer instruction. Throws ErrorCode::kUnsupported beyond 26 options.
std::string RenderPrompt(const MCQItem& item);

// Independent answer check. Re-derives the correct option from the question
// text, the options and the scene timeline of `spec` alone, ignoring
// item.answer_index and item.metadata. Throws ErrorCode::kIntegrity unless
// exactly one option verifies.
int OracleVerify(const MCQItem& item, const PseudoVideoSpec& spec);

}  // namespace pvqa
