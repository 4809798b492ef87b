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

#include <array>
#include <optional>
#include <string_view>

namespace pvqa {

// The six templated question families. R* ask about relative order of
// scenes, A* about absolute position or count.
enum class QuestionKind { kR1, kR2, kR3, kR4, kA1, kA2 };

inline constexpr std::array<QuestionKind, 6> kAllQuestionKinds = {
    QuestionKind::kR1, QuestionKind::kR2, QuestionKind::kR3,
    QuestionKind::kR4, QuestionKind::kA1, QuestionKind::kA2};

std::string_view QuestionKindName(QuestionKind kind);
std::optional<QuestionKind> ParseQuestionKind(std::string_view name);

inline bool IsRelative(QuestionKind kind) {
  return kind == QuestionKind::kR1 || kind == QuestionKind::kR2 ||
         kind == QuestionKind::kR3 || kind == QuestionKind::kR4;
}

// A single scene would make every kind except A1 trivial.
inline int MinScenes(QuestionKind kind) {
  return kind == QuestionKind::kA1 ? 1 : 2;
}

}  // namespace pvqa
