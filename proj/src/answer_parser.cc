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

#include <cctype>
#include <string>

#include "pvqa/eval_harness.h"

namespace pvqa {

namespace {

bool IsBlank(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

bool IsAlnum(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }

std::string Lower(std::string_view text) {
  std::string out(text);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string_view Trim(std::string_view text) {
  while (!text.empty() && IsBlank(text.front())) text.remove_prefix(1);
  while (!text.empty() && IsBlank(text.back())) text.remove_suffix(1);
  return text;
}

std::optional<int> LetterIndex(char c, size_t n_options) {
  if (!std::isalpha(static_cast<unsigned char>(c))) return std::nullopt;
  int index = std::tolower(static_cast<unsigned char>(c)) - 'a';
  if (index < 0 || static_cast<size_t>(index) >= n_options) return std::nullopt;
  return index;
}

std::optional<int> LeadingLetter(std::string_view text, size_t n_options) {
  size_t i = 0;
  if (i < text.size() && text[i] == '(') ++i;
  if (i >= text.size()) return std::nullopt;
  std::optional<int> index = LetterIndex(text[i], n_options);
  if (!index) return std::nullopt;
  ++i;
  if (i == text.size()) return index;
  char next = text[i];
  if (next == ')' || next == '.' || next == ':' || IsBlank(next)) return index;
  return std::nullopt;
}

// "answer is X", "answer: X", "answer is: (X)".
std::optional<int> AnswerIsLetter(std::string_view text, size_t n_options) {
  std::string lower = Lower(text);
  constexpr std::string_view kAnswer = "answer";
  for (size_t pos = lower.find(kAnswer); pos != std::string::npos;
       pos = lower.find(kAnswer, pos + 1)) {
    size_t i = pos + kAnswer.size();
    auto skip_blanks = [&] {
      while (i < lower.size() && IsBlank(lower[i])) ++i;
    };
    skip_blanks();
    bool connector = false;
    if (lower.compare(i, 2, "is") == 0 &&
        (i + 2 == lower.size() || !IsAlnum(lower[i + 2]))) {
      i += 2;
      connector = true;
      skip_blanks();
    }
    if (i < lower.size() && lower[i] == ':') {
      ++i;
      connector = true;
      skip_blanks();
    }
    if (!connector) continue;
    if (i < lower.size() && lower[i] == '(') ++i;
    if (i >= lower.size()) continue;
    std::optional<int> index = LetterIndex(lower[i], n_options);
    if (!index) continue;
    if (i + 1 < lower.size() && IsAlnum(lower[i + 1])) continue;
    return index;
  }
  return std::nullopt;
}

}  // namespace

std::optional<int> ParseAnswer(std::string_view raw_text,
                               const std::vector<std::string>& options) {
  if (options.empty()) return std::nullopt;
  std::string_view text = Trim(raw_text);
  const size_t n = options.size();

  if (auto index = LeadingLetter(text, n)) return index;
  if (auto index = AnswerIsLetter(text, n)) return index;

  std::string lower_text = Lower(text);
  for (size_t i = 0; i < n; ++i) {
    if (Lower(Trim(options[i])) == lower_text) return static_cast<int>(i);
  }

  std::optional<int> hit;
  int hits = 0;
  for (size_t i = 0; i < n; ++i) {
    std::string option = Lower(Trim(options[i]));
    if (option.empty()) continue;
    if (lower_text.find(option) != std::string::npos) {
      hit = static_cast<int>(i);
      ++hits;
    }
  }
  if (hits == 1) return hit;
  return std::nullopt;
}

}  // namespace pvqa
