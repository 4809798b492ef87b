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
#include <string>
#include <string_view>
#include <vector>

namespace pvqa {

// TVBench temporal subtasks in their canonical column order.
inline constexpr std::array<std::string_view, 10> kTvBenchTasks = {
    "AC", "OC", "AS", "OS", "ST", "AL", "AA", "UA", "ES", "MD"};

std::string_view TvBenchTaskName(std::string_view abbreviation);

bool IsKnownTask(std::string_view task);

// Column order for reports: TVBench tasks, then question kinds, then any
// other task names alphabetically.
bool TaskLess(std::string_view a, std::string_view b);

std::vector<std::string> SortTasks(std::vector<std::string> tasks);

}  // namespace pvqa
