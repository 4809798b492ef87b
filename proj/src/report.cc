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
#include <cmath>

#include "pvqa/eval_harness.h"

namespace pvqa {

std::string FormatPercent(double value) {
  // The epsilon absorbs binary representation error at exact halves
  // (e.g. 48.45 is stored as 48.4499999...).
  double rounded = std::floor(value * 10.0 + 0.5 + 1e-9) / 10.0;
  return fmt::format("{:.1f}", rounded);
}

ReportTable RenderReport(const ScoreReport& report, std::string_view label,
                         bool include_scores) {
  std::vector<std::string> header = {"Configuration"};
  for (const TaskScore& t : report.tasks) header.push_back(t.task);
  header.push_back("|");
  header.push_back("micro");
  header.push_back("macro");

  std::vector<std::vector<std::string>> rows;
  auto make_row = [&](std::string name, auto value_of, double micro,
                      double macro) {
    std::vector<std::string> row = {std::move(name)};
    for (const TaskScore& t : report.tasks) {
      row.push_back(FormatPercent(value_of(t)));
    }
    row.push_back("|");
    row.push_back(FormatPercent(micro));
    row.push_back(FormatPercent(macro));
    rows.push_back(std::move(row));
  };
  make_row("Chance level", [](const TaskScore& t) { return t.chance; },
           report.micro_chance, report.macro_chance);
  if (include_scores) {
    make_row(std::string(label), [](const TaskScore& t) { return t.accuracy; },
             report.micro_accuracy, report.macro_accuracy);
  }

  std::vector<size_t> widths(header.size());
  for (size_t c = 0; c < header.size(); ++c) {
    widths[c] = header[c].size();
    for (const auto& row : rows) widths[c] = std::max(widths[c], row[c].size());
  }
  auto line = [&](const std::vector<std::string>& cells) {
    std::string out;
    for (size_t c = 0; c < cells.size(); ++c) {
      if (c) out += ' ';
      if (c + 1 == cells.size()) {
        out += cells[c];
      } else {
        out += fmt::format("{:<{}}", cells[c], widths[c]);
      }
    }
    return out + '\n';
  };

  ReportTable table;
  table.text = line(header);
  for (const auto& row : rows) table.text += line(row);
  table.text +=
      "Avg: micro = item-weighted over all items, macro = unweighted mean of "
      "per-task values\n";

  table.csv = "configuration";
  for (const TaskScore& t : report.tasks) table.csv += "," + t.task;
  table.csv += ",avg_micro,avg_macro\n";
  for (const auto& row : rows) {
    table.csv += row[0];
    for (size_t c = 1; c < row.size(); ++c) {
      if (row[c] == "|") continue;
      table.csv += "," + row[c];
    }
    table.csv += '\n';
  }
  return table;
}

}  // namespace pvqa
