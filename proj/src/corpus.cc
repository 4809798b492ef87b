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

#include "pvqa/corpus.h"

#include <fmt/format.h>

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"
#include "pvqa/error.h"

namespace pvqa {

namespace {

using json = nlohmann::json;

bool IsSpace(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kIo, fmt::format("cannot open {}", path.string()));
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

std::string NormalizeCaption(std::string_view caption) {
  std::string out;
  out.reserve(caption.size());
  bool pending_space = false;
  for (char c : caption) {
    if (IsSpace(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    out.push_back(c);
  }
  return out;
}

CaptionedSample MakeSample(std::string sample_id, std::string image_path,
                           std::string caption) {
  CaptionedSample sample;
  sample.sample_id = std::move(sample_id);
  sample.image_path = std::move(image_path);
  sample.normalized_caption = NormalizeCaption(caption);
  sample.caption = std::move(caption);
  return sample;
}

Corpus::Corpus(std::vector<CaptionedSample> samples,
               std::filesystem::path image_root)
    : samples_(std::move(samples)), image_root_(std::move(image_root)) {
  index_by_id_.reserve(samples_.size());
  std::unordered_map<std::string_view, int> groups;
  caption_groups_.reserve(samples_.size());
  for (size_t i = 0; i < samples_.size(); ++i) {
    const CaptionedSample& sample = samples_[i];
    if (!index_by_id_.emplace(sample.sample_id, i).second) {
      throw Error(ErrorCode::kValidation,
                  fmt::format("duplicate sample id {}", sample.sample_id));
    }
    if (sample.normalized_caption.empty()) {
      caption_groups_.push_back(-1);
      continue;
    }
    auto [it, inserted] = groups.emplace(sample.normalized_caption,
                                         static_cast<int>(groups.size()));
    caption_groups_.push_back(it->second);
  }
  distinct_captions_ = groups.size();
}

std::optional<size_t> Corpus::IndexOf(std::string_view sample_id) const {
  auto it = index_by_id_.find(std::string(sample_id));
  if (it == index_by_id_.end()) return std::nullopt;
  return it->second;
}

Corpus LoadCocoCaptions(const std::filesystem::path& annotation_path,
                        const std::filesystem::path& image_root) {
  std::string text = ReadFile(annotation_path);
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParse,
                fmt::format("{}: malformed JSON at byte {}: {}",
                            annotation_path.string(), (e.byte ? e.byte - 1 : 0), e.what()));
  }

  auto schema_error = [&](std::string_view what) {
    return Error(ErrorCode::kParse,
                 fmt::format("{}: not a COCO captions file: {}",
                             annotation_path.string(), what));
  };
  if (!doc.is_object()) throw schema_error("top level is not an object");
  auto images_it = doc.find("images");
  if (images_it == doc.end() || !images_it->is_array()) {
    throw schema_error("missing 'images' list");
  }

  // image id -> (file name, lowest annotation id, caption)
  struct Entry {
    std::string file_name;
    std::optional<int64_t> annotation_id;
    std::string caption;
  };
  std::map<int64_t, Entry> images;
  try {
    for (const json& image : *images_it) {
      int64_t id = image.at("id").get<int64_t>();
      if (!images.emplace(id, Entry{image.at("file_name").get<std::string>(),
                                    std::nullopt, {}})
               .second) {
        throw schema_error(fmt::format("duplicate image id {}", id));
      }
    }

    std::vector<std::string> offenders;
    auto annotations_it = doc.find("annotations");
    if (annotations_it != doc.end()) {
      if (!annotations_it->is_array()) {
        throw schema_error("'annotations' is not a list");
      }
      for (const json& annotation : *annotations_it) {
        int64_t annotation_id = annotation.at("id").get<int64_t>();
        int64_t image_id = annotation.at("image_id").get<int64_t>();
        auto it = images.find(image_id);
        if (it == images.end()) {
          offenders.push_back(fmt::format("annotation {} -> image {}",
                                          annotation_id, image_id));
          continue;
        }
        Entry& entry = it->second;
        if (!entry.annotation_id || annotation_id < *entry.annotation_id) {
          entry.annotation_id = annotation_id;
          entry.caption = annotation.at("caption").get<std::string>();
        }
      }
    }
    if (!offenders.empty()) {
      throw Error(ErrorCode::kValidation,
                  fmt::format("{}: {} annotation(s) reference unknown image "
                              "ids: {}",
                              annotation_path.string(), offenders.size(),
                              fmt::join(offenders, ", ")));
    }
  } catch (const json::exception& e) {
    throw schema_error(e.what());
  }

  std::vector<CaptionedSample> samples;
  samples.reserve(images.size());
  for (auto& [id, entry] : images) {
    samples.push_back(MakeSample(std::to_string(id), std::move(entry.file_name),
                                 std::move(entry.caption)));
  }
  return Corpus(std::move(samples), image_root);
}

Corpus LoadGeneric(const std::filesystem::path& manifest_path,
                   const std::filesystem::path& image_root) {
  std::string text = ReadFile(manifest_path);
  std::vector<std::string_view> lines;
  {
    std::string_view rest(text);
    while (!rest.empty()) {
      size_t eol = rest.find('\n');
      if (eol == std::string_view::npos) {
        lines.push_back(rest);
        break;
      }
      lines.push_back(rest.substr(0, eol));
      rest.remove_prefix(eol + 1);
    }
  }
  auto is_blank = [](std::string_view line) {
    return std::all_of(line.begin(), line.end(), IsSpace);
  };
  if (!lines.empty() && is_blank(lines.back())) lines.pop_back();

  std::vector<CaptionedSample> samples;
  std::set<std::string> seen;
  for (size_t i = 0; i < lines.size(); ++i) {
    size_t line_no = i + 1;
    if (is_blank(lines[i])) {
      throw Error(ErrorCode::kParse, fmt::format("line {}: empty record", line_no));
    }
    json record;
    try {
      record = json::parse(lines[i]);
    } catch (const json::parse_error& e) {
      throw Error(ErrorCode::kParse,
                  fmt::format("line {}: malformed record at byte {}", line_no,
                              (e.byte ? e.byte - 1 : 0)));
    }
    if (!record.is_object()) {
      throw Error(ErrorCode::kParse,
                  fmt::format("line {}: record is not an object", line_no));
    }
    std::string fields[3];
    const char* names[3] = {"id", "image", "caption"};
    for (int f = 0; f < 3; ++f) {
      auto it = record.find(names[f]);
      if (it == record.end()) {
        throw Error(ErrorCode::kParse, fmt::format("line {}: missing field {}",
                                                   line_no, names[f]));
      }
      if (!it->is_string()) {
        throw Error(ErrorCode::kParse,
                    fmt::format("line {}: field {} must be a string", line_no,
                                names[f]));
      }
      fields[f] = it->get<std::string>();
    }
    if (!seen.insert(fields[0]).second) {
      throw Error(ErrorCode::kValidation,
                  fmt::format("line {}: duplicate id {}", line_no, fields[0]));
    }
    samples.push_back(MakeSample(std::move(fields[0]), std::move(fields[1]),
                                 std::move(fields[2])));
  }
  return Corpus(std::move(samples), image_root);
}

std::vector<size_t> SampleDistinctIndices(const Corpus& corpus, size_t k,
                                          Rng& rng) {
  if (corpus.distinct_caption_count() < k) {
    throw Error(ErrorCode::kCapacity,
                fmt::format("requested {} samples with distinct captions but "
                            "the corpus supports at most {}",
                            k, corpus.distinct_caption_count()));
  }
  std::vector<size_t> chosen;
  chosen.reserve(k);
  std::vector<int> used_groups;
  used_groups.reserve(k);
  auto eligible = [&](size_t index) {
    int group = corpus.caption_group(index);
    return group >= 0 && std::find(used_groups.begin(), used_groups.end(),
                                   group) == used_groups.end();
  };
  auto take = [&](size_t index) {
    chosen.push_back(index);
    used_groups.push_back(corpus.caption_group(index));
  };

  // Same-group rejection also rejects already-chosen indices.
  const size_t max_attempts = 10 * k;
  for (size_t attempt = 0; attempt < max_attempts && chosen.size() < k;
       ++attempt) {
    size_t index = rng.UniformIndex(corpus.size());
    if (eligible(index)) take(index);
  }
  if (chosen.size() < k) {
    size_t start = rng.UniformIndex(corpus.size());
    for (size_t step = 0; step < corpus.size() && chosen.size() < k; ++step) {
      size_t index = (start + step) % corpus.size();
      if (eligible(index)) take(index);
    }
  }
  return chosen;
}

std::vector<CaptionedSample> SampleDistinct(const Corpus& corpus, size_t k,
                                            Rng& rng) {
  std::vector<CaptionedSample> out;
  for (size_t index : SampleDistinctIndices(corpus, k, rng)) {
    out.push_back(corpus[index]);
  }
  return out;
}

ValidationReport Validate(const Corpus& corpus) {
  ValidationReport report;
  std::map<std::string, std::vector<std::string>> by_caption;
  for (const CaptionedSample& sample : corpus.samples()) {
    std::filesystem::path path = corpus.ResolveImage(sample);
    std::ifstream probe(path, std::ios::binary);
    if (!probe) {
      report.missing_images.push_back({sample.sample_id, path.string()});
    }
    if (sample.normalized_caption.empty()) {
      report.empty_captions.push_back(sample.sample_id);
    } else {
      by_caption[sample.normalized_caption].push_back(sample.sample_id);
    }
  }
  for (auto& [caption, ids] : by_caption) {
    if (ids.size() > 1) {
      report.duplicate_captions.push_back({caption, std::move(ids)});
    }
  }
  return report;
}

std::string ValidationReport::ToString() const {
  std::string out = fmt::format(
      "missing images: {}\nempty captions: {}\nduplicate captions: {}\n",
      missing_images.size(), empty_captions.size(), duplicate_captions.size());
  for (const MissingImage& m : missing_images) {
    out += fmt::format("  missing image: {} ({})\n", m.path, m.sample_id);
  }
  for (const std::string& id : empty_captions) {
    out += fmt::format("  empty caption: {}\n", id);
  }
  for (const DuplicateCaption& d : duplicate_captions) {
    out += fmt::format("  duplicate caption \"{}\": {}\n", d.normalized_caption,
                       fmt::join(d.sample_ids, ", "));
  }
  return out;
}

}  // namespace pvqa
