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

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "pvqa/rng.h"

namespace pvqa {

// Lowercases ASCII letters, collapses whitespace runs to one space and trims.
std::string NormalizeCaption(std::string_view caption);

// One image-caption pair of a captioned image dataset.
struct CaptionedSample {
  std::string sample_id;
  std::string image_path;  // relative to the corpus image root
  std::string caption;
  std::string normalized_caption;

  bool operator==(const CaptionedSample&) const = default;
};

CaptionedSample MakeSample(std::string sample_id, std::string image_path,
                           std::string caption);

// Immutable, ordered collection of captioned samples. Construction rejects
// duplicate sample ids and precomputes caption-equivalence classes so that
// distinct-caption sampling does not rehash strings on every draw.
class Corpus {
 public:
  Corpus() = default;
  Corpus(std::vector<CaptionedSample> samples, std::filesystem::path image_root);

  const std::vector<CaptionedSample>& samples() const { return samples_; }
  size_t size() const { return samples_.size(); }
  bool empty() const { return samples_.empty(); }
  const CaptionedSample& operator[](size_t i) const { return samples_[i]; }
  const std::filesystem::path& image_root() const { return image_root_; }

  std::optional<size_t> IndexOf(std::string_view sample_id) const;

  // Equivalence class of the normalized caption of sample i; -1 for samples
  // whose caption is empty after normalization.
  int caption_group(size_t i) const { return caption_groups_[i]; }

  // Number of distinct non-empty normalized captions.
  size_t distinct_caption_count() const { return distinct_captions_; }

  std::filesystem::path ResolveImage(const CaptionedSample& sample) const {
    return image_root_ / sample.image_path;
  }

 private:
  std::vector<CaptionedSample> samples_;
  std::filesystem::path image_root_;
  std::unordered_map<std::string, size_t> index_by_id_;
  std::vector<int> caption_groups_;
  size_t distinct_captions_ = 0;
};

// Reads a COCO captions annotation file. Images with several captions keep
// the one with the lowest annotation id; samples are ordered by image id.
Corpus LoadCocoCaptions(const std::filesystem::path& annotation_path,
                        const std::filesystem::path& image_root);

// Reads a line-delimited manifest of {"id", "image", "caption"} records.
Corpus LoadGeneric(const std::filesystem::path& manifest_path,
                   const std::filesystem::path& image_root);

// Draws k samples without replacement whose normalized captions are
// pairwise distinct. Throws ErrorCode::kCapacity if the corpus holds fewer
// than k distinct captions.
std::vector<CaptionedSample> SampleDistinct(const Corpus& corpus, size_t k,
                                            Rng& rng);

// Index-returning form of SampleDistinct; same draws for the same rng state.
std::vector<size_t> SampleDistinctIndices(const Corpus& corpus, size_t k,
                                          Rng& rng);

struct MissingImage {
  std::string sample_id;
  std::string path;
};

struct DuplicateCaption {
  std::string normalized_caption;
  std::vector<std::string> sample_ids;
};

struct ValidationReport {
  std::vector<MissingImage> missing_images;
  std::vector<std::string> empty_captions;
  std::vector<DuplicateCaption> duplicate_captions;

  bool empty() const {
    return missing_images.empty() && empty_captions.empty() &&
           duplicate_captions.empty();
  }
  std::string ToString() const;
};

ValidationReport Validate(const Corpus& corpus);

}  // namespace pvqa
