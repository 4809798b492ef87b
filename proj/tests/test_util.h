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

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include "json.hpp"
#include "pvqa/corpus.h"
#include "pvqa/error.h"
#include <gtest/gtest.h>
#include <functional>

namespace pvqa::testing {

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(std::string_view tag = "pvqa") {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            fmt::format("{}-{}-{}", tag, ::getpid(), counter++);
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(std::string_view name) const {
    return path_ / name;
  }

 private:
  std::filesystem::path path_;
};

inline void WriteFile(const std::filesystem::path& path, std::string_view text) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
}

inline std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// Deterministic distinct captions: 8 * 8 * 8 * 8 = 4096 combinations.
inline std::string SyntheticCaption(size_t i) {
  static const char* kSubjects[] = {"man",   "woman", "dog",  "cat",
                                    "child", "horse", "bird", "cyclist"};
  static const char* kColors[] = {"red",   "blue",  "green", "yellow",
                                  "black", "white", "brown", "grey"};
  static const char* kActions[] = {"standing", "running", "sitting",
                                   "jumping",  "eating",  "sleeping",
                                   "walking",  "waiting"};
  static const char* kPlaces[] = {"beach", "park",  "kitchen", "street",
                                  "field", "store", "bridge",  "garden"};
  return fmt::format("A {} {} {} near the {} number {}.", kColors[i % 8],
                     kSubjects[(i / 8) % 8], kActions[(i / 64) % 8],
                     kPlaces[(i / 512) % 8], i / 4096);
}

inline Corpus SyntheticCorpus(size_t n) {
  std::vector<CaptionedSample> samples;
  for (size_t i = 0; i < n; ++i) {
    samples.push_back(MakeSample(std::to_string(i + 1),
                                 fmt::format("img_{:06d}.jpg", i + 1),
                                 SyntheticCaption(i)));
  }
  return Corpus(std::move(samples), "");
}

// Writes a COCO captions file with n images (one caption each, plus a
// higher-id second caption for every third image) and, when render_images is
// set, small JPEG images for each.
inline std::filesystem::path WriteCocoFixture(const std::filesystem::path& dir,
                                              size_t n, bool render_images) {
  nlohmann::json doc;
  doc["images"] = nlohmann::json::array();
  doc["annotations"] = nlohmann::json::array();
  int64_t annotation_id = 1;
  for (size_t i = 0; i < n; ++i) {
    int64_t image_id = static_cast<int64_t>(i) * 3 + 7;
    std::string file = fmt::format("img_{:06d}.jpg", i);
    doc["images"].push_back({{"id", image_id}, {"file_name", file},
                             {"width", 96}, {"height", 64}});
    doc["annotations"].push_back({{"id", annotation_id++},
                                  {"image_id", image_id},
                                  {"caption", SyntheticCaption(i)}});
    if (i % 3 == 0) {
      doc["annotations"].push_back({{"id", 1000000 + annotation_id++},
                                    {"image_id", image_id},
                                    {"caption", "an alternate caption"}});
    }
    if (render_images) {
      cv::Mat image(64 + static_cast<int>(i % 5) * 8, 96, CV_8UC3);
      cv::RNG noise(static_cast<uint64_t>(i) + 1);
      noise.fill(image, cv::RNG::UNIFORM, cv::Scalar::all(0),
                 cv::Scalar::all(255));
      cv::circle(image, {48, 32}, 10 + static_cast<int>(i % 7),
                 cv::Scalar(static_cast<double>(i % 255), 80, 200), -1);
      std::filesystem::create_directories(dir / "images");
      cv::imwrite((dir / "images" / file).string(), image);
    }
  }
  std::filesystem::path path = dir / "captions.json";
  WriteFile(path, doc.dump());
  return path;
}

inline ErrorCode CodeOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected pvqa::Error";
  return ErrorCode::kIo;
}

inline std::string MessageOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.what();
  }
  ADD_FAILURE() << "expected pvqa::Error";
  return {};
}

}  // namespace pvqa::testing
