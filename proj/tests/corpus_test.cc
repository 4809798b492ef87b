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

#include <gtest/gtest.h>

#include <set>

#include "pvqa/corpus.h"
#include "pvqa/error.h"
#include "test_util.h"

namespace pvqa {
namespace {

using testing::TempDir;
using testing::WriteFile;

using testing::CodeOf;
using testing::MessageOf;

TEST(NormalizeCaptionTest, LowercasesAndCollapsesWhitespace) {
  EXPECT_EQ(NormalizeCaption("A man riding a horse."), "a man riding a horse.");
  EXPECT_EQ(NormalizeCaption("  Two\t DOGS \n play  "), "two dogs play");
  EXPECT_EQ(NormalizeCaption(" \t\n"), "");
}

TEST(LoadCocoCaptionsTest, PicksLowestAnnotationIdPerImage) {
  TempDir dir;
  WriteFile(dir / "c.json", R"({
    "images": [{"id": 30, "file_name": "c.jpg"},
               {"id": 10, "file_name": "a.jpg"},
               {"id": 20, "file_name": "b.jpg"}],
    "annotations": [
      {"id": 9, "image_id": 10, "caption": "later caption for a"},
      {"id": 4, "image_id": 10, "caption": "A man riding a horse."},
      {"id": 5, "image_id": 20, "caption": "caption b"},
      {"id": 2, "image_id": 30, "caption": "first for c"},
      {"id": 7, "image_id": 30, "caption": "second for c"}]})");
  Corpus corpus = LoadCocoCaptions(dir / "c.json", dir.path());
  ASSERT_EQ(corpus.size(), 3u);
  EXPECT_EQ(corpus[0].sample_id, "10");
  EXPECT_EQ(corpus[0].image_path, "a.jpg");
  EXPECT_EQ(corpus[0].caption, "A man riding a horse.");
  EXPECT_EQ(corpus[0].normalized_caption, "a man riding a horse.");
  EXPECT_EQ(corpus[1].sample_id, "20");
  EXPECT_EQ(corpus[2].caption, "first for c");
}

TEST(LoadCocoCaptionsTest, EmptyImageList) {
  TempDir dir;
  WriteFile(dir / "c.json", R"({"images": [], "annotations": []})");
  EXPECT_EQ(LoadCocoCaptions(dir / "c.json", dir.path()).size(), 0u);
}

TEST(LoadCocoCaptionsTest, MalformedFileReportsByteOffset) {
  TempDir dir;
  WriteFile(dir / "c.json", R"({"images": [ {"id": 1,, }]})");
  std::string message =
      MessageOf([&] { LoadCocoCaptions(dir / "c.json", dir.path()); });
  EXPECT_NE(message.find("at byte 22"), std::string::npos) << message;
  EXPECT_EQ(CodeOf([&] { LoadCocoCaptions(dir / "c.json", dir.path()); }),
            ErrorCode::kParse);
}

TEST(LoadCocoCaptionsTest, UnknownImageIdListsOffenders) {
  TempDir dir;
  WriteFile(dir / "c.json", R"({
    "images": [{"id": 1, "file_name": "a.jpg"}],
    "annotations": [{"id": 1, "image_id": 1, "caption": "ok"},
                    {"id": 2, "image_id": 99, "caption": "orphan"},
                    {"id": 3, "image_id": 98, "caption": "orphan"}]})");
  auto load = [&] { LoadCocoCaptions(dir / "c.json", dir.path()); };
  EXPECT_EQ(CodeOf(load), ErrorCode::kValidation);
  std::string message = MessageOf(load);
  EXPECT_NE(message.find("annotation 2 -> image 99"), std::string::npos);
  EXPECT_NE(message.find("annotation 3 -> image 98"), std::string::npos);
}

TEST(LoadGenericTest, ReadsRecordsInFileOrder) {
  TempDir dir;
  WriteFile(dir / "m.jsonl",
            "{\"id\":\"b\",\"image\":\"b.jpg\",\"caption\":\"Second  One\"}\n"
            "{\"id\":\"a\",\"image\":\"a.jpg\",\"caption\":\"first\"}\n");
  Corpus corpus = LoadGeneric(dir / "m.jsonl", dir.path());
  ASSERT_EQ(corpus.size(), 2u);
  EXPECT_EQ(corpus[0].sample_id, "b");
  EXPECT_EQ(corpus[0].normalized_caption, "second one");
  EXPECT_EQ(corpus[1].sample_id, "a");
}

TEST(LoadGenericTest, MissingFieldNamesLine) {
  TempDir dir;
  WriteFile(dir / "m.jsonl", "{\"id\":\"a\",\"image\":\"a.jpg\"}\n");
  EXPECT_EQ(MessageOf([&] { LoadGeneric(dir / "m.jsonl", dir.path()); }),
            "line 1: missing field caption");
}

TEST(LoadGenericTest, TrailingBlankLineIgnored) {
  TempDir dir;
  std::string body =
      "{\"id\":\"a\",\"image\":\"a.jpg\",\"caption\":\"x\"}\n"
      "{\"id\":\"b\",\"image\":\"b.jpg\",\"caption\":\"y\"}\n";
  WriteFile(dir / "m.jsonl", body + "\n");
  EXPECT_EQ(LoadGeneric(dir / "m.jsonl", dir.path()).size(), 2u);
  // Only a single trailing blank line is tolerated.
  WriteFile(dir / "m2.jsonl", body + "\n\n");
  EXPECT_EQ(CodeOf([&] { LoadGeneric(dir / "m2.jsonl", dir.path()); }),
            ErrorCode::kParse);
}

TEST(LoadGenericTest, DuplicateIdNamed) {
  TempDir dir;
  WriteFile(dir / "m.jsonl",
            "{\"id\":\"a\",\"image\":\"a.jpg\",\"caption\":\"x\"}\n"
            "{\"id\":\"a\",\"image\":\"b.jpg\",\"caption\":\"y\"}\n");
  std::string message = MessageOf([&] { LoadGeneric(dir / "m.jsonl", dir.path()); });
  EXPECT_NE(message.find("duplicate id a"), std::string::npos) << message;
}

TEST(SampleDistinctTest, ReturnsDistinctCaptions) {
  Corpus corpus = testing::SyntheticCorpus(10);
  Rng rng(1);
  std::vector<CaptionedSample> picks = SampleDistinct(corpus, 4, rng);
  ASSERT_EQ(picks.size(), 4u);
  std::set<std::string> captions;
  for (const auto& s : picks) captions.insert(s.normalized_caption);
  EXPECT_EQ(captions.size(), 4u);
}

TEST(SampleDistinctTest, CapacityErrorReportsMaximum) {
  std::vector<CaptionedSample> samples;
  for (int i = 0; i < 5; ++i) {
    samples.push_back(MakeSample(std::to_string(i), "x.jpg", i % 2 ? "A cat" : "a  cat"));
  }
  Corpus corpus(std::move(samples), "");
  Rng rng(0);
  auto call = [&] { SampleDistinct(corpus, 2, rng); };
  EXPECT_EQ(CodeOf(call), ErrorCode::kCapacity);
  EXPECT_NE(MessageOf(call).find("at most 1"), std::string::npos);
}

TEST(SampleDistinctTest, DeterministicForSeed) {
  Corpus corpus = testing::SyntheticCorpus(50);
  Rng a(42), b(42);
  EXPECT_EQ(SampleDistinct(corpus, 6, a), SampleDistinct(corpus, 6, b));
}

// Random corpora with heavy caption duplication exercise both the rejection
// phase and the deterministic scan fallback.
TEST(SampleDistinctTest, PropertyNeverRepeatsCaption) {
  Rng meta(7);
  for (int trial = 0; trial < 300; ++trial) {
    size_t n = 1 + meta.UniformIndex(60);
    size_t n_captions = 1 + meta.UniformIndex(n);
    std::vector<CaptionedSample> samples;
    for (size_t i = 0; i < n; ++i) {
      std::string caption = fmt::format("caption {}", meta.UniformIndex(n_captions));
      if (meta.UniformIndex(2)) caption = " " + caption + "  ";
      samples.push_back(MakeSample(std::to_string(i), "x.jpg", caption));
    }
    Corpus corpus(std::move(samples), "");
    size_t k = 1 + meta.UniformIndex(corpus.distinct_caption_count());
    Rng rng(trial);
    std::vector<size_t> picks = SampleDistinctIndices(corpus, k, rng);
    ASSERT_EQ(picks.size(), k);
    std::set<std::string> captions;
    std::set<size_t> indices;
    for (size_t i : picks) {
      captions.insert(corpus[i].normalized_caption);
      indices.insert(i);
    }
    EXPECT_EQ(captions.size(), k);
    EXPECT_EQ(indices.size(), k);
  }
}

TEST(ValidateTest, CleanCorpusHasEmptyReport) {
  TempDir dir;
  std::filesystem::path annotations = testing::WriteCocoFixture(dir.path(), 6, true);
  Corpus corpus = LoadCocoCaptions(annotations, dir / "images");
  ValidationReport report = Validate(corpus);
  EXPECT_TRUE(report.empty()) << report.ToString();
}

TEST(ValidateTest, ReportsMissingFile) {
  TempDir dir;
  WriteFile(dir / "a.jpg", "x");
  Corpus corpus({MakeSample("1", "a.jpg", "one"), MakeSample("2", "gone.jpg", "two")},
                dir.path());
  ValidationReport report = Validate(corpus);
  ASSERT_EQ(report.missing_images.size(), 1u);
  EXPECT_EQ(report.missing_images[0].sample_id, "2");
  EXPECT_NE(report.missing_images[0].path.find("gone.jpg"), std::string::npos);
  EXPECT_TRUE(report.duplicate_captions.empty());
}

TEST(ValidateTest, ReportsDuplicateCaptionWithBothIds) {
  TempDir dir;
  WriteFile(dir / "a.jpg", "x");
  Corpus corpus({MakeSample("1", "a.jpg", "A Dog"), MakeSample("2", "a.jpg", "a dog "),
                 MakeSample("3", "a.jpg", "")},
                dir.path());
  ValidationReport report = Validate(corpus);
  ASSERT_EQ(report.duplicate_captions.size(), 1u);
  EXPECT_EQ(report.duplicate_captions[0].sample_ids,
            (std::vector<std::string>{"1", "2"}));
  EXPECT_EQ(report.empty_captions, std::vector<std::string>{"3"});
}

TEST(CorpusTest, RejectsDuplicateIds) {
  EXPECT_EQ(CodeOf([] {
              Corpus({MakeSample("1", "a", "x"), MakeSample("1", "b", "y")}, "");
            }),
            ErrorCode::kValidation);
}

}  // namespace
}  // namespace pvqa
