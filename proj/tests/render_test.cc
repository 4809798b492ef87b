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

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include "pvqa/error.h"
#include "pvqa/pseudo_video.h"
#include "test_util.h"

namespace pvqa {
namespace {

using testing::TempDir;

class RenderFramesTest : public ::testing::Test {
 protected:
  void SetUp() override {
    std::filesystem::path annotations =
        testing::WriteCocoFixture(dir_.path(), 8, /*render_images=*/true);
    corpus_ = LoadCocoCaptions(annotations, dir_ / "images");
  }

  SceneSpec Scene(size_t sample, int duration) {
    SceneSpec scene;
    scene.sample_id = corpus_[sample].sample_id;
    scene.caption = corpus_[sample].caption;
    scene.duration_frames = duration;
    return scene;
  }

  TempDir dir_;
  Corpus corpus_;
};

TEST_F(RenderFramesTest, OneFilePerFrameInTemporalOrder) {
  PseudoVideoSpec spec =
      BuildSpec("pv00000001", 4, {Scene(0, 2), Scene(1, 3)}, 0);
  TempDir out;
  std::vector<std::string> frames =
      RenderFrames(spec, corpus_, out.path(), RenderOptions{64, false});
  ASSERT_EQ(frames.size(), 5u);
  for (int i = 0; i < 5; ++i) {
    EXPECT_EQ(frames[i], FramePath("pv00000001", i, false));
    cv::Mat image = cv::imread((out.path() / frames[i]).string());
    ASSERT_FALSE(image.empty());
    EXPECT_EQ(image.cols, 64);
    EXPECT_EQ(image.rows, 64);
  }
}

TEST_F(RenderFramesTest, IdentityAffineFramesArePixelIdentical) {
  PseudoVideoSpec spec = BuildSpec("pv00000002", 4, {Scene(2, 4)}, 0);
  TempDir out;
  std::vector<std::string> frames =
      RenderFrames(spec, corpus_, out.path(), RenderOptions{48, true});
  cv::Mat first = cv::imread((out.path() / frames[0]).string());
  for (const std::string& frame : frames) {
    cv::Mat image = cv::imread((out.path() / frame).string());
    ASSERT_EQ(image.size(), first.size());
    EXPECT_EQ(cv::norm(image, first, cv::NORM_INF), 0.0);
  }
}

TEST_F(RenderFramesTest, PerturbedFramesDiffer) {
  SceneSpec scene = Scene(3, 2);
  scene.affine_track = {AffineParams{}, AffineParams{4.0, 1.05, 0.03, -0.02}};
  PseudoVideoSpec spec = BuildSpec("pv00000003", 4, {scene}, 0);
  TempDir out;
  std::vector<std::string> frames =
      RenderFrames(spec, corpus_, out.path(), RenderOptions{48, true});
  cv::Mat a = cv::imread((out.path() / frames[0]).string());
  cv::Mat b = cv::imread((out.path() / frames[1]).string());
  EXPECT_GT(cv::norm(a, b, cv::NORM_L1), 0.0);
}

TEST_F(RenderFramesTest, DeterministicBytes) {
  GenerationConfig config;
  config.max_scenes = 4;
  PseudoVideoSpec spec = SampleStructure(config, QuestionKind::kR1, corpus_, 5);
  TempDir first, second;
  std::vector<std::string> frames =
      RenderFrames(spec, corpus_, first.path(), RenderOptions{96, false});
  RenderFrames(spec, corpus_, second.path(), RenderOptions{96, false});
  for (const std::string& frame : frames) {
    EXPECT_EQ(testing::ReadFile(first.path() / frame),
              testing::ReadFile(second.path() / frame))
        << frame;
  }
}

TEST_F(RenderFramesTest, UndecodableImageNamesSample) {
  testing::WriteFile(dir_ / "images" / "img_000004.jpg", "not an image");
  PseudoVideoSpec spec = BuildSpec("pv00000004", 4, {Scene(4, 1)}, 0);
  TempDir out;
  auto render = [&] { RenderFrames(spec, corpus_, out.path(), RenderOptions{32, false}); };
  EXPECT_EQ(testing::CodeOf(render), ErrorCode::kRender);
  EXPECT_NE(testing::MessageOf(render).find(corpus_[4].sample_id), std::string::npos);
}

}  // namespace
}  // namespace pvqa
