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

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include <algorithm>
#include <cmath>
#include <system_error>

#include "pvqa/error.h"
#include "pvqa/pseudo_video.h"

namespace pvqa {

namespace {

// Shorter side to `side`, then a centered side x side crop.
cv::Mat ResizeAndCrop(const cv::Mat& image, int side) {
  double factor = static_cast<double>(side) / std::min(image.cols, image.rows);
  int width = std::max(side, static_cast<int>(std::lround(image.cols * factor)));
  int height =
      std::max(side, static_cast<int>(std::lround(image.rows * factor)));
  cv::Mat resized;
  cv::resize(image, resized, cv::Size(width, height), 0, 0, cv::INTER_LINEAR);
  cv::Rect crop((width - side) / 2, (height - side) / 2, side, side);
  return resized(crop).clone();
}

cv::Mat ApplyAffine(const cv::Mat& frame, const AffineParams& params) {
  if (params.IsIdentity()) return frame;
  double side = frame.cols;
  cv::Point2f center(static_cast<float>((frame.cols - 1) / 2.0),
                     static_cast<float>((frame.rows - 1) / 2.0));
  cv::Mat transform =
      cv::getRotationMatrix2D(center, params.rotation_deg, params.scale);
  transform.at<double>(0, 2) += params.translate_x_frac * side;
  transform.at<double>(1, 2) += params.translate_y_frac * side;
  cv::Mat warped;
  cv::warpAffine(frame, warped, transform, frame.size(), cv::INTER_LINEAR,
                 cv::BORDER_REPLICATE);
  return warped;
}

}  // namespace

std::vector<std::string> RenderFrames(const PseudoVideoSpec& spec,
                                      const Corpus& corpus,
                                      const std::filesystem::path& out_dir,
                                      const RenderOptions& options) {
  std::vector<std::string> paths = FramePaths(spec, options.lossless);
  std::filesystem::path video_dir = out_dir / "videos" / spec.video_id;
  std::error_code ec;
  std::filesystem::create_directories(video_dir, ec);
  if (ec) {
    throw Error(ErrorCode::kIo, fmt::format("cannot create {}: {}",
                                            video_dir.string(), ec.message()));
  }

  std::vector<int> params;
  if (options.lossless) {
    params = {cv::IMWRITE_PNG_COMPRESSION, 3};
  } else {
    params = {cv::IMWRITE_JPEG_QUALITY, 90};
  }

  int frame_index = 0;
  for (const SceneSpec& scene : spec.scenes) {
    std::optional<size_t> index = corpus.IndexOf(scene.sample_id);
    if (!index) {
      throw Error(ErrorCode::kRender,
                  fmt::format("sample {} is not in the corpus", scene.sample_id));
    }
    std::filesystem::path source = corpus.ResolveImage(corpus[*index]);
    cv::Mat image = cv::imread(source.string(), cv::IMREAD_COLOR);
    if (image.empty()) {
      throw Error(ErrorCode::kRender,
                  fmt::format("cannot decode image {} of sample {}",
                              source.string(), scene.sample_id));
    }
    cv::Mat base = ResizeAndCrop(image, options.resolution);
    for (const AffineParams& affine : scene.affine_track) {
      cv::Mat frame = ApplyAffine(base, affine);
      std::filesystem::path target = out_dir / paths[frame_index];
      bool ok = false;
      try {
        ok = cv::imwrite(target.string(), frame, params);
      } catch (const cv::Exception& e) {
        ok = false;
      }
      if (!ok) {
        throw Error(ErrorCode::kIo,
                    fmt::format("cannot write frame {}", target.string()));
      }
      ++frame_index;
    }
  }
  return paths;
}

}  // namespace pvqa
