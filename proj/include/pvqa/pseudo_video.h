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

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "pvqa/corpus.h"
#include "pvqa/question_kind.h"
#include "pvqa/rng.h"

namespace pvqa {

// Per-frame drift limits of the affine random walk. Rotation in degrees,
// scale as a multiplicative factor, translation as a fraction of the frame
// side.
struct AffineBounds {
  double rotation_step_deg = 1.0;
  double rotation_clamp_deg = 5.0;
  double scale_step = 0.01;
  double scale_min = 0.9;
  double scale_max = 1.1;
  double translation_step_frac = 0.01;
  double translation_clamp_frac = 0.05;

  // Throws ErrorCode::kValidation when a step is negative, a clamp is
  // smaller than its step or the scale interval excludes 1.
  void Validate() const;
};

struct AffineParams {
  double rotation_deg = 0.0;
  double scale = 1.0;
  double translate_x_frac = 0.0;
  double translate_y_frac = 0.0;

  bool IsIdentity() const {
    return rotation_deg == 0.0 && scale == 1.0 && translate_x_frac == 0.0 &&
           translate_y_frac == 0.0;
  }
  bool operator==(const AffineParams&) const = default;
};

struct GenerationConfig {
  int max_scenes = 4;            // S
  int max_frames_per_scene = 5;  // F
  int output_resolution = 336;
  bool lossless_frames = false;
  AffineBounds affine_bounds;
  uint64_t master_seed = 0;
  std::vector<std::pair<QuestionKind, double>> question_mix = {
      {QuestionKind::kR1, 1.0}};

  void Validate() const;
};

struct SceneSpec {
  int scene_index = 0;
  std::string sample_id;
  std::string caption;
  int duration_frames = 0;
  std::vector<AffineParams> affine_track;
};

struct PseudoVideoSpec {
  std::string video_id;
  int max_scenes = 0;  // S of the generating config; bounds A1 distractors
  std::vector<SceneSpec> scenes;
  int total_frames = 0;
  std::vector<int> scene_boundaries;
  uint64_t item_seed = 0;

  int n_scenes() const { return static_cast<int>(scenes.size()); }
  std::vector<int> durations() const;
};

std::string VideoId(uint64_t item_index);

// Relative path of a frame inside the output directory.
std::string FramePath(std::string_view video_id, int frame_index,
                      bool lossless);
std::vector<std::string> FramePaths(const PseudoVideoSpec& spec, bool lossless);

// Clamped random walk starting at identity; one entry per frame.
std::vector<AffineParams> SampleAffineWalk(int duration,
                                           const AffineBounds& bounds, Rng& rng);

// Samples the structure of item `item_index`. The item seed is a stable hash
// of (master_seed, item_index), so any item can be generated in isolation.
PseudoVideoSpec SampleStructure(const GenerationConfig& config,
                                QuestionKind kind, const Corpus& corpus,
                                uint64_t item_index);

// Same as SampleStructure but from an explicit item seed; used to regenerate
// a recorded item.
PseudoVideoSpec SampleStructureFromSeed(const GenerationConfig& config,
                                        QuestionKind kind, const Corpus& corpus,
                                        uint64_t item_seed,
                                        std::string video_id);

// Builds a spec from an explicit timeline, filling boundaries and totals.
// Affine tracks default to identity.
PseudoVideoSpec BuildSpec(std::string video_id, int max_scenes,
                          std::vector<SceneSpec> scenes, uint64_t item_seed);

// Uniform permutation of [0, n); for n >= 2 the identity is redrawn.
std::vector<int> PermuteFrames(int n_frames, Rng& rng);

nlohmann::ordered_json SpecToJson(const PseudoVideoSpec& spec);

struct RenderOptions {
  int resolution = 336;
  bool lossless = false;
};

// Renders every frame of `spec` below `out_dir`, returning relative paths in
// temporal order. Source images are resized (shorter side to resolution),
// center-cropped and warped with the per-frame affine.
std::vector<std::string> RenderFrames(const PseudoVideoSpec& spec,
                                      const Corpus& corpus,
                                      const std::filesystem::path& out_dir,
                                      const RenderOptions& options);

}  // namespace pvqa
