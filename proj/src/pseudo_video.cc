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

#include "pvqa/pseudo_video.h"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "pvqa/error.h"

namespace pvqa {

std::string_view QuestionKindName(QuestionKind kind) {
  switch (kind) {
    case QuestionKind::kR1: return "R1";
    case QuestionKind::kR2: return "R2";
    case QuestionKind::kR3: return "R3";
    case QuestionKind::kR4: return "R4";
    case QuestionKind::kA1: return "A1";
    case QuestionKind::kA2: return "A2";
  }
  return "?";
}

std::optional<QuestionKind> ParseQuestionKind(std::string_view name) {
  for (QuestionKind kind : kAllQuestionKinds) {
    std::string_view canonical = QuestionKindName(kind);
    if (name.size() == canonical.size() &&
        std::equal(name.begin(), name.end(), canonical.begin(),
                   [](char a, char b) { return std::toupper(a) == b; })) {
      return kind;
    }
  }
  return std::nullopt;
}

void AffineBounds::Validate() const {
  auto fail = [](std::string_view what) {
    throw Error(ErrorCode::kValidation,
                fmt::format("invalid affine bounds: {}", what));
  };
  for (double v : {rotation_step_deg, rotation_clamp_deg, scale_step,
                   scale_min, scale_max, translation_step_frac,
                   translation_clamp_frac}) {
    if (!std::isfinite(v)) fail("non-finite value");
  }
  if (rotation_step_deg < 0 || scale_step < 0 || translation_step_frac < 0) {
    fail("negative step");
  }
  if (rotation_clamp_deg < rotation_step_deg) fail("rotation clamp < step");
  if (translation_clamp_frac < translation_step_frac) {
    fail("translation clamp < step");
  }
  if (!(scale_min <= 1.0 && 1.0 <= scale_max) || scale_min <= 0) {
    fail("scale interval must contain 1 and be positive");
  }
}

void GenerationConfig::Validate() const {
  auto fail = [](const std::string& what) {
    throw Error(ErrorCode::kValidation,
                fmt::format("invalid generation config: {}", what));
  };
  if (max_scenes < 1) fail("max scenes S must be >= 1");
  if (max_frames_per_scene < 1) fail("max frames per scene F must be >= 1");
  if (output_resolution < 1) fail("output resolution must be >= 1");
  if (question_mix.empty()) fail("question mix is empty");
  for (const auto& [kind, weight] : question_mix) {
    if (!(weight > 0) || !std::isfinite(weight)) {
      fail(fmt::format("weight of {} must be positive and finite",
                       QuestionKindName(kind)));
    }
    if (max_scenes < MinScenes(kind)) {
      fail(fmt::format("{} needs S >= {}", QuestionKindName(kind),
                       MinScenes(kind)));
    }
  }
  affine_bounds.Validate();
}

std::vector<int> PseudoVideoSpec::durations() const {
  std::vector<int> out;
  out.reserve(scenes.size());
  for (const SceneSpec& scene : scenes) out.push_back(scene.duration_frames);
  return out;
}

std::string VideoId(uint64_t item_index) {
  return fmt::format("pv{:08d}", item_index);
}

std::string FramePath(std::string_view video_id, int frame_index,
                      bool lossless) {
  return fmt::format("videos/{}/frame_{:05d}.{}", video_id, frame_index,
                     lossless ? "png" : "jpg");
}

std::vector<std::string> FramePaths(const PseudoVideoSpec& spec,
                                    bool lossless) {
  std::vector<std::string> out;
  out.reserve(spec.total_frames);
  for (int i = 0; i < spec.total_frames; ++i) {
    out.push_back(FramePath(spec.video_id, i, lossless));
  }
  return out;
}

std::vector<AffineParams> SampleAffineWalk(int duration,
                                           const AffineBounds& bounds,
                                           Rng& rng) {
  std::vector<AffineParams> track;
  track.reserve(std::max(duration, 1));
  AffineParams current;
  track.push_back(current);
  for (int frame = 1; frame < duration; ++frame) {
    double d_rot =
        rng.UniformReal(-bounds.rotation_step_deg, bounds.rotation_step_deg);
    double d_scale = rng.UniformReal(-bounds.scale_step, bounds.scale_step);
    double d_tx = rng.UniformReal(-bounds.translation_step_frac,
                                  bounds.translation_step_frac);
    double d_ty = rng.UniformReal(-bounds.translation_step_frac,
                                  bounds.translation_step_frac);
    current.rotation_deg =
        std::clamp(current.rotation_deg + d_rot, -bounds.rotation_clamp_deg,
                   bounds.rotation_clamp_deg);
    current.scale = std::clamp(current.scale * (1.0 + d_scale),
                               bounds.scale_min, bounds.scale_max);
    current.translate_x_frac = std::clamp(current.translate_x_frac + d_tx,
                                          -bounds.translation_clamp_frac,
                                          bounds.translation_clamp_frac);
    current.translate_y_frac = std::clamp(current.translate_y_frac + d_ty,
                                          -bounds.translation_clamp_frac,
                                          bounds.translation_clamp_frac);
    track.push_back(current);
  }
  return track;
}

PseudoVideoSpec BuildSpec(std::string video_id, int max_scenes,
                          std::vector<SceneSpec> scenes, uint64_t item_seed) {
  PseudoVideoSpec spec;
  spec.video_id = std::move(video_id);
  spec.max_scenes = max_scenes;
  spec.item_seed = item_seed;
  int frame = 0;
  for (size_t i = 0; i < scenes.size(); ++i) {
    SceneSpec& scene = scenes[i];
    scene.scene_index = static_cast<int>(i);
    if (scene.affine_track.empty()) {
      scene.affine_track.assign(scene.duration_frames, AffineParams{});
    }
    spec.scene_boundaries.push_back(frame);
    frame += scene.duration_frames;
  }
  spec.total_frames = frame;
  spec.scenes = std::move(scenes);
  return spec;
}

PseudoVideoSpec SampleStructureFromSeed(const GenerationConfig& config,
                                        QuestionKind kind, const Corpus& corpus,
                                        uint64_t item_seed,
                                        std::string video_id) {
  Rng rng(item_seed);
  int n_scenes = static_cast<int>(
      rng.UniformInt(MinScenes(kind), std::max(config.max_scenes,
                                               MinScenes(kind))));
  std::vector<size_t> picks = SampleDistinctIndices(corpus, n_scenes, rng);
  std::vector<SceneSpec> scenes;
  scenes.reserve(n_scenes);
  for (size_t index : picks) {
    SceneSpec scene;
    scene.sample_id = corpus[index].sample_id;
    scene.caption = corpus[index].caption;
    scene.duration_frames =
        static_cast<int>(rng.UniformInt(1, config.max_frames_per_scene));
    scene.affine_track =
        SampleAffineWalk(scene.duration_frames, config.affine_bounds, rng);
    scenes.push_back(std::move(scene));
  }
  return BuildSpec(std::move(video_id), config.max_scenes, std::move(scenes),
                   item_seed);
}

PseudoVideoSpec SampleStructure(const GenerationConfig& config,
                                QuestionKind kind, const Corpus& corpus,
                                uint64_t item_index) {
  return SampleStructureFromSeed(config, kind, corpus,
                                 DeriveSeed(config.master_seed, item_index),
                                 VideoId(item_index));
}

std::vector<int> PermuteFrames(int n_frames, Rng& rng) {
  std::vector<int> identity(std::max(n_frames, 0));
  std::iota(identity.begin(), identity.end(), 0);
  if (n_frames < 2) return identity;
  std::vector<int> perm;
  do {
    perm = identity;
    rng.Shuffle(perm);
  } while (perm == identity);
  return perm;
}

nlohmann::ordered_json SpecToJson(const PseudoVideoSpec& spec) {
  nlohmann::ordered_json out;
  out["video_id"] = spec.video_id;
  out["item_seed"] = spec.item_seed;
  out["total_frames"] = spec.total_frames;
  out["scene_boundaries"] = spec.scene_boundaries;
  nlohmann::ordered_json scenes = nlohmann::ordered_json::array();
  for (const SceneSpec& scene : spec.scenes) {
    nlohmann::ordered_json s;
    s["scene_index"] = scene.scene_index;
    s["sample_id"] = scene.sample_id;
    s["caption"] = scene.caption;
    s["duration_frames"] = scene.duration_frames;
    nlohmann::ordered_json track = nlohmann::ordered_json::array();
    for (const AffineParams& p : scene.affine_track) {
      track.push_back({p.rotation_deg, p.scale, p.translate_x_frac,
                       p.translate_y_frac});
    }
    s["affine_track"] = std::move(track);
    scenes.push_back(std::move(s));
  }
  out["scenes"] = std::move(scenes);
  return out;
}

}  // namespace pvqa
