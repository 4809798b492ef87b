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
#include <string>
#include <vector>

#include "pvqa/dataset_io.h"
#include "pvqa/eval_harness.h"

namespace pvqa {

struct EndpointConfig {
  // Full URL of the POST route, e.g. http://127.0.0.1:8000/v1/answer.
  std::string url;
  // Name of the environment variable holding the bearer token; empty for
  // unauthenticated endpoints.
  std::string token_env;
  int max_in_flight = 4;
  int timeout_ms = 60000;
  int max_retries = 3;
  int backoff_initial_ms = 200;
  // Send base64 file contents instead of frame paths.
  bool inline_images = false;
  // Frame paths in the manifest are relative to this directory.
  std::filesystem::path frame_root;
};

struct InferResult {
  std::vector<PredictionRecord> predictions;  // manifest order
  size_t n_failed = 0;
  bool aborted = false;
};

// Request body for one item: {"prompt": ..., "images": [...]}.
std::string BuildRequestBody(const ManifestRecord& record,
                             const EndpointConfig& config);

// Sends every item to the endpoint with at most max_in_flight outstanding
// requests. Failed requests are retried with exponential backoff; items that
// exhaust the budget get an empty output and an error annotation. Once more
// than half of the items have failed the run stops and the remaining items
// are marked aborted.
InferResult InferRemote(const std::vector<ManifestRecord>& manifest,
                        const EndpointConfig& config);

}  // namespace pvqa
