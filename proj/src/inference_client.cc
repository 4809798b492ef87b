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

#include "pvqa/inference_client.h"

#include <fmt/format.h>

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "pvqa/error.h"
#include "pvqa/question_engine.h"

namespace pvqa {

namespace {

struct ParsedUrl {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

ParsedUrl SplitUrl(const std::string& url) {
  size_t scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw Error(ErrorCode::kInput, fmt::format("endpoint URL {} has no scheme", url));
  }
  size_t path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

std::string ReadBinary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kIo, fmt::format("cannot read frame {}", path.string()));
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

MCQItem PromptItem(const ManifestRecord& record) {
  MCQItem item;
  item.item_id = record.id;
  item.question = record.question;
  item.options = record.options;
  return item;
}

}  // namespace

std::string BuildRequestBody(const ManifestRecord& record,
                             const EndpointConfig& config) {
  nlohmann::ordered_json body;
  body["prompt"] = RenderPrompt(PromptItem(record));
  nlohmann::ordered_json images = nlohmann::ordered_json::array();
  for (const std::string& frame : record.frames) {
    std::filesystem::path path = config.frame_root.empty()
                                     ? std::filesystem::path(frame)
                                     : config.frame_root / frame;
    if (config.inline_images) {
      images.push_back(httplib::detail::base64_encode(ReadBinary(path)));
    } else {
      images.push_back(path.string());
    }
  }
  body["images"] = std::move(images);
  return body.dump();
}

InferResult InferRemote(const std::vector<ManifestRecord>& manifest,
                        const EndpointConfig& config) {
  if (config.max_in_flight < 1) {
    throw Error(ErrorCode::kInput, "max in-flight requests must be >= 1");
  }
  ParsedUrl url = SplitUrl(config.url);
  std::string token;
  if (!config.token_env.empty()) {
    if (const char* value = std::getenv(config.token_env.c_str())) token = value;
  }

  const size_t n = manifest.size();
  InferResult result;
  result.predictions.resize(n);
  for (size_t i = 0; i < n; ++i) result.predictions[i].id = manifest[i].id;

  std::atomic<size_t> next{0};
  std::atomic<size_t> failed{0};
  std::atomic<bool> abort{false};

  auto worker = [&] {
    httplib::Client client(url.origin);
    auto timeout = std::chrono::milliseconds(config.timeout_ms);
    client.set_connection_timeout(timeout);
    client.set_read_timeout(timeout);
    client.set_write_timeout(timeout);
    httplib::Headers headers;
    if (!token.empty()) headers.emplace("Authorization", "Bearer " + token);

    for (size_t i = next++; i < n; i = next++) {
      PredictionRecord& out = result.predictions[i];
      if (abort) {
        out.error = "aborted: too many failed requests";
        continue;
      }
      std::string body;
      try {
        body = BuildRequestBody(manifest[i], config);
      } catch (const Error& e) {
        out.error = e.what();
        if (2 * ++failed > n) abort = true;
        continue;
      }
      std::string last_error;
      bool ok = false;
      for (int attempt = 0; attempt <= config.max_retries && !ok; ++attempt) {
        if (attempt > 0) {
          std::this_thread::sleep_for(std::chrono::milliseconds(
              static_cast<int64_t>(config.backoff_initial_ms) << (attempt - 1)));
        }
        auto response = client.Post(url.path, headers, body, "application/json");
        if (!response) {
          last_error = fmt::format("request failed: {}",
                                   httplib::to_string(response.error()));
          continue;
        }
        if (response->status != 200) {
          last_error = fmt::format("HTTP {}", response->status);
          continue;
        }
        nlohmann::json reply = nlohmann::json::parse(response->body, nullptr,
                                                     /*allow_exceptions=*/false);
        if (!reply.is_object() || !reply.contains("text") ||
            !reply["text"].is_string()) {
          last_error = "reply has no string field text";
          continue;
        }
        out.output = reply["text"].get<std::string>();
        ok = true;
      }
      if (!ok) {
        out.error = fmt::format("{} after {} attempts", last_error,
                                config.max_retries + 1);
        if (2 * ++failed > n) abort = true;
      }
    }
  };

  size_t n_workers = std::min<size_t>(config.max_in_flight, std::max<size_t>(n, 1));
  std::vector<std::thread> threads;
  threads.reserve(n_workers);
  for (size_t w = 0; w < n_workers; ++w) threads.emplace_back(worker);
  for (std::thread& t : threads) t.join();

  for (const PredictionRecord& p : result.predictions) {
    if (p.error) ++result.n_failed;
  }
  result.aborted = abort;
  return result;
}

}  // namespace pvqa
