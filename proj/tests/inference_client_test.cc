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

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <mutex>
#include <set>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "pvqa/eval_harness.h"
#include "pvqa/inference_client.h"

namespace pvqa {
namespace {

// Local endpoint that answers "A" plus the prompt's first line, with hooks
// to fail selected prompts and to observe concurrency.
class FakeEndpoint {
 public:
  FakeEndpoint() {
    server_.Post("/v1/answer", [this](const httplib::Request& req, httplib::Response& res) {
      int now = ++in_flight_;
      {
        std::lock_guard<std::mutex> lock(mu_);
        max_in_flight_ = std::max(max_in_flight_, now);
        auth_headers_.insert(req.get_header_value("Authorization"));
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(delay_ms_));
      nlohmann::json body = nlohmann::json::parse(req.body);
      std::string prompt = body["prompt"];
      std::string first = prompt.substr(0, prompt.find('\n'));
      --in_flight_;
      ++requests_;
      if (fail_all_ || first == fail_prompt_) {
        res.status = 500;
        res.set_content("boom", "text/plain");
        return;
      }
      res.set_content(nlohmann::json{{"text", "A " + first}}.dump(), "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~FakeEndpoint() {
    server_.stop();
    thread_.join();
  }

  std::string url() const { return "http://127.0.0.1:" + std::to_string(port_) + "/v1/answer"; }

  int delay_ms_ = 0;
  bool fail_all_ = false;
  std::string fail_prompt_;
  std::atomic<int> in_flight_{0};
  std::atomic<int> requests_{0};
  int max_in_flight_ = 0;
  std::set<std::string> auth_headers_;
  std::mutex mu_;

 private:
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
};

std::vector<ManifestRecord> Manifest(int n) {
  std::vector<ManifestRecord> out;
  for (int i = 0; i < n; ++i) {
    ManifestRecord r;
    r.id = "item" + std::to_string(i);
    r.video_id = r.id;
    r.task = "R1";
    r.question = "question " + std::to_string(i);
    r.options = {"x", "y"};
    r.answer = 0;
    r.frames = {"videos/" + r.id + "/frame_00000.jpg"};
    out.push_back(r);
  }
  return out;
}

EndpointConfig Config(const FakeEndpoint& server) {
  EndpointConfig config;
  config.url = server.url();
  config.timeout_ms = 5000;
  config.max_retries = 2;
  config.backoff_initial_ms = 1;
  return config;
}

TEST(InferRemoteTest, ResultsInManifestOrder) {
  FakeEndpoint server;
  server.delay_ms_ = 2;
  EndpointConfig config = Config(server);
  config.max_in_flight = 4;
  std::vector<ManifestRecord> manifest = Manifest(100);
  InferResult result = InferRemote(manifest, config);
  ASSERT_EQ(result.predictions.size(), 100u);
  EXPECT_EQ(result.n_failed, 0u);
  EXPECT_FALSE(result.aborted);
  for (int i = 0; i < 100; ++i) {
    EXPECT_EQ(result.predictions[i].id, manifest[i].id);
    EXPECT_EQ(result.predictions[i].output, "A " + manifest[i].question);
    EXPECT_FALSE(result.predictions[i].error);
  }
  EXPECT_LE(server.max_in_flight_, 4);
}

TEST(InferRemoteTest, PermanentFailureBecomesAnnotatedEmptyOutput) {
  FakeEndpoint server;
  server.fail_prompt_ = "question 7";
  std::vector<ManifestRecord> manifest = Manifest(20);
  InferResult result = InferRemote(manifest, Config(server));
  EXPECT_EQ(result.n_failed, 1u);
  EXPECT_FALSE(result.aborted);
  EXPECT_EQ(result.predictions[7].output, "");
  ASSERT_TRUE(result.predictions[7].error);
  // Initial attempt plus two retries for the failing item.
  EXPECT_EQ(server.requests_.load(), 19 + 3);
  ScoreReport report = Score(manifest, result.predictions);
  EXPECT_EQ(report.n_correct, 19u);
}

TEST(InferRemoteTest, MaxInFlightOneIsSequential) {
  FakeEndpoint server;
  server.delay_ms_ = 5;
  EndpointConfig config = Config(server);
  config.max_in_flight = 1;
  InferResult result = InferRemote(Manifest(10), config);
  EXPECT_EQ(result.n_failed, 0u);
  EXPECT_EQ(server.max_in_flight_, 1);
}

TEST(InferRemoteTest, BearerTokenFromEnvironment) {
  FakeEndpoint server;
  setenv("PVQA_TEST_TOKEN", "s3cret", 1);
  EndpointConfig config = Config(server);
  config.token_env = "PVQA_TEST_TOKEN";
  InferRemote(Manifest(3), config);
  EXPECT_EQ(server.auth_headers_, std::set<std::string>{"Bearer s3cret"});
}

TEST(InferRemoteTest, AbortsWhenMostItemsFail) {
  FakeEndpoint server;
  server.fail_all_ = true;
  EndpointConfig config = Config(server);
  config.max_in_flight = 1;
  config.max_retries = 0;
  InferResult result = InferRemote(Manifest(10), config);
  EXPECT_TRUE(result.aborted);
  EXPECT_LT(server.requests_.load(), 10);
  ASSERT_EQ(result.predictions.size(), 10u);
  for (const PredictionRecord& p : result.predictions) {
    EXPECT_EQ(p.output, "");
    EXPECT_TRUE(p.error);
  }
  EXPECT_NE(result.predictions.back().error->find("aborted"), std::string::npos);
}

TEST(BuildRequestBodyTest, PathsOrInlineImages) {
  ManifestRecord r = Manifest(1)[0];
  EndpointConfig config;
  config.frame_root = "/data/out";
  nlohmann::json body = nlohmann::json::parse(BuildRequestBody(r, config));
  EXPECT_EQ(body["images"][0], "/data/out/videos/item0/frame_00000.jpg");
  EXPECT_EQ(body["prompt"].get<std::string>().substr(0, 10), "question 0");
}

}  // namespace
}  // namespace pvqa
