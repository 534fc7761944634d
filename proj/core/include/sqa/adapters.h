// core/include/sqa/adapters.h

// Copyright 2026  The sqa authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "sqa/error.h"
#include "sqa/metrics.h"
#include "sqa/taskbuild.h"
#include "sqa/types.h"

namespace sqa {

// ---------------------------------------------------------------------------
// Model backends
// ---------------------------------------------------------------------------

struct GenerationParams {
  int max_new_tokens = 64;
  double temperature = 0.0;  // 0 requires deterministic backend behaviour
  uint64_t seed = 0;
};

struct GenerationRequest {
  std::vector<std::string> audio_refs;  // 1 or 2 files
  std::string prompt;
  GenerationParams params;
};

// Uniform contract for anything that can answer a task example. At
// temperature 0 and fixed seed, Generate must be a pure function of the
// request. Errors are reported as BackendError; only retryable ones are
// re-attempted by the harness.
class Backend {
 public:
  virtual ~Backend() = default;
  virtual std::string name() const = 0;
  // Number of requests the harness may keep in flight concurrently.
  virtual int MaxInFlight() const { return 1; }
  virtual std::string Generate(const GenerationRequest& request) = 0;
};

// Canned reply, for wiring tests.
class MockBackend : public Backend {
 public:
  explicit MockBackend(std::string fixed_text = "3.0", int capacity = 8)
      : text_(std::move(fixed_text)), capacity_(capacity) {}
  std::string name() const override { return "mock"; }
  int MaxInFlight() const override { return capacity_; }
  std::string Generate(const GenerationRequest&) override { return text_; }

 private:
  std::string text_;
  int capacity_;
};

// Renders the oracle answer for a known truth:
//   MOS/SIM: truth + Gaussian(0, sigma), clamped to the task range, one
//            decimal place;
//   AB:      the correct choice, flipped with probability min(sigma, 0.5);
//   DESC:    the reference description text.
std::string OracleAnswer(Task task, const TruthValue& truth, double sigma,
                         uint64_t seed);

// Desk-scale stand-in for a finetuned auditory model: answers from the task
// set's ground truth with configurable noise. The per-request noise seed is
// derived as
//   MixSeed(SubstreamSeed(params.seed, "oracle-noise"),
//           Fnv1a(key + "\x1f" + prompt))
// with key = audio refs joined by '|', making Generate a pure function of
// the request.
class OracleBackend : public Backend {
 public:
  OracleBackend(double sigma, std::span<const TaskExample> examples,
                int capacity = 8);
  std::string name() const override { return "oracle"; }
  int MaxInFlight() const override { return capacity_; }
  std::string Generate(const GenerationRequest& request) override;

  static std::string KeyFor(std::span<const std::string> audio_refs);
  static uint64_t NoiseSeed(uint64_t request_seed, const std::string& key,
                            const std::string& prompt);

 private:
  double sigma_;
  int capacity_;
  std::map<std::string, std::pair<Task, TruthValue>> truths_;
};

// Remote model over HTTP. Wire format:
//   request  {"audio": [<path or base64>...], "prompt": ...,
//             "params": {"max_new_tokens": .., "temperature": .., "seed": ..}}
//   reply    {"text": ...}
// Credential read from SQA_BACKEND_TOKEN and sent as a bearer token.
class HttpBackend : public Backend {
 public:
  struct Options {
    std::string endpoint;           // e.g. http://host:8080/generate
    bool base64_audio = false;      // otherwise paths are passed through
    int timeout_ms = 30000;
    int capacity = 4;
  };
  explicit HttpBackend(Options options);
  std::string name() const override { return "http"; }
  int MaxInFlight() const override { return options_.capacity; }
  std::string Generate(const GenerationRequest& request) override;

 private:
  Options options_;
  std::string host_;  // scheme://host:port
  std::string path_;
};

// Local model behind a shell command: the request JSON is piped to stdin and
// the reply JSON {"text": ...} is read from stdout.
class SubprocessBackend : public Backend {
 public:
  explicit SubprocessBackend(std::string command, int capacity = 1)
      : command_(std::move(command)), capacity_(capacity) {}
  std::string name() const override { return "subprocess"; }
  int MaxInFlight() const override { return capacity_; }
  std::string Generate(const GenerationRequest& request) override;

 private:
  std::string command_;
  int capacity_;
};

struct RetryPolicy {
  int max_attempts = 3;
  int initial_backoff_ms = 1000;  // doubled after each retryable failure
};

// Calls Generate, re-attempting retryable failures with exponential backoff.
std::string GenerateWithRetry(Backend& backend,
                              const GenerationRequest& request,
                              const RetryPolicy& policy = {});

using BackendParams = std::map<std::string, std::string>;

// Registry keyed by name: "mock", "oracle", "http", "subprocess". Finetuned
// auditory models attach via the http or subprocess backends hosting their
// released checkpoints. The oracle backend needs the task examples it will
// be asked about.
std::unique_ptr<Backend> MakeBackend(
    const std::string& name, const BackendParams& params,
    std::span<const TaskExample> examples_for_oracle = {});

// ---------------------------------------------------------------------------
// Description judges
// ---------------------------------------------------------------------------

struct JudgeInput {
  std::string item_id;
  std::string description;
  DimensionRating dims;
};

// Scores a generated quality description against ground-truth dimension
// ratings on [0,1].
class DescriptionJudge {
 public:
  virtual ~DescriptionJudge() = default;
  virtual std::string name() const = 0;
  virtual JudgeOutcome Judge(const JudgeInput& input) = 0;
};

JudgeOutcome JudgeDescription(const JudgeInput& input, DescriptionJudge& judge);

// Fraction of the four dimensions whose expected bin phrase occurs in the
// description. Fully offline; the default judge for desk-scale runs.
class BinMatchJudge : public DescriptionJudge {
 public:
  explicit BinMatchJudge(BinTable bins) : bins_(std::move(bins)) {}
  std::string name() const override { return "binmatch"; }
  JudgeOutcome Judge(const JudgeInput& input) override;

 private:
  BinTable bins_;
};

class ConstantJudge : public DescriptionJudge {
 public:
  explicit ConstantJudge(double score) : score_(score) {}
  std::string name() const override { return "constant"; }
  JudgeOutcome Judge(const JudgeInput& input) override;

 private:
  double score_;
};

// Raw text-completion transport used by the text-model judge.
class TextCompletionClient {
 public:
  virtual ~TextCompletionClient() = default;
  virtual std::string Complete(const std::string& prompt) = 0;
};

// POSTs {"prompt": ...} to the endpoint, expects {"text": ...}; credential
// read from SQA_JUDGE_TOKEN.
class HttpTextClient : public TextCompletionClient {
 public:
  explicit HttpTextClient(std::string endpoint, int timeout_ms = 30000);
  std::string Complete(const std::string& prompt) override;

 private:
  std::string host_;
  std::string path_;
  int timeout_ms_;
};

// Renders the judge prompt from a template file ({noisiness}, {distortion},
// {discontinuity}, {overall}, {description} placeholders), sends it through
// the completion client and parses the first number as the score. An
// unparseable or out-of-range reply is retried once, then marked failed.
class TextModelJudge : public DescriptionJudge {
 public:
  TextModelJudge(std::shared_ptr<TextCompletionClient> client,
                 std::string prompt_template);
  static std::string DefaultTemplate();
  std::string name() const override { return "text-model"; }
  JudgeOutcome Judge(const JudgeInput& input) override;

  std::string RenderJudgePrompt(const JudgeInput& input) const;

 private:
  std::shared_ptr<TextCompletionClient> client_;
  std::string template_;
};

// Judge registry: "binmatch" (params: bin_table), "constant" (params:
// score), "http" (params: endpoint, template_file).
std::unique_ptr<DescriptionJudge> MakeJudge(const std::string& name,
                                            const BackendParams& params);

}  // namespace sqa
