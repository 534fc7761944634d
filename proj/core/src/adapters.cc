// core/src/adapters.cc

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

#include "sqa/adapters.h"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include "httplib.h"
#include "json.hpp"

#include "default_data.h"
#include "numfmt.h"
#include "sqa/respparse.h"
#include "sqa/rng.h"

namespace sqa {

namespace {

double Clamp(double v, double lo, double hi) {
  return std::min(hi, std::max(lo, v));
}

// Splits "http://host:port/some/path" into base url and path.
void SplitEndpoint(const std::string& endpoint, std::string& host,
                   std::string& path) {
  const size_t scheme = endpoint.find("://");
  if (scheme == std::string::npos) {
    throw Error("bad endpoint '" + endpoint + "': missing scheme");
  }
  const size_t slash = endpoint.find('/', scheme + 3);
  if (slash == std::string::npos) {
    host = endpoint;
    path = "/";
  } else {
    host = endpoint.substr(0, slash);
    path = endpoint.substr(slash);
  }
}

std::string Base64Encode(const std::string& bytes) {
  static constexpr char kAlphabet[] =
      "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
  std::string out;
  out.reserve((bytes.size() + 2) / 3 * 4);
  size_t i = 0;
  while (i + 3 <= bytes.size()) {
    const uint32_t v = (static_cast<unsigned char>(bytes[i]) << 16) |
                       (static_cast<unsigned char>(bytes[i + 1]) << 8) |
                       static_cast<unsigned char>(bytes[i + 2]);
    out.push_back(kAlphabet[(v >> 18) & 63]);
    out.push_back(kAlphabet[(v >> 12) & 63]);
    out.push_back(kAlphabet[(v >> 6) & 63]);
    out.push_back(kAlphabet[v & 63]);
    i += 3;
  }
  const size_t rest = bytes.size() - i;
  if (rest == 1) {
    const uint32_t v = static_cast<unsigned char>(bytes[i]) << 16;
    out.push_back(kAlphabet[(v >> 18) & 63]);
    out.push_back(kAlphabet[(v >> 12) & 63]);
    out += "==";
  } else if (rest == 2) {
    const uint32_t v = (static_cast<unsigned char>(bytes[i]) << 16) |
                       (static_cast<unsigned char>(bytes[i + 1]) << 8);
    out.push_back(kAlphabet[(v >> 18) & 63]);
    out.push_back(kAlphabet[(v >> 12) & 63]);
    out.push_back(kAlphabet[(v >> 6) & 63]);
    out += "=";
  }
  return out;
}

nlohmann::json RequestToJson(const GenerationRequest& request,
                             bool base64_audio) {
  nlohmann::json audio = nlohmann::json::array();
  for (const auto& ref : request.audio_refs) {
    if (base64_audio) {
      std::ifstream in(ref, std::ios::binary);
      if (!in) throw BackendError("cannot read audio '" + ref + "'", false);
      std::ostringstream buf;
      buf << in.rdbuf();
      audio.push_back(Base64Encode(buf.str()));
    } else {
      audio.push_back(ref);
    }
  }
  return {{"audio", audio},
          {"prompt", request.prompt},
          {"params",
           {{"max_new_tokens", request.params.max_new_tokens},
            {"temperature", request.params.temperature},
            {"seed", request.params.seed}}}};
}

std::string TextFromReply(const std::string& body, const char* who) {
  nlohmann::json reply;
  try {
    reply = nlohmann::json::parse(body);
  } catch (const nlohmann::json::exception&) {
    throw BackendError(std::string(who) + ": malformed reply", false);
  }
  if (!reply.contains("text") || !reply["text"].is_string() ||
      reply["text"].get<std::string>().empty()) {
    throw BackendError(std::string(who) + ": reply carries no text", false);
  }
  return reply["text"].get<std::string>();
}

int ParamInt(const BackendParams& params, const std::string& key, int dflt) {
  const auto it = params.find(key);
  return it == params.end() ? dflt : std::stoi(it->second);
}

double ParamReal(const BackendParams& params, const std::string& key,
                 double dflt) {
  const auto it = params.find(key);
  return it == params.end() ? dflt : std::stod(it->second);
}

std::string ParamStr(const BackendParams& params, const std::string& key,
                     const std::string& dflt) {
  const auto it = params.find(key);
  return it == params.end() ? dflt : it->second;
}

}  // namespace

// ---------------------------------------------------------------------------
// Oracle
// ---------------------------------------------------------------------------

std::string OracleAnswer(Task task, const TruthValue& truth, double sigma,
                         uint64_t seed) {
  Rng rng(seed);
  switch (task) {
    case Task::kMos: {
      const double value = sigma == 0.0
                               ? std::get<double>(truth)
                               : std::get<double>(truth) + rng.Gaussian(0, sigma);
      return FormatOneDecimal(Clamp(value, kMosMin, kMosMax));
    }
    case Task::kSim: {
      const double value = sigma == 0.0
                               ? std::get<double>(truth)
                               : std::get<double>(truth) + rng.Gaussian(0, sigma);
      return FormatOneDecimal(Clamp(value, kSimMin, kSimMax));
    }
    case Task::kAb: {
      const auto& t = std::get<AbTruth>(truth);
      const double flip_prob = std::min(sigma, 0.5);
      AbChoice answer = t.better;
      if (flip_prob > 0.0 && rng.Uniform01() < flip_prob) {
        answer = answer == AbChoice::kA ? AbChoice::kB : AbChoice::kA;
      }
      return answer == AbChoice::kA ? "The former" : "The latter";
    }
    case Task::kDesc:
      return std::get<QualityDescription>(truth).text;
  }
  throw Error("unknown task");
}

OracleBackend::OracleBackend(double sigma,
                             std::span<const TaskExample> examples,
                             int capacity)
    : sigma_(sigma), capacity_(capacity) {
  if (sigma < 0.0) throw Error("oracle: sigma must be >= 0");
  for (const auto& ex : examples) {
    truths_[KeyFor(ex.audio_refs)] = {ex.task, ex.truth};
  }
}

std::string OracleBackend::KeyFor(std::span<const std::string> audio_refs) {
  std::string key;
  for (size_t i = 0; i < audio_refs.size(); ++i) {
    if (i) key += '|';
    key += audio_refs[i];
  }
  return key;
}

uint64_t OracleBackend::NoiseSeed(uint64_t request_seed,
                                  const std::string& key,
                                  const std::string& prompt) {
  return MixSeed(SubstreamSeed(request_seed, "oracle-noise"),
                 Fnv1a(key + "\x1f" + prompt));
}

std::string OracleBackend::Generate(const GenerationRequest& request) {
  const std::string key = KeyFor(request.audio_refs);
  const auto it = truths_.find(key);
  if (it == truths_.end()) {
    throw BackendError("oracle: no truth for audio '" + key + "'", false);
  }
  const uint64_t seed = NoiseSeed(request.params.seed, key, request.prompt);
  return OracleAnswer(it->second.first, it->second.second, sigma_, seed);
}

// ---------------------------------------------------------------------------
// HTTP backend
// ---------------------------------------------------------------------------

HttpBackend::HttpBackend(Options options) : options_(std::move(options)) {
  SplitEndpoint(options_.endpoint, host_, path_);
}

std::string HttpBackend::Generate(const GenerationRequest& request) {
  httplib::Client client(host_);
  client.set_connection_timeout(0, options_.timeout_ms * 1000);
  client.set_read_timeout(options_.timeout_ms / 1000,
                          (options_.timeout_ms % 1000) * 1000);
  httplib::Headers headers;
  if (const char* token = std::getenv("SQA_BACKEND_TOKEN")) {
    headers.emplace("Authorization", std::string("Bearer ") + token);
  }
  const std::string body =
      RequestToJson(request, options_.base64_audio).dump();
  auto res = client.Post(path_, headers, body, "application/json");
  if (!res) {
    throw BackendError("http backend unreachable: " + options_.endpoint, true);
  }
  if (res->status >= 500) {
    throw BackendError("http backend error " + std::to_string(res->status),
                       true);
  }
  if (res->status != 200) {
    throw BackendError("http backend rejected request with status " +
                           std::to_string(res->status),
                       false);
  }
  return TextFromReply(res->body, "http backend");
}

// ---------------------------------------------------------------------------
// Subprocess backend
// ---------------------------------------------------------------------------

std::string SubprocessBackend::Generate(const GenerationRequest& request) {
  // Request goes through a temp file; popen pipes are unidirectional.
  const std::string req_path =
      (std::filesystem::temp_directory_path() /
       ("sqa_req_" + std::to_string(Fnv1a(command_)) + "_" +
        std::to_string(
            std::hash<std::thread::id>{}(std::this_thread::get_id())) +
        ".json"))
          .string();
  {
    std::ofstream out(req_path, std::ios::binary);
    if (!out) throw BackendError("cannot write subprocess request", false);
    out << RequestToJson(request, /*base64_audio=*/false).dump() << "\n";
  }
  const std::string cmd = command_ + " < " + req_path;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) {
    std::filesystem::remove(req_path);
    throw BackendError("cannot start subprocess '" + command_ + "'", true);
  }
  std::string output;
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof(buf), pipe)) > 0) {
    output.append(buf, n);
  }
  const int status = pclose(pipe);
  std::filesystem::remove(req_path);
  if (status != 0) {
    throw BackendError("subprocess exited with status " +
                           std::to_string(status),
                       true);
  }
  return TextFromReply(output, "subprocess backend");
}

// ---------------------------------------------------------------------------
// Retry and registry
// ---------------------------------------------------------------------------

std::string GenerateWithRetry(Backend& backend,
                              const GenerationRequest& request,
                              const RetryPolicy& policy) {
  int backoff_ms = policy.initial_backoff_ms;
  for (int attempt = 1;; ++attempt) {
    try {
      return backend.Generate(request);
    } catch (const BackendError& e) {
      if (!e.retryable() || attempt >= policy.max_attempts) throw;
      std::this_thread::sleep_for(std::chrono::milliseconds(backoff_ms));
      backoff_ms *= 2;
    }
  }
}

std::unique_ptr<Backend> MakeBackend(
    const std::string& name, const BackendParams& params,
    std::span<const TaskExample> examples_for_oracle) {
  if (name == "mock") {
    return std::make_unique<MockBackend>(ParamStr(params, "fixed_text", "3.0"),
                                         ParamInt(params, "capacity", 8));
  }
  if (name == "oracle") {
    return std::make_unique<OracleBackend>(ParamReal(params, "sigma", 0.0),
                                           examples_for_oracle,
                                           ParamInt(params, "capacity", 8));
  }
  if (name == "http") {
    HttpBackend::Options options;
    options.endpoint = ParamStr(params, "endpoint", "");
    if (options.endpoint.empty()) {
      throw Error("http backend needs an 'endpoint' param");
    }
    options.base64_audio = ParamStr(params, "audio_mode", "path") == "base64";
    options.timeout_ms = ParamInt(params, "timeout_ms", 30000);
    options.capacity = ParamInt(params, "capacity", 4);
    return std::make_unique<HttpBackend>(std::move(options));
  }
  if (name == "subprocess") {
    const std::string command = ParamStr(params, "command", "");
    if (command.empty()) {
      throw Error("subprocess backend needs a 'command' param");
    }
    return std::make_unique<SubprocessBackend>(command,
                                               ParamInt(params, "capacity", 1));
  }
  throw Error("unknown backend '" + name + "'");
}

// ---------------------------------------------------------------------------
// Judges
// ---------------------------------------------------------------------------

JudgeOutcome JudgeDescription(const JudgeInput& input,
                              DescriptionJudge& judge) {
  return judge.Judge(input);
}

JudgeOutcome BinMatchJudge::Judge(const JudgeInput& input) {
  const std::pair<Dim, double> scores[] = {
      {Dim::kNoisiness, input.dims.noisiness},
      {Dim::kDistortion, input.dims.distortion},
      {Dim::kDiscontinuity, input.dims.discontinuity},
      {Dim::kOverall, input.dims.overall},
  };
  int matched = 0;
  for (const auto& [dim, score] : scores) {
    const Bin& bin = bins_.BinFor(dim, score);
    for (const auto& phrase : bin.phrases) {
      if (input.description.find(phrase) != std::string::npos) {
        ++matched;
        break;
      }
    }
  }
  JudgeOutcome outcome;
  outcome.item_id = input.item_id;
  outcome.verdict.item_id = input.item_id;
  outcome.verdict.score = static_cast<double>(matched) / 4.0;
  outcome.verdict.rationale =
      "matched " + std::to_string(matched) + " of 4 dimensions";
  return outcome;
}

JudgeOutcome ConstantJudge::Judge(const JudgeInput& input) {
  JudgeOutcome outcome;
  outcome.item_id = input.item_id;
  outcome.verdict.item_id = input.item_id;
  outcome.verdict.score = score_;
  outcome.verdict.rationale = "constant";
  return outcome;
}

HttpTextClient::HttpTextClient(std::string endpoint, int timeout_ms)
    : timeout_ms_(timeout_ms) {
  SplitEndpoint(endpoint, host_, path_);
}

std::string HttpTextClient::Complete(const std::string& prompt) {
  httplib::Client client(host_);
  client.set_read_timeout(timeout_ms_ / 1000, (timeout_ms_ % 1000) * 1000);
  httplib::Headers headers;
  if (const char* token = std::getenv("SQA_JUDGE_TOKEN")) {
    headers.emplace("Authorization", std::string("Bearer ") + token);
  }
  const nlohmann::json body{{"prompt", prompt}};
  auto res = client.Post(path_, headers, body.dump(), "application/json");
  if (!res) throw BackendError("judge endpoint unreachable", true);
  if (res->status >= 500) {
    throw BackendError("judge error " + std::to_string(res->status), true);
  }
  if (res->status != 200) {
    throw BackendError("judge rejected request with status " +
                           std::to_string(res->status),
                       false);
  }
  return TextFromReply(res->body, "judge");
}

TextModelJudge::TextModelJudge(std::shared_ptr<TextCompletionClient> client,
                               std::string prompt_template)
    : client_(std::move(client)), template_(std::move(prompt_template)) {
  if (!client_) throw Error("text-model judge needs a completion client");
}

std::string TextModelJudge::DefaultTemplate() {
  return std::string(DefaultJudgePromptTemplate());
}

std::string TextModelJudge::RenderJudgePrompt(const JudgeInput& input) const {
  std::string prompt = template_;
  const std::pair<std::string, std::string> subs[] = {
      {"{noisiness}", FormatOneDecimal(input.dims.noisiness)},
      {"{distortion}", FormatOneDecimal(input.dims.distortion)},
      {"{discontinuity}", FormatOneDecimal(input.dims.discontinuity)},
      {"{overall}", FormatOneDecimal(input.dims.overall)},
      {"{description}", input.description},
  };
  for (const auto& [needle, replacement] : subs) {
    size_t pos = 0;
    while ((pos = prompt.find(needle, pos)) != std::string::npos) {
      prompt.replace(pos, needle.size(), replacement);
      pos += replacement.size();
    }
  }
  return prompt;
}

JudgeOutcome TextModelJudge::Judge(const JudgeInput& input) {
  const std::string prompt = RenderJudgePrompt(input);
  JudgeOutcome outcome;
  outcome.item_id = input.item_id;
  outcome.verdict.item_id = input.item_id;
  // One retry on an unparseable or out-of-range reply (or a retryable
  // transport failure); then the item is marked failed.
  std::string last_error;
  for (int attempt = 0; attempt < 2; ++attempt) {
    std::string reply;
    try {
      reply = client_->Complete(prompt);
    } catch (const BackendError& e) {
      if (!e.retryable()) throw;
      last_error = e.what();
      continue;
    }
    const auto parsed = ParseScore01(reply);
    if (parsed) {
      outcome.verdict.score = *parsed;
      outcome.verdict.rationale = reply;
      return outcome;
    }
    last_error = "unparseable judge reply: " + reply;
  }
  outcome.failed = true;
  outcome.verdict.rationale = last_error;
  return outcome;
}

std::unique_ptr<DescriptionJudge> MakeJudge(const std::string& name,
                                            const BackendParams& params) {
  if (name == "binmatch") {
    const std::string table = ParamStr(params, "bin_table", "");
    return std::make_unique<BinMatchJudge>(
        table.empty() ? BinTable::Default() : BinTable::Load(table));
  }
  if (name == "constant") {
    return std::make_unique<ConstantJudge>(ParamReal(params, "score", 1.0));
  }
  if (name == "http") {
    const std::string endpoint = ParamStr(params, "endpoint", "");
    if (endpoint.empty()) throw Error("http judge needs an 'endpoint' param");
    auto client = std::make_shared<HttpTextClient>(
        endpoint, ParamInt(params, "timeout_ms", 30000));
    const std::string template_file = ParamStr(params, "template_file", "");
    std::string tmpl = TextModelJudge::DefaultTemplate();
    if (!template_file.empty()) {
      std::ifstream in(template_file, std::ios::binary);
      if (!in) throw Error("cannot open judge template '" + template_file + "'");
      std::ostringstream buf;
      buf << in.rdbuf();
      tmpl = buf.str();
    }
    return std::make_unique<TextModelJudge>(std::move(client), std::move(tmpl));
  }
  throw Error("unknown judge '" + name + "'");
}

}  // namespace sqa
