// core/src/default_data.cc

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

#include "default_data.h"

namespace sqa {

std::string_view DefaultPromptsJson() {
  static constexpr std::string_view kJson = R"json({
  "prompts": [
    {
      "task": "MOS",
      "variants": [
        "Please listen to the speech sample and rate its overall quality on a scale of 1 to 5, according to {Dataset} standards. Reply with a single number.",
        "How would you score the quality of this audio on a scale from 1 to 5, according to {Dataset} standards? Give one number with one decimal place.",
        "Evaluate the mean opinion score of the given speech on a scale of 1 to 5, according to {Dataset} standards. Answer with the score only."
      ]
    },
    {
      "task": "SIM",
      "variants": [
        "Listen to the two speech samples and rate how similar the two speakers sound on a scale of 1 to 6, with precision to one decimal place. Reply with a single number.",
        "On a scale from 1 to 6, how similar are the voices of the speakers in these two recordings? Give one number with one decimal place.",
        "Compare the speakers of the two audio clips and score their similarity from 1 to 6, to one decimal place. Answer with the score only."
      ]
    },
    {
      "task": "AB",
      "variants": [
        "Listen to the two speech samples, which share the same text. Which one has better quality? Answer 'The former' or 'The latter'.",
        "Both recordings contain the same sentence. Decide which one sounds better and reply 'The former' or 'The latter'.",
        "Compare the quality of the two given speech clips and state whether the former or the latter is better."
      ]
    },
    {
      "task": "DESC",
      "variants": [
        "Please evaluate the speech sample, describing its noisiness, distortion, discontinuity, and overall quality in natural language.",
        "Assess the given audio recording from the perspectives of background noise, distortion, discontinuity, and overall quality, and answer with a short description.",
        "Describe the quality of this speech clip, covering noise, distortion, continuity, and the overall impression."
      ]
    }
  ]
}
)json";
  return kJson;
}

std::string_view DefaultBinTableJson() {
  static constexpr std::string_view kJson = R"json({
  "dimensions": {
    "noisiness": [
      {"lo": 1.0, "hi": 1.8, "phrases": ["heavy background noise"]},
      {"lo": 1.8, "hi": 2.6, "phrases": ["background noise present"]},
      {"lo": 2.6, "hi": 3.4, "phrases": ["slight background noise"]},
      {"lo": 3.4, "hi": 4.2, "phrases": ["very little background noise"]},
      {"lo": 4.2, "hi": 5.0, "phrases": ["no background noise"]}
    ],
    "distortion": [
      {"lo": 1.0, "hi": 1.8, "phrases": ["a severe distortion"]},
      {"lo": 1.8, "hi": 2.6, "phrases": ["a noticeable distortion"]},
      {"lo": 2.6, "hi": 3.4, "phrases": ["a mild distortion"]},
      {"lo": 3.4, "hi": 4.2, "phrases": ["a faint distortion"]},
      {"lo": 4.2, "hi": 5.0, "phrases": ["no audible distortion"]}
    ],
    "discontinuity": [
      {"lo": 1.0, "hi": 1.8, "phrases": ["severely interrupted"]},
      {"lo": 1.8, "hi": 2.6, "phrases": ["frequently interrupted"]},
      {"lo": 2.6, "hi": 3.4, "phrases": ["somewhat disjointed"]},
      {"lo": 3.4, "hi": 4.2, "phrases": ["mostly continuous"]},
      {"lo": 4.2, "hi": 5.0, "phrases": ["perfectly continuous"]}
    ],
    "overall": [
      {"lo": 1.0, "hi": 1.8, "phrases": ["bad"]},
      {"lo": 1.8, "hi": 2.6, "phrases": ["poor"]},
      {"lo": 2.6, "hi": 3.4, "phrases": ["average"]},
      {"lo": 3.4, "hi": 4.2, "phrases": ["good"]},
      {"lo": 4.2, "hi": 5.0, "phrases": ["excellent"]}
    ]
  }
}
)json";
  return kJson;
}

std::string_view DefaultJudgePromptTemplate() {
  static constexpr std::string_view kText =
      R"(You are grading a natural-language quality description of a speech recording
against its ground-truth ratings. The recording was rated on four aspects,
each on a scale from 1 (worst) to 5 (best):

noisiness: {noisiness}
distortion: {distortion}
discontinuity: {discontinuity}
overall quality: {overall}

Description under evaluation:
"{description}"

Judge how well the description agrees with the four ratings. Reply with a
single correlation score between 0.0 (contradicts the ratings) and 1.0
(matches the ratings on every aspect), followed by a one-sentence rationale.
)";
  return kText;
}

}  // namespace sqa
