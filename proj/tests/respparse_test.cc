// tests/respparse_test.cc

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

#include "sqa/respparse.h"

#include <cmath>
#include <cstdio>

#include "doctest.h"

#include "sqa/rng.h"
#include "testutil.h"

using namespace sqa;
using namespace sqa::test;

TEST_CASE("parse_mos: first number token, bounds inclusive") {
  auto r = ParseMos("The MOS score is 3.5.");
  CHECK(r.status == ParseStatus::kOk);
  CHECK(r.value == 3.5);

  r = ParseMos("1");
  CHECK(r.status == ParseStatus::kOk);
  CHECK(r.value == 1.0);

  CHECK(ParseMos("5").status == ParseStatus::kOk);
  CHECK(ParseMos("score: 6.2").status == ParseStatus::kRangeFailed);
  CHECK(ParseMos("0.99").status == ParseStatus::kRangeFailed);
  CHECK(ParseMos("no score here").status == ParseStatus::kParseFailed);
  CHECK(ParseMos("").status == ParseStatus::kParseFailed);
  CHECK(ParseMos("-3.5 is my answer").status == ParseStatus::kRangeFailed);
}

TEST_CASE("parse_mos: left-to-right, first token wins") {
  const auto r = ParseMos("between 2.0 and 4.0 I'd say 3");
  CHECK(r.status == ParseStatus::kOk);
  CHECK(r.value == 2.0);
}

TEST_CASE("parse_sim: one-decimal half-up rounding before the range check") {
  auto r = ParseSim("4.3");
  CHECK(r.status == ParseStatus::kOk);
  CHECK(r.value == 4.3);

  r = ParseSim("4.27");
  CHECK(r.status == ParseStatus::kOk);
  CHECK(r.value == 4.3);

  r = ParseSim("4.25");  // half rounds up
  CHECK(r.value == 4.3);

  r = ParseSim("4.24");
  CHECK(r.value == 4.2);

  CHECK(ParseSim("0.9").status == ParseStatus::kRangeFailed);
  CHECK(ParseSim("6.2").status == ParseStatus::kRangeFailed);
  // 6.04 rounds to 6.0, which is inside the scale.
  r = ParseSim("6.04");
  CHECK(r.status == ParseStatus::kOk);
  CHECK(r.value == 6.0);
}

TEST_CASE("scientific notation is rejected, later plain numbers still parse") {
  CHECK(ParseMos("3e2").status == ParseStatus::kParseFailed);
  CHECK(ParseMos("1E9").status == ParseStatus::kParseFailed);
  const auto r = ParseMos("maybe 1e9, but really 4.0");
  CHECK(r.status == ParseStatus::kOk);
  CHECK(r.value == 4.0);
  // 'e' not followed by digits is not an exponent.
  const auto r2 = ParseMos("3.5e");
  CHECK(r2.status == ParseStatus::kOk);
  CHECK(r2.value == 3.5);
}

TEST_CASE("parse_ab: former/latter, case-insensitive, ambiguity fails") {
  CHECK(ParseAb("The former").choice == AbChoice::kA);
  CHECK(ParseAb("The former").status == ParseStatus::kOk);
  CHECK(ParseAb("the LATTER sounds better").choice == AbChoice::kB);
  CHECK(ParseAb("both are fine").status == ParseStatus::kParseFailed);
  CHECK(ParseAb("the former, no wait, the latter").status ==
        ParseStatus::kParseFailed);
  CHECK(ParseAb("").status == ParseStatus::kParseFailed);

  // Synonyms are off by default.
  CHECK(ParseAb("the first one").status == ParseStatus::kParseFailed);
  AbParseOptions synonyms;
  synonyms.allow_first_second = true;
  CHECK(ParseAb("the first one", synonyms).choice == AbChoice::kA);
  CHECK(ParseAb("I prefer the second", synonyms).choice == AbChoice::kB);
}

TEST_CASE("parse idempotence: parsing a formatted one-decimal value is exact") {
  Rng rng(31);
  for (int iter = 0; iter < 2000; ++iter) {
    const double x = kMosMin + (kMosMax - kMosMin) * rng.Uniform01();
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.1f", x);
    double rounded;
    std::sscanf(buf, "%lf", &rounded);
    const auto r = ParseMos(buf);
    REQUIRE(r.status == ParseStatus::kOk);
    CHECK(r.value == rounded);
  }
}

TEST_CASE("parsers are total over arbitrary bytes and preserve the raw text") {
  Rng rng(17);
  for (int iter = 0; iter < 5000; ++iter) {
    std::string junk;
    const size_t len = rng.UniformIndex(24);
    for (size_t i = 0; i < len; ++i) {
      junk.push_back(static_cast<char>(rng.UniformIndex(256)));
    }
    for (Task task : {Task::kMos, Task::kSim, Task::kAb, Task::kDesc}) {
      const Prediction p = ParseResponse("item", task, junk);
      CHECK(p.raw == junk);  // raw is stored unmodified
      if (p.status == ParseStatus::kOk) {
        switch (task) {
          case Task::kMos:
            REQUIRE(p.value.has_value());
            CHECK(*p.value >= kMosMin);
            CHECK(*p.value <= kMosMax);
            break;
          case Task::kSim:
            REQUIRE(p.value.has_value());
            CHECK(*p.value >= kSimMin);
            CHECK(*p.value <= kSimMax);
            break;
          case Task::kAb:
            CHECK(p.choice.has_value());
            break;
          case Task::kDesc:
            CHECK(p.text.has_value());
            break;
        }
      }
    }
  }
}

TEST_CASE("judge score parser accepts [0,1] only") {
  CHECK(ParseScore01("0.85 because it matches") == 0.85);
  CHECK(ParseScore01("1") == 1.0);
  CHECK(ParseScore01("0") == 0.0);
  CHECK_FALSE(ParseScore01("score: 2").has_value());
  CHECK_FALSE(ParseScore01("no number").has_value());
}

TEST_CASE("prediction records survive a file round trip") {
  TempDir dir;
  std::vector<Prediction> preds;
  preds.push_back(ParseResponse("m1", Task::kMos, "I rate it 4.5"));
  preds.back().prompt_variant = 2;
  preds.back().standard = "BVCC";
  preds.push_back(ParseResponse("a1", Task::kAb, "The latter"));
  preds.push_back(ParseResponse("d1", Task::kDesc, "Sounds clean overall."));
  preds.push_back(ParseResponse("m2", Task::kMos, "unclear"));
  Prediction avg;
  avg.item_id = "m1";
  avg.task = Task::kMos;
  avg.value = 4.25;
  avg.status = ParseStatus::kOk;
  avg.averaged = true;
  preds.push_back(avg);

  WritePredictions(dir.file("p.jsonl"), preds);
  const auto loaded = ReadPredictions(dir.file("p.jsonl"));
  REQUIRE(loaded.size() == preds.size());
  CHECK(loaded[0].value == 4.5);
  CHECK(loaded[0].prompt_variant == 2);
  CHECK(loaded[0].standard == "BVCC");
  CHECK(loaded[1].choice == AbChoice::kB);
  CHECK(loaded[2].text == "Sounds clean overall.");
  CHECK(loaded[3].status == ParseStatus::kParseFailed);
  CHECK(loaded[4].averaged);
  CHECK(loaded[4].value == 4.25);
}
