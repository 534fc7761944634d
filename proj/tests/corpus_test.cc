// tests/corpus_test.cc

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

#include "sqa/corpus.h"

#include <algorithm>
#include <set>

#include "doctest.h"

#include "sqa/error.h"
#include "sqa/rng.h"
#include "testutil.h"

using namespace sqa;
using namespace sqa::test;

namespace {

constexpr const char* kMosHeader = "id,audio,transcript,system_id,mos,split\n";

}  // namespace

TEST_CASE("mos manifest: empty file and header-only file load as empty") {
  TempDir dir;
  WriteFileBytes(dir.file("empty.csv"), "");
  CHECK(LoadMosManifest(dir.file("empty.csv"), Dataset::kNisqa).empty());
  WriteFileBytes(dir.file("header.csv"), kMosHeader);
  CHECK(LoadMosManifest(dir.file("header.csv"), Dataset::kNisqa).empty());
}

TEST_CASE("mos manifest: fields, optional columns and split parsing") {
  TempDir dir;
  WriteFileBytes(dir.file("m.csv"),
                 std::string(kMosHeader) +
                     "u1,wav/u1.wav,hello there,sysA,3.5,train\n"
                     "u2,wav/u2.wav,,sysB,1,test\n");
  const auto utts = LoadMosManifest(dir.file("m.csv"), Dataset::kBvcc);
  REQUIRE(utts.size() == 2);
  CHECK(utts[0].id == "u1");
  CHECK(utts[0].audio == "wav/u1.wav");
  CHECK(utts[0].transcript == "hello there");
  CHECK(utts[0].system_id == "sysA");
  CHECK(utts[0].mos == 3.5);
  CHECK(utts[0].split == Split::kTrain);
  CHECK(utts[0].dataset == Dataset::kBvcc);
  CHECK_FALSE(utts[1].transcript.has_value());
  CHECK(utts[1].mos == 1.0);
  CHECK(utts[1].split == Split::kTest);
}

TEST_CASE("mos manifest: out-of-range MOS reports the offending line") {
  TempDir dir;
  WriteFileBytes(dir.file("m.csv"), std::string(kMosHeader) +
                                        "u1,a.wav,,s1,3.0,train\n"
                                        "u2,b.wav,,s1,5.7,train\n");
  CHECK_THROWS_WITH_AS(
      (void)LoadMosManifest(dir.file("m.csv"), Dataset::kBvcc),
      doctest::Contains("line 3: out-of-range MOS 5.7"), Error);
}

TEST_CASE("mos manifest: malformed rows, bad header, missing file") {
  TempDir dir;
  WriteFileBytes(dir.file("short.csv"),
                 std::string(kMosHeader) + "u1,a.wav,3.0,train\n");
  CHECK_THROWS_WITH_AS((void)LoadMosManifest(dir.file("short.csv"), Dataset::kNisqa),
                       doctest::Contains("line 2"), Error);

  WriteFileBytes(dir.file("badnum.csv"),
                 std::string(kMosHeader) + "u1,a.wav,,s,not_a_number,train\n");
  CHECK_THROWS_WITH_AS((void)LoadMosManifest(dir.file("badnum.csv"), Dataset::kBvcc),
                       doctest::Contains("malformed MOS"), Error);

  WriteFileBytes(dir.file("badsplit.csv"),
                 std::string(kMosHeader) + "u1,a.wav,,s,3.0,dev\n");
  CHECK_THROWS_WITH_AS((void)LoadMosManifest(dir.file("badsplit.csv"), Dataset::kBvcc),
                       doctest::Contains("unknown split"), Error);

  WriteFileBytes(dir.file("badheader.csv"), "id,audio,mos\nu1,a.wav,3\n");
  CHECK_THROWS_WITH_AS((void)LoadMosManifest(dir.file("badheader.csv"), Dataset::kNisqa),
                       doctest::Contains("bad header"), Error);

  CHECK_THROWS_WITH_AS((void)LoadMosManifest(dir.file("nope.csv"), Dataset::kNisqa),
                       doctest::Contains("cannot open"), Error);
}

TEST_CASE("mos manifest: duplicate ids clash within a split only") {
  TempDir dir;
  WriteFileBytes(dir.file("dup.csv"), std::string(kMosHeader) +
                                          "u1,a.wav,,s,3.0,train\n"
                                          "u1,b.wav,,s,3.2,train\n");
  CHECK_THROWS_WITH_AS((void)LoadMosManifest(dir.file("dup.csv"), Dataset::kBvcc),
                       doctest::Contains("duplicate id"), Error);

  WriteFileBytes(dir.file("ok.csv"), std::string(kMosHeader) +
                                         "u1,a.wav,,s,3.0,train\n"
                                         "u1,b.wav,,s,3.2,test\n");
  CHECK(LoadMosManifest(dir.file("ok.csv"), Dataset::kBvcc).size() == 2);
}

TEST_CASE("mos manifest: system ids are mandatory outside NISQA") {
  TempDir dir;
  WriteFileBytes(dir.file("m.csv"),
                 std::string(kMosHeader) + "u1,a.wav,,,3.0,train\n");
  CHECK_THROWS_WITH_AS((void)LoadMosManifest(dir.file("m.csv"), Dataset::kBvcc),
                       doctest::Contains("missing system_id"), Error);
  CHECK_THROWS_WITH_AS((void)LoadMosManifest(dir.file("m.csv"), Dataset::kSomos),
                       doctest::Contains("missing system_id"), Error);
  CHECK(LoadMosManifest(dir.file("m.csv"), Dataset::kNisqa).size() == 1);
}

TEST_CASE("mos manifest round trip preserves every field bit-exactly") {
  TempDir dir;
  Rng rng(42);
  std::vector<RatedUtterance> utts;
  for (int i = 0; i < 200; ++i) {
    RatedUtterance u;
    u.id = "utt" + std::to_string(i);
    u.audio = "wav/" + u.id + ".wav";
    if (i % 3 == 0) u.transcript = "text, with \"quotes\" and\nnewline";
    if (i % 2 == 0) u.system_id = "sys" + std::to_string(i % 7);
    u.mos = kMosMin + (kMosMax - kMosMin) * rng.Uniform01();  // full precision
    u.dataset = Dataset::kNisqa;
    u.split = i % 5 == 0 ? Split::kTest : Split::kTrain;
    utts.push_back(std::move(u));
  }
  WriteMosManifest(dir.file("rt.csv"), utts);
  const auto loaded = LoadMosManifest(dir.file("rt.csv"), Dataset::kNisqa);
  REQUIRE(loaded.size() == utts.size());
  for (size_t i = 0; i < utts.size(); ++i) {
    CHECK(loaded[i].id == utts[i].id);
    CHECK(loaded[i].audio == utts[i].audio);
    CHECK(loaded[i].transcript == utts[i].transcript);
    CHECK(loaded[i].system_id == utts[i].system_id);
    CHECK(loaded[i].mos == utts[i].mos);  // exact double round trip
    CHECK(loaded[i].split == utts[i].split);
  }

  // Writing the reloaded collection again yields identical bytes.
  WriteMosManifest(dir.file("rt2.csv"), loaded);
  CHECK(ReadFileBytes(dir.file("rt.csv")) == ReadFileBytes(dir.file("rt2.csv")));
}

TEST_CASE("sim manifest: pass-through, degenerate pair, range, scale") {
  TempDir dir;
  WriteFileBytes(dir.file("s.csv"),
                 "id,audio_a,audio_b,sim,split\np1,a.wav,b.wav,3.4,train\n");
  const auto pairs = LoadSimManifest(dir.file("s.csv"));
  REQUIRE(pairs.size() == 1);
  CHECK(pairs[0].sim == 3.4);
  CHECK(pairs[0].audio_a == "a.wav");
  CHECK(pairs[0].audio_b == "b.wav");

  WriteFileBytes(dir.file("deg.csv"),
                 "id,audio_a,audio_b,sim,split\np1,a.wav,a.wav,5.0,train\n");
  CHECK_THROWS_WITH_AS((void)LoadSimManifest(dir.file("deg.csv")),
                       doctest::Contains("degenerate pair"), Error);

  WriteFileBytes(dir.file("range.csv"),
                 "id,audio_a,audio_b,sim,split\np1,a.wav,b.wav,6.3,train\n");
  CHECK_THROWS_WITH_AS((void)LoadSimManifest(dir.file("range.csv")),
                       doctest::Contains("out-of-range SIM"), Error);

  // Corpus-scale manifest: 22389 + 2532 original rows, all train.
  std::string big = "id,audio_a,audio_b,sim,split\n";
  Rng rng(7);
  for (int i = 0; i < 22389 + 2532; ++i) {
    big += "p" + std::to_string(i) + ",a" + std::to_string(i) + ".wav,b" +
           std::to_string(i) + ".wav," +
           std::to_string(1 + rng.UniformIndex(5)) + ",train\n";
  }
  WriteFileBytes(dir.file("big.csv"), big);
  CHECK(LoadSimManifest(dir.file("big.csv")).size() == 24921);
}

namespace {

std::vector<SimPair> MakeTrainPairs(int n) {
  std::vector<SimPair> pairs;
  pairs.reserve(n);
  for (int i = 0; i < n; ++i) {
    SimPair p;
    p.id = "p" + std::to_string(i);
    p.audio_a = "a" + std::to_string(i) + ".wav";
    p.audio_b = "b" + std::to_string(i) + ".wav";
    p.sim = 3.0;
    p.split = Split::kTrain;
    pairs.push_back(std::move(p));
  }
  return pairs;
}

std::multiset<std::string> Ids(std::span<const SimPair> pairs) {
  std::multiset<std::string> ids;
  for (const auto& p : pairs) ids.insert(p.id);
  return ids;
}

}  // namespace

TEST_CASE("resplit: exact small case, determinism, split tags") {
  const auto pairs = MakeTrainPairs(10);
  const auto split = ResplitVoxsim(pairs, 0.9, 7);
  CHECK(split.train.size() == 9);
  CHECK(split.valid.size() == 1);
  for (const auto& p : split.train) CHECK(p.split == Split::kTrain);
  for (const auto& p : split.valid) CHECK(p.split == Split::kValid);

  const auto again = ResplitVoxsim(pairs, 0.9, 7);
  CHECK(Ids(split.train) == Ids(again.train));
  CHECK(Ids(split.valid) == Ids(again.valid));

  const auto other_seed = ResplitVoxsim(pairs, 0.9, 8);
  CHECK(other_seed.train.size() == 9);  // size is seed-independent
}

TEST_CASE("resplit is a partition for arbitrary ratios and seeds") {
  Rng rng(11);
  const auto pairs = MakeTrainPairs(137);
  auto all_ids = Ids(pairs);
  for (int iter = 0; iter < 25; ++iter) {
    const double ratio = 0.05 + 0.9 * rng.Uniform01();
    const uint64_t seed = rng.Next();
    const auto split = ResplitVoxsim(pairs, ratio, seed);
    CHECK(split.train.size() + split.valid.size() == pairs.size());
    auto merged = Ids(split.train);
    for (const auto& p : split.valid) merged.insert(p.id);
    CHECK(merged == all_ids);
    // Disjoint: no id appears on both sides.
    const auto train_ids = Ids(split.train);
    for (const auto& p : split.valid) {
      CHECK(train_ids.count(p.id) == 0);
    }
    // Within 1% of the requested ratio (plus rounding slack on tiny inputs).
    const double frac =
        static_cast<double>(split.train.size()) / static_cast<double>(pairs.size());
    CHECK(std::abs(frac - ratio) <= 0.01 + 0.5 / pairs.size());
  }
}

TEST_CASE("resplit at corpus scale lands in the published band") {
  const auto pairs = MakeTrainPairs(24921);
  const auto split = ResplitVoxsim(pairs, 0.9, 123);
  // Arithmetic reference: 24921 * 0.9 = 22428.9, +/- 1%.
  CHECK(split.train.size() >= 22180);
  CHECK(split.train.size() <= 22680);
  CHECK(split.train.size() == 22429);  // round(0.9 * N)
  CHECK(split.valid.size() == 24921 - 22429);
}

TEST_CASE("resplit rejects bad inputs") {
  CHECK_THROWS_WITH_AS((void)ResplitVoxsim({}, 0.9, 1),
                       doctest::Contains("empty input"), Error);
  const auto pairs = MakeTrainPairs(5);
  CHECK_THROWS_WITH_AS((void)ResplitVoxsim(pairs, 0.0, 1),
                       doctest::Contains("ratio"), Error);
  CHECK_THROWS_WITH_AS((void)ResplitVoxsim(pairs, 1.0, 1),
                       doctest::Contains("ratio"), Error);
  auto tainted = pairs;
  tainted[2].split = Split::kTest;
  CHECK_THROWS_WITH_AS((void)ResplitVoxsim(tainted, 0.9, 1),
                       doctest::Contains("not in the train split"), Error);
}

TEST_CASE("group_by_system partitions and rejects unlabeled data") {
  auto utts = SyntheticUtterances(3, Dataset::kSomos, Split::kTest, 3, 1);
  auto groups = GroupBySystem(utts);
  REQUIRE(groups.size() == 1);
  CHECK(groups.begin()->second.size() == 3);

  utts = SyntheticUtterances(40, Dataset::kSomos, Split::kTest, 4, 2);
  groups = GroupBySystem(utts);
  CHECK(groups.size() == 2);
  size_t total = 0;
  for (const auto& [id, members] : groups) {
    CHECK(!members.empty());
    total += members.size();
  }
  CHECK(total == utts.size());

  const auto nisqa = SyntheticUtterances(5, Dataset::kNisqa, Split::kTest, 5);
  CHECK_THROWS_WITH_AS((void)GroupBySystem(nisqa),
                       doctest::Contains("no system id"), Error);
}

TEST_CASE("group_by_system count matches an independent manifest scan") {
  TempDir dir;
  const auto utts =
      SyntheticUtterances(300, Dataset::kSomos, Split::kTest, 99, 11);
  WriteMosManifest(dir.file("somos_test.csv"), utts);

  // Independent scan: distinct 4th column values in the raw file.
  std::set<std::string> distinct;
  std::istringstream in(ReadFileBytes(dir.file("somos_test.csv")));
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    size_t pos = 0;
    for (int field = 0; field < 3; ++field) pos = line.find(',', pos) + 1;
    distinct.insert(line.substr(pos, line.find(',', pos) - pos));
  }

  const auto loaded = LoadMosManifest(dir.file("somos_test.csv"), Dataset::kSomos);
  CHECK(GroupBySystem(loaded).size() == distinct.size());
}

TEST_CASE("dimension manifest: load, validate, round trip") {
  TempDir dir;
  WriteFileBytes(dir.file("d.csv"),
                 "utterance_id,noisiness,distortion,discontinuity,overall\n"
                 "u1,2.5,2.0,3.0,3.0\n"
                 "u2,5,5,5,5\n");
  const auto dims = LoadDimensionManifest(dir.file("d.csv"));
  REQUIRE(dims.size() == 2);
  CHECK(dims[0].noisiness == 2.5);
  CHECK(dims[0].overall == 3.0);

  WriteDimensionManifest(dir.file("d2.csv"), dims);
  const auto reloaded = LoadDimensionManifest(dir.file("d2.csv"));
  REQUIRE(reloaded.size() == 2);
  CHECK(reloaded[1].distortion == 5.0);

  WriteFileBytes(dir.file("bad.csv"),
                 "utterance_id,noisiness,distortion,discontinuity,overall\n"
                 "u1,0.5,2.0,3.0,3.0\n");
  CHECK_THROWS_WITH_AS((void)LoadDimensionManifest(dir.file("bad.csv")),
                       doctest::Contains("out-of-range dimension"), Error);
}
