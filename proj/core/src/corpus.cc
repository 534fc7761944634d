// core/src/corpus.cc

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

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <utility>

#include "csv.h"
#include "numfmt.h"
#include "sqa/error.h"
#include "sqa/rng.h"

namespace sqa {

namespace {

std::string Where(const std::filesystem::path& path, int line) {
  return path.string() + ": line " + std::to_string(line) + ": ";
}

double ParseRealField(const std::filesystem::path& path, int line,
                      const std::string& field, const char* what) {
  double value = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || field.empty()) {
    throw Error(Where(path, line) + "malformed " + what + " '" + field + "'");
  }
  return value;
}

void ExpectHeader(const std::filesystem::path& path,
                  const std::vector<csv::Row>& rows, const char* expected) {
  if (rows.empty()) {
    // An empty file has no header either; treat it as an empty manifest.
    return;
  }
  std::string got;
  for (size_t i = 0; i < rows[0].fields.size(); ++i) {
    if (i) got += ',';
    got += rows[0].fields[i];
  }
  if (got != expected) {
    throw Error(path.string() + ": bad header '" + got + "', expected '" +
                expected + "'");
  }
}

void ExpectFieldCount(const std::filesystem::path& path, const csv::Row& row,
                      size_t n) {
  if (row.fields.size() != n) {
    throw Error(Where(path, row.line) + "malformed row: expected " +
                std::to_string(n) + " fields, got " +
                std::to_string(row.fields.size()));
  }
}

}  // namespace

std::vector<RatedUtterance> LoadMosManifest(const std::filesystem::path& path,
                                            Dataset dataset) {
  const auto rows = csv::ReadFile(path);
  ExpectHeader(path, rows, "id,audio,transcript,system_id,mos,split");

  std::vector<RatedUtterance> utts;
  std::set<std::pair<Split, std::string>> seen;
  for (size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    ExpectFieldCount(path, row, 6);
    RatedUtterance u;
    u.dataset = dataset;
    u.id = row.fields[0];
    u.audio = row.fields[1];
    if (u.id.empty()) throw Error(Where(path, row.line) + "empty id");
    if (u.audio.empty())
      throw Error(Where(path, row.line) + "empty audio reference");
    if (!row.fields[2].empty()) u.transcript = row.fields[2];
    if (!row.fields[3].empty()) u.system_id = row.fields[3];
    u.mos = ParseRealField(path, row.line, row.fields[4], "MOS");
    if (u.mos < kMosMin || u.mos > kMosMax) {
      throw Error(Where(path, row.line) + "out-of-range MOS " +
                  FormatReal(u.mos));
    }
    const auto split = ParseSplitName(row.fields[5]);
    if (!split) {
      throw Error(Where(path, row.line) + "unknown split '" + row.fields[5] +
                  "'");
    }
    u.split = *split;
    if (!u.system_id && dataset != Dataset::kNisqa) {
      throw Error(Where(path, row.line) + "missing system_id for " +
                  std::string(DatasetName(dataset)) + " record '" + u.id +
                  "'");
    }
    if (!seen.insert({u.split, u.id}).second) {
      throw Error(Where(path, row.line) + "duplicate id '" + u.id +
                  "' in split " + std::string(SplitName(u.split)));
    }
    utts.push_back(std::move(u));
  }
  return utts;
}

void WriteMosManifest(const std::filesystem::path& path,
                      std::span<const RatedUtterance> utts) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write manifest '" + path.string() + "'");
  out << "id,audio,transcript,system_id,mos,split\n";
  for (const auto& u : utts) {
    const std::string fields[] = {
        u.id,
        u.audio,
        u.transcript.value_or(""),
        u.system_id.value_or(""),
        FormatReal(u.mos),
        std::string(SplitName(u.split)),
    };
    csv::WriteRow(out, fields);
  }
}

std::vector<SimPair> LoadSimManifest(const std::filesystem::path& path) {
  const auto rows = csv::ReadFile(path);
  ExpectHeader(path, rows, "id,audio_a,audio_b,sim,split");

  std::vector<SimPair> pairs;
  std::set<std::pair<Split, std::string>> seen;
  for (size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    ExpectFieldCount(path, row, 5);
    SimPair p;
    p.id = row.fields[0];
    p.audio_a = row.fields[1];
    p.audio_b = row.fields[2];
    if (p.id.empty()) throw Error(Where(path, row.line) + "empty id");
    if (p.audio_a.empty() || p.audio_b.empty()) {
      throw Error(Where(path, row.line) + "empty audio reference");
    }
    if (p.audio_a == p.audio_b) {
      throw Error(Where(path, row.line) + "degenerate pair: audio_a equals "
                  "audio_b ('" + p.audio_a + "')");
    }
    p.sim = ParseRealField(path, row.line, row.fields[3], "SIM");
    if (p.sim < kSimMin || p.sim > kSimMax) {
      throw Error(Where(path, row.line) + "out-of-range SIM " +
                  FormatReal(p.sim));
    }
    const auto split = ParseSplitName(row.fields[4]);
    if (!split) {
      throw Error(Where(path, row.line) + "unknown split '" + row.fields[4] +
                  "'");
    }
    p.split = *split;
    if (!seen.insert({p.split, p.id}).second) {
      throw Error(Where(path, row.line) + "duplicate id '" + p.id +
                  "' in split " + std::string(SplitName(p.split)));
    }
    pairs.push_back(std::move(p));
  }
  return pairs;
}

void WriteSimManifest(const std::filesystem::path& path,
                      std::span<const SimPair> pairs) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write manifest '" + path.string() + "'");
  out << "id,audio_a,audio_b,sim,split\n";
  for (const auto& p : pairs) {
    const std::string fields[] = {
        p.id, p.audio_a, p.audio_b, FormatReal(p.sim),
        std::string(SplitName(p.split)),
    };
    csv::WriteRow(out, fields);
  }
}

std::vector<DimensionRating> LoadDimensionManifest(
    const std::filesystem::path& path) {
  const auto rows = csv::ReadFile(path);
  ExpectHeader(path, rows,
               "utterance_id,noisiness,distortion,discontinuity,overall");

  std::vector<DimensionRating> dims;
  std::set<std::string> seen;
  for (size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    ExpectFieldCount(path, row, 5);
    DimensionRating d;
    d.utterance_id = row.fields[0];
    if (d.utterance_id.empty()) throw Error(Where(path, row.line) + "empty id");
    d.noisiness = ParseRealField(path, row.line, row.fields[1], "noisiness");
    d.distortion = ParseRealField(path, row.line, row.fields[2], "distortion");
    d.discontinuity =
        ParseRealField(path, row.line, row.fields[3], "discontinuity");
    d.overall = ParseRealField(path, row.line, row.fields[4], "overall");
    for (double v : {d.noisiness, d.distortion, d.discontinuity, d.overall}) {
      if (v < kMosMin || v > kMosMax) {
        throw Error(Where(path, row.line) + "out-of-range dimension score " +
                    FormatReal(v));
      }
    }
    if (!seen.insert(d.utterance_id).second) {
      throw Error(Where(path, row.line) + "duplicate utterance_id '" +
                  d.utterance_id + "'");
    }
    dims.push_back(std::move(d));
  }
  return dims;
}

void WriteDimensionManifest(const std::filesystem::path& path,
                            std::span<const DimensionRating> dims) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write manifest '" + path.string() + "'");
  out << "utterance_id,noisiness,distortion,discontinuity,overall\n";
  for (const auto& d : dims) {
    const std::string fields[] = {
        d.utterance_id, FormatReal(d.noisiness), FormatReal(d.distortion),
        FormatReal(d.discontinuity), FormatReal(d.overall),
    };
    csv::WriteRow(out, fields);
  }
}

SimResplit ResplitVoxsim(std::vector<SimPair> pairs, double ratio,
                         uint64_t seed) {
  if (pairs.empty()) throw Error("resplit: empty input");
  if (!(ratio > 0.0 && ratio < 1.0)) {
    throw Error("resplit: ratio must lie in (0,1), got " + FormatReal(ratio));
  }
  for (const auto& p : pairs) {
    if (p.split != Split::kTrain) {
      throw Error("resplit: pair '" + p.id + "' is not in the train split");
    }
  }

  Rng rng(SubstreamSeed(seed, "split"));
  std::vector<size_t> order(pairs.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  rng.Shuffle(order);

  const auto cut = static_cast<size_t>(
      std::llround(ratio * static_cast<double>(pairs.size())));
  SimResplit out;
  out.train.reserve(cut);
  out.valid.reserve(pairs.size() - cut);
  for (size_t i = 0; i < order.size(); ++i) {
    SimPair p = std::move(pairs[order[i]]);
    if (i < cut) {
      p.split = Split::kTrain;
      out.train.push_back(std::move(p));
    } else {
      p.split = Split::kValid;
      out.valid.push_back(std::move(p));
    }
  }
  return out;
}

std::map<std::string, std::vector<RatedUtterance>> GroupBySystem(
    std::span<const RatedUtterance> utts) {
  std::map<std::string, std::vector<RatedUtterance>> groups;
  for (const auto& u : utts) {
    if (!u.system_id) {
      throw Error("group_by_system: utterance '" + u.id +
                  "' has no system id");
    }
    groups[*u.system_id].push_back(u);
  }
  return groups;
}

}  // namespace sqa
