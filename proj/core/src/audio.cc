// core/src/audio.cc

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

#include "sqa/audio.h"

#include <cmath>
#include <cstring>
#include <fstream>

#include "sqa/error.h"

namespace sqa {

namespace {

uint32_t ReadU32(const unsigned char* p) {
  return static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
         (static_cast<uint32_t>(p[2]) << 16) |
         (static_cast<uint32_t>(p[3]) << 24);
}

uint16_t ReadU16(const unsigned char* p) {
  return static_cast<uint16_t>(p[0] | (p[1] << 8));
}

void PutU32(std::string& s, uint32_t v) {
  s.push_back(static_cast<char>(v & 0xff));
  s.push_back(static_cast<char>((v >> 8) & 0xff));
  s.push_back(static_cast<char>((v >> 16) & 0xff));
  s.push_back(static_cast<char>((v >> 24) & 0xff));
}

void PutU16(std::string& s, uint16_t v) {
  s.push_back(static_cast<char>(v & 0xff));
  s.push_back(static_cast<char>((v >> 8) & 0xff));
}

}  // namespace

WaveData ReadWav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open wav '" + path.string() + "'");
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
  if (bytes.size() < 12 || std::memcmp(p, "RIFF", 4) != 0 ||
      std::memcmp(p + 8, "WAVE", 4) != 0) {
    throw Error("not a RIFF/WAVE file: '" + path.string() + "'");
  }

  WaveData wave;
  bool have_fmt = false;
  size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const char* tag = bytes.data() + pos;
    const uint32_t chunk_size = ReadU32(p + pos + 4);
    const size_t body = pos + 8;
    if (body + chunk_size > bytes.size()) {
      throw Error("truncated wav chunk in '" + path.string() + "'");
    }
    if (std::memcmp(tag, "fmt ", 4) == 0) {
      if (chunk_size < 16) throw Error("bad fmt chunk in '" + path.string() + "'");
      const uint16_t format = ReadU16(p + body);
      const uint16_t channels = ReadU16(p + body + 2);
      const uint32_t rate = ReadU32(p + body + 4);
      const uint16_t bits = ReadU16(p + body + 14);
      if (format != 1 || bits != 16) {
        throw Error("unsupported wav encoding in '" + path.string() +
                    "' (need 16-bit PCM)");
      }
      if (channels == 0 || rate == 0) {
        throw Error("bad fmt chunk in '" + path.string() + "'");
      }
      wave.channels = channels;
      wave.sample_rate = static_cast<int>(rate);
      have_fmt = true;
    } else if (std::memcmp(tag, "data", 4) == 0) {
      if (!have_fmt) throw Error("wav data before fmt in '" + path.string() + "'");
      wave.samples.resize(chunk_size / 2);
      for (size_t i = 0; i < wave.samples.size(); ++i) {
        wave.samples[i] =
            static_cast<int16_t>(ReadU16(p + body + 2 * i));
      }
      return wave;
    }
    pos = body + chunk_size + (chunk_size & 1);  // chunks are word-aligned
  }
  throw Error("no data chunk in '" + path.string() + "'");
}

void WriteWav(const std::filesystem::path& path, const WaveData& wave) {
  if (wave.sample_rate <= 0 || wave.channels <= 0) {
    throw Error("cannot write wav with unset format");
  }
  const uint32_t data_bytes = static_cast<uint32_t>(wave.samples.size() * 2);
  std::string out;
  out.reserve(44 + data_bytes);
  out += "RIFF";
  PutU32(out, 36 + data_bytes);
  out += "WAVEfmt ";
  PutU32(out, 16);
  PutU16(out, 1);  // PCM
  PutU16(out, static_cast<uint16_t>(wave.channels));
  PutU32(out, static_cast<uint32_t>(wave.sample_rate));
  const uint32_t byte_rate = wave.sample_rate * wave.channels * 2;
  PutU32(out, byte_rate);
  PutU16(out, static_cast<uint16_t>(wave.channels * 2));  // block align
  PutU16(out, 16);
  out += "data";
  PutU32(out, data_bytes);
  for (int16_t s : wave.samples) {
    PutU16(out, static_cast<uint16_t>(s));
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write wav '" + path.string() + "'");
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
}

WaveData Resample(const WaveData& wave, int target_rate) {
  if (target_rate <= 0) throw Error("bad target sample rate");
  if (wave.sample_rate == target_rate) return wave;
  if (wave.frames() == 0) {
    WaveData out = wave;
    out.sample_rate = target_rate;
    return out;
  }
  WaveData out;
  out.sample_rate = target_rate;
  out.channels = wave.channels;
  const size_t in_frames = wave.frames();
  const auto out_frames = static_cast<size_t>(std::llround(
      static_cast<double>(in_frames) * target_rate / wave.sample_rate));
  out.samples.resize(out_frames * wave.channels);
  const double step =
      static_cast<double>(wave.sample_rate) / static_cast<double>(target_rate);
  for (size_t i = 0; i < out_frames; ++i) {
    const double src = static_cast<double>(i) * step;
    const auto i0 = static_cast<size_t>(src);
    const size_t i1 = std::min(i0 + 1, in_frames - 1);
    const double frac = src - static_cast<double>(i0);
    for (int c = 0; c < wave.channels; ++c) {
      const double a = wave.samples[std::min(i0, in_frames - 1) * wave.channels + c];
      const double b = wave.samples[i1 * wave.channels + c];
      const double v = a + (b - a) * frac;
      out.samples[i * wave.channels + c] =
          static_cast<int16_t>(std::lround(std::clamp(v, -32768.0, 32767.0)));
    }
  }
  return out;
}

}  // namespace sqa
