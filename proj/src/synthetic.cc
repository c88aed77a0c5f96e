// Copyright 2026 The Consent Audit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "consent_audit/synthetic.h"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cmath>

#include "consent_audit/codec.h"
#include "consent_audit/sample.h"

namespace consent_audit {
namespace {

constexpr std::uint8_t kCaption = 1;
constexpr std::uint8_t kOcr = 2;
constexpr std::uint8_t kExif = 4;

constexpr std::array<const char*, 6> kNames = {"John Doe",    "ACME Images", "Jane Smith",
                                               "Studio Nord", "Lee Park",    "Rivera Photo"};

// Every template hits exactly one text pattern family; {0} = name, {1} = year.
constexpr std::array<const char*, 12> kNoticeTemplates = {
    "\xC2\xA9 {0} {1}",
    "photo copyright {1} {0}",
    "Copyright {0}",
    "copr. {1} {0}",
    "All rights reserved by {0}",
    "image (c) {1} {0}",
    "&copy; {0}",
    "licensed CC BY-NC 4.0 by {0}",
    "shared under CC BY-SA 3.0",
    "Creative Commons Attribution, {0}",
    "dedicated CC0 by {0}",
    "{0} {1} \xC2\xA9",
};

constexpr std::array<const char*, 14> kAdjectives = {
    "red",   "quiet",  "vintage", "copper", "sunny", "wooden", "modern",
    "small", "bright", "rustic",  "crisp",  "misty", "golden", "plain"};
constexpr std::array<const char*, 14> kNouns = {
    "bicycle", "lake",  "kitchen",  "wire",   "garden", "chair",   "skyline",
    "copra",   "dress", "mountain", "teapot", "harbor", "reserve", "poster"};
constexpr std::array<const char*, 6> kJoins = {"near the", "with a",  "under the",
                                               "beside a", "for the", "and the"};

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  std::uint64_t Below(std::uint64_t n) { return engine_() % n; }
  double Unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  template <typename T, std::size_t N>
  const char* Pick(const std::array<T, N>& items) {
    return items[Below(N)];
  }

 private:
  std::mt19937_64 engine_;
};

std::string Filler(Rng& rng) {
  return fmt::format("{} {} {} {} {}", rng.Pick(kAdjectives), rng.Pick(kNouns), rng.Pick(kJoins),
                     rng.Pick(kAdjectives), rng.Pick(kNouns));
}

std::string Notice(Rng& rng) {
  return fmt::format(fmt::runtime(rng.Pick(kNoticeTemplates)), rng.Pick(kNames),
                     1990 + rng.Below(36));
}

std::string BaseDomainName(std::uint64_t i) {
  if (i % 7 == 3) return fmt::format("shop{:04}.co.uk", i);
  if (i % 11 == 5) return fmt::format("img{:04}.com.au", i);
  return fmt::format("site{:04}.com", i);
}

std::string ShardName(const std::string& base, std::uint64_t shard) {
  static constexpr std::array<const char*, 6> kPrefixes = {"i",      "i-h1", "img",
                                                           "static", "cdn",  "media"};
  return shard == 0 ? base : fmt::format("{}.{}", kPrefixes[(shard - 1) % 6], base);
}

class CorpusGenerator {
 public:
  explicit CorpusGenerator(const CorpusSpec& spec) : spec_(spec), rng_(spec.seed) {
    // Channel masks, one per sample, shuffled (Fisher-Yates on our own draws).
    masks_.assign(spec.samples, 0);
    std::size_t at = 0;
    auto fill = [&](std::uint64_t count, std::uint8_t mask) {
      for (std::uint64_t i = 0; i < count && at < masks_.size(); ++i) masks_[at++] = mask;
    };
    const ChannelPlan& p = spec.plan;
    fill(p.caption_only, kCaption);
    fill(p.ocr_only, kOcr);
    fill(p.exif_only, kExif);
    fill(p.caption_ocr, kCaption | kOcr);
    fill(p.caption_exif, kCaption | kExif);
    fill(p.ocr_exif, kOcr | kExif);
    fill(p.all_three, kCaption | kOcr | kExif);
    for (std::size_t i = masks_.size(); i > 1; --i) {
      std::swap(masks_[i - 1], masks_[rng_.Below(i)]);
    }

    double total = 0.0;
    for (std::uint64_t i = 0; i < spec.base_domains; ++i) {
      total += 1.0 / std::pow(static_cast<double>(i + 1), spec.zipf_exponent);
      cdf_.push_back(total);
    }
    for (double& c : cdf_) c /= total;
  }

  bool Done() const { return next_ >= spec_.samples; }

  Sample Next(CorpusTruth& truth) {
    std::uint64_t index = next_++;
    std::uint8_t mask = masks_[index];
    Sample sample;
    sample.uid = fmt::format("s{:08}", index);

    std::uint64_t base_index = static_cast<std::uint64_t>(
        std::lower_bound(cdf_.begin(), cdf_.end(), rng_.Unit()) - cdf_.begin());
    base_index = std::min<std::uint64_t>(base_index, cdf_.size() - 1);
    std::string base = BaseDomainName(base_index);
    std::uint64_t shards = 1 + base_index % static_cast<std::uint64_t>(spec_.max_shards);
    std::string full = ShardName(base, rng_.Below(shards));
    sample.url = fmt::format("https://{}/img/{}.jpg", full, index);
    ++truth.base_counts[base];
    ++truth.full_counts[full];

    sample.caption = (mask & kCaption) ? Filler(rng_) + " " + Notice(rng_) : Filler(rng_);
    if (mask & kOcr) {
      sample.ocr_text = Notice(rng_);
    } else if (rng_.Unit() < spec_.ocr_field_rate) {
      sample.ocr_text = Filler(rng_);
    }

    if (mask & kExif) {
      std::string owner = rng_.Pick(kNames);
      if (rng_.Unit() < spec_.raw_exif_rate) {
        sample.exif_raw = MinimalTiffWithCopyright(owner);
      } else if (rng_.Below(4) == 0) {
        sample.metadata = std::map<std::string, std::string>{{"0x8298", owner}};
      } else {
        sample.metadata =
            std::map<std::string, std::string>{{"Copyright", owner}, {"Make", "Canon"}};
      }
    } else {
      switch (rng_.Below(4)) {
        case 0: sample.metadata = std::map<std::string, std::string>{{"Make", "Nikon"}}; break;
        case 1: sample.metadata = std::map<std::string, std::string>{{"Copyright", "  "}}; break;
        default: break;
      }
    }

    truth.samples++;
    if (mask & kCaption) truth.caption++;
    if (mask & kOcr) truth.ocr++;
    if (mask & kExif) truth.exif++;
    if (mask) truth.any++;
    return sample;
  }

 private:
  const CorpusSpec& spec_;
  Rng rng_;
  std::vector<std::uint8_t> masks_;
  std::vector<double> cdf_;
  std::uint64_t next_ = 0;
};

}  // namespace

CorpusSpec TableThreeSpec(std::uint64_t seed) { return ScaledSpec(10'000, seed); }

CorpusSpec ScaledSpec(std::uint64_t samples, std::uint64_t seed) {
  // Per 10k: caption 22, OCR 9, EXIF 227, union 256.
  auto scale = [&](std::uint64_t per_10k) { return per_10k * samples / 10'000; };
  CorpusSpec spec;
  spec.samples = samples;
  spec.seed = seed;
  spec.plan.caption_only = scale(20);
  spec.plan.ocr_only = scale(8);
  spec.plan.exif_only = scale(226);
  spec.plan.caption_ocr = scale(1);
  spec.plan.caption_exif = scale(1);
  return spec;
}

CorpusTruth WriteCorpus(const CorpusSpec& spec, std::ostream& out) {
  CorpusTruth truth;
  CorpusGenerator generator(spec);
  while (!generator.Done()) out << SerializeSample(generator.Next(truth)) << '\n';
  return truth;
}

std::vector<Sample> GenerateCorpus(const CorpusSpec& spec, CorpusTruth* truth) {
  CorpusTruth local;
  CorpusGenerator generator(spec);
  std::vector<Sample> samples;
  samples.reserve(spec.samples);
  while (!generator.Done()) samples.push_back(generator.Next(local));
  if (truth) *truth = std::move(local);
  return samples;
}

std::vector<std::uint8_t> MinimalTiffWithCopyright(const std::string& value) {
  std::vector<std::uint8_t> out = {'I', 'I', 42, 0, 8, 0, 0, 0};
  auto put16 = [&](std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
  };
  auto put32 = [&](std::uint32_t v) {
    for (int shift = 0; shift < 32; shift += 8)
      out.push_back(static_cast<std::uint8_t>(v >> shift));
  };
  std::uint32_t count = static_cast<std::uint32_t>(value.size() + 1);
  put16(1);
  put16(0x8298);
  put16(2);  // ASCII
  put32(count);
  if (count <= 4) {
    std::array<std::uint8_t, 4> inline_value{};
    std::copy(value.begin(), value.end(), inline_value.begin());
    out.insert(out.end(), inline_value.begin(), inline_value.end());
    put32(0);
  } else {
    put32(8 + 2 + 12 + 4);
    put32(0);
    out.insert(out.end(), value.begin(), value.end());
    out.push_back(0);
  }
  return out;
}

std::vector<ScoredLabel> GenerateScores(const ConfusionCounts& counts, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<ScoredLabel> rows;
  auto add = [&](std::uint64_t n, bool label, bool above) {
    for (std::uint64_t i = 0; i < n; ++i) {
      double u = rng.Unit() * 0.5;
      rows.push_back({"", above ? 0.5 + u : u, label});
    }
  };
  add(counts.tp, true, true);
  add(counts.fn, true, false);
  add(counts.fp, false, true);
  add(counts.tn, false, false);
  for (std::size_t i = rows.size(); i > 1; --i) std::swap(rows[i - 1], rows[rng.Below(i)]);
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i].uid = fmt::format("w{:05}", i);
  return rows;
}

void WriteScoresCsv(std::ostream& out, const std::vector<ScoredLabel>& rows) {
  out << "uid,score,label\n";
  for (const auto& row : rows) {
    out << fmt::format("{},{:.17g},{}\n", row.uid, row.score, row.label ? 1 : 0);
  }
}

}  // namespace consent_audit
