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

// Seeded fixture generators with generator-side ground truth. The planted
// texts come from fixed lists, so the truth never depends on the scanner.

#ifndef CONSENT_AUDIT_SYNTHETIC_H_
#define CONSENT_AUDIT_SYNTHETIC_H_

#include <cstdint>
#include <map>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "consent_audit/types.h"

namespace consent_audit {

// Planted channel overlaps. Each sample carries exactly one channel mask;
// the per-channel totals follow from the mask counts.
struct ChannelPlan {
  std::uint64_t caption_only = 0;
  std::uint64_t ocr_only = 0;
  std::uint64_t exif_only = 0;
  std::uint64_t caption_ocr = 0;
  std::uint64_t caption_exif = 0;
  std::uint64_t ocr_exif = 0;
  std::uint64_t all_three = 0;

  std::uint64_t caption() const { return caption_only + caption_ocr + caption_exif + all_three; }
  std::uint64_t ocr() const { return ocr_only + caption_ocr + ocr_exif + all_three; }
  std::uint64_t exif() const { return exif_only + caption_exif + ocr_exif + all_three; }
  std::uint64_t any() const {
    return caption_only + ocr_only + exif_only + caption_ocr + caption_exif + ocr_exif + all_three;
  }
};

struct CorpusSpec {
  std::uint64_t samples = 10'000;
  ChannelPlan plan;
  std::uint64_t seed = 1;
  std::uint64_t base_domains = 200;
  double zipf_exponent = 1.1;
  int max_shards = 4;           // full domains per base domain
  double ocr_field_rate = 0.5;  // share of non-OCR-hit samples with an OCR field
  double raw_exif_rate = 0.0;   // share of EXIF hits planted as raw TIFF bytes
};

// 10k samples with 22 caption, 9 OCR and 227 EXIF hits, mirroring the
// per-channel rates of the small English scale (0.22%, 0.09%, 2.27%).
CorpusSpec TableThreeSpec(std::uint64_t seed);
// `samples` records with the same channel rates.
CorpusSpec ScaledSpec(std::uint64_t samples, std::uint64_t seed);

struct CorpusTruth {
  std::uint64_t samples = 0;
  std::uint64_t caption = 0;
  std::uint64_t ocr = 0;
  std::uint64_t exif = 0;
  std::uint64_t any = 0;
  std::map<std::string, std::uint64_t> base_counts;
  std::map<std::string, std::uint64_t> full_counts;
};

// Writes `spec.samples` ndrecords lines to `out`. Deterministic for a seed.
CorpusTruth WriteCorpus(const CorpusSpec& spec, std::ostream& out);
// Same records in memory.
std::vector<Sample> GenerateCorpus(const CorpusSpec& spec, CorpusTruth* truth);

// Minimal little-endian TIFF whose IFD0 holds one ASCII 0x8298 entry.
std::vector<std::uint8_t> MinimalTiffWithCopyright(const std::string& value);

struct ScoredLabel {
  std::string uid;
  double score = 0.0;
  bool label = false;
};

// Scores in [0, 1) laid out so that the 0.5 threshold reproduces `counts`.
std::vector<ScoredLabel> GenerateScores(const ConfusionCounts& counts, std::uint64_t seed);
void WriteScoresCsv(std::ostream& out, const std::vector<ScoredLabel>& rows);

}  // namespace consent_audit

#endif  // CONSENT_AUDIT_SYNTHETIC_H_
