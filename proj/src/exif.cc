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

#include "consent_audit/exif.h"

#include <fmt/format.h>
#include <unicode/unistr.h>

#include <algorithm>
#include <cstring>

#include "consent_audit/strings.h"

namespace consent_audit {
namespace {

constexpr std::uint16_t kTypeAscii = 2;
constexpr std::size_t kIfdEntrySize = 12;

class TiffView {
 public:
  TiffView(std::span<const std::uint8_t> bytes, bool big_endian)
      : bytes_(bytes), big_endian_(big_endian) {}

  std::size_t size() const { return bytes_.size(); }

  bool Has(std::size_t offset, std::size_t length) const {
    return offset <= bytes_.size() && length <= bytes_.size() - offset;
  }

  // Callers check Has() first.
  std::uint16_t U16(std::size_t offset) const {
    std::uint16_t a = bytes_[offset], b = bytes_[offset + 1];
    return big_endian_ ? static_cast<std::uint16_t>(a << 8 | b)
                       : static_cast<std::uint16_t>(b << 8 | a);
  }
  std::uint32_t U32(std::size_t offset) const {
    std::uint32_t hi = U16(offset), lo = U16(offset + 2);
    return big_endian_ ? (hi << 16 | lo) : (lo << 16 | hi);
  }
  std::span<const std::uint8_t> Slice(std::size_t offset, std::size_t length) const {
    return bytes_.subspan(offset, length);
  }

 private:
  std::span<const std::uint8_t> bytes_;
  bool big_endian_;
};

std::string DecodePermissive(std::span<const std::uint8_t> bytes) {
  std::string_view raw(reinterpret_cast<const char*>(bytes.data()), bytes.size());
  if (std::all_of(raw.begin(), raw.end(),
                  [](char c) { return static_cast<unsigned char>(c) < 0x80; })) {
    return std::string(raw);
  }
  // fromUTF8 maps ill-formed sequences to U+FFFD.
  std::string out;
  icu::UnicodeString::fromUTF8(icu::StringPiece(raw.data(), static_cast<int32_t>(raw.size())))
      .toUTF8String(out);
  return out;
}

std::optional<ExifCopyright> SplitCopyright(std::span<const std::uint8_t> data) {
  auto first_nul = std::find(data.begin(), data.end(), std::uint8_t{0});
  std::span<const std::uint8_t> primary(data.begin(), first_nul);
  std::span<const std::uint8_t> rest;
  if (first_nul != data.end()) rest = std::span<const std::uint8_t>(first_nul + 1, data.end());
  while (!rest.empty() && rest.back() == 0) rest = rest.first(rest.size() - 1);

  ExifCopyright result{DecodePermissive(primary), DecodePermissive(rest)};
  if (IsBlank(result.value)) {
    // Editor-only claims are written as " \0Editor\0".
    if (IsBlank(result.remainder)) return std::nullopt;
    result.value = std::move(result.remainder);
    result.remainder.clear();
  }
  return result;
}

Result<std::optional<ExifCopyright>> ParseTiff(std::span<const std::uint8_t> tiff) {
  if (tiff.size() < 8) {
    return MakeError(ErrorCode::kTruncatedSegment,
                     fmt::format("TIFF header needs 8 bytes, have {}", tiff.size()));
  }
  bool big_endian;
  if (tiff[0] == 'I' && tiff[1] == 'I') {
    big_endian = false;
  } else if (tiff[0] == 'M' && tiff[1] == 'M') {
    big_endian = true;
  } else {
    return MakeError(ErrorCode::kMalformedIfd, "bad byte-order mark");
  }
  TiffView view(tiff, big_endian);
  if (view.U16(2) != 42) return MakeError(ErrorCode::kMalformedIfd, "bad TIFF magic");

  std::size_t ifd = view.U32(4);
  if (!view.Has(ifd, 2)) {
    return MakeError(ErrorCode::kTruncatedSegment,
                     fmt::format("IFD0 offset {} past end of {} bytes", ifd, view.size()));
  }
  std::size_t count = view.U16(ifd);
  if (!view.Has(ifd + 2, count * kIfdEntrySize)) {
    return MakeError(ErrorCode::kMalformedIfd,
                     fmt::format("{} IFD0 entries do not fit in {} bytes", count, view.size()));
  }
  for (std::size_t i = 0; i < count; ++i) {
    std::size_t entry = ifd + 2 + i * kIfdEntrySize;
    if (view.U16(entry) != kExifCopyrightTag) continue;
    if (view.U16(entry + 2) != kTypeAscii) return std::optional<ExifCopyright>();
    std::size_t length = view.U32(entry + 4);
    if (length == 0) return std::optional<ExifCopyright>();
    std::size_t data = entry + 8;
    if (length > 4) {
      data = view.U32(entry + 8);
      if (!view.Has(data, length)) {
        return MakeError(ErrorCode::kTruncatedSegment,
                         fmt::format("copyright value [{}, +{}) past end of {} bytes", data, length,
                                     view.size()));
      }
    }
    return SplitCopyright(view.Slice(data, length));
  }
  return std::optional<ExifCopyright>();
}

bool StartsWith(std::span<const std::uint8_t> bytes, std::string_view prefix) {
  return bytes.size() >= prefix.size() &&
         std::memcmp(bytes.data(), prefix.data(), prefix.size()) == 0;
}

constexpr std::string_view kExifHeader("Exif\0\0", 6);

Result<std::optional<ExifCopyright>> ParseJpeg(std::span<const std::uint8_t> jpeg) {
  std::size_t pos = 2;  // past SOI
  while (true) {
    if (pos >= jpeg.size()) return std::optional<ExifCopyright>();
    if (jpeg[pos] != 0xFF) return std::optional<ExifCopyright>();  // not a marker stream
    while (pos < jpeg.size() && jpeg[pos] == 0xFF) ++pos;          // fill bytes
    if (pos >= jpeg.size()) return std::optional<ExifCopyright>();
    std::uint8_t marker = jpeg[pos++];
    if (marker == 0xD9 || marker == 0xDA) return std::optional<ExifCopyright>();  // EOI / SOS
    if ((marker >= 0xD0 && marker <= 0xD7) || marker == 0x01) continue;           // no length
    if (jpeg.size() - pos < 2) {
      return MakeError(ErrorCode::kTruncatedSegment, "segment length past end of data");
    }
    std::size_t length = static_cast<std::size_t>(jpeg[pos]) << 8 | jpeg[pos + 1];
    if (length < 2 || length > jpeg.size() - pos) {
      return MakeError(ErrorCode::kTruncatedSegment,
                       fmt::format("segment 0xFF{:02X} declares {} bytes, {} available", marker,
                                   length, jpeg.size() - pos));
    }
    auto payload = jpeg.subspan(pos + 2, length - 2);
    if (marker == 0xE1 && StartsWith(payload, kExifHeader)) {
      return ParseTiff(payload.subspan(kExifHeader.size()));
    }
    pos += length;
  }
}

}  // namespace

std::optional<std::string> CopyrightFromMap(const std::map<std::string, std::string>& metadata) {
  if (auto it = metadata.find("Copyright"); it != metadata.end() && !IsBlank(it->second)) {
    return it->second;
  }
  for (const auto& [key, value] : metadata) {
    if (EqualsIgnoreAsciiCase(key, "0x8298") && !IsBlank(value)) return value;
  }
  return std::nullopt;
}

Result<std::optional<ExifCopyright>> ParseExifCopyright(std::span<const std::uint8_t> bytes) {
  if (bytes.size() >= 2 && bytes[0] == 0xFF && bytes[1] == 0xD8) return ParseJpeg(bytes);
  if (StartsWith(bytes, kExifHeader)) return ParseTiff(bytes.subspan(kExifHeader.size()));
  if (StartsWith(bytes, std::string_view("II*\0", 4)) ||
      StartsWith(bytes, std::string_view("MM\0*", 4))) {
    return ParseTiff(bytes);
  }
  return std::optional<ExifCopyright>();
}

ExifFinding FindExifCopyright(const Sample& sample) {
  ExifFinding finding;
  if (sample.metadata) {
    if (auto value = CopyrightFromMap(*sample.metadata)) {
      finding.copyright = ExifCopyright{std::move(*value), {}};
      return finding;
    }
  }
  if (sample.exif_raw) {
    auto parsed = ParseExifCopyright(*sample.exif_raw);
    if (parsed.ok()) {
      finding.copyright = std::move(parsed).value();
    } else {
      finding.error = parsed.error();
    }
  }
  return finding;
}

}  // namespace consent_audit
