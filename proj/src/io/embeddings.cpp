#include <bit>
#include <cmath>
#include <cstring>
#include <istream>
#include <iterator>
#include <ostream>
#include <sstream>
#include <string_view>

#include "dia/error.hpp"
#include "dia/io.hpp"

namespace dia {
namespace {

using Kind = EmbeddingFormatError::Kind;

constexpr std::string_view kMagic = "DEMB";

class ByteReader {
 public:
  explicit ByteReader(std::string_view bytes) : bytes_(bytes) {}

  std::size_t remaining() const { return bytes_.size() - pos_; }

  std::string_view take(std::size_t n, const char *what) {
    if (remaining() < n) {
      throw EmbeddingFormatError(
          Kind::kTruncated, std::string("truncated DEMB payload reading ") +
                                what + ": need " + std::to_string(n) +
                                " bytes, have " + std::to_string(remaining()));
    }
    auto out = bytes_.substr(pos_, n);
    pos_ += n;
    return out;
  }

  std::uint64_t uint_le(std::size_t width, const char *what) {
    const auto raw = take(width, what);
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < width; ++i) {
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(raw[i]))
           << (8 * i);
    }
    return v;
  }

  std::uint32_t u32(const char *what) {
    return static_cast<std::uint32_t>(uint_le(4, what));
  }
  float f32(const char *what) { return std::bit_cast<float>(u32(what)); }
  double f64(const char *what) {
    return std::bit_cast<double>(uint_le(8, what));
  }

 private:
  std::string_view bytes_;
  std::size_t pos_ = 0;
};

void put_uint_le(std::string &out, std::uint64_t v, std::size_t width) {
  for (std::size_t i = 0; i < width; ++i) {
    out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  }
}

}  // namespace

void validate_embeddings(const EmbeddingSequence &seq) {
  if (seq.dim == 0) {
    throw EmbeddingFormatError(Kind::kZeroDim, "embedding dim is 0");
  }
  if (seq.frames.size() % seq.dim != 0) {
    throw EmbeddingFormatError(Kind::kBadValue,
                               "frame matrix size is not a multiple of dim");
  }
  if (!std::isfinite(seq.hop_seconds) || seq.hop_seconds <= 0.0) {
    throw EmbeddingFormatError(Kind::kBadValue, "hop_seconds must be > 0");
  }
  if (!std::isfinite(seq.window_seconds) || seq.window_seconds <= 0.0) {
    throw EmbeddingFormatError(Kind::kBadValue, "window_seconds must be > 0");
  }
  for (float v : seq.frames) {
    if (!std::isfinite(v)) {
      throw EmbeddingFormatError(Kind::kBadValue, "non-finite frame value");
    }
  }
  if (seq.activity) {
    if (seq.activity->size() != seq.frame_count()) {
      throw EmbeddingFormatError(Kind::kBadValue,
                                 "activity length differs from frame count");
    }
    for (float a : *seq.activity) {
      if (!(a >= 0.0f && a <= 1.0f)) {
        throw EmbeddingFormatError(Kind::kBadValue,
                                   "activity value outside [0, 1]");
      }
    }
  }
}

EmbeddingSequence read_embeddings_bytes(const std::string &bytes) {
  ByteReader r(bytes);
  if (r.remaining() < kMagic.size() ||
      std::string_view(bytes).substr(0, kMagic.size()) != kMagic) {
    throw EmbeddingFormatError(Kind::kBadMagic, "missing DEMB magic");
  }
  r.take(kMagic.size(), "magic");

  const std::uint32_t version = r.u32("version");
  if (version != kDembVersion) {
    throw EmbeddingFormatError(Kind::kUnsupportedVersion,
                               "unsupported DEMB version " +
                                   std::to_string(version));
  }

  EmbeddingSequence seq;
  const std::uint32_t id_len = r.u32("recording_id length");
  seq.recording_id = std::string(r.take(id_len, "recording_id"));
  seq.dim = r.u32("dim");
  const std::uint32_t frame_count = r.u32("frame_count");
  seq.hop_seconds = r.f64("hop_seconds");
  seq.window_seconds = r.f64("window_seconds");
  const std::uint32_t has_activity =
      static_cast<std::uint32_t>(r.uint_le(1, "has_activity"));
  if (seq.dim == 0) {
    throw EmbeddingFormatError(Kind::kZeroDim, "embedding dim is 0");
  }
  if (has_activity > 1) {
    throw EmbeddingFormatError(Kind::kBadValue, "has_activity must be 0 or 1");
  }

  const std::uint64_t values =
      static_cast<std::uint64_t>(seq.dim) * frame_count;
  const std::uint64_t promised = 4 * (values + (has_activity ? frame_count : 0));
  if (r.remaining() < promised) {
    throw EmbeddingFormatError(
        Kind::kTruncated, "truncated DEMB payload: header promises " +
                              std::to_string(promised) + " bytes, have " +
                              std::to_string(r.remaining()));
  }
  if (r.remaining() > promised) {
    throw EmbeddingFormatError(
        Kind::kTrailingData,
        "DEMB payload has " + std::to_string(r.remaining() - promised) +
            " bytes beyond the header promise");
  }

  seq.frames.resize(values);
  for (auto &v : seq.frames) v = r.f32("frames");
  if (has_activity) {
    seq.activity.emplace(frame_count);
    for (auto &a : *seq.activity) a = r.f32("activity");
  }
  validate_embeddings(seq);
  return seq;
}

EmbeddingSequence read_embeddings(std::istream &in) {
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  return read_embeddings_bytes(bytes);
}

std::string write_embeddings_bytes(const EmbeddingSequence &seq) {
  validate_embeddings(seq);
  std::string out(kMagic);
  put_uint_le(out, kDembVersion, 4);
  put_uint_le(out, seq.recording_id.size(), 4);
  out += seq.recording_id;
  put_uint_le(out, seq.dim, 4);
  put_uint_le(out, seq.frame_count(), 4);
  put_uint_le(out, std::bit_cast<std::uint64_t>(seq.hop_seconds), 8);
  put_uint_le(out, std::bit_cast<std::uint64_t>(seq.window_seconds), 8);
  out.push_back(seq.activity ? 1 : 0);
  for (float v : seq.frames) put_uint_le(out, std::bit_cast<std::uint32_t>(v), 4);
  if (seq.activity) {
    for (float a : *seq.activity) {
      put_uint_le(out, std::bit_cast<std::uint32_t>(a), 4);
    }
  }
  return out;
}

void write_embeddings(std::ostream &out, const EmbeddingSequence &seq) {
  const std::string bytes = write_embeddings_bytes(seq);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

}  // namespace dia
