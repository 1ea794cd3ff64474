#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dia/proposal.hpp"
#include "dia/timeline.hpp"

namespace dia {

using AnnotationMap = std::map<std::string, DiarizationAnnotation>;

struct ParseWarning {
  std::size_t line;
  std::string text;
};

// ---------------------------------------------------------------------------
// RTTM
// ---------------------------------------------------------------------------

// Reads SPEAKER lines
//   SPEAKER <file> <chan> <tbeg> <tdur> <ortho> <stype> <name> <conf> <slat>
// into normalized per-recording annotations. Other line types are skipped
// and reported through `warnings` when given. Throws ParseError on a
// malformed SPEAKER line.
AnnotationMap parse_rttm(std::istream &in,
                         std::vector<ParseWarning> *warnings = nullptr);
AnnotationMap parse_rttm_string(const std::string &text,
                                std::vector<ParseWarning> *warnings = nullptr);

// Millisecond-precision SPEAKER lines sorted by (recording, start, speaker).
void write_rttm(std::ostream &out, const AnnotationMap &anns);
std::string write_rttm_string(const AnnotationMap &anns);

// ---------------------------------------------------------------------------
// Proposal lines (one JSON object per line)
// ---------------------------------------------------------------------------

std::vector<ProposalRecord> read_proposals(std::istream &in);
std::vector<ProposalRecord> read_proposals_string(const std::string &text);

void write_proposals(std::ostream &out,
                     const std::vector<ProposalRecord> &props);
std::string write_proposals_string(const std::vector<ProposalRecord> &props);

// Each segment becomes a proposal with the given score and source tag,
// ordered by recording then by segment order.
std::vector<ProposalRecord> annotations_to_proposals(
    const AnnotationMap &anns, double score = 1.0,
    const std::string &source = "rttm");

// ---------------------------------------------------------------------------
// DEMB frame-embedding container
// ---------------------------------------------------------------------------

inline constexpr std::uint32_t kDembVersion = 1;

// 16 kHz audio, stride 320 samples, window 400 samples.
inline constexpr std::uint32_t kDefaultEmbeddingDim = 1280;
inline constexpr double kDefaultHopSeconds = 320.0 / 16000.0;
inline constexpr double kDefaultWindowSeconds = 400.0 / 16000.0;

struct EmbeddingSequence {
  std::string recording_id;
  std::uint32_t dim = kDefaultEmbeddingDim;
  double hop_seconds = kDefaultHopSeconds;
  double window_seconds = kDefaultWindowSeconds;
  std::vector<float> frames;  // row-major, frame_count x dim
  std::optional<std::vector<float>> activity;

  std::size_t frame_count() const { return dim == 0 ? 0 : frames.size() / dim; }
  const float *frame(std::size_t i) const { return frames.data() + i * dim; }

  // Frame i covers [i * hop, i * hop + window).
  double frame_start(std::size_t i) const {
    return static_cast<double>(i) * hop_seconds;
  }

  friend bool operator==(const EmbeddingSequence &,
                         const EmbeddingSequence &) = default;
};

// Throws EmbeddingFormatError (kZeroDim / kBadValue) on inconsistent data.
void validate_embeddings(const EmbeddingSequence &seq);

EmbeddingSequence read_embeddings(std::istream &in);
EmbeddingSequence read_embeddings_bytes(const std::string &bytes);

void write_embeddings(std::ostream &out, const EmbeddingSequence &seq);
std::string write_embeddings_bytes(const EmbeddingSequence &seq);

}  // namespace dia
