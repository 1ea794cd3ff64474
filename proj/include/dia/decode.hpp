#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "dia/proposal.hpp"
#include "dia/timeline.hpp"

namespace dia {

struct DecodeConfig {
  double score_threshold = 0.5;
  double min_duration = 0.0;
  std::optional<std::size_t> max_speakers;

  void validate() const;
};

// Proposals -> normalized diarization for one recording. Drops proposals
// scoring below the threshold, optionally keeps only the `max_speakers`
// speakers with the largest summed score, unions each speaker's intervals
// and removes merged segments shorter than `min_duration`.
DiarizationAnnotation decode_diarization(const std::vector<ProposalRecord> &props,
                                         const DecodeConfig &cfg);

}  // namespace dia
