#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "dia/proposal.hpp"

namespace dia {

enum class ScoreNormalization { kRaw, kMinMax };

ScoreNormalization parse_normalization(const std::string &name);
std::string to_string(ScoreNormalization norm);

struct FusionConfig {
  std::size_t k = 100;
  ScoreNormalization normalize = ScoreNormalization::kRaw;
  // A pooled record is dropped when it overlaps an already kept record of
  // the same speaker with IoU >= dedup_iou. 1.0 removes exact duplicates only.
  double dedup_iou = 1.0;

  void validate() const;
};

// Pools two proposal sets of one recording, ranks them by score and keeps
// the best k. With kMinMax each input's scores are first mapped affinely
// onto [0, 1]; a constant-score input maps to 1.0.
std::vector<ProposalRecord> fuse_proposals(std::vector<ProposalRecord> a,
                                           std::vector<ProposalRecord> b,
                                           const FusionConfig &cfg);

}  // namespace dia
