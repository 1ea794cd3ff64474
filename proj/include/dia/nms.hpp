#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "dia/proposal.hpp"

namespace dia {

enum class NmsMethod { kHard, kLinear, kGaussian };

NmsMethod parse_nms_method(const std::string &name);
std::string to_string(NmsMethod method);

struct NmsConfig {
  NmsMethod method = NmsMethod::kGaussian;
  double sigma = 0.5;
  double iou_threshold = 0.5;
  double score_floor = 0.001;
  std::size_t max_in = 1000;
  std::size_t max_out = 100;
  // Suppress only among proposals that share a speaker label.
  bool speaker_aware = true;

  void validate() const;
};

// Greedy (soft) non-maximum suppression over one recording's proposals.
//
// The input is first cut to the `max_in` best proposals. Each round moves the
// best remaining proposal M to the output and rescales every remaining
// proposal b in M's suppression group:
//   hard      drop b when IoU(M, b) >= iou_threshold
//   linear    score *= 1 - IoU(M, b) when IoU(M, b) >= iou_threshold
//   gaussian  score *= exp(-IoU(M, b)^2 / sigma)
// Proposals below `score_floor` are discarded. Stops at `max_out` outputs.
// Intervals and labels are never modified; output is ranked best first.
std::vector<ProposalRecord> soft_nms(std::vector<ProposalRecord> props,
                                     const NmsConfig &cfg);

// The k best proposals under `ranks_before`.
std::vector<ProposalRecord> truncate_top_k(std::vector<ProposalRecord> props,
                                           std::size_t k);

}  // namespace dia
