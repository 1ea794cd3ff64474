#pragma once

#include <map>
#include <string>
#include <vector>

#include "dia/timeline.hpp"

namespace dia {

// Candidate speech segment emitted by a detector or clustering pipeline.
struct ProposalRecord {
  std::string recording_id;
  double start = 0.0;
  double end = 0.0;
  std::string speaker;
  double score = 0.0;
  std::string source = "unknown";

  TimeInterval interval() const { return {start, end}; }

  friend bool operator==(const ProposalRecord &,
                         const ProposalRecord &) = default;
};

// Total order used everywhere proposals are ranked: score descending, then
// earlier start, smaller speaker, smaller end, smaller source.
bool ranks_before(const ProposalRecord &a, const ProposalRecord &b);

// Throws ConfigError unless start < end, start >= 0, the score is finite and
// non-negative, and the labels are non-empty.
void validate_proposal(const ProposalRecord &p);

// Throws RecordingMismatch if the records span several recordings.
// Returns the shared id, or "" for an empty list.
std::string common_recording(const std::vector<ProposalRecord> &props);

// Per-recording buckets, input order preserved within each bucket.
std::map<std::string, std::vector<ProposalRecord>> group_by_recording(
    const std::vector<ProposalRecord> &props);

}  // namespace dia
