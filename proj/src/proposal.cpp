#include "dia/proposal.hpp"

#include <cmath>
#include <tuple>

#include "dia/error.hpp"

namespace dia {

bool ranks_before(const ProposalRecord &a, const ProposalRecord &b) {
  if (a.score != b.score) return a.score > b.score;
  return std::tie(a.start, a.speaker, a.end, a.source) <
         std::tie(b.start, b.speaker, b.end, b.source);
}

void validate_proposal(const ProposalRecord &p) {
  if (p.recording_id.empty()) throw ConfigError("empty recording_id");
  if (p.speaker.empty()) throw ConfigError("empty speaker");
  if (!std::isfinite(p.start) || !std::isfinite(p.end)) {
    throw ConfigError("non-finite proposal bounds");
  }
  if (p.start < 0.0) throw ConfigError("negative proposal start");
  if (!(p.start < p.end)) throw ConfigError("proposal start >= end");
  if (!std::isfinite(p.score) || p.score < 0.0) {
    throw ConfigError("proposal score must be finite and non-negative");
  }
}

std::string common_recording(const std::vector<ProposalRecord> &props) {
  if (props.empty()) return {};
  const std::string &id = props.front().recording_id;
  for (const auto &p : props) {
    if (p.recording_id != id) {
      throw RecordingMismatch("proposals mix recordings '" + id + "' and '" +
                              p.recording_id +
                              "'; group them per recording first");
    }
  }
  return id;
}

std::map<std::string, std::vector<ProposalRecord>> group_by_recording(
    const std::vector<ProposalRecord> &props) {
  std::map<std::string, std::vector<ProposalRecord>> groups;
  for (const auto &p : props) groups[p.recording_id].push_back(p);
  return groups;
}

}  // namespace dia
