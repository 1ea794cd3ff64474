#include "dia/decode.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>

#include "dia/error.hpp"

namespace dia {

void DecodeConfig::validate() const {
  if (!(score_threshold >= 0.0) || !std::isfinite(score_threshold)) {
    throw ConfigError("score_threshold must be non-negative");
  }
  if (!(min_duration >= 0.0) || !std::isfinite(min_duration)) {
    throw ConfigError("min_duration must be non-negative");
  }
  if (max_speakers && *max_speakers == 0) {
    throw ConfigError("max_speakers must be positive");
  }
}

DiarizationAnnotation decode_diarization(
    const std::vector<ProposalRecord> &props, const DecodeConfig &cfg) {
  cfg.validate();
  const std::string recording = common_recording(props);

  std::vector<const ProposalRecord *> kept;
  for (const auto &p : props) {
    validate_proposal(p);
    if (p.score >= cfg.score_threshold) kept.push_back(&p);
  }

  if (cfg.max_speakers) {
    std::map<std::string, double> mass;
    for (const auto *p : kept) mass[p->speaker] += p->score;
    std::vector<std::pair<std::string, double>> ranked(mass.begin(),
                                                       mass.end());
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto &x, const auto &y) {
                       return x.second > y.second;
                     });
    std::set<std::string> allowed;
    for (std::size_t i = 0; i < ranked.size() && i < *cfg.max_speakers; ++i) {
      allowed.insert(ranked[i].first);
    }
    std::erase_if(kept, [&](const ProposalRecord *p) {
      return !allowed.contains(p->speaker);
    });
  }

  DiarizationAnnotation ann{recording, {}};
  for (const auto *p : kept) {
    ann.segments.emplace_back(recording, p->speaker, p->interval());
  }
  ann = normalize_annotation(ann);
  std::erase_if(ann.segments, [&](const SpeakerSegment &s) {
    return s.interval.duration() < cfg.min_duration;
  });
  return ann;
}

}  // namespace dia
