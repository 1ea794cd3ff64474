#include "dia/nms.hpp"

#include <algorithm>
#include <cmath>

#include "dia/error.hpp"

namespace dia {

NmsMethod parse_nms_method(const std::string &name) {
  if (name == "hard") return NmsMethod::kHard;
  if (name == "linear") return NmsMethod::kLinear;
  if (name == "gaussian") return NmsMethod::kGaussian;
  throw ConfigError("unknown NMS method '" + name +
                    "' (expected hard, linear or gaussian)");
}

std::string to_string(NmsMethod method) {
  switch (method) {
    case NmsMethod::kHard:
      return "hard";
    case NmsMethod::kLinear:
      return "linear";
    case NmsMethod::kGaussian:
      return "gaussian";
  }
  return "?";
}

void NmsConfig::validate() const {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw ConfigError("sigma must be positive");
  }
  if (!(iou_threshold >= 0.0 && iou_threshold <= 1.0)) {
    throw ConfigError("iou_threshold must lie in [0, 1]");
  }
  if (!(score_floor >= 0.0) || !std::isfinite(score_floor)) {
    throw ConfigError("score_floor must be non-negative");
  }
  if (max_in == 0 || max_out == 0) {
    throw ConfigError("max_in and max_out must be positive");
  }
  if (max_out > max_in) throw ConfigError("max_out exceeds max_in");
}

std::vector<ProposalRecord> truncate_top_k(std::vector<ProposalRecord> props,
                                           std::size_t k) {
  const std::size_t keep = std::min(k, props.size());
  std::partial_sort(props.begin(), props.begin() + keep, props.end(),
                    ranks_before);
  props.resize(keep);
  return props;
}

std::vector<ProposalRecord> soft_nms(std::vector<ProposalRecord> props,
                                     const NmsConfig &cfg) {
  cfg.validate();
  common_recording(props);
  for (const auto &p : props) validate_proposal(p);

  std::vector<ProposalRecord> remaining =
      truncate_top_k(std::move(props), cfg.max_in);
  std::erase_if(remaining, [&](const ProposalRecord &p) {
    return p.score < cfg.score_floor;
  });

  std::vector<ProposalRecord> kept;
  while (!remaining.empty() && kept.size() < cfg.max_out) {
    auto best = std::min_element(remaining.begin(), remaining.end(),
                                 ranks_before);
    kept.push_back(std::move(*best));
    remaining.erase(best);
    const ProposalRecord &m = kept.back();
    const TimeInterval m_iv = m.interval();

    for (auto &b : remaining) {
      if (cfg.speaker_aware && b.speaker != m.speaker) continue;
      const double iou = interval_iou(m_iv, b.interval());
      switch (cfg.method) {
        case NmsMethod::kHard:
          if (iou >= cfg.iou_threshold) b.score = -1.0;
          break;
        case NmsMethod::kLinear:
          if (iou >= cfg.iou_threshold) b.score *= 1.0 - iou;
          break;
        case NmsMethod::kGaussian:
          b.score *= std::exp(-(iou * iou) / cfg.sigma);
          break;
      }
    }
    std::erase_if(remaining, [&](const ProposalRecord &p) {
      return p.score < 0.0 || p.score < cfg.score_floor;
    });
  }

  std::stable_sort(kept.begin(), kept.end(), ranks_before);
  return kept;
}

}  // namespace dia
