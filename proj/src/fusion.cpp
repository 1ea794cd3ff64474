#include "dia/fusion.hpp"

#include <algorithm>

#include "dia/error.hpp"

namespace dia {
namespace {

void minmax_normalize(std::vector<ProposalRecord> &props) {
  if (props.empty()) return;
  const auto [lo, hi] = std::minmax_element(
      props.begin(), props.end(),
      [](const ProposalRecord &x, const ProposalRecord &y) {
        return x.score < y.score;
      });
  const double min = lo->score;
  const double range = hi->score - min;
  for (auto &p : props) {
    p.score = range > 0.0 ? (p.score - min) / range : 1.0;
  }
}

}  // namespace

ScoreNormalization parse_normalization(const std::string &name) {
  if (name == "raw") return ScoreNormalization::kRaw;
  if (name == "minmax") return ScoreNormalization::kMinMax;
  throw ConfigError("unknown normalization '" + name +
                    "' (expected raw or minmax)");
}

std::string to_string(ScoreNormalization norm) {
  return norm == ScoreNormalization::kRaw ? "raw" : "minmax";
}

void FusionConfig::validate() const {
  if (k == 0) throw ConfigError("fusion k must be at least 1");
  if (!(dedup_iou >= 0.0 && dedup_iou <= 1.0)) {
    throw ConfigError("dedup_iou must lie in [0, 1]");
  }
}

std::vector<ProposalRecord> fuse_proposals(std::vector<ProposalRecord> a,
                                           std::vector<ProposalRecord> b,
                                           const FusionConfig &cfg) {
  cfg.validate();
  const std::string id_a = common_recording(a);
  const std::string id_b = common_recording(b);
  if (!id_a.empty() && !id_b.empty() && id_a != id_b) {
    throw RecordingMismatch("cannot fuse proposals of '" + id_a + "' with '" +
                            id_b + "'");
  }
  for (const auto &p : a) validate_proposal(p);
  for (const auto &p : b) validate_proposal(p);

  if (cfg.normalize == ScoreNormalization::kMinMax) {
    minmax_normalize(a);
    minmax_normalize(b);
  }

  std::vector<ProposalRecord> pool = std::move(a);
  pool.insert(pool.end(), std::make_move_iterator(b.begin()),
              std::make_move_iterator(b.end()));
  std::sort(pool.begin(), pool.end(), ranks_before);

  std::vector<ProposalRecord> kept;
  for (auto &p : pool) {
    if (kept.size() == cfg.k) break;
    const TimeInterval iv = p.interval();
    const bool duplicate =
        std::any_of(kept.begin(), kept.end(), [&](const ProposalRecord &q) {
          return q.speaker == p.speaker &&
                 interval_iou(q.interval(), iv) >= cfg.dedup_iou;
        });
    if (!duplicate) kept.push_back(std::move(p));
  }
  return kept;
}

}  // namespace dia
