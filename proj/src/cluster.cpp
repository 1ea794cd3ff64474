#include "dia/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "dia/error.hpp"

namespace dia {
namespace {

// Frame counts derived from seconds get a small relative slack so that, for
// example, a 0.1 s gap at a 0.02 s hop is exactly five frames.
constexpr double kFrameSlack = 1e-9;

double seconds_to_frames(double seconds, double hop) {
  return seconds / hop * (1.0 + kFrameSlack);
}

std::vector<double> pool_frames(const EmbeddingSequence &seq, FrameSpan span) {
  std::vector<double> mean(seq.dim, 0.0);
  for (std::size_t f = span.begin; f < span.end; ++f) {
    const float *row = seq.frame(f);
    for (std::size_t d = 0; d < seq.dim; ++d) mean[d] += row[d];
  }
  const double count = static_cast<double>(span.size());
  double norm2 = 0.0;
  for (auto &v : mean) {
    v /= count;
    norm2 += v * v;
  }
  if (norm2 > 0.0) {
    const double norm = std::sqrt(norm2);
    for (auto &v : mean) v /= norm;
  }
  return mean;
}

// Consecutive chunks covering `span`; a short tail joins the previous chunk.
std::vector<FrameSpan> chunk_span(FrameSpan span, std::size_t chunk_frames) {
  std::vector<FrameSpan> chunks;
  std::size_t pos = span.begin;
  while (span.end - pos >= chunk_frames) {
    chunks.push_back({pos, pos + chunk_frames});
    pos += chunk_frames;
  }
  const std::size_t tail = span.end - pos;
  if (tail > 0) {
    if (chunks.empty() || 2 * tail >= chunk_frames) {
      chunks.push_back({pos, span.end});
    } else {
      chunks.back().end = span.end;
    }
  }
  return chunks;
}

struct DisjointSets {
  explicit DisjointSets(std::size_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), std::size_t{0});
  }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) { parent[find(b)] = find(a); }

  std::vector<std::size_t> parent;
};

}  // namespace

void ClusterConfig::validate() const {
  if (min_speakers == 0 || max_speakers == 0) {
    throw ConfigError("speaker bounds must be positive");
  }
  if (min_speakers > max_speakers) {
    throw ConfigError("min_speakers exceeds max_speakers");
  }
  if (!(vad_threshold >= 0.0 && vad_threshold <= 1.0)) {
    throw ConfigError("vad_threshold must lie in [0, 1]");
  }
  if (!(vad_min_duration >= 0.0) || !(vad_merge_gap >= 0.0)) {
    throw ConfigError("VAD durations must be non-negative");
  }
  if (!(chunk_seconds > 0.0) || !std::isfinite(chunk_seconds)) {
    throw ConfigError("chunk_seconds must be positive");
  }
  if (!(linkage_cutoff > 0.0) || !std::isfinite(linkage_cutoff)) {
    throw ConfigError("linkage_cutoff must be positive");
  }
}

std::vector<FrameSpan> vad_frame_spans(const EmbeddingSequence &seq,
                                       const ClusterConfig &cfg) {
  cfg.validate();
  if (!seq.activity) {
    throw MissingActivity("recording '" + seq.recording_id +
                          "' has no activity channel; VAD needs per-frame "
                          "speech scores in the DEMB file");
  }
  const auto &activity = *seq.activity;

  std::vector<FrameSpan> runs;
  for (std::size_t f = 0; f < activity.size(); ++f) {
    if (activity[f] < cfg.vad_threshold) continue;
    if (!runs.empty() && runs.back().end == f) {
      runs.back().end = f + 1;
    } else {
      runs.push_back({f, f + 1});
    }
  }

  const double max_gap = seconds_to_frames(cfg.vad_merge_gap, seq.hop_seconds);
  std::vector<FrameSpan> merged;
  for (const auto &run : runs) {
    if (!merged.empty() &&
        static_cast<double>(run.begin - merged.back().end) <= max_gap) {
      merged.back().end = run.end;
    } else {
      merged.push_back(run);
    }
  }

  const double min_len =
      cfg.vad_min_duration / seq.hop_seconds * (1.0 - kFrameSlack);
  std::erase_if(merged, [&](const FrameSpan &s) {
    return static_cast<double>(s.size()) < min_len;
  });
  return merged;
}

std::vector<TimeInterval> vad_segments(const EmbeddingSequence &seq,
                                       const ClusterConfig &cfg) {
  std::vector<TimeInterval> out;
  for (const auto &span : vad_frame_spans(seq, cfg)) {
    out.emplace_back(seq.frame_start(span.begin), seq.frame_start(span.end));
  }
  return out;
}

std::vector<double> pool_window(const EmbeddingSequence &seq,
                                const TimeInterval &window) {
  validate_embeddings(seq);
  const std::size_t n = seq.frame_count();
  // frame_start is monotone in the index, so the selected frames form a range.
  std::size_t lo = 0, hi = n;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (seq.frame_start(mid) < window.start()) lo = mid + 1; else hi = mid;
  }
  const std::size_t begin = lo;
  hi = n;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (seq.frame_start(mid) < window.end()) lo = mid + 1; else hi = mid;
  }
  if (lo == begin) {
    throw EmptyInput("window [" + std::to_string(window.start()) + ", " +
                     std::to_string(window.end()) + ") contains no frame");
  }
  return pool_frames(seq, {begin, lo});
}

double cosine_distance(const std::vector<double> &a,
                       const std::vector<double> &b) {
  double dot = 0.0;
  for (std::size_t d = 0; d < a.size() && d < b.size(); ++d) dot += a[d] * b[d];
  return 1.0 - dot;
}

std::vector<std::size_t> ahc_cluster(
    const std::vector<std::vector<double>> &vectors, const ClusterConfig &cfg) {
  cfg.validate();
  const std::size_t n = vectors.size();
  if (n == 0) throw EmptyInput("cannot cluster an empty vector set");

  // Slot i holds the cluster whose smallest member index is i. sum[i][j]
  // is the summed pairwise distance between the members of slots i and j.
  std::vector<std::vector<double>> sum(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      sum[i][j] = sum[j][i] = cosine_distance(vectors[i], vectors[j]);
    }
  }
  std::vector<std::size_t> size(n, 1);
  std::vector<bool> active(n, true);

  struct Merge {
    std::size_t keep, absorb;
  };
  std::vector<Merge> merges;
  std::size_t clusters = n;
  std::size_t target = 0;  // 0 until the cutoff has been crossed

  auto clamp_count = [&](std::size_t count) {
    return std::min(std::clamp(count, cfg.min_speakers, cfg.max_speakers), n);
  };

  while (clusters > 1) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!active[i]) continue;
      for (std::size_t j = i + 1; j < n; ++j) {
        if (!active[j]) continue;
        const double d =
            sum[i][j] / static_cast<double>(size[i] * size[j]);
        if (d < best) {
          best = d;
          bi = i;
          bj = j;
        }
      }
    }
    if (target == 0 && best > cfg.linkage_cutoff) target = clamp_count(clusters);
    if (target != 0 && clusters <= target) break;

    for (std::size_t k = 0; k < n; ++k) {
      if (!active[k] || k == bi || k == bj) continue;
      sum[bi][k] = sum[k][bi] = sum[bi][k] + sum[bj][k];
    }
    size[bi] += size[bj];
    active[bj] = false;
    merges.push_back({bi, bj});
    --clusters;
  }
  if (target == 0) target = clamp_count(1);

  DisjointSets sets(n);
  for (std::size_t m = 0; m < n - target; ++m) {
    sets.unite(merges[m].keep, merges[m].absorb);
  }

  std::vector<std::size_t> labels(n);
  std::vector<std::size_t> id_of_root(n, n);
  std::size_t next_id = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t root = sets.find(i);
    if (id_of_root[root] == n) id_of_root[root] = next_id++;
    labels[i] = id_of_root[root];
  }
  return labels;
}

DiarizationAnnotation pipeline_diarize(const EmbeddingSequence &seq,
                                       const ClusterConfig &cfg) {
  validate_embeddings(seq);
  const auto spans = vad_frame_spans(seq, cfg);
  DiarizationAnnotation ann{seq.recording_id, {}};
  if (spans.empty()) return ann;

  const auto chunk_frames = static_cast<std::size_t>(std::max<long long>(
      1, std::llround(cfg.chunk_seconds / seq.hop_seconds)));
  std::vector<FrameSpan> chunks;
  for (const auto &span : spans) {
    for (const auto &c : chunk_span(span, chunk_frames)) chunks.push_back(c);
  }

  std::vector<std::vector<double>> pooled;
  pooled.reserve(chunks.size());
  for (const auto &c : chunks) pooled.push_back(pool_frames(seq, c));

  const auto labels = ahc_cluster(pooled, cfg);
  for (std::size_t i = 0; i < chunks.size(); ++i) {
    ann.segments.emplace_back(
        seq.recording_id, "spk" + std::to_string(labels[i]),
        TimeInterval(seq.frame_start(chunks[i].begin),
                     seq.frame_start(chunks[i].end)));
  }
  return normalize_annotation(ann);
}

}  // namespace dia
