#pragma once

#include <cstddef>
#include <vector>

#include "dia/io.hpp"
#include "dia/timeline.hpp"

namespace dia {

struct ClusterConfig {
  std::size_t min_speakers = 2;
  std::size_t max_speakers = 4;
  double vad_threshold = 0.5;
  double vad_min_duration = 0.1;
  double vad_merge_gap = 0.1;
  double chunk_seconds = 1.0;
  double linkage_cutoff = 0.7;

  void validate() const;
};

// Half-open frame range [begin, end).
struct FrameSpan {
  std::size_t begin;
  std::size_t end;

  std::size_t size() const { return end - begin; }
  friend bool operator==(const FrameSpan &, const FrameSpan &) = default;
};

// Speech runs of the activity channel, in frames. Runs separated by a gap of
// at most vad_merge_gap are joined; runs shorter than vad_min_duration are
// dropped. Throws MissingActivity when the sequence has no activity channel.
std::vector<FrameSpan> vad_frame_spans(const EmbeddingSequence &seq,
                                       const ClusterConfig &cfg);

// vad_frame_spans in seconds: run [first, last] -> [first*hop, (last+1)*hop).
std::vector<TimeInterval> vad_segments(const EmbeddingSequence &seq,
                                       const ClusterConfig &cfg);

// Unit-normalized mean of the frames whose start lies in `window`. An
// all-zero mean is returned as is. Throws EmptyInput if no frame starts
// inside the window.
std::vector<double> pool_window(const EmbeddingSequence &seq,
                                const TimeInterval &window);

double cosine_distance(const std::vector<double> &a,
                       const std::vector<double> &b);

// Average-linkage AHC under cosine distance. Merging stops at the cluster
// count reached when the next merge would exceed `linkage_cutoff`, clamped to
// [min_speakers, max_speakers] and to the vector count. Equal distances merge
// the pair with the smallest (min index of A, min index of B) first.
// Cluster ids are numbered by first appearance.
std::vector<std::size_t> ahc_cluster(
    const std::vector<std::vector<double>> &vectors, const ClusterConfig &cfg);

// Chunks each VAD span into chunk_seconds pieces (a trailing piece shorter
// than half a chunk joins the previous one), pools a vector per chunk,
// clusters them and labels chunk segments "spk<id>".
DiarizationAnnotation pipeline_diarize(const EmbeddingSequence &seq,
                                       const ClusterConfig &cfg);

}  // namespace dia
