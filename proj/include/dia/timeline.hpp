#pragma once

#include <string>
#include <vector>

namespace dia {

// Half-open span [start, end) in seconds. Construction rejects empty,
// reversed, negative-start and non-finite spans.
class TimeInterval {
 public:
  TimeInterval(double start, double end);

  double start() const { return start_; }
  double end() const { return end_; }
  double duration() const { return end_ - start_; }

  bool overlaps(const TimeInterval &other) const {
    return start_ < other.end_ && other.start_ < end_;
  }

  friend bool operator==(const TimeInterval &, const TimeInterval &) = default;

 private:
  double start_;
  double end_;
};

struct SpeakerSegment {
  SpeakerSegment(std::string recording_id, std::string speaker,
                 TimeInterval interval);

  std::string recording_id;
  std::string speaker;
  TimeInterval interval;

  friend bool operator==(const SpeakerSegment &,
                         const SpeakerSegment &) = default;
};

struct DiarizationAnnotation {
  std::string recording_id;
  std::vector<SpeakerSegment> segments;

  bool empty() const { return segments.empty(); }

  friend bool operator==(const DiarizationAnnotation &,
                         const DiarizationAnnotation &) = default;
};

double interval_iou(const TimeInterval &a, const TimeInterval &b);

// Length of the set union of `intervals`.
double union_duration(std::vector<TimeInterval> intervals);

// Sorted, disjoint cover of `intervals`. Touching spans are joined.
std::vector<TimeInterval> merge_intervals(std::vector<TimeInterval> intervals);

// Canonical form: per-speaker overlapping or touching intervals merged,
// segments sorted by (start, speaker, end). Idempotent.
// Throws RecordingMismatch if any segment disagrees with ann.recording_id.
DiarizationAnnotation normalize_annotation(const DiarizationAnnotation &ann);

// Times where at least two distinct speakers are active.
std::vector<TimeInterval> overlap_regions(const DiarizationAnnotation &ann);

// Distinct speaker labels in lexicographic order.
std::vector<std::string> speakers_of(const DiarizationAnnotation &ann);

}  // namespace dia
