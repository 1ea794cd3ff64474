#include "dia/timeline.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <tuple>
#include <utility>

#include "dia/error.hpp"

namespace dia {

TimeInterval::TimeInterval(double start, double end)
    : start_(start), end_(end) {
  if (!std::isfinite(start) || !std::isfinite(end)) {
    throw InvalidInterval("interval bounds must be finite");
  }
  if (start < 0.0) {
    throw InvalidInterval("interval start " + std::to_string(start) +
                          " is negative");
  }
  if (!(start < end)) {
    throw InvalidInterval("interval [" + std::to_string(start) + ", " +
                          std::to_string(end) + ") has no duration");
  }
}

SpeakerSegment::SpeakerSegment(std::string recording_id, std::string speaker,
                               TimeInterval interval)
    : recording_id(std::move(recording_id)),
      speaker(std::move(speaker)),
      interval(interval) {
  if (this->recording_id.empty()) {
    throw InvalidInterval("segment has an empty recording id");
  }
  if (this->speaker.empty()) {
    throw InvalidInterval("segment has an empty speaker label");
  }
}

double interval_iou(const TimeInterval &a, const TimeInterval &b) {
  if (a == b) return 1.0;
  const double inter =
      std::min(a.end(), b.end()) - std::max(a.start(), b.start());
  if (inter <= 0.0) return 0.0;
  const double uni = a.duration() + b.duration() - inter;
  return std::clamp(inter / uni, 0.0, 1.0);
}

std::vector<TimeInterval> merge_intervals(
    std::vector<TimeInterval> intervals) {
  std::sort(intervals.begin(), intervals.end(),
            [](const TimeInterval &x, const TimeInterval &y) {
              return std::pair(x.start(), x.end()) <
                     std::pair(y.start(), y.end());
            });
  std::vector<TimeInterval> merged;
  for (const auto &iv : intervals) {
    if (!merged.empty() && iv.start() <= merged.back().end()) {
      if (iv.end() > merged.back().end()) {
        merged.back() = TimeInterval(merged.back().start(), iv.end());
      }
    } else {
      merged.push_back(iv);
    }
  }
  return merged;
}

double union_duration(std::vector<TimeInterval> intervals) {
  double total = 0.0;
  for (const auto &iv : merge_intervals(std::move(intervals))) {
    total += iv.duration();
  }
  return total;
}

DiarizationAnnotation normalize_annotation(const DiarizationAnnotation &ann) {
  std::map<std::string, std::vector<TimeInterval>> by_speaker;
  for (const auto &seg : ann.segments) {
    if (seg.recording_id != ann.recording_id) {
      throw RecordingMismatch("annotation for '" + ann.recording_id +
                              "' contains a segment from '" +
                              seg.recording_id + "'");
    }
    by_speaker[seg.speaker].push_back(seg.interval);
  }

  DiarizationAnnotation out{ann.recording_id, {}};
  for (auto &[speaker, intervals] : by_speaker) {
    for (const auto &iv : merge_intervals(std::move(intervals))) {
      out.segments.emplace_back(ann.recording_id, speaker, iv);
    }
  }
  std::sort(out.segments.begin(), out.segments.end(),
            [](const SpeakerSegment &x, const SpeakerSegment &y) {
              return std::forward_as_tuple(x.interval.start(), x.speaker,
                                           x.interval.end()) <
                     std::forward_as_tuple(y.interval.start(), y.speaker,
                                           y.interval.end());
            });
  return out;
}

std::vector<TimeInterval> overlap_regions(const DiarizationAnnotation &ann) {
  // (time, +1/-1, speaker); ends sort before starts at equal times so that
  // touching segments never register as simultaneous.
  struct Event {
    double time;
    int delta;
    const std::string *speaker;
  };
  std::vector<Event> events;
  events.reserve(ann.segments.size() * 2);
  for (const auto &seg : ann.segments) {
    events.push_back({seg.interval.start(), +1, &seg.speaker});
    events.push_back({seg.interval.end(), -1, &seg.speaker});
  }
  std::sort(events.begin(), events.end(), [](const Event &a, const Event &b) {
    return std::pair(a.time, a.delta) < std::pair(b.time, b.delta);
  });

  std::map<std::string, int> active;
  std::size_t distinct = 0;
  std::vector<TimeInterval> regions;
  std::size_t i = 0;
  while (i < events.size()) {
    const double t = events[i].time;
    for (; i < events.size() && events[i].time == t; ++i) {
      int &count = active[*events[i].speaker];
      if (events[i].delta > 0) {
        if (count++ == 0) ++distinct;
      } else {
        if (--count == 0) --distinct;
      }
    }
    if (distinct >= 2 && i < events.size()) {
      const double next = events[i].time;
      if (!regions.empty() && regions.back().end() == t) {
        regions.back() = TimeInterval(regions.back().start(), next);
      } else {
        regions.emplace_back(t, next);
      }
    }
  }
  return regions;
}

std::vector<std::string> speakers_of(const DiarizationAnnotation &ann) {
  std::set<std::string> names;
  for (const auto &seg : ann.segments) names.insert(seg.speaker);
  return {names.begin(), names.end()};
}

}  // namespace dia
