#include "dia/der.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <sstream>

#include "dia/error.hpp"
#include "json.hpp"

namespace dia {
namespace {

using Span = std::pair<double, double>;

void check_same_recording(const DiarizationAnnotation &ref,
                          const DiarizationAnnotation &hyp) {
  // An annotation without segments carries no recording information.
  if (ref.empty() || hyp.empty()) return;
  if (ref.recording_id != hyp.recording_id) {
    throw RecordingMismatch("reference '" + ref.recording_id +
                            "' scored against hypothesis '" +
                            hyp.recording_id + "'");
  }
}

std::vector<Span> merge_spans(std::vector<Span> spans) {
  std::sort(spans.begin(), spans.end());
  std::vector<Span> out;
  for (const auto &s : spans) {
    if (!(s.first < s.second)) continue;
    if (!out.empty() && s.first <= out.back().second) {
      out.back().second = std::max(out.back().second, s.second);
    } else {
      out.push_back(s);
    }
  }
  return out;
}

// `ann` with every excluded span cut out of its segments.
DiarizationAnnotation restrict_to_scored(const DiarizationAnnotation &ann,
                                         const std::vector<Span> &excluded) {
  if (excluded.empty()) return ann;
  DiarizationAnnotation out{ann.recording_id, {}};
  for (const auto &seg : ann.segments) {
    double cursor = seg.interval.start();
    const double end = seg.interval.end();
    auto it = std::lower_bound(
        excluded.begin(), excluded.end(), cursor,
        [](const Span &s, double t) { return s.second <= t; });
    for (; it != excluded.end() && it->first < end; ++it) {
      if (it->first > cursor) {
        out.segments.emplace_back(seg.recording_id, seg.speaker,
                                  TimeInterval(cursor, it->first));
      }
      cursor = std::max(cursor, it->second);
    }
    if (cursor < end) {
      out.segments.emplace_back(seg.recording_id, seg.speaker,
                                TimeInterval(cursor, end));
    }
  }
  return out;
}

std::size_t index_of(const std::vector<std::string> &sorted,
                     const std::string &name) {
  return static_cast<std::size_t>(
      std::lower_bound(sorted.begin(), sorted.end(), name) - sorted.begin());
}

std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

}  // namespace

OverlapMatrix build_overlap_matrix(const DiarizationAnnotation &ref,
                                   const DiarizationAnnotation &hyp) {
  check_same_recording(ref, hyp);
  OverlapMatrix m{speakers_of(ref), speakers_of(hyp), {}};
  m.seconds.assign(m.ref_speakers.size(),
                   std::vector<double>(m.hyp_speakers.size(), 0.0));

  std::map<std::pair<std::size_t, std::size_t>, std::vector<TimeInterval>>
      shared;
  for (const auto &r : ref.segments) {
    const std::size_t i = index_of(m.ref_speakers, r.speaker);
    for (const auto &h : hyp.segments) {
      const double lo = std::max(r.interval.start(), h.interval.start());
      const double hi = std::min(r.interval.end(), h.interval.end());
      if (lo < hi) {
        shared[{i, index_of(m.hyp_speakers, h.speaker)}].emplace_back(lo, hi);
      }
    }
  }
  for (auto &[cell, spans] : shared) {
    m.seconds[cell.first][cell.second] = union_duration(std::move(spans));
  }
  return m;
}

std::vector<std::pair<double, double>> scoring_exclusions(
    const DiarizationAnnotation &ref, const ScoringOptions &opts) {
  if (!(opts.collar >= 0.0)) throw ConfigError("collar must be non-negative");
  std::vector<Span> spans;
  if (opts.collar > 0.0) {
    for (const auto &seg : ref.segments) {
      for (double b : {seg.interval.start(), seg.interval.end()}) {
        spans.emplace_back(std::max(0.0, b - opts.collar), b + opts.collar);
      }
    }
  }
  if (opts.exclude_overlap) {
    for (const auto &iv : overlap_regions(ref)) {
      spans.emplace_back(iv.start(), iv.end());
    }
  }
  return merge_spans(std::move(spans));
}

DerReport compute_der(const DiarizationAnnotation &ref_in,
                      const DiarizationAnnotation &hyp_in,
                      const ScoringOptions &opts) {
  check_same_recording(ref_in, hyp_in);
  const DiarizationAnnotation ref_norm = normalize_annotation(ref_in);
  const DiarizationAnnotation hyp_norm = normalize_annotation(hyp_in);
  const auto excluded = scoring_exclusions(ref_norm, opts);
  const DiarizationAnnotation ref = restrict_to_scored(ref_norm, excluded);
  const DiarizationAnnotation hyp = restrict_to_scored(hyp_norm, excluded);

  const OverlapMatrix overlap = build_overlap_matrix(ref, hyp);
  const std::size_t n_ref = overlap.ref_speakers.size();
  const std::size_t n_hyp = overlap.hyp_speakers.size();

  DerReport report;
  report.recording_id = ref_in.empty() ? hyp_in.recording_id
                                       : ref_in.recording_id;
  std::vector<std::size_t> ref_of_hyp(n_hyp, kUnassigned);
  for (const auto &[i, j] : optimal_mapping(overlap.seconds)) {
    ref_of_hyp[j] = i;
    report.mapping.emplace_back(overlap.hyp_speakers[j],
                                overlap.ref_speakers[i]);
  }
  std::sort(report.mapping.begin(), report.mapping.end());

  struct Event {
    double time;
    bool is_ref;
    std::size_t speaker;
    int delta;
  };
  std::vector<Event> events;
  for (const auto &s : ref.segments) {
    const std::size_t i = index_of(overlap.ref_speakers, s.speaker);
    events.push_back({s.interval.start(), true, i, +1});
    events.push_back({s.interval.end(), true, i, -1});
  }
  for (const auto &s : hyp.segments) {
    const std::size_t j = index_of(overlap.hyp_speakers, s.speaker);
    events.push_back({s.interval.start(), false, j, +1});
    events.push_back({s.interval.end(), false, j, -1});
  }
  std::sort(events.begin(), events.end(), [](const Event &a, const Event &b) {
    return a.time < b.time;
  });

  std::vector<int> ref_active(n_ref, 0), hyp_active(n_hyp, 0);
  long n_r = 0, n_h = 0;
  std::size_t e = 0;
  while (e < events.size()) {
    const double t = events[e].time;
    for (; e < events.size() && events[e].time == t; ++e) {
      const Event &ev = events[e];
      auto &count = ev.is_ref ? ref_active[ev.speaker] : hyp_active[ev.speaker];
      auto &total = ev.is_ref ? n_r : n_h;
      const bool was_active = count > 0;
      count += ev.delta;
      if (!was_active && count > 0) ++total;
      if (was_active && count == 0) --total;
    }
    if (e == events.size() || (n_r == 0 && n_h == 0)) continue;

    const double dt = events[e].time - t;
    long correct = 0;
    for (std::size_t j = 0; j < n_hyp; ++j) {
      if (hyp_active[j] > 0 && ref_of_hyp[j] != kUnassigned &&
          ref_active[ref_of_hyp[j]] > 0) {
        ++correct;
      }
    }
    report.total_ref += dt * static_cast<double>(n_r);
    report.miss += dt * static_cast<double>(std::max(n_r - n_h, 0L));
    report.false_alarm += dt * static_cast<double>(std::max(n_h - n_r, 0L));
    report.confusion += dt * static_cast<double>(std::min(n_r, n_h) - correct);
  }

  if (report.total_ref > 0.0) {
    report.der = report.errors() / report.total_ref;
  } else if (report.false_alarm > 0.0) {
    throw UndefinedDer("undefined DER for '" + report.recording_id +
                       "': empty reference but " +
                       fixed(report.false_alarm, 3) +
                       " s of hypothesized speech");
  }
  return report;
}

DerReport aggregate_der(const std::vector<DerReport> &reports) {
  if (reports.empty()) throw EmptyInput("no DER reports to aggregate");
  DerReport all;
  all.recording_id = "ALL";
  for (const auto &r : reports) {
    all.total_ref += r.total_ref;
    all.miss += r.miss;
    all.false_alarm += r.false_alarm;
    all.confusion += r.confusion;
    all.mapping.insert(all.mapping.end(), r.mapping.begin(), r.mapping.end());
  }
  if (all.total_ref > 0.0) {
    all.der = all.errors() / all.total_ref;
  } else if (all.errors() > 0.0) {
    throw UndefinedDer("undefined aggregate DER: empty reference");
  }
  return all;
}

std::string format_der_table(const std::vector<DerReport> &reports) {
  std::size_t width = std::string("recording").size();
  for (const auto &r : reports) width = std::max(width, r.recording_id.size());

  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof line, "%-*s %10s %10s %11s %10s %8s %7s\n",
                static_cast<int>(width), "recording", "total_ref", "miss",
                "false_alarm", "confusion", "DER", "DER%");
  out << line;
  for (const auto &r : reports) {
    std::snprintf(line, sizeof line,
                  "%-*s %10.3f %10.3f %11.3f %10.3f %8.4f %7.2f\n",
                  static_cast<int>(width), r.recording_id.c_str(), r.total_ref,
                  r.miss, r.false_alarm, r.confusion, r.der, 100.0 * r.der);
    out << line;
  }
  return out.str();
}

std::string der_report_json(const DerReport &report) {
  nlohmann::ordered_json obj;
  obj["recording_id"] = report.recording_id;
  obj["total_ref"] = report.total_ref;
  obj["miss"] = report.miss;
  obj["false_alarm"] = report.false_alarm;
  obj["confusion"] = report.confusion;
  obj["der"] = report.der;
  auto mapping = nlohmann::ordered_json::array();
  for (const auto &[hyp, ref] : report.mapping) {
    mapping.push_back({{"hyp", hyp}, {"ref", ref}});
  }
  obj["mapping"] = std::move(mapping);
  return obj.dump();
}

}  // namespace dia
