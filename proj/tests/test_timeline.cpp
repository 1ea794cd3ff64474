#include <algorithm>
#include <random>

#include "dia/error.hpp"
#include "dia/timeline.hpp"
#include "doctest.h"
#include "support/synth.hpp"

using namespace dia;

namespace {

DiarizationAnnotation ann(std::vector<std::tuple<std::string, double, double>> segs) {
  DiarizationAnnotation a{"rec", {}};
  for (auto &[spk, s, e] : segs) a.segments.emplace_back("rec", spk, TimeInterval(s, e));
  return a;
}

// Covered milliseconds counted cell by cell.
double grid_union(const std::vector<TimeInterval> &ivs) {
  long long horizon = 0;
  for (const auto &iv : ivs) horizon = std::max(horizon, std::llround(iv.end() * 1000));
  std::vector<bool> cover(horizon, false);
  for (const auto &iv : ivs) {
    for (long long c = std::llround(iv.start() * 1000); c < std::llround(iv.end() * 1000); ++c) {
      cover[c] = true;
    }
  }
  return static_cast<double>(std::count(cover.begin(), cover.end(), true)) / 1000.0;
}

}  // namespace

TEST_CASE("time interval construction") {
  CHECK(TimeInterval(0.5, 2.5).duration() == 2.0);
  CHECK_THROWS_AS(TimeInterval(1.0, 1.0), InvalidInterval);
  CHECK_THROWS_AS(TimeInterval(2.0, 1.0), InvalidInterval);
  CHECK_THROWS_AS(TimeInterval(-0.5, 1.0), InvalidInterval);
  CHECK_THROWS_AS(TimeInterval(0.0, INFINITY), InvalidInterval);
  CHECK_THROWS_AS(SpeakerSegment("rec", "", TimeInterval(0, 1)), InvalidInterval);
}

TEST_CASE("interval_iou examples") {
  CHECK(interval_iou({0, 2}, {0, 2}) == 1.0);
  CHECK(interval_iou({0, 1}, {1, 2}) == 0.0);
  CHECK(interval_iou({0, 2}, {1, 3}) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("union_duration examples") {
  CHECK(union_duration({}) == 0.0);
  CHECK(union_duration({{0, 2}}) == 2.0);
  CHECK(union_duration({{0, 2}, {1, 3}, {5, 6}}) == 4.0);
}

TEST_CASE("normalize_annotation examples") {
  CHECK(normalize_annotation(ann({{"A", 0, 2}, {"A", 1, 3}})) == ann({{"A", 0, 3}}));
  CHECK(normalize_annotation(ann({{"B", 1, 3}, {"A", 0, 2}})) ==
        ann({{"A", 0, 2}, {"B", 1, 3}}));
  CHECK(normalize_annotation(ann({})) == ann({}));
  // touching same-speaker intervals merge
  CHECK(normalize_annotation(ann({{"A", 0, 1}, {"A", 1, 2}})) == ann({{"A", 0, 2}}));

  DiarizationAnnotation mixed{"rec", {}};
  mixed.segments.emplace_back("other", "A", TimeInterval(0, 1));
  CHECK_THROWS_AS(normalize_annotation(mixed), RecordingMismatch);
}

TEST_CASE("overlap_regions examples") {
  using V = std::vector<TimeInterval>;
  CHECK(overlap_regions(ann({{"A", 0, 2}, {"B", 1, 3}})) == V{{1, 2}});
  CHECK(overlap_regions(ann({{"A", 0, 2}, {"B", 2, 4}})).empty());
  CHECK(overlap_regions(normalize_annotation(ann({{"A", 0, 5}, {"B", 1, 2}, {"C", 3, 4}}))) ==
        V{{1, 2}, {3, 4}});
  // three speakers stacked over one region yield a single span
  CHECK(overlap_regions(normalize_annotation(ann({{"A", 0, 4}, {"B", 1, 3}, {"C", 2, 5}}))) ==
        V{{1, 4}});
}

TEST_CASE("timeline properties on random data") {
  synth::Rng rng(7);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<TimeInterval> ivs;
    const int n = static_cast<int>(synth::uniform_int(rng, 1, 12));
    for (int k = 0; k < n; ++k) {
      const long long s = synth::uniform_int(rng, 0, 5000);
      const long long d = synth::uniform_int(rng, 1, 2000);
      ivs.emplace_back(s / 1000.0, (s + d) / 1000.0);
    }

    const TimeInterval &a = ivs.front();
    const TimeInterval &b = ivs.back();
    const double ab = interval_iou(a, b);
    CHECK(ab == interval_iou(b, a));
    CHECK(ab >= 0.0);
    CHECK(ab <= 1.0);
    CHECK((ab == 0.0) == !a.overlaps(b));
    CHECK((ab == 1.0) == (a == b));

    const double u = union_duration(ivs);
    CHECK(u == doctest::Approx(grid_union(ivs)).epsilon(1e-12));
    auto shuffled = ivs;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    CHECK(union_duration(shuffled) == doctest::Approx(u).epsilon(1e-12));
    double sum = 0.0;
    for (const auto &iv : ivs) sum += iv.duration();
    CHECK(u <= sum + 1e-12);

    const auto an = synth::random_annotation(rng, "rec", 4, 15);
    const auto once = normalize_annotation(an);
    CHECK(normalize_annotation(once) == once);
    for (const auto &spk : speakers_of(an)) {
      std::vector<TimeInterval> before, after;
      for (const auto &s : an.segments) if (s.speaker == spk) before.push_back(s.interval);
      for (const auto &s : once.segments) if (s.speaker == spk) after.push_back(s.interval);
      CHECK(union_duration(before) == doctest::Approx(union_duration(after)).epsilon(1e-12));
      for (std::size_t i = 1; i < after.size(); ++i) CHECK(after[i - 1].end() < after[i].start());
    }

    std::vector<TimeInterval> all;
    for (const auto &s : once.segments) all.push_back(s.interval);
    CHECK(union_duration(overlap_regions(once)) <= union_duration(all) + 1e-12);
  }
}
