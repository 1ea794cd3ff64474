#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "dia/timeline.hpp"

namespace dia {

using Matrix = std::vector<std::vector<double>>;

struct OverlapMatrix {
  std::vector<std::string> ref_speakers;  // row labels, sorted
  std::vector<std::string> hyp_speakers;  // column labels, sorted
  Matrix seconds;                         // ref x hyp co-activity
};

// Seconds during which ref speaker i and hyp speaker j are both active.
// Throws RecordingMismatch for annotations of different recordings.
OverlapMatrix build_overlap_matrix(const DiarizationAnnotation &ref,
                                   const DiarizationAnnotation &hyp);

// Maximum-weight one-to-one assignment on a rectangular matrix.
// Returns assignment[row] = column, or npos for unassigned rows.
inline constexpr std::size_t kUnassigned = static_cast<std::size_t>(-1);
std::vector<std::size_t> max_weight_assignment(const Matrix &weights);

// Optimal speaker correspondence as (ref index, hyp index) pairs sorted by
// ref index. Zero-overlap pairs are left out; among equal-value optima the
// lexicographically smallest pair list wins.
std::vector<std::pair<std::size_t, std::size_t>> optimal_mapping(
    const Matrix &overlap);

struct ScoringOptions {
  double collar = 0.0;  // seconds excised on each side of ref boundaries
  bool exclude_overlap = false;
};

struct DerReport {
  std::string recording_id;
  double total_ref = 0.0;
  double miss = 0.0;
  double false_alarm = 0.0;
  double confusion = 0.0;
  double der = 0.0;
  std::vector<std::pair<std::string, std::string>> mapping;  // hyp -> ref

  double errors() const { return miss + false_alarm + confusion; }
};

// Regions left out of scoring: +-collar around every reference boundary and,
// optionally, reference overlapped speech. Sorted and disjoint.
std::vector<std::pair<double, double>> scoring_exclusions(
    const DiarizationAnnotation &ref, const ScoringOptions &opts);

// Exact event-sweep DER under the optimal speaker mapping. Throws
// UndefinedDer when the reference is empty but the hypothesis is not.
DerReport compute_der(const DiarizationAnnotation &ref,
                      const DiarizationAnnotation &hyp,
                      const ScoringOptions &opts = {});

// Duration-weighted aggregate labelled "ALL". Throws EmptyInput for an
// empty list.
DerReport aggregate_der(const std::vector<DerReport> &reports);

// Fixed-width table, one row per report.
std::string format_der_table(const std::vector<DerReport> &reports);

// One JSON object per line with the DerReport fields.
std::string der_report_json(const DerReport &report);

}  // namespace dia
