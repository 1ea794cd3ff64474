#include <algorithm>
#include <cmath>
#include <limits>

#include "dia/der.hpp"

namespace dia {
namespace {

// Shortest augmenting path Hungarian method (potentials form) for a
// rows <= cols cost matrix. Returns the column of each row.
std::vector<std::size_t> hungarian_min(const Matrix &cost) {
  const std::size_t n = cost.size();
  const std::size_t m = n == 0 ? 0 : cost[0].size();
  const double inf = std::numeric_limits<double>::infinity();
  // 1-based indexing, row/col 0 is the virtual source.
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
  std::vector<std::size_t> match_of_col(m + 1, 0), way(m + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    match_of_col[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(m + 1, inf);
    std::vector<bool> used(m + 1, false);
    do {
      used[j0] = true;
      const std::size_t i0 = match_of_col[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= m; ++j) {
        if (used[j]) {
          u[match_of_col[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match_of_col[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      match_of_col[j0] = match_of_col[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<std::size_t> col_of_row(n, kUnassigned);
  for (std::size_t j = 1; j <= m; ++j) {
    if (match_of_col[j] != 0) col_of_row[match_of_col[j] - 1] = j - 1;
  }
  return col_of_row;
}

double assignment_value(const Matrix &w, const std::vector<std::size_t> &a) {
  double total = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != kUnassigned) total += w[i][a[i]];
  }
  return total;
}

double best_value(const Matrix &w) {
  return assignment_value(w, max_weight_assignment(w));
}

}  // namespace

std::vector<std::size_t> max_weight_assignment(const Matrix &weights) {
  const std::size_t rows = weights.size();
  const std::size_t cols = rows == 0 ? 0 : weights[0].size();
  if (rows == 0 || cols == 0) return std::vector<std::size_t>(rows, kUnassigned);

  if (rows <= cols) {
    Matrix cost(rows, std::vector<double>(cols));
    for (std::size_t i = 0; i < rows; ++i) {
      for (std::size_t j = 0; j < cols; ++j) cost[i][j] = -weights[i][j];
    }
    return hungarian_min(cost);
  }
  Matrix cost(cols, std::vector<double>(rows));
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) cost[j][i] = -weights[i][j];
  }
  const auto row_of_col = hungarian_min(cost);
  std::vector<std::size_t> out(rows, kUnassigned);
  for (std::size_t j = 0; j < cols; ++j) out[row_of_col[j]] = j;
  return out;
}

std::vector<std::pair<std::size_t, std::size_t>> optimal_mapping(
    const Matrix &overlap) {
  const std::size_t rows = overlap.size();
  const std::size_t cols = rows == 0 ? 0 : overlap[0].size();
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  const double optimum = best_value(overlap);
  if (!(optimum > 0.0)) return pairs;
  const double tol = 1e-9 * std::max(1.0, optimum);

  // Fix pairs one at a time, always taking the smallest (row, col) that
  // still admits an optimal completion. Rows skipped over stay unmatched.
  std::vector<bool> col_used(cols, false);
  double fixed = 0.0;
  std::size_t next_row = 0;
  while (fixed < optimum - tol) {
    bool extended = false;
    for (std::size_t i = next_row; i < rows && !extended; ++i) {
      for (std::size_t j = 0; j < cols && !extended; ++j) {
        if (col_used[j] || !(overlap[i][j] > 0.0)) continue;
        Matrix rest;
        for (std::size_t r = i + 1; r < rows; ++r) {
          std::vector<double> row;
          for (std::size_t c = 0; c < cols; ++c) {
            if (!col_used[c] && c != j) row.push_back(overlap[r][c]);
          }
          rest.push_back(std::move(row));
        }
        if (fixed + overlap[i][j] + best_value(rest) >= optimum - tol) {
          pairs.emplace_back(i, j);
          fixed += overlap[i][j];
          col_used[j] = true;
          next_row = i + 1;
          extended = true;
        }
      }
    }
    if (!extended) break;
  }
  return pairs;
}

}  // namespace dia
