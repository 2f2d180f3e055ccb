#pragma once

// Sparse rows over Q with an exact rank computation. Used for the large
// levelled-forest differentials where dense elimination would not fit.
// Pivots are chosen to limit fill-in (shortest active row, rarest column),
// which is fine here: rank is pivot-invariant.

#include <algorithm>
#include <cassert>
#include <vector>

#include "opk/matrix.hpp"
#include "opk/rational.hpp"

namespace opk {

struct SparseMat {
  int rows = 0, cols = 0;
  // Each row: (col, value) sorted by col, values nonzero.
  std::vector<std::vector<std::pair<int, Rat>>> row;

  SparseMat() = default;
  SparseMat(int r, int c) : rows(r), cols(c), row(r) {}

  void add(int r, int c, const Rat& v) {
    assert(r >= 0 && r < rows && c >= 0 && c < cols);
    if (is_zero(v)) return;
    auto& rw = row[r];
    auto it = std::lower_bound(rw.begin(), rw.end(), c,
                               [](const auto& p, int x) { return p.first < x; });
    if (it != rw.end() && it->first == c) {
      it->second += v;
      if (is_zero(it->second)) rw.erase(it);
    } else {
      rw.insert(it, {c, v});
    }
  }

  Mat dense() const {
    Mat m(rows, cols);
    for (int r = 0; r < rows; ++r)
      for (const auto& [c, v] : row[r]) m.at(r, c) = v;
    return m;
  }

  static SparseMat from_dense(const Mat& m) {
    SparseMat s(m.rows(), m.cols());
    for (int r = 0; r < m.rows(); ++r)
      for (int c = 0; c < m.cols(); ++c)
        if (!is_zero(m.at(r, c))) s.row[r].push_back({c, m.at(r, c)});
    return s;
  }
};

// Destructive elimination on a copy; returns the rank.
inline int sparse_rank(SparseMat m) {
  const int rows = m.rows, cols = m.cols;
  std::vector<int> col_count(cols, 0);
  std::vector<char> row_done(rows, 0);
  std::vector<int> row_nnz(rows, 0);
  for (int r = 0; r < rows; ++r) {
    row_nnz[r] = int(m.row[r].size());
    for (const auto& [c, v] : m.row[r]) ++col_count[c];
  }
  int rank = 0;
  for (;;) {
    // Pivot row: shortest nonempty active row.
    int pr = -1, best = INT32_MAX;
    for (int r = 0; r < rows; ++r)
      if (!row_done[r] && row_nnz[r] > 0 && row_nnz[r] < best) {
        best = row_nnz[r];
        pr = r;
      }
    if (pr < 0) break;
    // Pivot column: rarest column in that row.
    int pc = -1, cbest = INT32_MAX;
    for (const auto& [c, v] : m.row[pr])
      if (col_count[c] < cbest) {
        cbest = col_count[c];
        pc = c;
      }
    ++rank;
    row_done[pr] = 1;
    for (const auto& [c, v] : m.row[pr]) --col_count[c];

    Rat pval;
    for (const auto& [c, v] : m.row[pr])
      if (c == pc) pval = v;

    // Eliminate pc from every other active row containing it.
    std::vector<std::pair<int, Rat>> merged;
    for (int r = 0; r < rows; ++r) {
      if (row_done[r] || m.row[r].empty()) continue;
      auto it = std::lower_bound(m.row[r].begin(), m.row[r].end(), pc,
                                 [](const auto& p, int x) { return p.first < x; });
      if (it == m.row[r].end() || it->first != pc) continue;
      Rat f = it->second / pval;
      // row_r -= f * row_pr (merge of two sorted lists)
      merged.clear();
      merged.reserve(m.row[r].size() + m.row[pr].size());
      auto a = m.row[r].begin(), ae = m.row[r].end();
      auto b = m.row[pr].begin(), be = m.row[pr].end();
      while (a != ae || b != be) {
        if (b == be || (a != ae && a->first < b->first)) {
          merged.push_back(*a++);
        } else if (a == ae || b->first < a->first) {
          Rat v = -f * b->second;
          if (!is_zero(v)) {
            merged.push_back({b->first, v});
            ++col_count[b->first];
          }
          ++b;
        } else {
          Rat v = a->second - f * b->second;
          if (!is_zero(v))
            merged.push_back({a->first, v});
          else
            --col_count[a->first];
          ++a;
          ++b;
        }
      }
      m.row[r].swap(merged);
      row_nnz[r] = int(m.row[r].size());
    }
    m.row[pr].clear();
    row_nnz[pr] = 0;
  }
  return rank;
}

}  // namespace opk
