#pragma once

// Dense matrices over Q with fraction-preserving Gauss-Jordan elimination.
// The pivot rule (leftmost column, first usable row) is fixed so that ranks,
// kernels and image bases are bit-identical across runs.

#include <cassert>
#include <optional>
#include <vector>

#include "opk/rational.hpp"

namespace opk {

class Mat {
 public:
  Mat() : rows_(0), cols_(0) {}
  Mat(int rows, int cols) : rows_(rows), cols_(cols), a_(size_t(rows) * cols) {
    assert(rows >= 0 && cols >= 0);
  }

  static Mat identity(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  Rat& at(int i, int j) {
    assert(i >= 0 && i < rows_ && j >= 0 && j < cols_);
    return a_[size_t(i) * cols_ + j];
  }
  const Rat& at(int i, int j) const {
    assert(i >= 0 && i < rows_ && j >= 0 && j < cols_);
    return a_[size_t(i) * cols_ + j];
  }

  bool is_zero() const {
    for (const auto& x : a_)
      if (!opk::is_zero(x)) return false;
    return true;
  }

  bool operator==(const Mat& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
  }
  bool operator!=(const Mat& o) const { return !(*this == o); }

  Mat operator*(const Mat& o) const {
    assert(cols_ == o.rows_);
    Mat r(rows_, o.cols_);
    for (int i = 0; i < rows_; ++i)
      for (int k = 0; k < cols_; ++k) {
        const Rat& x = at(i, k);
        if (opk::is_zero(x)) continue;
        for (int j = 0; j < o.cols_; ++j) {
          const Rat& y = o.at(k, j);
          if (!opk::is_zero(y)) r.at(i, j) += x * y;
        }
      }
    return r;
  }

  Mat operator+(const Mat& o) const {
    assert(rows_ == o.rows_ && cols_ == o.cols_);
    Mat r(rows_, cols_);
    for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] + o.a_[i];
    return r;
  }

  Mat operator-(const Mat& o) const {
    assert(rows_ == o.rows_ && cols_ == o.cols_);
    Mat r(rows_, cols_);
    for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] - o.a_[i];
    return r;
  }

  Mat scaled(const Rat& c) const {
    Mat r(rows_, cols_);
    for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = c * a_[i];
    return r;
  }

  Mat transpose() const {
    Mat r(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
    return r;
  }

  Mat col(int j) const {
    Mat r(rows_, 1);
    for (int i = 0; i < rows_; ++i) r.at(i, 0) = at(i, j);
    return r;
  }

  std::vector<Rat> col_vec(int j) const {
    std::vector<Rat> v(rows_);
    for (int i = 0; i < rows_; ++i) v[i] = at(i, j);
    return v;
  }

  void set_col(int j, const std::vector<Rat>& v) {
    assert(int(v.size()) == rows_);
    for (int i = 0; i < rows_; ++i) at(i, j) = v[i];
  }

  // Columns of `a` followed by columns of `b`.
  static Mat hcat(const Mat& a, const Mat& b) {
    assert(a.rows() == b.rows());
    Mat r(a.rows(), a.cols() + b.cols());
    for (int i = 0; i < a.rows(); ++i) {
      for (int j = 0; j < a.cols(); ++j) r.at(i, j) = a.at(i, j);
      for (int j = 0; j < b.cols(); ++j) r.at(i, a.cols() + j) = b.at(i, j);
    }
    return r;
  }

  // Kronecker product on column vectors: (a (x) b)(i*br+k, j*bc+l).
  static Mat kronecker(const Mat& a, const Mat& b) {
    Mat r(a.rows() * b.rows(), a.cols() * b.cols());
    for (int i = 0; i < a.rows(); ++i)
      for (int j = 0; j < a.cols(); ++j) {
        if (opk::is_zero(a.at(i, j))) continue;
        for (int k = 0; k < b.rows(); ++k)
          for (int l = 0; l < b.cols(); ++l)
            if (!opk::is_zero(b.at(k, l)))
              r.at(i * b.rows() + k, j * b.cols() + l) = a.at(i, j) * b.at(k, l);
      }
    return r;
  }

 private:
  int rows_, cols_;
  std::vector<Rat> a_;
};

struct RowReduceResult {
  int rank = 0;
  std::vector<int> pivot_cols;  // strictly increasing
  Mat rref;                     // reduced row echelon form
  Mat kernel;                   // columns form a kernel basis
  Mat image;                    // columns = pivot columns of the input
};

// Fraction-preserving Gauss-Jordan with a fixed pivot rule: walk columns left
// to right, pivot on the first not-yet-used row with a nonzero entry.
inline RowReduceResult row_reduce(const Mat& m) {
  RowReduceResult res;
  Mat a = m;
  const int rows = a.rows(), cols = a.cols();
  std::vector<int> pivot_row_of_col(cols, -1);
  int next_row = 0;
  for (int c = 0; c < cols && next_row < rows; ++c) {
    int pr = -1;
    for (int r = next_row; r < rows; ++r)
      if (!opk::is_zero(a.at(r, c))) {
        pr = r;
        break;
      }
    if (pr < 0) continue;
    if (pr != next_row)
      for (int j = 0; j < cols; ++j) swap(a.at(pr, j), a.at(next_row, j));
    pr = next_row;
    Rat inv = 1 / a.at(pr, c);
    for (int j = c; j < cols; ++j) a.at(pr, j) = a.at(pr, j) * inv;
    for (int r = 0; r < rows; ++r) {
      if (r == pr || opk::is_zero(a.at(r, c))) continue;
      Rat f = a.at(r, c);
      for (int j = c; j < cols; ++j) a.at(r, j) -= f * a.at(pr, j);
    }
    res.pivot_cols.push_back(c);
    pivot_row_of_col[c] = pr;
    ++next_row;
  }
  res.rank = int(res.pivot_cols.size());
  res.rref = a;

  // Kernel: one column per free column.
  std::vector<int> free_cols;
  {
    size_t pi = 0;
    for (int c = 0; c < cols; ++c) {
      if (pi < res.pivot_cols.size() && res.pivot_cols[pi] == c)
        ++pi;
      else
        free_cols.push_back(c);
    }
  }
  res.kernel = Mat(cols, int(free_cols.size()));
  for (size_t k = 0; k < free_cols.size(); ++k) {
    int f = free_cols[k];
    res.kernel.at(f, int(k)) = 1;
    for (size_t pi = 0; pi < res.pivot_cols.size(); ++pi)
      res.kernel.at(res.pivot_cols[pi], int(k)) = -a.at(int(pi), f);
  }

  res.image = Mat(rows, res.rank);
  for (int k = 0; k < res.rank; ++k)
    for (int i = 0; i < rows; ++i) res.image.at(i, k) = m.at(i, res.pivot_cols[k]);
  return res;
}

inline int rank_of(const Mat& m) { return row_reduce(m).rank; }

// Repeated exact solves against a fixed matrix. Runs the elimination once on
// [A | I] so each solve is a single matrix-vector product.
class Solver {
 public:
  explicit Solver(const Mat& a) : rows_(a.rows()), cols_(a.cols()) {
    Mat aug = Mat::hcat(a, Mat::identity(rows_));
    RowReduceResult r = row_reduce(aug);
    // Pivot columns of A come first in column order, so the pivots of [A|I]
    // within the first cols_ columns are exactly the pivots of A.
    for (int c : r.pivot_cols)
      if (c < cols_) pivot_cols_.push_back(c);
    rank_ = int(pivot_cols_.size());
    rref_a_ = Mat(rows_, cols_);
    transform_ = Mat(rows_, rows_);
    for (int i = 0; i < rows_; ++i) {
      for (int j = 0; j < cols_; ++j) rref_a_.at(i, j) = r.rref.at(i, j);
      for (int j = 0; j < rows_; ++j) transform_.at(i, j) = r.rref.at(i, cols_ + j);
    }
  }

  int rank() const { return rank_; }
  const std::vector<int>& pivot_cols() const { return pivot_cols_; }

  // Returns x with A*x = b if solvable (free vars = 0).
  std::optional<std::vector<Rat>> solve(const std::vector<Rat>& b) const {
    assert(int(b.size()) == rows_);
    std::vector<Rat> y(rows_);
    for (int i = 0; i < rows_; ++i) {
      Rat s = 0;
      for (int j = 0; j < rows_; ++j)
        if (!opk::is_zero(transform_.at(i, j))) s += transform_.at(i, j) * b[j];
      y[i] = s;
    }
    for (int i = rank_; i < rows_; ++i)
      if (!opk::is_zero(y[i])) return std::nullopt;
    std::vector<Rat> x(cols_);
    for (int pi = 0; pi < rank_; ++pi) x[pivot_cols_[pi]] = y[pi];
    return x;
  }

 private:
  int rows_, cols_, rank_ = 0;
  std::vector<int> pivot_cols_;
  Mat rref_a_, transform_;
};

}  // namespace opk
