#pragma once

// Bounded chain complexes of finite-dimensional Q-vector spaces with a
// homological (lowering) differential d_k : C_k -> C_{k-1}.

#include <cassert>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "opk/matrix.hpp"

namespace opk {

struct GradedSpace {
  std::map<int, int> dims;  // only nonzero degrees stored
  std::map<int, std::vector<std::string>> labels;

  GradedSpace() = default;

  int dim(int k) const {
    auto it = dims.find(k);
    return it == dims.end() ? 0 : it->second;
  }
  int total_dim() const {
    int t = 0;
    for (auto& [k, d] : dims) t += d;
    return t;
  }
  int min_deg() const { return dims.empty() ? 0 : dims.begin()->first; }
  int max_deg() const { return dims.empty() ? 0 : dims.rbegin()->first; }

  void set_dim(int k, int d) {
    if (d == 0)
      dims.erase(k);
    else
      dims[k] = d;
  }

  long long euler() const {
    long long e = 0;
    for (auto& [k, d] : dims) e += (k % 2 == 0 ? d : -d);
    return e;
  }

  bool operator==(const GradedSpace& o) const { return dims == o.dims; }
};

struct ChainComplex {
  GradedSpace space;
  std::map<int, Mat> diff;  // diff[k]: C_k -> C_{k-1}; missing means zero

  int dim(int k) const { return space.dim(k); }

  Mat d(int k) const {
    auto it = diff.find(k);
    if (it != diff.end()) return it->second;
    return Mat(space.dim(k - 1), space.dim(k));
  }

  void set_d(int k, Mat m) {
    assert(m.rows() == space.dim(k - 1) && m.cols() == space.dim(k));
    if (m.is_zero())
      diff.erase(k);
    else
      diff[k] = std::move(m);
  }

  // d_{k} . d_{k+1} = 0 in every degree.
  bool d_squared_zero() const {
    for (auto& [k, dk1] : diff) {
      auto it = diff.find(k - 1);
      if (it == diff.end()) continue;
      if (!(it->second * dk1).is_zero()) return false;
    }
    return true;
  }

  static ChainComplex point(int degree, int dim = 1) {
    ChainComplex c;
    c.space.set_dim(degree, dim);
    return c;
  }
};

struct ChainMap {
  GradedSpace source, target;
  std::map<int, Mat> comp;  // comp[k]: source_k -> target_k; missing = zero

  Mat at(int k) const {
    auto it = comp.find(k);
    if (it != comp.end()) return it->second;
    return Mat(target.dim(k), source.dim(k));
  }

  void set(int k, Mat m) {
    assert(m.rows() == target.dim(k) && m.cols() == source.dim(k));
    if (m.is_zero())
      comp.erase(k);
    else
      comp[k] = std::move(m);
  }

  // f d = d f against the given complexes.
  bool commutes(const ChainComplex& src, const ChainComplex& tgt) const {
    int lo = std::min(src.space.min_deg(), tgt.space.min_deg());
    int hi = std::max(src.space.max_deg(), tgt.space.max_deg());
    for (int k = lo; k <= hi + 1; ++k)
      if (at(k - 1) * src.d(k) != tgt.d(k) * at(k)) return false;
    return true;
  }

  static ChainMap identity(const ChainComplex& c) {
    ChainMap f;
    f.source = f.target = c.space;
    for (auto& [k, dm] : c.space.dims) f.comp[k] = Mat::identity(dm);
    return f;
  }
};

struct Homology {
  GradedSpace h;
  std::map<int, Mat> reps;       // columns: representative cycles in C_k
  std::map<int, Mat> boundaries; // columns: image basis of d_{k+1}
};

// Homology of a bounded complex; rejects complexes failing d^2 = 0.
inline Homology homology(const ChainComplex& c) {
  if (!c.d_squared_zero()) throw std::invalid_argument("homology: d^2 != 0");
  Homology out;
  if (c.space.dims.empty()) return out;
  int lo = c.space.min_deg(), hi = c.space.max_deg();
  std::map<int, RowReduceResult> rr;
  for (int k = lo; k <= hi + 1; ++k) rr.emplace(k, row_reduce(c.d(k)));
  for (int k = lo; k <= hi; ++k) {
    const Mat& ker = rr.at(k).kernel;        // cycles
    const Mat& img = rr.at(k + 1).image;     // boundaries
    out.boundaries[k] = img;
    int hdim = ker.cols() - img.cols();
    out.h.set_dim(k, hdim);
    if (hdim == 0) {
      out.reps[k] = Mat(c.dim(k), 0);
      continue;
    }
    // Extend the boundary basis by kernel vectors: pivoting through
    // [boundaries | cycles] keeps exactly hdim new independent columns.
    Mat combined = Mat::hcat(img, ker);
    RowReduceResult cr = row_reduce(combined);
    Mat reps(c.dim(k), hdim);
    int got = 0;
    for (int pc : cr.pivot_cols) {
      if (pc < img.cols()) continue;
      for (int i = 0; i < c.dim(k); ++i) reps.at(i, got) = ker.at(i, pc - img.cols());
      ++got;
    }
    assert(got == hdim);
    out.reps[k] = std::move(reps);
  }
  // Euler characteristic is differential-independent; assert it exactly.
  if (c.space.euler() != out.h.euler())
    throw std::logic_error("homology: Euler characteristic mismatch");
  return out;
}

// Expresses homology classes of cycles in the representative basis.
class HomologyClassSolver {
 public:
  HomologyClassSolver(const Homology& h, int degree)
      : hdim_(h.h.dim(degree)),
        solver_(Mat::hcat(h.reps.count(degree) ? h.reps.at(degree)
                                               : Mat(0, 0),
                          h.boundaries.count(degree) ? h.boundaries.at(degree)
                                                     : Mat(0, 0))) {}

  // v must be a cycle; returns its class coordinates.
  std::vector<Rat> express(const std::vector<Rat>& v) const {
    auto x = solver_.solve(v);
    if (!x) throw std::invalid_argument("cycle not in span of reps+boundaries");
    return std::vector<Rat>(x->begin(), x->begin() + hdim_);
  }

 private:
  int hdim_;
  Solver solver_;
};

// cone(f)_k = target_k (+) source_{k-1}; d = [d_T, f ; 0, -d_S].
inline ChainComplex mapping_cone(const ChainMap& f, const ChainComplex& src,
                                 const ChainComplex& tgt) {
  if (!f.commutes(src, tgt)) throw std::invalid_argument("mapping_cone: not a chain map");
  ChainComplex cone;
  int lo = std::min(src.space.min_deg(), tgt.space.min_deg());
  int hi = std::max(src.space.max_deg(), tgt.space.max_deg()) + 1;
  for (int k = lo; k <= hi; ++k)
    cone.space.set_dim(k, tgt.dim(k) + src.dim(k - 1));
  for (int k = lo; k <= hi; ++k) {
    int rt = tgt.dim(k - 1), rs = src.dim(k - 2);
    int ct = tgt.dim(k), cs = src.dim(k - 1);
    if ((rt + rs) == 0 || (ct + cs) == 0) continue;
    Mat d(rt + rs, ct + cs);
    Mat dt = tgt.d(k), fk = f.at(k - 1), ds = src.d(k - 1);
    for (int i = 0; i < rt; ++i)
      for (int j = 0; j < ct; ++j) d.at(i, j) = dt.at(i, j);
    for (int i = 0; i < rt; ++i)
      for (int j = 0; j < cs; ++j) d.at(i, ct + j) = fk.at(i, j);
    for (int i = 0; i < rs; ++i)
      for (int j = 0; j < cs; ++j) d.at(rt + i, ct + j) = -ds.at(i, j);
    cone.set_d(k, std::move(d));
  }
  return cone;
}

// Tensor product with the Koszul rule d(x@y) = dx@y + (-1)^|x| x@dy.
// Basis of (A@B)_k ordered by ascending degree p of the A-factor, then the
// A index, then the B index.
inline ChainComplex tensor_complexes(const ChainComplex& a, const ChainComplex& b) {
  ChainComplex t;
  if (a.space.dims.empty() || b.space.dims.empty()) return t;
  auto offsets = [&](int k) {
    // starting offset of the (p, k-p) block within (A@B)_k
    std::map<int, int> off;
    int cur = 0;
    for (auto& [p, da] : a.space.dims) {
      int db = b.dim(k - p);
      if (db == 0) continue;
      off[p] = cur;
      cur += da * db;
    }
    return off;
  };
  int lo = a.space.min_deg() + b.space.min_deg();
  int hi = a.space.max_deg() + b.space.max_deg();
  for (int k = lo; k <= hi; ++k) {
    int total = 0;
    for (auto& [p, da] : a.space.dims) total += da * b.dim(k - p);
    t.space.set_dim(k, total);
  }
  for (int k = lo; k <= hi; ++k) {
    if (t.dim(k) == 0 || t.dim(k - 1) == 0) continue;
    Mat d(t.dim(k - 1), t.dim(k));
    auto offk = offsets(k), offk1 = offsets(k - 1);
    for (auto& [p, da] : a.space.dims) {
      int db = b.dim(k - p);
      if (db == 0) continue;
      int src = offk.at(p);
      // dx @ y : block (p-1, k-p)
      if (a.dim(p - 1) > 0 && offk1.count(p - 1)) {
        Mat dA = a.d(p);
        int dst = offk1.at(p - 1);
        for (int i = 0; i < a.dim(p - 1); ++i)
          for (int j = 0; j < da; ++j) {
            if (is_zero(dA.at(i, j))) continue;
            for (int y = 0; y < db; ++y)
              d.at(dst + i * db + y, src + j * db + y) += dA.at(i, j);
          }
      }
      // (-1)^p x @ dy : block (p, k-1-p)
      if (b.dim(k - 1 - p) > 0 && offk1.count(p)) {
        Mat dB = b.d(k - p);
        int dst = offk1.at(p);
        Rat sign = (p % 2 == 0) ? 1 : -1;
        int db1 = b.dim(k - 1 - p);
        for (int j = 0; j < da; ++j)
          for (int i = 0; i < db1; ++i)
            for (int y = 0; y < db; ++y)
              if (!is_zero(dB.at(i, y)))
                d.at(dst + j * db1 + i, src + j * db + y) += sign * dB.at(i, y);
      }
    }
    t.set_d(k, std::move(d));
  }
  return t;
}

// Degree d of the output is degree d-k of the input; differential scaled by (-1)^k.
inline ChainComplex shift_complex(const ChainComplex& a, int k) {
  ChainComplex s;
  for (auto& [p, dm] : a.space.dims) s.space.set_dim(p + k, dm);
  Rat sign = (k % 2 == 0) ? 1 : -1;
  for (auto& [p, m] : a.diff) s.set_d(p + k, m.scaled(sign));
  return s;
}

}  // namespace opk
