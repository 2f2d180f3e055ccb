#pragma once

// Symmetric sequences of Sigma-complexes up to an arity bound, the
// composition product, and the Schur-type functors D_n and Sym.

#include <map>
#include <vector>

#include "opk/sigma.hpp"

namespace opk {

// Flat enumeration of the basis of a complex: ascending degree, then index.
struct FlatBasis {
  std::vector<std::pair<int, int>> slots;  // (degree, index in degree)
  std::map<int, int> offset;               // degree -> first flat index

  explicit FlatBasis(const GradedSpace& g = {}) {
    int cur = 0;
    for (auto& [k, d] : g.dims) {
      offset[k] = cur;
      for (int i = 0; i < d; ++i) slots.push_back({k, i});
      cur += d;
    }
  }
  int size() const { return int(slots.size()); }
  int flat(int deg, int idx) const { return offset.at(deg) + idx; }
  int degree(int f) const { return slots[f].first; }
  int index(int f) const { return slots[f].second; }
};

struct SymSeq {
  int arity_bound = 0;
  std::vector<SigmaComplex> terms;  // terms[n-1] is the arity-n term

  SymSeq() = default;
  explicit SymSeq(int bound) : arity_bound(bound) {
    for (int n = 1; n <= bound; ++n) terms.push_back(SigmaComplex::zero(n));
  }

  SigmaComplex& at(int n) { return terms.at(n - 1); }
  const SigmaComplex& at(int n) const { return terms.at(n - 1); }
};

// Unit sequence: Q in arity 1, degree 0.
inline SymSeq unit_seq(int arity_bound) {
  assert(arity_bound >= 1);
  SymSeq u(arity_bound);
  u.at(1) = SigmaComplex::trivial(1, ChainComplex::point(0));
  return u;
}

inline SymSeq seq_truncate(const SymSeq& a, int n) {
  assert(n >= 1 && n <= a.arity_bound);
  SymSeq t(a.arity_bound);
  for (int k = 1; k <= n; ++k) t.at(k) = a.at(k);
  return t;
}

// ---------------------------------------------------------------------------
// Set partitions of {0..d-1} via restricted growth strings, lexicographic.
// Blocks are listed in order of their minimal element.

using SetPartition = std::vector<std::vector<int>>;

inline std::vector<SetPartition> set_partitions(int d) {
  std::vector<SetPartition> out;
  std::vector<int> rgs(d, 0);
  auto emit = [&]() {
    int k = 0;
    for (int x : rgs) k = std::max(k, x + 1);
    SetPartition p(k);
    for (int i = 0; i < d; ++i) p[rgs[i]].push_back(i);
    out.push_back(std::move(p));
  };
  auto rec = [&](auto&& self, int pos, int maxv) -> void {
    if (pos == d) {
      emit();
      return;
    }
    for (int v = 0; v <= maxv + 1; ++v) {
      rgs[pos] = v;
      self(self, pos + 1, std::max(maxv, v));
    }
  };
  if (d > 0)
    rec(rec, 0, -1);
  else
    out.push_back({});
  return out;
}

// Applies sigma to the letters of a partition and re-canonicalizes; returns
// the new partition plus the position permutation of blocks (old block j sits
// at position block_perm[j] in the new ordering).
inline std::pair<SetPartition, Perm> relabel_partition(const SetPartition& p, const Perm& sigma) {
  int k = int(p.size());
  std::vector<std::pair<int, int>> mins(k);  // (new min, old block index)
  SetPartition moved(k);
  for (int j = 0; j < k; ++j) {
    for (int x : p[j]) moved[j].push_back(sigma[x]);
    std::sort(moved[j].begin(), moved[j].end());
    mins[j] = {moved[j][0], j};
  }
  std::sort(mins.begin(), mins.end());
  SetPartition out(k);
  Perm block_perm(k);
  for (int t = 0; t < k; ++t) {
    out[t] = moved[mins[t].second];
    block_perm[mins[t].second] = t;
  }
  return {out, block_perm};
}

// ---------------------------------------------------------------------------
// Composition product.

namespace detail {

// Linear combinations over a keyed basis.
template <class Key>
using Combo = std::map<Key, Rat>;

template <class Key>
void combo_add(Combo<Key>& c, const Key& k, const Rat& v) {
  if (is_zero(v)) return;
  auto [it, fresh] = c.emplace(k, v);
  if (!fresh) {
    it->second += v;
    if (is_zero(it->second)) c.erase(it);
  }
}

}  // namespace detail

// Basis element of (A o B)(d): a set partition, a flat basis index of
// A(#blocks), and one flat basis index of B(|block|) per block. The tensor
// order is a (x) b_1 (x) ... (x) b_k with blocks by minimal element.
struct ComposeBasisElem {
  int part = 0;                // index into set_partitions(d)
  int a_flat = 0;
  std::vector<int> b_flats;

  auto key() const {
    std::vector<int> k{part, a_flat};
    k.insert(k.end(), b_flats.begin(), b_flats.end());
    return k;
  }
};

class ComposedTerm {
 public:
  // Builds (A o B)(d) as a SigmaComplex given the full sequences.
  ComposedTerm(const SymSeq& a, const SymSeq& b, int d) : a_(a), b_(b), d_(d) {
    parts_ = set_partitions(d);
    for (int n = 1; n <= a.arity_bound; ++n) {
      a_fb_.push_back(FlatBasis(a.at(n).cx.space));
      b_fb_.push_back(FlatBasis(b.at(n).cx.space));
    }
    enumerate();
    build_complex();
    build_action();
  }

  const SigmaComplex& sigma() const { return sc_; }
  const std::vector<ComposeBasisElem>& basis() const { return elems_; }
  int degree_of(int id) const { return deg_[id]; }

 private:
  const SymSeq& a_;
  const SymSeq& b_;
  int d_;
  std::vector<SetPartition> parts_;
  std::vector<FlatBasis> a_fb_, b_fb_;  // per arity (1-based shifted)

  std::vector<ComposeBasisElem> elems_;
  std::vector<int> deg_;
  std::map<std::vector<int>, int> lookup_;         // key -> element id
  std::map<int, std::vector<int>> by_degree_;      // degree -> ids in order
  std::map<int, std::map<int, int>> pos_in_degree_;  // degree -> id -> position
  SigmaComplex sc_;

  const FlatBasis& afb(int n) const { return a_fb_[n - 1]; }
  const FlatBasis& bfb(int n) const { return b_fb_[n - 1]; }

  std::vector<int> factor_degrees(const ComposeBasisElem& e) const {
    const auto& p = parts_[e.part];
    int k = int(p.size());
    std::vector<int> degs{afb(k).degree(e.a_flat)};
    for (int j = 0; j < k; ++j) degs.push_back(bfb(int(p[j].size())).degree(e.b_flats[j]));
    return degs;
  }

  void enumerate() {
    for (int pi = 0; pi < int(parts_.size()); ++pi) {
      const auto& p = parts_[pi];
      int k = int(p.size());
      if (k > a_.arity_bound) continue;
      if (afb(k).size() == 0) continue;
      bool ok = true;
      for (auto& blk : p)
        if (bfb(int(blk.size())).size() == 0) ok = false;
      if (!ok) continue;
      std::vector<int> bsel(k, 0);
      for (int af = 0; af < afb(k).size(); ++af) {
        std::fill(bsel.begin(), bsel.end(), 0);
        for (;;) {
          ComposeBasisElem e{pi, af, bsel};
          int deg = afb(k).degree(af);
          for (int j = 0; j < k; ++j) deg += bfb(int(p[j].size())).degree(bsel[j]);
          int id = int(elems_.size());
          elems_.push_back(e);
          deg_.push_back(deg);
          lookup_[e.key()] = id;
          pos_in_degree_[deg][id] = int(by_degree_[deg].size());
          by_degree_[deg].push_back(id);
          // odometer: last block fastest
          int t = k - 1;
          while (t >= 0) {
            if (++bsel[t] < bfb(int(p[t].size())).size()) break;
            bsel[t] = 0;
            --t;
          }
          if (t < 0) break;
        }
      }
    }
  }

  void build_complex() {
    sc_.n = d_;
    sc_.gen.resize(std::max(0, d_ - 1));
    for (auto& [k, ids] : by_degree_) sc_.cx.space.set_dim(k, int(ids.size()));
    // Leibniz differential over all tensor factors.
    for (auto& [k, ids] : by_degree_) {
      if (by_degree_.count(k - 1) == 0) continue;
      Mat dmat(int(by_degree_.at(k - 1).size()), int(ids.size()));
      for (int col = 0; col < int(ids.size()); ++col) {
        const auto& e = elems_[ids[col]];
        const auto& p = parts_[e.part];
        int nblk = int(p.size());
        auto degs = factor_degrees(e);
        int prefix = 0;
        for (int t = 0; t <= nblk; ++t) {
          Rat sign = (prefix % 2 == 0) ? 1 : -1;
          if (t == 0) {
            const auto& A = a_.at(nblk);
            auto [adeg, aidx] = afb(nblk).slots[e.a_flat];
            Mat dA = A.cx.d(adeg);
            for (int r = 0; r < dA.rows(); ++r) {
              if (is_zero(dA.at(r, aidx))) continue;
              ComposeBasisElem e2 = e;
              e2.a_flat = afb(nblk).flat(adeg - 1, r);
              add_entry(dmat, k - 1, e2, col, sign * dA.at(r, aidx));
            }
          } else {
            int bs = int(p[t - 1].size());
            const auto& B = b_.at(bs);
            auto [bdeg, bidx] = bfb(bs).slots[e.b_flats[t - 1]];
            Mat dB = B.cx.d(bdeg);
            for (int r = 0; r < dB.rows(); ++r) {
              if (is_zero(dB.at(r, bidx))) continue;
              ComposeBasisElem e2 = e;
              e2.b_flats[t - 1] = bfb(bs).flat(bdeg - 1, r);
              add_entry(dmat, k - 1, e2, col, sign * dB.at(r, bidx));
            }
          }
          prefix += degs[t];
        }
      }
      sc_.cx.set_d(k, std::move(dmat));
    }
  }

  void add_entry(Mat& m, int deg, const ComposeBasisElem& e, int col, const Rat& v) {
    auto it = lookup_.find(e.key());
    assert(it != lookup_.end());
    m.at(pos_in_degree_.at(deg).at(it->second), col) += v;
  }

  // Action of sigma on a single basis element, as a combination.
  detail::Combo<std::vector<int>> act_elem(const ComposeBasisElem& e, const Perm& sigma) const {
    const auto& p = parts_[e.part];
    int k = int(p.size());
    auto [newp, block_perm] = relabel_partition(p, sigma);
    // locate the new partition
    int npi = -1;
    for (int pi = 0; pi < int(parts_.size()); ++pi)
      if (parts_[pi] == newp) {
        npi = pi;
        break;
      }
    assert(npi >= 0);
    // Within-block relabelings are order-preserving unless letters permute
    // inside one block; compute each block's induced permutation.
    detail::Combo<std::vector<int>> out;
    // Koszul sign: b-factor degrees reorder by block_perm; the a-factor stays
    // in front.
    std::vector<int> bdegs(k), newpos(k);
    for (int j = 0; j < k; ++j) {
      bdegs[j] = bfb(int(p[j].size())).degree(e.b_flats[j]);
      newpos[j] = block_perm[j];
    }
    int koszul = koszul_reorder_sign(bdegs, newpos);

    // induced permutation inside block j
    std::vector<Perm> inner(k);
    for (int j = 0; j < k; ++j) {
      int bs = int(p[j].size());
      std::vector<std::pair<int, int>> order(bs);  // (sigma(x), original pos)
      for (int t = 0; t < bs; ++t) order[t] = {sigma[p[j][t]], t};
      std::sort(order.begin(), order.end());
      Perm ip(bs);
      for (int t = 0; t < bs; ++t) ip[order[t].second] = t;
      inner[j] = ip;
    }

    // Expand: a-factor acted by block_perm, each b-factor by inner[j].
    const auto& A = a_.at(k);
    auto amap = A.act(block_perm);
    auto [adeg, aidx] = afb(k).slots[e.a_flat];
    const Mat& am = amap.at(adeg);
    std::vector<std::map<int, Mat>> bmaps(k);
    for (int j = 0; j < k; ++j) bmaps[j] = b_.at(int(p[j].size())).act(inner[j]);

    // iterate a-target
    for (int ar = 0; ar < am.rows(); ++ar) {
      if (is_zero(am.at(ar, aidx))) continue;
      Rat base = am.at(ar, aidx) * koszul;
      // expand b-factors one by one
      std::vector<std::pair<std::vector<int>, Rat>> partial{{std::vector<int>(k, -1), base}};
      for (int j = 0; j < k; ++j) {
        int bs = int(p[j].size());
        auto [bdeg, bidx] = bfb(bs).slots[e.b_flats[j]];
        const Mat& bm = bmaps[j].at(bdeg);
        std::vector<std::pair<std::vector<int>, Rat>> next;
        for (auto& [sel, cf] : partial)
          for (int br = 0; br < bm.rows(); ++br) {
            if (is_zero(bm.at(br, bidx))) continue;
            auto s2 = sel;
            s2[j] = bfb(bs).flat(bdeg, br);
            next.push_back({std::move(s2), cf * bm.at(br, bidx)});
          }
        partial.swap(next);
      }
      for (auto& [sel, cf] : partial) {
        // new block j' = block_perm[j]: reorder selections to new block order
        ComposeBasisElem e2;
        e2.part = npi;
        e2.a_flat = afb(k).flat(adeg, ar);
        e2.b_flats.assign(k, -1);
        for (int j = 0; j < k; ++j) e2.b_flats[block_perm[j]] = sel[j];
        detail::combo_add(out, e2.key(), cf);
      }
    }
    return out;
  }

  std::map<int, Mat> act_full(const Perm& sigma) const {
    std::map<int, Mat> out;
    for (auto& [k, ids] : by_degree_) {
      Mat m(int(ids.size()), int(ids.size()));
      for (int col = 0; col < int(ids.size()); ++col) {
        auto combo = act_elem(elems_[ids[col]], sigma);
        for (auto& [key, v] : combo) {
          int id = lookup_.at(key);
          m.at(pos_in_degree_.at(k).at(id), col) += v;
        }
      }
      out[k] = std::move(m);
    }
    return out;
  }

  void build_action() {
    for (int i = 0; i + 1 < d_; ++i)
      sc_.gen[i] = act_full(adjacent_transposition(d_, i));
  }
};

// Composition product within the shared arity window.
inline SymSeq compose(const SymSeq& a, const SymSeq& b) {
  if (a.arity_bound != b.arity_bound)
    throw std::invalid_argument("compose: arity-bound mismatch");
  SymSeq out(a.arity_bound);
  for (int d = 1; d <= a.arity_bound; ++d) {
    ComposedTerm ct(a, b, d);
    out.at(d) = ct.sigma();
  }
  return out;
}

// ---------------------------------------------------------------------------
// Extended powers D_n^A(X) and the Schur sum Sym_A(X).

struct ExtendedPower {
  SigmaComplex diagonal;      // A(n) (x) X^{(x)n} with the diagonal action
  SymmetrizerReport report;
  ChainComplex coinvariants;  // quotient model
  ChainComplex invariants;    // subspace model
  // coinvariant basis: representative columns in the diagonal complex
  std::map<int, Mat> coinv_reps;
  std::map<int, Mat> inv_basis;
};

// Diagonal Sigma_n-complex on A(n) (x) X^{(x)n}. Basis: flat index of A(n),
// then an n-tuple of flat X indices (last factor fastest).
class DiagonalPower {
 public:
  DiagonalPower(const SigmaComplex& an, const ChainComplex& x, int n)
      : an_(an), x_(x), n_(n), afb_(an.cx.space), xfb_(x.space) {
    enumerate();
    build();
  }
  const SigmaComplex& sigma() const { return sc_; }
  int elem_count() const { return int(elems_.size()); }
  // id -> (degree, position) and the record itself
  std::pair<int, int> locate(int id) const { return {deg_[id], pos_.at(deg_[id]).at(id)}; }
  const std::pair<int, std::vector<int>>& record(int id) const { return elems_[id]; }
  int id_of(int a_flat, const std::vector<int>& xs) const {
    std::vector<int> key{a_flat};
    key.insert(key.end(), xs.begin(), xs.end());
    return lookup_.at(key);
  }
  int dim_in_degree(int k) const {
    auto it = by_degree_.find(k);
    return it == by_degree_.end() ? 0 : int(it->second.size());
  }

 private:
  const SigmaComplex& an_;
  const ChainComplex& x_;
  int n_;
  FlatBasis afb_, xfb_;
  std::vector<std::pair<int, std::vector<int>>> elems_;  // (a_flat, x tuple)
  std::vector<int> deg_;
  std::map<std::vector<int>, int> lookup_;
  std::map<int, std::vector<int>> by_degree_;
  std::map<int, std::map<int, int>> pos_;
  SigmaComplex sc_;

  void enumerate() {
    if (afb_.size() == 0 || xfb_.size() == 0) return;
    std::vector<int> xs(n_, 0);
    for (int af = 0; af < afb_.size(); ++af) {
      std::fill(xs.begin(), xs.end(), 0);
      for (;;) {
        int deg = afb_.degree(af);
        for (int t = 0; t < n_; ++t) deg += xfb_.degree(xs[t]);
        std::vector<int> key{af};
        key.insert(key.end(), xs.begin(), xs.end());
        int id = int(elems_.size());
        elems_.push_back({af, xs});
        deg_.push_back(deg);
        lookup_[key] = id;
        pos_[deg][id] = int(by_degree_[deg].size());
        by_degree_[deg].push_back(id);
        int t = n_ - 1;
        while (t >= 0) {
          if (++xs[t] < xfb_.size()) break;
          xs[t] = 0;
          --t;
        }
        if (t < 0) break;
      }
    }
  }

  void build() {
    sc_.n = n_;
    sc_.gen.resize(std::max(0, n_ - 1));
    for (auto& [k, ids] : by_degree_) sc_.cx.space.set_dim(k, int(ids.size()));

    // Leibniz differential.
    for (auto& [k, ids] : by_degree_) {
      if (!by_degree_.count(k - 1)) continue;
      Mat dm(int(by_degree_.at(k - 1).size()), int(ids.size()));
      for (int col = 0; col < int(ids.size()); ++col) {
        auto& [af, xs] = elems_[ids[col]];
        int prefix = 0;
        // a factor
        auto [adeg, aidx] = afb_.slots[af];
        Mat dA = an_.cx.d(adeg);
        for (int r = 0; r < dA.rows(); ++r)
          if (!is_zero(dA.at(r, aidx)))
            add(dm, k - 1, afb_.flat(adeg - 1, r), xs, col, dA.at(r, aidx));
        prefix += adeg;
        for (int t = 0; t < n_; ++t) {
          auto [xdeg, xidx] = xfb_.slots[xs[t]];
          Mat dX = x_.d(xdeg);
          Rat sign = (prefix % 2 == 0) ? 1 : -1;
          for (int r = 0; r < dX.rows(); ++r)
            if (!is_zero(dX.at(r, xidx))) {
              auto xs2 = xs;
              xs2[t] = xfb_.flat(xdeg - 1, r);
              add(dm, k - 1, af, xs2, col, sign * dX.at(r, xidx));
            }
          prefix += xdeg;
        }
      }
      sc_.cx.set_d(k, std::move(dm));
    }

    // Generators: diagonal action of s_i.
    for (int i = 0; i + 1 < n_; ++i) {
      std::map<int, Mat> g;
      for (auto& [k, ids] : by_degree_) {
        Mat m(int(ids.size()), int(ids.size()));
        for (int col = 0; col < int(ids.size()); ++col) {
          auto& [af, xs] = elems_[ids[col]];
          auto [adeg, aidx] = afb_.slots[af];
          Mat am = an_.gen_at(i, adeg);
          auto xs2 = xs;
          std::swap(xs2[i], xs2[i + 1]);
          int di = xfb_.degree(xs[i]), dj = xfb_.degree(xs[i + 1]);
          Rat sign = ((di % 2) && (dj % 2)) ? -1 : 1;
          for (int r = 0; r < am.rows(); ++r)
            if (!is_zero(am.at(r, aidx)))
              add(m, k, afb_.flat(adeg, r), xs2, col, sign * am.at(r, aidx));
        }
        g[k] = std::move(m);
      }
      sc_.gen[i] = std::move(g);
    }
  }

  void add(Mat& m, int deg, int af, const std::vector<int>& xs, int col, const Rat& v) {
    std::vector<int> key{af};
    key.insert(key.end(), xs.begin(), xs.end());
    int id = lookup_.at(key);
    m.at(pos_.at(deg).at(id), col) += v;
  }
};

// Induced complex on the invariant subspace / coinvariant quotient.
inline ExtendedPower extended_powers(const SymSeq& a, int n, const ChainComplex& x) {
  assert(n >= 1 && n <= a.arity_bound);
  ExtendedPower out;
  DiagonalPower dp(a.at(n), x, n);
  out.diagonal = dp.sigma();
  out.report = symmetrize(out.diagonal, false);
  out.coinv_reps = out.report.coinvariant_reps;
  out.inv_basis = out.report.invariant_basis;
  // invariants subcomplex
  out.invariants.space = out.report.invariants;
  out.coinvariants.space = out.report.coinvariants;
  const ChainComplex& big = out.diagonal.cx;
  for (auto& [k, dm] : out.report.invariants.dims) {
    if (out.report.invariants.dim(k - 1) == 0) continue;
    Mat dv = big.d(k) * out.inv_basis.at(k);
    Solver sol(out.inv_basis.at(k - 1));
    Mat d(out.report.invariants.dim(k - 1), dm);
    for (int j = 0; j < dm; ++j) {
      auto xv = sol.solve(dv.col_vec(j));
      if (!xv) throw std::logic_error("extended_powers: d does not preserve invariants");
      for (int i = 0; i < d.rows(); ++i) d.at(i, j) = (*xv)[i];
    }
    out.invariants.set_d(k, std::move(d));
  }
  // coinvariant quotient complex: express d(rep) in reps modulo the projector
  // kernel; equivalently, push through the projector and the invariant model,
  // then transport along the norm isomorphism. Simpler: solve against
  // [reps | relation image].
  for (auto& [k, dm] : out.report.coinvariants.dims) {
    int lower = out.report.coinvariants.dim(k - 1);
    if (lower == 0) continue;
    // relation subspace in degree k-1 = ker P = im(I - P)
    Mat rel = Mat::identity(big.dim(k - 1)) - out.report.projector.at(k - 1);
    RowReduceResult relrr = row_reduce(rel);
    Solver sol(Mat::hcat(out.coinv_reps.at(k - 1), relrr.image));
    Mat dv = big.d(k) * out.coinv_reps.at(k);
    Mat d(lower, dm);
    for (int j = 0; j < dm; ++j) {
      auto xv = sol.solve(dv.col_vec(j));
      if (!xv) throw std::logic_error("extended_powers: quotient differential failed");
      for (int i = 0; i < lower; ++i) d.at(i, j) = (*xv)[i];
    }
    out.coinvariants.set_d(k, std::move(d));
  }
  return out;
}

struct SchurSum {
  ChainComplex total;
  std::vector<ExtendedPower> pieces;        // index n-1, for 1 <= n <= weight bound
  // offset of the weight-n block inside each degree of the total complex
  std::vector<std::map<int, int>> offsets;  // [n-1][degree]
};

// Truncated Sym_A(X) = direct sum of coinvariant extended powers.
inline SchurSum schur_sum(const SymSeq& a, const ChainComplex& x, int weight_bound) {
  assert(weight_bound >= 1 && weight_bound <= a.arity_bound);
  SchurSum s;
  s.pieces.reserve(weight_bound);
  for (int n = 1; n <= weight_bound; ++n) s.pieces.push_back(extended_powers(a, n, x));
  s.offsets.resize(weight_bound);
  for (int n = 1; n <= weight_bound; ++n) {
    for (auto& [k, dm] : s.pieces[n - 1].coinvariants.space.dims) {
      s.offsets[n - 1][k] = s.total.space.dim(k);
      s.total.space.set_dim(k, s.total.space.dim(k) + dm);
    }
  }
  int lo = s.total.space.dims.empty() ? 0 : s.total.space.min_deg();
  int hi = s.total.space.dims.empty() ? -1 : s.total.space.max_deg();
  for (int k = lo; k <= hi; ++k) {
    if (s.total.dim(k) == 0 || s.total.dim(k - 1) == 0) continue;
    Mat d(s.total.dim(k - 1), s.total.dim(k));
    for (int n = 1; n <= weight_bound; ++n) {
      const ChainComplex& c = s.pieces[n - 1].coinvariants;
      if (c.dim(k) == 0 || c.dim(k - 1) == 0) continue;
      Mat dn = c.d(k);
      int ro = s.offsets[n - 1].at(k - 1), co = s.offsets[n - 1].at(k);
      for (int i = 0; i < dn.rows(); ++i)
        for (int j = 0; j < dn.cols(); ++j) d.at(ro + i, co + j) = dn.at(i, j);
    }
    s.total.set_d(k, std::move(d));
  }
  return s;
}

}  // namespace opk
