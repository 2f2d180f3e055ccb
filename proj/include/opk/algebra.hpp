#pragma once

// Finite nilpotent algebra presentations over an operad, their free and
// trivial constructions, the cotangent fiber B(1, O, X), and the truncation
// tower t_n X = B(tau_n O, O, X). The bar complexes reuse the levelled chain
// bases, decorated with carrier elements on the leaves, and pass to
// Sigma_d-coinvariants per leaf weight: an orbit basis when the action is
// monomial, Maschke averaging otherwise.

#include <functional>
#include <memory>
#include <set>

#include "opk/bar.hpp"
#include "opk/levelled.hpp"
#include "opk/symseq.hpp"

namespace opk {

// Deterministic basis of O(n) (x) X^{(x)n}: flat index of O(n) major, then an
// n-tuple of flat X indices with the last factor fastest. Matches the
// enumeration used by the extended-power machinery.
struct DiagBasis {
  FlatBasis afb, xfb;
  int n = 0;
  std::vector<std::pair<int, std::vector<int>>> elems;
  std::vector<int> deg;
  std::map<std::vector<int>, int> lookup;
  std::map<int, std::vector<int>> by_degree;
  std::map<int, std::map<int, int>> pos;

  DiagBasis() = default;
  DiagBasis(const GradedSpace& a, const GradedSpace& x, int arity)
      : afb(a), xfb(x), n(arity) {
    if (afb.size() == 0 || xfb.size() == 0) return;
    std::vector<int> xs(n, 0);
    for (int af = 0; af < afb.size(); ++af) {
      std::fill(xs.begin(), xs.end(), 0);
      for (;;) {
        int dg = afb.degree(af);
        for (int t = 0; t < n; ++t) dg += xfb.degree(xs[t]);
        std::vector<int> key{af};
        key.insert(key.end(), xs.begin(), xs.end());
        int id = int(elems.size());
        elems.push_back({af, xs});
        deg.push_back(dg);
        lookup[key] = id;
        pos[dg][id] = int(by_degree[dg].size());
        by_degree[dg].push_back(id);
        int t = n - 1;
        while (t >= 0) {
          if (++xs[t] < xfb.size()) break;
          xs[t] = 0;
          --t;
        }
        if (t < 0) break;
      }
    }
  }
  int dim_in_degree(int k) const {
    auto it = by_degree.find(k);
    return it == by_degree.end() ? 0 : int(it->second.size());
  }
  int id_of(int af, const std::vector<int>& xs) const {
    std::vector<int> key{af};
    key.insert(key.end(), xs.begin(), xs.end());
    return lookup.at(key);
  }
};

// ---------------------------------------------------------------------------

struct AlgebraPresentation {
  Operad op;
  ChainComplex carrier;
  int weight = 1;  // nilpotence certificate: arities above this act by zero
  // mu[n]: per-degree matrices X_k <- (O(n) (x) X^{(x)n})_k over DiagBasis
  std::map<int, std::map<int, Mat>> mu;
  std::vector<int> weights;  // optional: weight per carrier flat index

  const FlatBasis& xfb() const {
    if (!xfb_) xfb_ = FlatBasis(carrier.space);
    return *xfb_;
  }
  const DiagBasis& diag(int n) const {
    auto it = diag_.find(n);
    if (it == diag_.end())
      it = diag_.emplace(n, DiagBasis(op.seq.at(n).cx.space, carrier.space, n)).first;
    return it->second;
  }

  // mu_n on a single basis tensor; combo over carrier flats.
  detail::Combo<int> apply(int n, int of, const std::vector<int>& xs) const {
    if (n == 1) return {{xs[0], Rat(1)}};
    if (n > weight) return {};
    auto it = mu.find(n);
    if (it == mu.end()) return {};
    const DiagBasis& db = diag(n);
    int id = db.id_of(of, xs);
    int k = db.deg[id];
    auto mit = it->second.find(k);
    if (mit == it->second.end()) return {};
    const Mat& m = mit->second;
    detail::Combo<int> out;
    int col = db.pos.at(k).at(id);
    for (int r = 0; r < m.rows(); ++r)
      if (!is_zero(m.at(r, col))) detail::combo_add(out, xfb().flat(k, r), m.at(r, col));
    return out;
  }

 private:
  mutable std::optional<FlatBasis> xfb_;
  mutable std::map<int, DiagBasis> diag_;
};

inline AlgebraPresentation trivial_algebra(const Operad& o, const ChainComplex& v) {
  AlgebraPresentation a;
  a.op = o;
  a.carrier = v;
  a.weight = 1;
  a.weights.assign(FlatBasis(v.space).size(), 1);
  return a;
}

// ---------------------------------------------------------------------------

namespace algdetail {

// Coordinates in a quotient by a relation subspace, via [reps | relations].
class QuotientCoords {
 public:
  QuotientCoords(const Mat& reps, const Mat& rel_image)
      : dim_(reps.cols()), sol_(Mat::hcat(reps, rel_image)) {}
  std::vector<Rat> coords(const std::vector<Rat>& v) const {
    auto x = sol_.solve(v);
    if (!x) throw std::logic_error("quotient coordinates: vector escapes the span");
    return std::vector<Rat>(x->begin(), x->begin() + dim_);
  }
  int dim() const { return dim_; }

 private:
  int dim_;
  Solver sol_;
};

}  // namespace algdetail

// Truncated free algebra on v: carrier Sym_O(v) up to the weight bound,
// structure maps by operadic grafting.
inline AlgebraPresentation free_algebra(const Operad& o, const ChainComplex& v,
                                        int weight_bound) {
  if (weight_bound < 1 || weight_bound > o.bound())
    throw std::invalid_argument("free_algebra: weight bound outside the arity window");
  AlgebraPresentation a;
  a.op = o;
  a.weight = weight_bound;
  SchurSum s = schur_sum(o.seq, v, weight_bound);
  a.carrier = s.total;
  FlatBasis vfb(v.space);
  FlatBasis xfb(a.carrier.space);
  // locate each carrier flat: its weight piece and diagonal-basis expansion
  std::vector<DiagBasis> piece_db;
  piece_db.reserve(weight_bound);
  for (int m = 1; m <= weight_bound; ++m)
    piece_db.emplace_back(o.seq.at(m).cx.space, v.space, m);
  struct Loc {
    int piece = 0;        // weight m
    int diag_id = 0;      // single diagonal basis element (reps are indicators)
  };
  std::vector<Loc> loc(xfb.size());
  a.weights.assign(xfb.size(), 0);
  for (int f = 0; f < xfb.size(); ++f) {
    int k = xfb.degree(f), p = xfb.index(f);
    for (int m = weight_bound; m >= 1; --m) {
      auto it = s.offsets[m - 1].find(k);
      if (it == s.offsets[m - 1].end() || p < it->second) continue;
      int inner = p - it->second;
      const Mat& reps = s.pieces[m - 1].coinv_reps.at(k);
      int row = -1;
      for (int r = 0; r < reps.rows(); ++r)
        if (!is_zero(reps.at(r, inner))) {
          assert(row < 0 && reps.at(r, inner) == 1);
          row = r;
        }
      // row is the position within degree k of the diagonal complex
      int id = -1;
      for (int cand : piece_db[m - 1].by_degree.at(k))
        if (piece_db[m - 1].pos.at(k).at(cand) == row) {
          id = cand;
          break;
        }
      assert(id >= 0);
      loc[f] = {m, id};
      a.weights[f] = m;
      break;
    }
  }
  // quotient coordinates per (piece, degree)
  std::map<std::pair<int, int>, algdetail::QuotientCoords> qc;
  auto coords_in = [&](int m, int k) -> const algdetail::QuotientCoords& {
    auto key = std::make_pair(m, k);
    auto it = qc.find(key);
    if (it == qc.end()) {
      const ExtendedPower& ep = s.pieces[m - 1];
      Mat rel = Mat::identity(ep.diagonal.cx.dim(k)) - ep.report.projector.at(k);
      it = qc.emplace(key, algdetail::QuotientCoords(ep.coinv_reps.at(k), row_reduce(rel).image))
               .first;
    }
    return it->second;
  };
  for (int n = 2; n <= weight_bound; ++n) {
    DiagBasis db(o.seq.at(n).cx.space, a.carrier.space, n);
    std::map<int, Mat> mats;
    for (auto& [k, ids] : db.by_degree) mats[k] = Mat(a.carrier.dim(k), int(ids.size()));
    for (int id = 0; id < int(db.elems.size()); ++id) {
      auto& [of, xs] = db.elems[id];
      int W = 0;
      for (int x : xs) W += loc[x].piece;
      if (W > weight_bound) continue;
      // graft the underlying operad elements right-to-left; v-tuples
      // concatenate in slot order (all labels sit in degree 0, no signs)
      detail::Combo<int> cur{{of, Rat(1)}};
      int cur_ar = n;
      std::vector<int> vtuple;
      for (int t = n - 1; t >= 0; --t) {
        const Loc& l = loc[xs[t]];
        auto& [g, vs] = piece_db[l.piece - 1].elems[l.diag_id];
        cur = o.comp_apply(cur_ar, t, l.piece, cur, {{g, Rat(1)}});
        cur_ar += l.piece - 1;
        vtuple.insert(vtuple.begin(), vs.begin(), vs.end());
      }
      int k = db.deg[id];
      // the target weight piece may vanish (odd generators); the composite
      // is then pure relation and contributes nothing
      if (s.pieces[W - 1].coinvariants.dim(k) == 0) continue;
      const DiagBasis& tdb = piece_db[W - 1];
      std::vector<Rat> vec(s.pieces[W - 1].diagonal.cx.dim(k));
      for (auto& [gf, c] : cur) {
        int tid = tdb.id_of(gf, vtuple);
        assert(tdb.deg[tid] == k);
        vec[tdb.pos.at(k).at(tid)] += c;
      }
      auto cc = coords_in(W, k).coords(vec);
      int off = s.offsets[W - 1].at(k);
      int col = db.pos.at(k).at(id);
      for (int i = 0; i < int(cc.size()); ++i)
        if (!is_zero(cc[i])) mats[k].at(off + i, col) += cc[i];
    }
    for (auto& [k, m] : mats)
      if (!m.is_zero()) a.mu[n][k] = std::move(m);
  }
  return a;
}

// ---------------------------------------------------------------------------

// Chain-map property, Sigma-invariance, associativity on all composable
// shapes in the window, and the nilpotence certificate (composites of total
// arity beyond the certificate vanish).
inline std::optional<std::string> check_algebra_axioms(const AlgebraPresentation& a) {
  const Operad& o = a.op;
  if (a.weight < 1) return "weight certificate below 1";
  if (a.weight > o.bound()) return "weight certificate beyond the operad window";
  FlatBasis xfb(a.carrier.space);
  auto combo_eq = [](const detail::Combo<int>& l, const detail::Combo<int>& r) {
    detail::Combo<int> d = l;
    for (auto& [k, c] : r) detail::combo_add(d, k, Rat(-c));
    return d.empty();
  };
  for (int n = 2; n <= a.weight; ++n) {
    if (o.dim(n) == 0) continue;
    const DiagBasis& db = a.diag(n);
    for (int id = 0; id < int(db.elems.size()); ++id) {
      auto& [of, xs] = db.elems[id];
      // chain map: d_X mu = mu d, with the Leibniz rule on the inputs
      detail::Combo<int> lhs;
      for (auto& [f, c] : a.apply(n, of, xs)) {
        auto [k, i] = xfb.slots[f];
        Mat dX = a.carrier.d(k);
        for (int r = 0; r < dX.rows(); ++r)
          if (!is_zero(dX.at(r, i)))
            detail::combo_add(lhs, xfb.flat(k - 1, r), Rat(c * dX.at(r, i)));
      }
      detail::Combo<int> rhs;
      int prefix = 0;
      for (int t = 0; t < n; ++t) {
        auto [k, i] = xfb.slots[xs[t]];
        Mat dX = a.carrier.d(k);
        Rat sign = (prefix % 2 == 0) ? 1 : -1;
        for (int r = 0; r < dX.rows(); ++r)
          if (!is_zero(dX.at(r, i))) {
            auto xs2 = xs;
            xs2[t] = xfb.flat(k - 1, r);
            for (auto& [f, c] : a.apply(n, of, xs2))
              detail::combo_add(rhs, f, Rat(sign * dX.at(r, i) * c));
          }
        prefix += k;
      }
      if (!combo_eq(lhs, rhs))
        return "mu_" + std::to_string(n) + " is not a chain map";
      // Sigma-invariance: mu factors through the coinvariants
      for (int s = 0; s + 1 < n; ++s) {
        Perm si = adjacent_transposition(n, s);
        detail::Combo<int> moved;
        auto xs2 = xs;
        std::swap(xs2[s], xs2[s + 1]);
        int ds = xfb.degree(xs[s]), dt = xfb.degree(xs[s + 1]);
        Rat ksign = ((ds % 2) && (dt % 2)) ? -1 : 1;
        for (auto& [g, c] : o.act_apply(n, o.seq.at(n).act(si), {{of, Rat(1)}}))
          for (auto& [f, c2] : a.apply(n, g, xs2))
            detail::combo_add(moved, f, Rat(ksign * c * c2));
        if (!combo_eq(moved, a.apply(n, of, xs)))
          return "mu_" + std::to_string(n) + " is not Sigma-invariant";
      }
    }
  }
  // associativity and the certificate: mu_m(f; ..., mu_k(g; block), ...)
  for (int m = 2; m <= a.weight; ++m) {
    if (o.dim(m) == 0) continue;
    for (int k = 2; k <= a.weight; ++k) {
      if (o.dim(k) == 0 || m + k - 1 > o.bound()) continue;
      int big = m + k - 1;
      std::vector<int> xs(big, 0);
      for (int i = 0; i < m; ++i)
        for (int of = 0; of < o.dim(m); ++of)
          for (int g = 0; g < o.dim(k); ++g) {
            std::fill(xs.begin(), xs.end(), 0);
            for (;;) {
              detail::Combo<int> lhs;
              for (auto& [h, c] : o.comp_apply(m, i, k, {{of, Rat(1)}}, {{g, Rat(1)}}))
                for (auto& [f, c2] : a.apply(big, h, xs))
                  detail::combo_add(lhs, f, Rat(c * c2));
              detail::Combo<int> rhs;
              std::vector<int> inner(xs.begin() + i, xs.begin() + i + k);
              for (auto& [y, c] : a.apply(k, g, inner)) {
                std::vector<int> outer;
                outer.insert(outer.end(), xs.begin(), xs.begin() + i);
                outer.push_back(y);
                outer.insert(outer.end(), xs.begin() + i + k, xs.end());
                for (auto& [f, c2] : a.apply(m, of, outer))
                  detail::combo_add(rhs, f, Rat(c * c2));
              }
              if (!combo_eq(lhs, rhs))
                return "associativity fails at (" + std::to_string(m) + " o_" +
                       std::to_string(i + 1) + " " + std::to_string(k) + ")";
              int t = big - 1;
              while (t >= 0) {
                if (++xs[t] < xfb.size()) break;
                xs[t] = 0;
                --t;
              }
              if (t < 0) break;
            }
          }
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------

// Normalized two-sided bar B(tau_n O, O, X) over a presented algebra, summed
// over leaf weights 1..window and reduced to Sigma-coinvariants.
class AlgBar {
 public:
  // degree_cap limits the chain levels enumerated (-1: none); with cap c the
  // complex is correct in degrees <= c - 1 plus H at degree c - 1.
  AlgBar(const AlgebraPresentation& a, int module_bound, int window = 0,
         int degree_cap = -1)
      : a_(a), n_(module_bound), w_(window > 0 ? window : a.weight), cap_(degree_cap) {
    if (w_ > a_.op.bound())
      throw std::invalid_argument("two-sided bar: window beyond the operad arity bound");
    xfb_ = FlatBasis(a_.carrier.space);
    for (int d = 1; d <= w_; ++d) pieces_.push_back(build_piece(d));
    // total space: pieces stacked in leaf-weight order per degree
    offsets_.resize(w_);
    for (int d = 1; d <= w_; ++d)
      for (auto& [k, dk] : pieces_[d - 1]->cspace.dims) {
        offsets_[d - 1][k] = total_.space.dim(k);
        total_.space.set_dim(k, total_.space.dim(k) + dk);
      }
    build_total_differential();
  }

  const ChainComplex& total() const { return total_; }
  int module_bound() const { return n_; }
  int window() const { return w_; }
  const AlgebraPresentation& algebra() const { return a_; }
  const GradedSpace& piece_space(int d) const { return pieces_[d - 1]->cspace; }
  int offset(int d, int k) const { return offsets_[d - 1].at(k); }

  // metadata of the class at (degree k, total position p)
  int top_arity_at(int k, int p) const { return meta_at(k, p).top_arity; }
  int weight_at(int k, int p) const { return meta_at(k, p).weight; }

  // Subcomplex spanned by classes of a fixed module (top) arity: the
  // levelwise fiber of the tower projection when arity == module_bound.
  // max_weight restricts to total decoration weight (0: no restriction).
  ChainComplex fiber_complex(int top_arity, int max_weight = 0) const {
    return select([&](int k, int p) {
      if (top_arity_at(k, p) != top_arity) return false;
      return max_weight == 0 || weight_at(k, p) <= max_weight;
    });
  }

  // Per-weight split (requires carrier weights); throws if d mixes weights.
  std::map<int, ChainComplex> split_by_weight() const {
    if (a_.weights.empty())
      throw std::invalid_argument("split_by_weight: algebra carries no weight grading");
    std::set<int> ws;
    for (auto& [k, dk] : total_.space.dims)
      for (int p = 0; p < dk; ++p) ws.insert(weight_at(k, p));
    std::map<int, ChainComplex> out;
    for (int w : ws)
      out[w] = select([&](int k, int p) { return weight_at(k, p) == w; });
    return out;
  }

  // Projection to the same bar with a smaller module bound (tower map).
  ChainMap tower_to(const AlgBar& other) const {
    assert(other.w_ == w_ && other.n_ <= n_);
    ChainMap f;
    f.source = total_.space;
    f.target = other.total_.space;
    std::map<int, Mat> mats;
    for (auto& [k, dk] : total_.space.dims) mats[k] = Mat(other.total_.dim(k), dk);
    for (int d = 1; d <= w_; ++d) {
      const Piece& src = *pieces_[d - 1];
      const Piece& tgt = *other.pieces_[d - 1];
      for (auto& [k, dk] : src.cspace.dims) {
        for (int c = 0; c < dk; ++c) {
          // each class is represented by a single decorated element; the
          // levelled id must be translated through the chain/label key
          int rep = src.class_rep.at(k)[c];
          auto& [lvid, xs] = src.elems[rep];
          int tlvid = 0;
          if (d >= 2) {
            tlvid = tgt.lv->find_id(src.lv->elems()[lvid].key());
            if (tlvid < 0) continue;  // killed by the truncation
          }
          auto it = tgt.lookup.find(lv_key(tgt, tlvid, xs));
          if (it == tgt.lookup.end()) continue;
          for (auto& [cc, val] : tgt.project(k, it->second))
            mats[k].at(other.offsets_[d - 1].at(k) + cc, offsets_[d - 1].at(k) + c) += val;
        }
      }
    }
    for (auto& [k, m] : mats) f.set(k, std::move(m));
    return f;
  }

  // Inclusion of the carrier as the weight-1 piece (degreewise).
  std::map<int, Mat> carrier_inclusion() const {
    std::map<int, Mat> out;
    for (auto& [k, dk] : a_.carrier.space.dims) {
      Mat m(total_.dim(k), dk);
      const Piece& p1 = *pieces_[0];
      for (int j = 0; j < dk; ++j) {
        int id = p1.lookup.at({0, xfb_.flat(k, j)});
        for (auto& [cc, val] : p1.project(k, id)) m.at(offsets_[0].at(k) + cc, j) += val;
      }
      out[k] = std::move(m);
    }
    return out;
  }

 private:
  struct Piece {
    int d = 1;
    std::optional<LevelledComplex> lv;  // absent for d == 1
    std::vector<std::pair<int, std::vector<int>>> elems;  // (lv id, leaf flats)
    std::map<std::vector<int>, int> lookup;               // {lv id, xs...} -> id
    std::vector<int> deg;
    std::map<int, std::vector<int>> by_degree;
    std::map<int, std::map<int, int>> pos;
    GradedSpace cspace;
    // class_rep[k][c] = decorated element id representing class c
    std::map<int, std::vector<int>> class_rep;
    // projection of a decorated element onto classes in its degree
    std::map<int, Mat> pimat;  // cdim x dim
    std::vector<detail::Combo<std::pair<int, std::vector<int>>>> dvals;  // full d
    detail::Combo<int> project(int k, int id) const {
      detail::Combo<int> out;
      const Mat& pm = pimat.at(k);
      int col = pos.at(k).at(id);
      for (int r = 0; r < pm.rows(); ++r)
        if (!is_zero(pm.at(r, col))) detail::combo_add(out, r, pm.at(r, col));
      return out;
    }
  };

  struct Meta {
    int top_arity = 1;
    int weight = 0;
  };

  static std::vector<int> lv_key(const Piece& p, int lvid, const std::vector<int>& xs) {
    std::vector<int> key{lvid};
    key.insert(key.end(), xs.begin(), xs.end());
    return key;
  }

  const Meta& meta_at(int k, int p) const {
    return meta_.at(k)[p];
  }

  ChainComplex select(const std::function<bool(int, int)>& keep) const {
    ChainComplex out;
    std::map<int, std::vector<int>> sel;
    for (auto& [k, dk] : total_.space.dims) {
      for (int p = 0; p < dk; ++p)
        if (keep(k, p)) sel[k].push_back(p);
      out.space.set_dim(k, int(sel[k].size()));
    }
    for (auto& [k, cols] : sel) {
      if (out.space.dim(k - 1) == 0 || cols.empty()) continue;
      Mat dk = total_.d(k);
      Mat m(out.space.dim(k - 1), int(cols.size()));
      const auto& rows = sel.at(k - 1);
      for (int j = 0; j < int(cols.size()); ++j) {
        // assert the selected span really is a subcomplex
        std::map<int, Rat> colvals;
        for (int r = 0; r < dk.rows(); ++r)
          if (!is_zero(dk.at(r, cols[j]))) colvals[r] = dk.at(r, cols[j]);
        for (int i = 0; i < int(rows.size()); ++i) {
          auto it = colvals.find(rows[i]);
          if (it != colvals.end()) {
            m.at(i, j) = it->second;
            colvals.erase(it);
          }
        }
        if (!colvals.empty())
          throw std::logic_error("select: span is not a subcomplex");
      }
      out.set_d(k, std::move(m));
    }
    return out;
  }

  // decorated differential of one element of piece d: chain faces, the
  // bottom face through the algebra action, and the internal differential
  detail::Combo<std::pair<int, std::vector<int>>> dec_d(int d, const Piece& pc,
                                                        int id) const {
    detail::Combo<std::pair<int, std::vector<int>>> out;
    auto& [lvid, xs] = pc.elems[id];
    int p = 0;
    if (d >= 2) {
      const auto& lv = *pc.lv;
      const auto& e = lv.elems()[lvid];
      p = lv.degree(e);
      // faces 1..p of the chain part (decorations untouched)
      for (auto& [key, c] : lv.d_elem(e))
        detail::combo_add(out, {d, lv_key(pc, lv.id_of(key), xs)}, c);
      if (p >= 1) bottom_face(d, lv, e, xs, out);
    }
    // internal differential, Koszul past the p levels and earlier leaves
    int prefix = p;
    for (int t = 0; t < d; ++t) {
      auto [k, i] = xfb_.slots[xs[t]];
      Mat dX = a_.carrier.d(k);
      Rat sign = (prefix % 2 == 0) ? 1 : -1;
      for (int r = 0; r < dX.rows(); ++r)
        if (!is_zero(dX.at(r, i))) {
          auto xs2 = xs;
          xs2[t] = xfb_.flat(k - 1, r);
          detail::combo_add(out, {d, lv_key(pc, lvid, xs2)}, Rat(sign * dX.at(r, i)));
        }
      prefix += k;
    }
    return out;
  }

  // bottom face d_0: evaluate the first level on the leaf decorations
  void bottom_face(int d, const LevelledComplex& lv, const LevelledComplex::Elem& e,
                   const std::vector<int>& xs,
                   detail::Combo<std::pair<int, std::vector<int>>>& out) const {
    const auto& info = leveldetail::all_chains(d)[e.chain];
    const SetPartition& p1 = info.levels[0];
    int dd = int(p1.size());
    // Koszul sign of regrouping the decorations into block order
    std::vector<int> degs(d), newpos(d);
    for (int t = 0; t < d; ++t) degs[t] = xfb_.degree(xs[t]);
    {
      int at = 0;
      for (auto& b : p1)
        for (int leaf : b) newpos[leaf] = at++;
    }
    int ksign = koszul_reorder_sign(degs, newpos);
    // evaluate each block through the algebra
    std::vector<std::pair<std::vector<int>, Rat>> partial{
        {std::vector<int>(dd, -1), Rat(ksign)}};
    for (int b = 0; b < dd; ++b) {
      detail::Combo<int> val;
      if (int(p1[b].size()) == 1) {
        val = {{xs[p1[b][0]], Rat(1)}};
      } else {
        std::vector<int> args;
        for (int leaf : p1[b]) args.push_back(xs[leaf]);
        int lab = e.lab[info.vert_pos.at({1, b})];
        val = a_.apply(int(p1[b].size()), lab, args);
      }
      if (val.empty()) return;
      std::vector<std::pair<std::vector<int>, Rat>> next;
      for (auto& [sel, c] : partial)
        for (auto& [xf, cx] : val) {
          auto s2 = sel;
          s2[b] = xf;
          next.push_back({std::move(s2), Rat(c * cx)});
        }
      partial.swap(next);
    }
    // reduced chain: drop level 1, leaves become the blocks of P_1
    std::vector<SetPartition> newlev;
    for (int l = 2; l <= int(info.levels.size()); ++l) {
      std::map<int, int> blk;  // leaf -> block of P_1
      for (int b = 0; b < dd; ++b)
        for (int leaf : p1[b]) blk[leaf] = b;
      SetPartition np(info.levels[l - 1].size());
      for (int b2 = 0; b2 < int(info.levels[l - 1].size()); ++b2) {
        std::set<int> members;
        for (int leaf : info.levels[l - 1][b2]) members.insert(blk.at(leaf));
        np[b2].assign(members.begin(), members.end());
      }
      newlev.push_back(std::move(np));
    }
    const Piece& tp = *pieces_[dd - 1];
    int nlvid;
    std::vector<int> nlab;
    if (dd == 1) {
      nlvid = 0;
    } else {
      const auto& tlv = *tp.lv;
      LevelledComplex::Elem ne;
      const auto& tchains = leveldetail::all_chains(dd);
      int nci = -1;
      for (int ci = 0; ci < int(tchains.size()); ++ci)
        if (tchains[ci].levels == newlev) {
          nci = ci;
          break;
        }
      assert(nci >= 0);
      const auto& ninfo = tchains[nci];
      ne.chain = nci;
      ne.lab.assign(ninfo.verts.size() + 1, 0);
      for (auto& v : info.verts)
        if (v.level >= 2)
          ne.lab[ninfo.vert_pos.at({v.level - 1, v.block})] =
              e.lab[info.vert_pos.at({v.level, v.block})];
      ne.lab.back() = e.lab.back();
      nlvid = tlv.id_of(ne.key());
    }
    for (auto& [sel, c] : partial) {
      std::vector<int> key{nlvid};
      key.insert(key.end(), sel.begin(), sel.end());
      detail::combo_add(out, {dd, key}, c);
    }
  }

  // Sigma-action of an adjacent transposition on a decorated element.
  detail::Combo<std::vector<int>> dec_act(int d, const Piece& pc, int id, int s) const {
    auto& [lvid, xs] = pc.elems[id];
    auto xs2 = xs;
    std::swap(xs2[s], xs2[s + 1]);
    int di = xfb_.degree(xs[s]), dj = xfb_.degree(xs[s + 1]);
    Rat ksign = ((di % 2) && (dj % 2)) ? -1 : 1;
    detail::Combo<std::vector<int>> out;
    Perm si = adjacent_transposition(d, s);
    for (auto& [key, c] : pc.lv->act_elem(pc.lv->elems()[lvid], si)) {
      std::vector<int> k2{pc.lv->id_of(key)};
      k2.insert(k2.end(), xs2.begin(), xs2.end());
      detail::combo_add(out, k2, Rat(ksign * c));
    }
    return out;
  }

  std::unique_ptr<Piece> build_piece(int d) const {
    auto pc = std::make_unique<Piece>();
    pc->d = d;
    if (d >= 2) pc->lv.emplace(a_.op, n_, d);
    int lv_count = d >= 2 ? pc->lv->dim() : (n_ >= 1 ? 1 : 0);
    std::vector<int> xs(d, 0);
    for (int lvid = 0; lvid < lv_count; ++lvid) {
      if (xfb_.size() == 0) break;
      int p = d >= 2 ? pc->lv->degree(pc->lv->elems()[lvid]) : 0;
      if (cap_ >= 0 && p > cap_) continue;
      std::fill(xs.begin(), xs.end(), 0);
      for (;;) {
        int dg = p;
        for (int t = 0; t < d; ++t) dg += xfb_.degree(xs[t]);
        auto key = lv_key(*pc, lvid, xs);
        int id = int(pc->elems.size());
        pc->elems.push_back({lvid, xs});
        pc->deg.push_back(dg);
        pc->lookup[key] = id;
        pc->pos[dg][id] = int(pc->by_degree[dg].size());
        pc->by_degree[dg].push_back(id);
        int t = d - 1;
        while (t >= 0) {
          if (++xs[t] < xfb_.size()) break;
          xs[t] = 0;
          --t;
        }
        if (t < 0) break;
      }
    }
    coinvariants(d, *pc);
    return pc;
  }

  // Coinvariant quotient of a decorated piece: orbit basis with sign
  // tracking when the action is monomial, Maschke averaging otherwise.
  void coinvariants(int d, Piece& pc) const {
    if (d == 1) {
      for (auto& [k, ids] : pc.by_degree) {
        pc.cspace.set_dim(k, int(ids.size()));
        pc.class_rep[k] = ids;
        pc.pimat[k] = Mat::identity(int(ids.size()));
      }
      return;
    }
    bool monomial = true;
    std::vector<std::vector<std::pair<int, Rat>>> action(d - 1);
    for (int s = 0; s + 1 < d && monomial; ++s) {
      action[s].resize(pc.elems.size());
      for (int id = 0; id < int(pc.elems.size()) && monomial; ++id) {
        auto v = dec_act(d, pc, id, s);
        if (v.size() != 1 || (v.begin()->second != 1 && v.begin()->second != -1)) {
          monomial = false;
          break;
        }
        action[s][id] = {pc.lookup.at(v.begin()->first), v.begin()->second};
      }
    }
    if (monomial) {
      std::vector<int> orbit(pc.elems.size(), -1);
      std::vector<Rat> relsign(pc.elems.size(), Rat(0));
      std::vector<char> dead;
      std::vector<int> roots;
      for (int id = 0; id < int(pc.elems.size()); ++id) {
        if (orbit[id] >= 0) continue;
        int ob = int(roots.size());
        roots.push_back(id);
        dead.push_back(0);
        orbit[id] = ob;
        relsign[id] = 1;
        std::vector<int> stack{id};
        while (!stack.empty()) {
          int cur = stack.back();
          stack.pop_back();
          for (int s = 0; s + 1 < d; ++s) {
            auto [nid, sg] = action[s][cur];
            Rat ns = relsign[cur] * sg;
            if (orbit[nid] < 0) {
              orbit[nid] = ob;
              relsign[nid] = ns;
              stack.push_back(nid);
            } else if (relsign[nid] != ns) {
              dead[ob] = 1;
            }
          }
        }
      }
      // classes per degree in root order
      std::map<int, std::vector<int>> live_by_deg;
      std::vector<int> class_of(roots.size(), -1);
      for (int ob = 0; ob < int(roots.size()); ++ob) {
        if (dead[ob]) continue;
        int k = pc.deg[roots[ob]];
        class_of[ob] = int(live_by_deg[k].size());
        live_by_deg[k].push_back(roots[ob]);
      }
      for (auto& [k, ids] : live_by_deg) {
        pc.cspace.set_dim(k, int(ids.size()));
        pc.class_rep[k] = ids;
      }
      for (auto& [k, ids] : pc.by_degree) {
        int cdim = pc.cspace.dim(k);
        Mat pm(cdim, int(ids.size()));
        for (int col = 0; col < int(ids.size()); ++col) {
          int id = ids[col];
          int ob = orbit[id];
          if (dead[ob]) continue;
          pm.at(class_of[ob], col) = relsign[id];
        }
        pc.pimat[k] = std::move(pm);
      }
      return;
    }
    // dense path: average the whole group elementwise. The action of one
    // permutation on a basis element is a short combination, so the Maschke
    // projector assembles column by column without matrix products.
    auto perms = all_perms(d);
    Rat inv_order = Rat(1) / Rat(int(perms.size()));
    auto act_full = [&](int id, const Perm& sg) {
      detail::Combo<int> cur{{id, Rat(1)}};
      for (int s : adjacent_word(sg)) {
        detail::Combo<int> next;
        for (auto& [e, c] : cur)
          for (auto& [key, c2] : dec_act(d, pc, e, s))
            detail::combo_add(next, pc.lookup.at(key), Rat(c * c2));
        cur.swap(next);
      }
      return cur;
    };
    for (auto& [k, ids] : pc.by_degree) {
      int dm = int(ids.size());
      const auto& posk = pc.pos.at(k);
      Mat P(dm, dm);
      for (int col = 0; col < dm; ++col)
        for (const Perm& sg : perms)
          for (auto& [e, c] : act_full(ids[col], sg)) P.at(posk.at(e), col) += c;
      for (int i = 0; i < dm; ++i)
        for (int j = 0; j < dm; ++j) P.at(i, j) *= inv_order;
      auto rr = row_reduce(P);
      int cdim = rr.rank;
      pc.cspace.set_dim(k, cdim);
      if (cdim == 0) {
        pc.class_rep[k] = {};
        pc.pimat[k] = Mat(0, dm);
        continue;
      }
      std::vector<int> rvec(cdim);
      Mat reps(dm, cdim);
      for (int c = 0; c < cdim; ++c) {
        rvec[c] = ids[rr.pivot_cols[c]];
        reps.at(rr.pivot_cols[c], c) = 1;
      }
      pc.class_rep[k] = rvec;
      Mat rel = Mat::identity(dm) - P;
      algdetail::QuotientCoords q(reps, row_reduce(rel).image);
      Mat pm(cdim, dm);
      for (int j = 0; j < dm; ++j) {
        std::vector<Rat> v(dm);
        v[j] = 1;
        auto cc = q.coords(v);
        for (int i = 0; i < cdim; ++i) pm.at(i, j) = cc[i];
      }
      pc.pimat[k] = std::move(pm);
    }
  }

  void build_total_differential() {
    // metadata first
    for (auto& [k, dk] : total_.space.dims) meta_[k].resize(dk);
    for (int d = 1; d <= w_; ++d) {
      const Piece& pc = *pieces_[d - 1];
      for (auto& [k, ids] : pc.class_rep) {
        for (int c = 0; c < int(ids.size()); ++c) {
          Meta m;
          auto& [lvid, xs] = pc.elems[ids[c]];
          if (d >= 2)
            m.top_arity =
                leveldetail::all_chains(d)[pc.lv->elems()[lvid].chain].top_arity;
          if (!a_.weights.empty())
            for (int x : xs) m.weight += a_.weights[x];
          meta_[k][offsets_[d - 1].at(k) + c] = m;
        }
      }
    }
    std::map<int, Mat> dmats;
    for (auto& [k, dk] : total_.space.dims)
      if (total_.space.dim(k - 1) > 0) dmats[k] = Mat(total_.space.dim(k - 1), dk);
    for (int d = 1; d <= w_; ++d) {
      const Piece& pc = *pieces_[d - 1];
      for (auto& [k, ids] : pc.class_rep) {
        if (!dmats.count(k)) continue;
        Mat& dm = dmats.at(k);
        for (int c = 0; c < int(ids.size()); ++c) {
          int col = offsets_[d - 1].at(k) + c;
          for (auto& [tk, val] : dec_d(d, pc, ids[c])) {
            auto& [dd, key] = tk;
            const Piece& tp = *pieces_[dd - 1];
            int tid = tp.lookup.at(key);
            for (auto& [cc, pv] : tp.project(k - 1, tid))
              dm.at(offsets_[dd - 1].at(k - 1) + cc, col) += val * pv;
          }
        }
      }
    }
    for (auto& [k, m] : dmats) total_.set_d(k, std::move(m));
  }

  AlgebraPresentation a_;
  int n_, w_, cap_;
  FlatBasis xfb_;
  std::vector<std::unique_ptr<Piece>> pieces_;
  std::vector<std::map<int, int>> offsets_;
  ChainComplex total_;
  std::map<int, std::vector<Meta>> meta_;
};

inline AlgBar cotangent_fiber(const AlgebraPresentation& a, int window = 0) {
  return AlgBar(a, 1, window);
}

inline AlgBar algebra_truncate(const AlgebraPresentation& a, int n, int window = 0) {
  return AlgBar(a, n, window);
}

// ---------------------------------------------------------------------------

// H(cot(free)) = H(V): the cotangent fiber of a free algebra retracts to its
// generators. The comparison runs in degrees <= the weight bound; for
// generators in degrees >= 1 (or with genuinely vanishing powers) the window
// truncation only disturbs degrees beyond that.
inline std::optional<std::string> cot_free_check(const Operad& o, const ChainComplex& v,
                                                 int weight_bound) {
  AlgebraPresentation a = free_algebra(o, v, weight_bound);
  Homology h = homology(cotangent_fiber(a).total());
  Homology hv = homology(v);
  for (int k = -1; k <= weight_bound; ++k)
    if (h.h.dim(k) != hv.h.dim(k))
      return "H(cot(free)) differs from H(V) in degree " + std::to_string(k);
  return std::nullopt;
}

// packaging of B O as a symmetric sequence for the extended-power machinery
inline ExtendedPower extended_powers_of_bar(const BarComplex& bar, int n,
                                            const ChainComplex& v) {
  SymSeq seq(bar.bound());
  for (int k = 1; k <= bar.bound(); ++k) seq.at(k) = bar.complex(k);
  return extended_powers(seq, n, v);
}

// cot(trivial(v)) against the extended powers of the bar construction,
// weight by weight.
inline std::optional<std::string> cot_of_trivial_check(const Operad& o,
                                                       const ChainComplex& v,
                                                       int window) {
  AlgebraPresentation a = trivial_algebra(o, v);
  AlgBar cb = cotangent_fiber(a, window);
  auto pieces = cb.split_by_weight();
  BarComplex bar(o, window);
  for (int n = 1; n <= window; ++n) {
    GradedSpace want;
    if (n == 1) {
      want = homology(v).h;
    } else {
      ExtendedPower ep = extended_powers_of_bar(bar, n, v);
      want = homology(ep.coinvariants).h;
    }
    GradedSpace got;
    auto it = pieces.find(n);
    if (it != pieces.end()) got = homology(it->second).h;
    if (got.dims != want.dims)
      return "weight " + std::to_string(n) + ": cotangent piece differs from D_n(B O)";
  }
  return std::nullopt;
}

// D_n applied to a list of (degree, weight) generators with zero
// differential, keeping only tuples of total weight <= W.
inline GradedSpace weighted_power_dims(const Operad& o, int n,
                                       const std::vector<std::pair<int, int>>& gens,
                                       int W) {
  if (n > o.bound() || gens.empty() || o.dim(n) == 0) return {};
  FlatBasis afb(o.seq.at(n).cx.space);
  std::vector<std::pair<int, std::vector<int>>> elems;
  std::map<std::vector<int>, int> lookup;
  std::vector<int> deg;
  std::map<int, std::map<int, int>> pos;
  SigmaComplex sc;
  sc.n = n;
  std::vector<int> xs(n, 0);
  for (int af = 0; af < afb.size(); ++af) {
    std::fill(xs.begin(), xs.end(), 0);
    for (;;) {
      int wt = 0, dg = afb.degree(af);
      for (int t = 0; t < n; ++t) {
        dg += gens[xs[t]].first;
        wt += gens[xs[t]].second;
      }
      if (wt <= W) {
        std::vector<int> key{af};
        key.insert(key.end(), xs.begin(), xs.end());
        lookup[key] = int(elems.size());
        elems.push_back({af, xs});
        deg.push_back(dg);
        pos[dg][int(elems.size()) - 1] = sc.cx.space.dim(dg);
        sc.cx.space.set_dim(dg, sc.cx.space.dim(dg) + 1);
      }
      int t = n - 1;
      while (t >= 0) {
        if (++xs[t] < int(gens.size())) break;
        xs[t] = 0;
        --t;
      }
      if (t < 0) break;
    }
  }
  sc.gen.resize(n - 1);
  for (int s = 0; s + 1 < n; ++s) {
    std::map<int, Mat> g;
    for (auto& [k, dk] : sc.cx.space.dims) g[k] = Mat(dk, dk);
    Perm si = adjacent_transposition(n, s);
    auto am = o.seq.at(n).act(si);
    for (int id = 0; id < int(elems.size()); ++id) {
      auto& [af, txs] = elems[id];
      auto xs2 = txs;
      std::swap(xs2[s], xs2[s + 1]);
      int di = gens[txs[s]].first, dj = gens[txs[s + 1]].first;
      Rat ksign = ((di % 2) && (dj % 2)) ? -1 : 1;
      int adeg = afb.degree(af), ai = afb.index(af);
      const Mat& m = am.at(adeg);
      int k = deg[id];
      for (int r = 0; r < m.rows(); ++r) {
        if (is_zero(m.at(r, ai))) continue;
        std::vector<int> key{afb.flat(adeg, r)};
        key.insert(key.end(), xs2.begin(), xs2.end());
        g[k].at(pos.at(k).at(lookup.at(key)), pos.at(k).at(id)) += ksign * m.at(r, ai);
      }
    }
    sc.gen[s] = std::move(g);
  }
  return symmetrize(sc, false).coinvariants;
}

// fib(t_n X -> t_{n-1} X) against D_n of the cotangent homology, compared
// through total decoration weight <= W on both sides: within a fixed weight
// the window truncation is invisible (each leaf weighs at least one), so the
// weight-restricted comparison is exact.
inline std::optional<std::string> graded_fiber_check(const AlgebraPresentation& a, int n,
                                                     int window = 0) {
  if (n < 2) return "graded fiber needs n >= 2";
  if (a.weights.empty()) return "graded fiber needs a weight grading on the carrier";
  int W = std::max(window > 0 ? window : a.weight, n);
  if (W > a.op.bound()) return "window beyond the operad arity bound";
  AlgBar tn(a, n, W);
  Homology hf = homology(tn.fiber_complex(n, W));
  auto pieces = cotangent_fiber(a, W).split_by_weight();
  std::vector<std::pair<int, int>> gens;  // (degree, weight) of H(cot) classes
  for (auto& [w, cx] : pieces) {
    if (w > W) continue;
    Homology hw = homology(cx);
    for (auto& [k, dk] : hw.h.dims)
      for (int i = 0; i < dk; ++i) gens.push_back({k, w});
  }
  GradedSpace want = weighted_power_dims(a.op, n, gens, W);
  if (hf.h.dims != want.dims) return "fiber homology differs from D_n(H(cot))";
  return std::nullopt;
}

// H_0(t_n A) = A / A^{n+1} for degree-0 algebras, with representative
// matching through the carrier inclusion.
inline std::optional<std::string> pi0_truncation_check(const AlgebraPresentation& a,
                                                       int n) {
  for (auto& [k, dk] : a.carrier.space.dims)
    if (k != 0 && dk > 0) return "carrier not concentrated in degree 0";
  int dim = a.carrier.dim(0);
  FlatBasis xfb(a.carrier.space);
  // ideal powers through binary products
  std::vector<Mat> powers;  // column spans of A^k, k = 1, 2, ...
  powers.push_back(Mat::identity(dim));
  const Operad& o = a.op;
  for (int k = 2; k <= n + 1; ++k) {
    std::vector<std::vector<Rat>> cols;
    for (int i = 1; i <= k - 1; ++i) {
      int j = k - i;
      const Mat& u = powers[i - 1];
      const Mat& w = powers[j - 1];
      for (int f = 0; f < o.dim(2); ++f)
        for (int cu = 0; cu < u.cols(); ++cu)
          for (int cw = 0; cw < w.cols(); ++cw) {
            std::vector<Rat> out(dim);
            for (int bu = 0; bu < dim; ++bu)
              for (int bw = 0; bw < dim; ++bw) {
                if (is_zero(u.at(bu, cu)) || is_zero(w.at(bw, cw))) continue;
                for (auto& [r, c] : a.apply(2, f, {bu, bw}))
                  out[xfb.index(r)] += u.at(bu, cu) * w.at(bw, cw) * c;
              }
            cols.push_back(std::move(out));
          }
    }
    Mat m(dim, int(cols.size()));
    for (int j = 0; j < int(cols.size()); ++j)
      for (int i = 0; i < dim; ++i) m.at(i, j) = cols[j][i];
    powers.push_back(row_reduce(m).image);
  }
  const Mat& ideal = powers[n];  // A^{n+1}
  int quo_dim = dim - ideal.cols();

  // window n+1 so every identification of a decorated generator with a
  // product (or with zero, past the truncation) is present; only chain
  // degrees <= 1 matter for H_0
  int W = std::min(n < a.weight ? n + 1 : std::max(n, 2), o.bound());
  AlgBar tn(a, n, W, /*degree_cap=*/1);
  Homology h = homology(tn.total());
  if (h.h.dim(0) != quo_dim)
    return "H_0(t_n A) has dimension " + std::to_string(h.h.dim(0)) + ", expected " +
           std::to_string(quo_dim);
  // representative matching: the carrier inclusion A -> H_0(t_n A) must be
  // surjective with kernel exactly A^{n+1}
  HomologyClassSolver cls(h, 0);
  Mat inc = tn.carrier_inclusion().at(0);
  Mat phi(h.h.dim(0), dim);
  for (int j = 0; j < dim; ++j) {
    auto cc = cls.express(inc.col_vec(j));
    for (int i = 0; i < int(cc.size()); ++i) phi.at(i, j) = cc[i];
  }
  if (rank_of(phi) != quo_dim) return "carrier does not surject onto H_0";
  Mat ker = row_reduce(phi).kernel;
  if (ker.cols() != ideal.cols()) return "kernel dimension differs from the ideal power";
  if (rank_of(Mat::hcat(ker, ideal)) != ideal.cols())
    return "kernel of the comparison map is not A^{n+1}";
  return std::nullopt;
}

// remainder of the free algebra: sum of extended powers above arity n is
// (n+1)-connective for 1-connective generators.
inline std::optional<std::string> remainder_connectivity_check(const Operad& o,
                                                               const ChainComplex& v,
                                                               int n, int window) {
  for (auto& [k, dk] : v.space.dims)
    if (k < 1 && dk > 0) return "generators not concentrated in degrees >= 1";
  if (window < n + 1) return "window below n+1";
  FlatBasis xfb(v.space);
  for (int k = n + 1; k <= window; ++k) {
    if (k > o.bound()) break;
    long diag = o.dim(k);
    for (int t = 0; t < k; ++t) diag *= xfb.size();
    if (diag <= 100) {
      Homology h = homology(extended_powers(o.seq, k, v).coinvariants);
      for (auto& [dg, dm] : h.h.dims)
        if (dg <= n && dm > 0)
          return "weight " + std::to_string(k) + " has homology in degree " +
                 std::to_string(dg);
      continue;
    }
    // Large diagonal: the dense projector is out of reach, so verify the
    // stronger chain-level statement that the coinvariants already vanish in
    // degrees <= n. dim coinv_g = (1/k!) sum_sigma tr(sigma | degree g), and
    // on A(k) (x) X^{(x)k} the trace factorizes into the operad trace times a
    // signed count of tuples fixed by sigma.
    std::map<int, Rat> coin;
    auto perms = all_perms(k);
    std::vector<int> xs(k, 0);
    for (const Perm& sg : perms) {
      auto am = o.seq.at(k).act(sg);
      std::map<int, Rat> trA;
      for (auto& [adeg, m] : am) {
        Rat t = 0;
        for (int i = 0; i < m.rows(); ++i) t += m.at(i, i);
        if (!is_zero(t)) trA[adeg] = t;
      }
      if (trA.empty()) continue;
      std::map<int, Rat> fixed;  // tuple degree -> signed count of fixed tuples
      std::fill(xs.begin(), xs.end(), 0);
      for (;;) {
        bool fix = true;
        for (int t = 0; t < k && fix; ++t) fix = xs[sg[t]] == xs[t];
        if (fix) {
          std::vector<int> degs(k), npos(k);
          int dg = 0;
          for (int t = 0; t < k; ++t) {
            degs[t] = xfb.degree(xs[t]);
            npos[t] = sg[t];
            dg += degs[t];
          }
          fixed[dg] += koszul_reorder_sign(degs, npos);
        }
        int t = k - 1;
        while (t >= 0) {
          if (++xs[t] < xfb.size()) break;
          xs[t] = 0;
          --t;
        }
        if (t < 0) break;
      }
      for (auto& [adeg, ta] : trA)
        for (auto& [xd, c] : fixed) coin[adeg + xd] += ta * c;
    }
    Rat order = Rat(1);
    for (int t = 2; t <= k; ++t) order *= t;
    for (auto& [dg, tr] : coin)
      if (dg <= n && tr / order != 0)
        return "weight " + std::to_string(k) + " has coinvariant chains in degree " +
               std::to_string(dg);
  }
  return std::nullopt;
}

}  // namespace opk
