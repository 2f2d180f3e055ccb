#pragma once

// Bar and cobar constructions on tree bases. The bar complex of a reduced
// operad concentrated in degree 0 carries each vertex in homological degree 1;
// the differential contracts edges, the cooperad structure cuts them. The
// cobar complex of a reduced dg cooperad is the free operad on desuspended
// labels with the edge-expansion differential added on top of the internal
// one. Large arities are served by sparse differentials and elementwise
// traces instead of dense matrices.

#include <set>

#include "opk/operad.hpp"
#include "opk/sparse.hpp"

namespace opk {

namespace bardetail {

inline int tree_index(int d, const Tree& t) {
  static std::map<int, std::map<Tree, int>> cache;
  auto& m = cache[d];
  if (m.empty())
    for (int i = 0; i < int(all_trees(d).size()); ++i) m[all_trees(d)[i]] = i;
  return m.at(t);
}

using Key = std::vector<int>;  // {tree index, labels...}

}  // namespace bardetail

// ---------------------------------------------------------------------------
// Bar complex B(O) for a reduced operad O concentrated in degree 0.

class BarComplex {
 public:
  struct Elem {
    int tree = 0;
    std::vector<int> lab;  // per vertex, basis index in O(arity)
    bardetail::Key key() const {
      bardetail::Key k{tree};
      k.insert(k.end(), lab.begin(), lab.end());
      return k;
    }
  };

  BarComplex(const Operad& o, int bound) : o_(o), bound_(bound) {
    if (o_.dim(1) != 1 || o_.basis(1).slots[0].first != 0)
      throw std::invalid_argument("bar: operad is not reduced");
    for (int n = 2; n <= o_.bound(); ++n)
      for (int f = 0; f < o_.dim(n); ++f)
        if (o_.basis(n).degree(f) != 0)
          throw std::invalid_argument("bar: operad not concentrated in degree 0");
    elems_.resize(bound_);
    lookup_.resize(bound_);
    pos_.resize(bound_);
    space_.resize(bound_);
    for (int n = 1; n <= bound_; ++n) enumerate(n);
    for (int n = 1; n <= bound_; ++n) fb_.push_back(FlatBasis(space_[n - 1]));
    flat_.resize(bound_);
    for (int n = 1; n <= bound_; ++n)
      for (int id = 0; id < int(elems_[n - 1].size()); ++id) {
        int deg = degree(n, elems_[n - 1][id]);
        flat_[n - 1].push_back(fb_[n - 1].flat(deg, pos_[n - 1].at(id)));
      }
  }

  int bound() const { return bound_; }
  const Operad& operad() const { return o_; }
  const std::vector<Elem>& elems(int n) const { return elems_[n - 1]; }
  const GradedSpace& space(int n) const { return space_[n - 1]; }
  const FlatBasis& basis(int n) const { return fb_[n - 1]; }
  int dim(int n) const { return int(elems_[n - 1].size()); }
  int flat_of(int n, int id) const { return flat_[n - 1][id]; }
  int id_of(int n, const bardetail::Key& k) const { return lookup_[n - 1].at(k); }
  int degree(int n, const Elem& e) const {
    return n == 1 ? 0 : all_trees(n)[e.tree].vertex_count();
  }

  // Differential: contract each edge; the pre-order index of the child gives
  // the suspension sign, the vertex reordering a permutation sign, and the
  // merged label composes through O twisted by the merged slot permutation.
  detail::Combo<bardetail::Key> d_elem(int n, const Elem& e) const {
    detail::Combo<bardetail::Key> out;
    const Tree& t = all_trees(n)[e.tree];
    for (int c = 1; c < t.vertex_count(); ++c) {
      Contraction ct = contract_edge(t, c);
      int sign = (c % 2 == 1) ? 1 : -1;  // (-1)^(c-1)
      std::vector<int> fdeg, fpos;
      for (int v = 0; v < t.vertex_count(); ++v) {
        if (v == c) continue;
        fdeg.push_back(1);
        fpos.push_back(ct.vertex_map[v]);
      }
      sign *= koszul_reorder_sign(fdeg, fpos);
      int ap = t.arity(ct.parent), ac = t.arity(c), ma = ap + ac - 1;
      auto comp = o_.comp_apply(ap, ct.slot, ac, {{e.lab[ct.parent], Rat(1)}},
                                {{e.lab[c], Rat(1)}});
      auto twisted = o_.act_apply(ma, o_.seq.at(ma).act(ct.merged_slot_perm), comp);
      for (auto& [xf, coef] : twisted) {
        Elem e2;
        e2.tree = bardetail::tree_index(n, ct.tree);
        e2.lab.assign(ct.tree.vertex_count(), -1);
        for (int v = 0; v < t.vertex_count(); ++v)
          if (v != c && v != ct.parent) e2.lab[ct.vertex_map[v]] = e.lab[v];
        e2.lab[ct.vertex_map[ct.parent]] = xf;
        detail::combo_add(out, e2.key(), Rat(sign * coef));
      }
    }
    return out;
  }

  // Sigma action: relabel leaves, permutation sign of the vertex reordering,
  // labels twisted by the slot permutations through O.
  detail::Combo<bardetail::Key> act_elem(int n, const Elem& e, const Perm& sigma) const {
    const Tree& t = all_trees(n)[e.tree];
    Relabelled rel = relabel_leaves(t, sigma);
    std::vector<int> ones(t.vertex_count(), 1);
    int sign = koszul_reorder_sign(ones, rel.vertex_map);
    int nti = bardetail::tree_index(n, rel.tree);
    std::vector<std::pair<std::vector<int>, Rat>> partial{
        {std::vector<int>(t.vertex_count(), -1), Rat(sign)}};
    for (int v = 0; v < t.vertex_count(); ++v) {
      int a = t.arity(v);
      auto twisted =
          o_.act_apply(a, o_.seq.at(a).act(rel.slot_perm[v]), {{e.lab[v], Rat(1)}});
      std::vector<std::pair<std::vector<int>, Rat>> next;
      for (auto& [sel, c] : partial)
        for (auto& [xf, cx] : twisted) {
          auto s2 = sel;
          s2[rel.vertex_map[v]] = xf;
          next.push_back({std::move(s2), Rat(c * cx)});
        }
      partial.swap(next);
    }
    detail::Combo<bardetail::Key> out;
    for (auto& [sel, c] : partial) {
      Elem e2{nti, sel};
      detail::combo_add(out, e2.key(), c);
    }
    return out;
  }

  // Dense Sigma-complex of B(O)(n). Only for small arities.
  SigmaComplex complex(int n) const {
    SigmaComplex sc;
    sc.n = n;
    sc.gen.resize(std::max(0, n - 1));
    sc.cx.space = space_[n - 1];
    for (auto& [k, dk] : space_[n - 1].dims) {
      if (space_[n - 1].dim(k - 1) == 0) continue;
      Mat dm(space_[n - 1].dim(k - 1), dk);
      for (int id = 0; id < dim(n); ++id) {
        const Elem& e = elems_[n - 1][id];
        if (degree(n, e) != k) continue;
        for (auto& [key, c] : d_elem(n, e))
          dm.at(pos_[n - 1].at(id_of(n, key)), pos_[n - 1].at(id)) += c;
      }
      sc.cx.set_d(k, std::move(dm));
    }
    for (int i = 0; i + 1 < n; ++i) {
      Perm s = adjacent_transposition(n, i);
      std::map<int, Mat> g;
      for (auto& [k, dk] : space_[n - 1].dims) g[k] = Mat(dk, dk);
      for (int id = 0; id < dim(n); ++id) {
        const Elem& e = elems_[n - 1][id];
        int k = degree(n, e);
        for (auto& [key, c] : act_elem(n, e, s))
          g[k].at(pos_[n - 1].at(id_of(n, key)), pos_[n - 1].at(id)) += c;
      }
      sc.gen[i] = std::move(g);
    }
    return sc;
  }

  // Sparse differential block B(n)_k -> B(n)_{k-1}.
  SparseMat sparse_d(int n, int k) const {
    SparseMat m(space_[n - 1].dim(k - 1), space_[n - 1].dim(k));
    for (int id = 0; id < dim(n); ++id) {
      const Elem& e = elems_[n - 1][id];
      if (degree(n, e) != k) continue;
      for (auto& [key, c] : d_elem(n, e))
        m.add(pos_[n - 1].at(id_of(n, key)), pos_[n - 1].at(id), c);
    }
    return m;
  }

  // Per-degree trace of the action of sigma, computed elementwise.
  std::map<int, Rat> chain_traces(int n, const Perm& sigma) const {
    std::map<int, Rat> tr;
    for (auto& [k, dk] : space_[n - 1].dims) tr[k] = 0;
    for (int id = 0; id < dim(n); ++id) {
      const Elem& e = elems_[n - 1][id];
      auto key = e.key();
      for (auto& [k2, c] : act_elem(n, e, sigma))
        if (k2 == key) tr[degree(n, e)] += c;
    }
    return tr;
  }

  // The full cooperad: dense complexes, actions, and single-edge cut
  // cocompositions over contiguous intervals, plus the unit components.
  DgCooperad cooperad() const {
    DgCooperad q;
    q.seq = SymSeq(bound_);
    for (int n = 1; n <= bound_; ++n) q.seq.at(n) = complex(n);
    q.rebuild_bases();
    for (int m = 1; m <= bound_; ++m)
      for (int i = 0; i < m; ++i)
        if (dim(m) > 0) q.delta[{m, i, 1}] = Mat::identity(dim(m));
    for (int k = 2; k <= bound_; ++k)
      if (dim(k) > 0) q.delta[{1, 0, k}] = Mat::identity(dim(k));
    for (int n = 2; n <= bound_; ++n) {
      for (int k = 2; k < n; ++k) {
        int m = n - k + 1;
        for (int i = 0; i + k <= n; ++i) {
          Mat dm(dim(m) * dim(k), dim(n));
          bool nonzero = false;
          for (int id = 0; id < dim(n); ++id)
            for (auto& [pr, c] : cut_terms(n, elems_[n - 1][id], i, k)) {
              dm.at(pr.first * dim(k) + pr.second, flat_[n - 1][id]) += c;
              nonzero = true;
            }
          if (nonzero) q.delta[{m, i, k}] = std::move(dm);
        }
      }
    }
    return q;
  }

  // Single-edge cuts of one element whose lower leaf set is exactly
  // {i..i+k-1}; returns (upper flat, lower flat) -> coefficient.
  detail::Combo<std::pair<int, int>> cut_terms(int n, const Elem& e, int i, int k) const {
    detail::Combo<std::pair<int, int>> out;
    const Tree& t = all_trees(n)[e.tree];
    auto ls = tree_leaf_sets(t);
    for (int c = 1; c < t.vertex_count(); ++c) {
      if (int(ls[c].size()) != k || ls[c][0] != i || ls[c][k - 1] != i + k - 1) continue;
      int sub = treedetail::subtree_size(t, c);
      int after = t.vertex_count() - c - sub;
      int sign = (sub * after) % 2 == 0 ? 1 : -1;
      Cut cut = cut_edge(t, c);
      Elem up, low;
      up.tree = bardetail::tree_index(n - k + 1, cut.upper);
      low.tree = bardetail::tree_index(k, cut.lower);
      for (int v = 0; v < t.vertex_count(); ++v) {
        if (v < c)
          up.lab.push_back(e.lab[v]);
        else if (v < c + sub)
          low.lab.push_back(e.lab[v]);
        else
          up.lab.push_back(e.lab[v]);
      }
      detail::combo_add(
          out, {flat_[n - k][id_of(n - k + 1, up.key())], flat_[k - 1][id_of(k, low.key())]},
          Rat(sign));
    }
    return out;
  }

 private:
  void enumerate(int n) {
    auto add = [&](Elem e) {
      int id = int(elems_[n - 1].size());
      lookup_[n - 1][e.key()] = id;
      int deg = degree(n, e);
      pos_[n - 1][id] = space_[n - 1].dim(deg);
      space_[n - 1].set_dim(deg, space_[n - 1].dim(deg) + 1);
      elems_[n - 1].push_back(std::move(e));
    };
    if (n == 1) {
      add(Elem{0, {}});
      return;
    }
    const auto& trees = all_trees(n);
    for (int ti = 0; ti < int(trees.size()); ++ti) {
      const Tree& t = trees[ti];
      bool ok = true;
      for (int v = 0; v < t.vertex_count(); ++v)
        if (t.arity(v) > o_.bound() || o_.dim(t.arity(v)) == 0) ok = false;
      if (!ok) continue;
      Elem e;
      e.tree = ti;
      e.lab.assign(t.vertex_count(), 0);
      for (;;) {
        add(e);
        int v = t.vertex_count() - 1;
        while (v >= 0) {
          if (++e.lab[v] < o_.dim(t.arity(v))) break;
          e.lab[v] = 0;
          --v;
        }
        if (v < 0) break;
      }
    }
  }

  Operad o_;
  int bound_;
  std::vector<std::vector<Elem>> elems_;
  std::vector<std::map<bardetail::Key, int>> lookup_;
  std::vector<std::map<int, int>> pos_;  // id -> position within its degree
  std::vector<GradedSpace> space_;
  std::vector<FlatBasis> fb_;
  std::vector<std::vector<int>> flat_;
};

inline DgCooperad bar_construction(const Operad& o, int arity_bound) {
  return BarComplex(o, arity_bound).cooperad();
}

// ---------------------------------------------------------------------------
// Cocomposition over an arbitrary slot subset, derived from the stored
// contiguous deltas through the action: on the operad side plugging into a
// scattered input set T is act(rho) of the contiguous composition at the rank
// of min(T), with rho flattening the blocks in block order.

inline Mat delta_subset(const DgCooperad& q, int n, const std::vector<int>& T) {
  int k = int(T.size()), m = n - k + 1;
  assert(k >= 1 && k <= n);
  std::vector<char> in_t(n, 0);
  for (int x : T) in_t[x] = 1;
  int i = 0;  // rank of min(T) among block minima
  for (int x = 0; x < T[0]; ++x)
    if (!in_t[x]) ++i;
  Perm rho;
  for (int x = 0; x < n; ++x)
    if (!in_t[x]) {
      if (int(rho.size()) == i)
        for (int y : T) rho.push_back(y);
      rho.push_back(x);
    }
  if (int(rho.size()) == i)
    for (int y : T) rho.push_back(y);
  Mat base = q.delta_mat(m, i, k);
  auto act = q.seq.at(n).act(perm_inverse(rho));
  Mat out(base.rows(), base.cols());
  const FlatBasis& f = q.basis(n);
  for (int col = 0; col < base.cols(); ++col) {
    auto [deg, idx] = f.slots[col];
    const Mat& a = act.at(deg);
    for (int r2 = 0; r2 < a.rows(); ++r2) {
      if (is_zero(a.at(r2, idx))) continue;
      int col2 = f.flat(deg, r2);
      for (int r = 0; r < base.rows(); ++r)
        if (!is_zero(base.at(r, col2))) out.at(r, col) += a.at(r2, idx) * base.at(r, col2);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Cobar complex C(Q) of a reduced dg cooperad.

class CobarComplex {
 public:
  struct Elem {
    int tree = 0;
    std::vector<int> lab;  // per vertex, flat index in Q(arity)
    bardetail::Key key() const {
      bardetail::Key k{tree};
      k.insert(k.end(), lab.begin(), lab.end());
      return k;
    }
  };

  CobarComplex(const DgCooperad& q, int bound) : q_(q), bound_(bound) {
    if (q_.dim(1) != 1 || q_.basis(1).slots[0].first != 0)
      throw std::invalid_argument("cobar: cooperad is not reduced");
    elems_.resize(bound_);
    lookup_.resize(bound_);
    pos_.resize(bound_);
    space_.resize(bound_);
    for (int n = 1; n <= bound_; ++n) enumerate(n);
    for (int n = 1; n <= bound_; ++n) fb_.push_back(FlatBasis(space_[n - 1]));
    flat_.resize(bound_);
    for (int n = 1; n <= bound_; ++n)
      for (int id = 0; id < int(elems_[n - 1].size()); ++id) {
        int deg = degree(n, elems_[n - 1][id]);
        flat_[n - 1].push_back(fb_[n - 1].flat(deg, pos_[n - 1].at(id)));
      }
  }

  int bound() const { return bound_; }
  const DgCooperad& cooperad() const { return q_; }
  const std::vector<Elem>& elems(int n) const { return elems_[n - 1]; }
  const GradedSpace& space(int n) const { return space_[n - 1]; }
  const FlatBasis& basis(int n) const { return fb_[n - 1]; }
  int dim(int n) const { return int(elems_[n - 1].size()); }
  int flat_of(int n, int id) const { return flat_[n - 1][id]; }
  int id_of(int n, const bardetail::Key& k) const { return lookup_[n - 1].at(k); }

  // Desuspended degree of a vertex label.
  int gdeg(int a, int labflat) const { return q_.basis(a).degree(labflat) - 1; }

  int degree(int n, const Elem& e) const {
    if (n == 1) return 0;
    const Tree& t = all_trees(n)[e.tree];
    int d = 0;
    for (int v = 0; v < t.vertex_count(); ++v) d += gdeg(t.arity(v), e.lab[v]);
    return d;
  }

  // d = d_int + d_exp. Internally d(s^-1 q) = -s^-1 dq extended by the Koszul
  // rule; the expansion replaces a vertex by an edge through every slot
  // subset, with the sign -(-1)^{|q'|} on the split label.
  detail::Combo<bardetail::Key> d_elem(int n, const Elem& e) const {
    detail::Combo<bardetail::Key> out;
    if (n == 1) return out;
    const Tree& t = all_trees(n)[e.tree];
    int nv = t.vertex_count();
    std::vector<int> g(nv);
    for (int v = 0; v < nv; ++v) g[v] = gdeg(t.arity(v), e.lab[v]);
    int prefix = 0;
    for (int v = 0; v < nv; ++v) {
      int a = t.arity(v);
      const FlatBasis& f = q_.basis(a);
      auto [qd, qi] = f.slots[e.lab[v]];
      // internal
      Mat dq = q_.seq.at(a).cx.d(qd);
      for (int r = 0; r < dq.rows(); ++r)
        if (!is_zero(dq.at(r, qi))) {
          Elem e2 = e;
          e2.lab[v] = f.flat(qd - 1, r);
          int s = (prefix % 2 == 0) ? -1 : 1;  // -(-1)^prefix
          detail::combo_add(out, e2.key(), Rat(s * dq.at(r, qi)));
        }
      // expansion over every k-subset of the slots
      for (int k = 2; k + 1 <= a; ++k) {
        std::vector<int> idx(k);
        for (int j = 0; j < k; ++j) idx[j] = j;
        for (;;) {
          expand_at(n, e, g, v, prefix, idx, out);
          int j = k - 1;
          while (j >= 0 && idx[j] == a - k + j) --j;
          if (j < 0) break;
          ++idx[j];
          for (int j2 = j + 1; j2 < k; ++j2) idx[j2] = idx[j2 - 1] + 1;
        }
      }
      prefix += g[v];
    }
    return out;
  }

  detail::Combo<bardetail::Key> act_elem(int n, const Elem& e, const Perm& sigma) const {
    const Tree& t = all_trees(n)[e.tree];
    Relabelled rel = relabel_leaves(t, sigma);
    std::vector<int> g(t.vertex_count());
    for (int v = 0; v < t.vertex_count(); ++v) g[v] = gdeg(t.arity(v), e.lab[v]);
    int sign = koszul_reorder_sign(g, rel.vertex_map);
    int nti = bardetail::tree_index(n, rel.tree);
    std::vector<std::pair<std::vector<int>, Rat>> partial{
        {std::vector<int>(t.vertex_count(), -1), Rat(sign)}};
    for (int v = 0; v < t.vertex_count(); ++v) {
      int a = t.arity(v);
      const FlatBasis& f = q_.basis(a);
      auto [qd, qi] = f.slots[e.lab[v]];
      auto am = q_.seq.at(a).act(rel.slot_perm[v]);
      const Mat& mk = am.at(qd);
      std::vector<std::pair<std::vector<int>, Rat>> next;
      for (auto& [sel, c] : partial)
        for (int r = 0; r < mk.rows(); ++r) {
          if (is_zero(mk.at(r, qi))) continue;
          auto s2 = sel;
          s2[rel.vertex_map[v]] = f.flat(qd, r);
          next.push_back({std::move(s2), Rat(c * mk.at(r, qi))});
        }
      partial.swap(next);
    }
    detail::Combo<bardetail::Key> out;
    for (auto& [sel, c] : partial) {
      Elem e2{nti, sel};
      detail::combo_add(out, e2.key(), c);
    }
    return out;
  }

  SigmaComplex complex(int n) const {
    SigmaComplex sc;
    sc.n = n;
    sc.gen.resize(std::max(0, n - 1));
    sc.cx.space = space_[n - 1];
    std::map<int, Mat> dmats;
    for (auto& [k, dk] : space_[n - 1].dims)
      if (space_[n - 1].dim(k - 1) > 0) dmats[k] = Mat(space_[n - 1].dim(k - 1), dk);
    for (int id = 0; id < dim(n); ++id) {
      const Elem& e = elems_[n - 1][id];
      int k = degree(n, e);
      if (!dmats.count(k)) continue;
      for (auto& [key, c] : d_elem(n, e))
        dmats[k].at(pos_[n - 1].at(lookup_[n - 1].at(key)), pos_[n - 1].at(id)) += c;
    }
    for (auto& [k, m] : dmats) sc.cx.set_d(k, std::move(m));
    for (int i = 0; i + 1 < n; ++i) {
      Perm s = adjacent_transposition(n, i);
      std::map<int, Mat> gmat;
      for (auto& [k, dk] : space_[n - 1].dims) gmat[k] = Mat(dk, dk);
      for (int id = 0; id < dim(n); ++id) {
        const Elem& e = elems_[n - 1][id];
        int k = degree(n, e);
        for (auto& [key, c] : act_elem(n, e, s))
          gmat[k].at(pos_[n - 1].at(lookup_[n - 1].at(key)), pos_[n - 1].at(id)) += c;
      }
      sc.gen[i] = std::move(gmat);
    }
    return sc;
  }

  SparseMat sparse_d(int n, int k) const {
    SparseMat m(space_[n - 1].dim(k - 1), space_[n - 1].dim(k));
    for (int id = 0; id < dim(n); ++id) {
      const Elem& e = elems_[n - 1][id];
      if (degree(n, e) != k) continue;
      for (auto& [key, c] : d_elem(n, e))
        m.add(pos_[n - 1].at(lookup_[n - 1].at(key)), pos_[n - 1].at(id), c);
    }
    return m;
  }

  std::map<int, Rat> chain_traces(int n, const Perm& sigma) const {
    std::map<int, Rat> tr;
    for (auto& [k, dk] : space_[n - 1].dims) tr[k] = 0;
    for (int id = 0; id < dim(n); ++id) {
      const Elem& e = elems_[n - 1][id];
      auto key = e.key();
      for (auto& [k2, c] : act_elem(n, e, sigma))
        if (k2 == key) tr[degree(n, e)] += c;
    }
    return tr;
  }

  // Projection to O(n) when Q is (a truncation of) the bar cooperad of O:
  // degree-0 elements carry only one-vertex bar classes, which evaluate by
  // composing through O with the unshuffle of each vertex's leaf blocks.
  ChainMap counit(const Operad& o, int n) const {
    ChainMap f;
    f.source = space_[n - 1];
    f.target = o.seq.at(n).cx.space;
    int d0 = space_[n - 1].dim(0);
    if (d0 == 0 || o.dim(n) == 0) return f;
    Mat m(o.dim(n), d0);
    for (int id = 0; id < dim(n); ++id) {
      const Elem& e = elems_[n - 1][id];
      if (degree(n, e) != 0) continue;
      for (auto& [xf, c] : evaluate(o, n, e)) m.at(xf, pos_[n - 1].at(id)) += c;
    }
    f.set(0, std::move(m));
    return f;
  }

  // Dense dg operad on the same basis: compositions graft trees with the
  // Koszul sign of interleaving the desuspended labels.
  Operad as_operad() const {
    Operad o;
    o.seq = SymSeq(bound_);
    o.unit = {Rat(1)};
    for (int n = 1; n <= bound_; ++n) o.seq.at(n) = complex(n);
    o.rebuild_bases();
    for (int m = 1; m <= bound_; ++m)
      for (int k = 1; k <= bound_; ++k) {
        int n = m + k - 1;
        if (n > bound_ || dim(m) == 0 || dim(k) == 0) continue;
        for (int i = 0; i < m; ++i) {
          Mat cm(o.dim(n), o.dim(m) * o.dim(k));
          for (int a = 0; a < dim(m); ++a)
            for (int b = 0; b < dim(k); ++b) {
              const Elem& ea = elems_[m - 1][a];
              const Elem& eb = elems_[k - 1][b];
              const Tree& ta = all_trees(m)[ea.tree];
              const Tree& tb = all_trees(k)[eb.tree];
              Graft gr = graft(ta, i, tb);
              std::vector<int> fdeg, fpos;
              for (int v = 0; v < ta.vertex_count(); ++v) {
                fdeg.push_back(gdeg(ta.arity(v), ea.lab[v]));
                fpos.push_back(gr.a_vertex_map[v]);
              }
              for (int v = 0; v < tb.vertex_count(); ++v) {
                fdeg.push_back(gdeg(tb.arity(v), eb.lab[v]));
                fpos.push_back(gr.b_vertex_map[v]);
              }
              int sign = koszul_reorder_sign(fdeg, fpos);
              Elem out;
              out.tree = bardetail::tree_index(n, gr.tree);
              out.lab.assign(gr.tree.vertex_count(), -1);
              for (int v = 0; v < ta.vertex_count(); ++v)
                out.lab[gr.a_vertex_map[v]] = ea.lab[v];
              for (int v = 0; v < tb.vertex_count(); ++v)
                out.lab[gr.b_vertex_map[v]] = eb.lab[v];
              int id = lookup_[n - 1].at(out.key());
              cm.at(flat_[n - 1][id], flat_[m - 1][a] * o.dim(k) + flat_[k - 1][b]) += sign;
            }
          o.comp[{m, i, k}] = std::move(cm);
        }
      }
    return o;
  }

 private:
  void enumerate(int n) {
    auto add = [&](Elem e) {
      int id = int(elems_[n - 1].size());
      lookup_[n - 1][e.key()] = id;
      int deg = degree(n, e);
      pos_[n - 1][id] = space_[n - 1].dim(deg);
      space_[n - 1].set_dim(deg, space_[n - 1].dim(deg) + 1);
      elems_[n - 1].push_back(std::move(e));
    };
    if (n == 1) {
      add(Elem{0, {}});
      return;
    }
    const auto& trees = all_trees(n);
    for (int ti = 0; ti < int(trees.size()); ++ti) {
      const Tree& t = trees[ti];
      bool ok = true;
      for (int v = 0; v < t.vertex_count(); ++v)
        if (t.arity(v) > q_.bound() || q_.dim(t.arity(v)) == 0) ok = false;
      if (!ok) continue;
      Elem e;
      e.tree = ti;
      e.lab.assign(t.vertex_count(), 0);
      for (;;) {
        add(e);
        int v = t.vertex_count() - 1;
        while (v >= 0) {
          if (++e.lab[v] < q_.dim(t.arity(v))) break;
          e.lab[v] = 0;
          --v;
        }
        if (v < 0) break;
      }
    }
  }

  const Mat& subset_delta(int a, const std::vector<int>& T) const {
    auto key = std::make_pair(a, T);
    auto it = delta_cache_.find(key);
    if (it != delta_cache_.end()) return it->second;
    return delta_cache_.emplace(key, delta_subset(q_, a, T)).first->second;
  }

  void expand_at(int n, const Elem& e, const std::vector<int>& g, int v, int prefix,
                 const std::vector<int>& T, detail::Combo<bardetail::Key>& out) const {
    const Tree& t = all_trees(n)[e.tree];
    int a = t.arity(v), k = int(T.size()), m = a - k + 1;
    const Mat& dm = subset_delta(a, T);
    if (dm.is_zero()) return;
    int nv = t.vertex_count();
    std::vector<char> in_t(a, 0);
    for (int x : T) in_t[x] = 1;
    // new tree: v keeps the non-T slots with the new vertex at min(T)'s place
    Tree raw;
    raw.leaves = n;
    raw.kids = t.kids;
    raw.kids[v].clear();
    raw.kids.push_back({});
    for (int j = 0; j < a; ++j) {
      if (!in_t[j])
        raw.kids[v].push_back(t.kids[v][j]);
      else if (j == T[0])
        raw.kids[v].push_back(vertex_as_child(nv));
      if (in_t[j]) raw.kids[nv].push_back(t.kids[v][j]);
    }
    Canonicalized can = canonicalize(raw);
    for (auto& sp : can.slot_perm) assert(is_identity(sp));
    int nti = bardetail::tree_index(n, can.tree);
    for (int r = 0; r < dm.rows(); ++r) {
      if (is_zero(dm.at(r, e.lab[v]))) continue;
      int qa = r / q_.dim(k), qb = r % q_.dim(k);
      int da = q_.basis(m).degree(qa), db = q_.basis(k).degree(qb);
      int sign = ((prefix + da + 1) % 2 == 0) ? 1 : -1;  // (-1)^prefix * -(-1)^{|q'|}
      std::vector<int> fdeg, fpos;
      for (int w = 0; w < nv; ++w) {
        if (w == v) {
          fdeg.push_back(da - 1);
          fpos.push_back(can.vertex_map[v]);
          fdeg.push_back(db - 1);
          fpos.push_back(can.vertex_map[nv]);
        } else {
          fdeg.push_back(g[w]);
          fpos.push_back(can.vertex_map[w]);
        }
      }
      sign *= koszul_reorder_sign(fdeg, fpos);
      Elem e2;
      e2.tree = nti;
      e2.lab.assign(nv + 1, -1);
      for (int w = 0; w < nv; ++w)
        if (w != v) e2.lab[can.vertex_map[w]] = e.lab[w];
      e2.lab[can.vertex_map[v]] = qa;
      e2.lab[can.vertex_map[nv]] = qb;
      detail::combo_add(out, e2.key(), Rat(sign * dm.at(r, e.lab[v])));
    }
  }

  // Value of a degree-0 element in O: compose the one-vertex bar labels over
  // the tree, unshuffling each vertex's child leaf blocks into sorted order.
  detail::Combo<int> evaluate(const Operad& o, int n, const Elem& e) const {
    if (n == 1) {
      detail::Combo<int> u;
      for (int i = 0; i < int(o.unit.size()); ++i)
        if (!is_zero(o.unit[i])) detail::combo_add(u, i, o.unit[i]);
      return u;
    }
    const Tree& t = all_trees(n)[e.tree];
    auto ls = tree_leaf_sets(t);
    auto rec = [&](auto&& self, int v) -> detail::Combo<int> {
      int a = t.arity(v);
      const FlatBasis& f = q_.basis(a);
      auto [qd, qi] = f.slots[e.lab[v]];
      assert(qd == 1);  // one-vertex bar class; its index is the O-basis index
      detail::Combo<int> cur{{qi, Rat(1)}};
      int cur_ar = a;
      std::vector<std::vector<int>> blocks(a);
      for (int j = a - 1; j >= 0; --j) {
        int c = t.kids[v][j];
        if (child_is_leaf(c)) {
          blocks[j] = {c};
          continue;
        }
        int cv = child_vertex(c);
        blocks[j] = ls[cv];
        cur = o.comp_apply(cur_ar, j, int(ls[cv].size()), cur, self(self, cv));
        cur_ar += int(ls[cv].size()) - 1;
      }
      // unshuffle the concatenated blocks into the sorted leaf order
      std::vector<int> flat;
      for (auto& b : blocks) flat.insert(flat.end(), b.begin(), b.end());
      std::map<int, int> rank;
      for (int x : ls[v]) rank[x] = int(rank.size());
      Perm rho(flat.size());
      for (int p = 0; p < int(flat.size()); ++p) rho[p] = rank.at(flat[p]);
      if (!is_identity(rho)) cur = o.act_apply(cur_ar, o.seq.at(cur_ar).act(rho), cur);
      return cur;
    };
    return rec(rec, 0);
  }

  DgCooperad q_;
  int bound_;
  std::vector<std::vector<Elem>> elems_;
  std::vector<std::map<bardetail::Key, int>> lookup_;
  std::vector<std::map<int, int>> pos_;
  std::vector<GradedSpace> space_;
  std::vector<FlatBasis> fb_;
  std::vector<std::vector<int>> flat_;
  mutable std::map<std::pair<int, std::vector<int>>, Mat> delta_cache_;
};

inline Operad cobar_construction(const DgCooperad& q, int arity_bound) {
  return CobarComplex(q, arity_bound).as_operad();
}

// Per-arity counit maps of the bar-cobar resolution CB(O) -> O.
inline std::vector<ChainMap> counit_to_operad(const Operad& o, int arity_bound) {
  BarComplex bar(o, arity_bound);
  CobarComplex cc(bar.cooperad(), arity_bound);
  std::vector<ChainMap> out;
  for (int n = 1; n <= arity_bound; ++n) out.push_back(cc.counit(o, n));
  return out;
}

// ---------------------------------------------------------------------------
// Koszul unit check: H(CB(O))(d) must be O(d) in degree 0, as a
// Sigma_d-representation, with the counit inducing the isomorphism.

inline std::optional<std::string> check_koszul_unit(const Operad& o, int max_arity) {
  std::ostringstream err;
  BarComplex bar(o, max_arity);
  CobarComplex cc(bar.cooperad(), max_arity);
  for (int d = 1; d <= max_arity; ++d) {
    SigmaComplex sc = cc.complex(d);
    if (auto e = validate_sigma(sc)) {
      err << "arity " << d << ": invalid action: " << *e;
      return err.str();
    }
    Homology h = homology(sc.cx);
    for (auto& [k, hd] : h.h.dims)
      if (k != 0 && hd != 0) {
        err << "arity " << d << ": homology not concentrated in degree 0 (H_" << k
            << " = " << hd << ")";
        return err.str();
      }
    if (h.h.dim(0) != o.dim(d)) {
      err << "arity " << d << ": H_0 = " << h.h.dim(0) << ", expected " << o.dim(d);
      return err.str();
    }
    ChainMap f = cc.counit(o, d);
    if (!f.commutes(sc.cx, o.seq.at(d).cx)) {
      err << "arity " << d << ": counit is not a chain map";
      return err.str();
    }
    if (o.dim(d) > 0 && rank_of(f.at(0) * h.reps.at(0)) != o.dim(d)) {
      err << "arity " << d << ": counit not an isomorphism on H_0";
      return err.str();
    }
    for (auto& type : all_partitions_of(d)) {
      Rat got = character_on_homology(sc, h, type).at(0);
      Rat want = character(o.seq.at(d), type).per_degree.at(0);
      if (got != want) {
        err << "arity " << d << ": character mismatch on H_0";
        return err.str();
      }
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// phi_n on one arity: homology of C(tau_n B(O))(k), with a comparison against
// O(k) through the counit (an isomorphism exactly in the stable range k <= n).

struct PhiArityResult {
  GradedSpace h;
  bool matches_operad = false;
  std::string detail;
};

inline PhiArityResult phi_arity_homology(const Operad& o, int n, int k) {
  PhiArityResult res;
  BarComplex bar(o, std::min(n, k));
  CobarComplex cc(bar.cooperad(), k);
  SigmaComplex sc = cc.complex(k);
  Homology h = homology(sc.cx);
  res.h = h.h;
  res.matches_operad = true;
  for (auto& [deg, hd] : h.h.dims)
    if (deg != 0 && hd != 0) {
      res.matches_operad = false;
      res.detail = "homology not concentrated in degree 0";
    }
  if (h.h.dim(0) != o.dim(k)) {
    res.matches_operad = false;
    res.detail = "H_0 dimension differs from the operad";
  }
  if (res.matches_operad) {
    ChainMap f = cc.counit(o, k);
    if (!f.commutes(sc.cx, o.seq.at(k).cx) ||
        (o.dim(k) > 0 && rank_of(f.at(0) * h.reps.at(0)) != o.dim(k))) {
      res.matches_operad = false;
      res.detail = "counit fails to induce an isomorphism";
    }
  }
  if (res.matches_operad)
    for (auto& type : all_partitions_of(k))
      if (character_on_homology(sc, h, type).at(0) !=
          character(o.seq.at(k), type).per_degree.at(0)) {
        res.matches_operad = false;
        res.detail = "character mismatch";
      }
  return res;
}

// ---------------------------------------------------------------------------
// Bar term formula: H_*(B(O)(n)) against H_{*-1} of the cone of the counit
// C(tau_{n-1} B(O))(n) -> O(n). Small arities run dense with full characters;
// large ones use sparse ranks, require concentration, and compare the
// concentrated characters via alternating chain traces.

inline std::optional<std::string> check_bar_term_formula(const Operad& o, int n,
                                                         int dense_limit = 1200) {
  std::ostringstream err;
  BarComplex bar(o, n);
  BarComplex barlow(o, n - 1);
  CobarComplex cc(barlow.cooperad(), n);
  ChainMap f = cc.counit(o, n);

  int maxdim = bar.dim(n);
  for (auto& [k, dk] : cc.space(n).dims) maxdim = std::max(maxdim, dk);

  if (maxdim <= dense_limit) {
    SigmaComplex scb = bar.complex(n);
    SigmaComplex scc = cc.complex(n);
    if (!f.commutes(scc.cx, o.seq.at(n).cx)) return "counit is not a chain map";
    ChainComplex cone = mapping_cone(f, scc.cx, o.seq.at(n).cx);
    Homology hb = homology(scb.cx);
    Homology hc = homology(cone);
    int lo = std::min(hb.h.min_deg(), hc.h.min_deg() + 1);
    int hi = std::max(hb.h.max_deg(), hc.h.max_deg() + 1);
    for (int k = lo; k <= hi; ++k)
      if (hb.h.dim(k) != hc.h.dim(k - 1)) {
        err << "dim H_" << k << "(bar) = " << hb.h.dim(k) << " but dim H_" << k - 1
            << "(cone) = " << hc.h.dim(k - 1);
        return err.str();
      }
    // Sigma-structure on the cone: block action (target) (+) (source shifted).
    SigmaComplex scone;
    scone.n = n;
    scone.cx = cone;
    scone.gen.resize(std::max(0, n - 1));
    for (int i = 0; i + 1 < n; ++i) {
      std::map<int, Mat> g;
      for (auto& [k, dk] : cone.space.dims) {
        Mat m(dk, dk);
        int dt = o.seq.at(n).cx.dim(k);
        Mat at = o.seq.at(n).gen_at(i, k);
        Mat as = scc.gen_at(i, k - 1);
        for (int r = 0; r < dt; ++r)
          for (int c = 0; c < dt; ++c) m.at(r, c) = at.at(r, c);
        for (int r = 0; r < as.rows(); ++r)
          for (int c = 0; c < as.cols(); ++c) m.at(dt + r, dt + c) = as.at(r, c);
        g[k] = std::move(m);
      }
      scone.gen[i] = std::move(g);
    }
    for (auto& type : all_partitions_of(n)) {
      auto chb = character_on_homology(scb, hb, type);
      auto chc = character_on_homology(scone, hc, type);
      for (int k = lo; k <= hi; ++k) {
        Rat a = chb.count(k) ? chb.at(k) : Rat(0);
        Rat b = chc.count(k - 1) ? chc.at(k - 1) : Rat(0);
        if (a != b) {
          err << "character mismatch in degree " << k;
          return err.str();
        }
      }
    }
    return std::nullopt;
  }

  // Sparse path. Homology dims from ranks of the sparse differentials.
  auto block_h = [&](const GradedSpace& sp, const std::function<SparseMat(int)>& dk) {
    std::map<int, int> ranks, h;
    int lo = sp.min_deg(), hi = sp.max_deg();
    for (int k = lo; k <= hi + 1; ++k) ranks[k] = sparse_rank(dk(k));
    for (int k = lo; k <= hi; ++k) h[k] = sp.dim(k) - ranks[k] - ranks[k + 1];
    return h;
  };
  auto hb = block_h(bar.space(n), [&](int k) { return bar.sparse_d(n, k); });
  // Cone of f into the degree-0 complex O(n): cone_k = O(n)_k (+) C_{k-1};
  // the only nonzero blocks are f in degree 1 and -d_C elsewhere.
  GradedSpace conesp;
  for (int k = cc.space(n).min_deg(); k <= cc.space(n).max_deg() + 1; ++k)
    conesp.set_dim(k, (k == 0 ? o.dim(n) : 0) + cc.space(n).dim(k - 1));
  auto hc = block_h(conesp, [&](int k) -> SparseMat {
    SparseMat m(conesp.dim(k - 1), conesp.dim(k));
    int rt = (k - 1 == 0) ? o.dim(n) : 0;
    if (k == 1) {
      Mat f0 = f.at(0);
      for (int r = 0; r < f0.rows(); ++r)
        for (int c = 0; c < f0.cols(); ++c)
          if (!is_zero(f0.at(r, c))) m.add(r, c, f0.at(r, c));
    }
    SparseMat ds = cc.sparse_d(n, k - 1);
    for (int r = 0; r < ds.rows; ++r)
      for (auto& [c, v] : ds.row[r]) m.add(rt + r, c, -v);
    return m;
  });
  int conc_b = 0, conc_c = 0, deg_b = 0, deg_c = 0;
  for (auto& [k, hd] : hb)
    if (hd != 0) {
      ++conc_b;
      deg_b = k;
    }
  for (auto& [k, hd] : hc)
    if (hd != 0) {
      ++conc_c;
      deg_c = k;
    }
  for (auto& [k, hd] : hb) {
    int other = hc.count(k - 1) ? hc.at(k - 1) : 0;
    if (hd != other) {
      err << "sparse: dim H_" << k << "(bar) = " << hd << " but dim H_" << k - 1
          << "(cone) = " << other;
      return err.str();
    }
  }
  if (conc_b > 1 || conc_c > 1) return "sparse: homology not concentrated";
  if (conc_b == 1 && conc_c == 1 && deg_c != deg_b - 1)
    return "sparse: concentration degrees differ";
  // Characters at the concentrated degree via alternating chain traces.
  if (conc_b == 1) {
    for (auto& type : all_partitions_of(n)) {
      Perm sigma = perm_of_cycle_type(type, n);
      auto trb = bar.chain_traces(n, sigma);
      auto trc = cc.chain_traces(n, sigma);
      Rat eb = 0, ec = 0;
      for (auto& [k, v] : trb) eb += (k % 2 == 0) ? v : -v;
      // cone traces: O(n) in degree 0 plus C shifted by one
      ec += character(o.seq.at(n), type).per_degree.at(0);
      for (auto& [k, v] : trc) ec += ((k + 1) % 2 == 0) ? v : -v;
      Rat chb_conc = (deg_b % 2 == 0) ? eb : -eb;
      Rat chc_conc = (deg_c % 2 == 0) ? ec : -ec;
      if (chb_conc != chc_conc) {
        err << "sparse: character mismatch at the concentrated degree";
        return err.str();
      }
    }
  }
  return std::nullopt;
}

}  // namespace opk
