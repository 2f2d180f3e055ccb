#pragma once

// Two-sided bar constructions B(tau_n O, O, 1) on levelled bases: strict
// chains of set partitions with operad labels on the merging blocks and a
// module label on top. The normalized simplicial differential merges adjacent
// levels; the module is a truncation of the operad itself (module bound 1 is
// the unit sequence, a bound >= d the full operad). Large arities expose
// sparse differentials and elementwise traces.

#include "opk/operad.hpp"
#include "opk/sparse.hpp"

namespace opk {

namespace leveldetail {

// Strict chains 0^ = P_0 < P_1 < ... < P_p in the partition lattice of
// {0..d-1}; the discrete bottom is implicit, p >= 0. Blocks are ordered by
// their minima throughout.
struct ChainInfo {
  std::vector<SetPartition> levels;  // P_1..P_p
  struct Vertex {
    int level = 0;              // 1-based level of the merge
    int block = 0;              // block index within that level
    std::vector<int> children;  // block indices in the previous level
  };
  std::vector<Vertex> verts;  // merging blocks only, level-major
  std::map<std::pair<int, int>, int> vert_pos;
  int top_arity = 0;  // #blocks of P_p (d when p == 0)
};

inline SetPartition discrete_partition(int d) {
  SetPartition p(d);
  for (int i = 0; i < d; ++i) p[i] = {i};
  return p;
}

// Children of each block of coarse inside fine (fine refines coarse).
inline std::vector<std::vector<int>> block_children(const SetPartition& fine,
                                                    const SetPartition& coarse) {
  std::vector<std::vector<int>> ch(coarse.size());
  for (int c = 0; c < int(fine.size()); ++c) {
    int x = fine[c][0];
    for (int b = 0; b < int(coarse.size()); ++b)
      if (std::find(coarse[b].begin(), coarse[b].end(), x) != coarse[b].end()) {
        ch[b].push_back(c);
        break;
      }
  }
  return ch;
}

inline ChainInfo make_info(int d, std::vector<SetPartition> levels) {
  ChainInfo ci;
  ci.levels = std::move(levels);
  SetPartition prev = discrete_partition(d);
  for (int l = 1; l <= int(ci.levels.size()); ++l) {
    auto ch = block_children(prev, ci.levels[l - 1]);
    for (int b = 0; b < int(ci.levels[l - 1].size()); ++b)
      if (int(ch[b].size()) >= 2) {
        ci.vert_pos[{l, b}] = int(ci.verts.size());
        ci.verts.push_back({l, b, ch[b]});
      }
    prev = ci.levels[l - 1];
  }
  ci.top_arity = int(prev.size());
  return ci;
}

inline const std::vector<ChainInfo>& all_chains(int d) {
  static std::map<int, std::vector<ChainInfo>> cache;
  auto it = cache.find(d);
  if (it != cache.end()) return it->second;
  std::vector<ChainInfo> out;
  std::vector<SetPartition> cur;
  auto rec = [&](auto&& self, const SetPartition& top) -> void {
    out.push_back(make_info(d, cur));
    int m = int(top.size());
    if (m <= 1) return;
    for (const SetPartition& grouping : set_partitions(m)) {
      if (int(grouping.size()) == m) continue;  // must strictly coarsen
      SetPartition next(grouping.size());
      for (int g = 0; g < int(grouping.size()); ++g) {
        for (int b : grouping[g])
          next[g].insert(next[g].end(), top[b].begin(), top[b].end());
        std::sort(next[g].begin(), next[g].end());
      }
      cur.push_back(next);
      self(self, next);
      cur.pop_back();
    }
  };
  rec(rec, discrete_partition(d));
  return cache.emplace(d, std::move(out)).first->second;
}

using Key = std::vector<int>;  // {chain index, labels..., top label}

}  // namespace leveldetail

// ---------------------------------------------------------------------------

class LevelledComplex {
 public:
  struct Elem {
    int chain = 0;
    std::vector<int> lab;  // per merging vertex, then the top label, O-indices
    leveldetail::Key key() const {
      leveldetail::Key k{chain};
      k.insert(k.end(), lab.begin(), lab.end());
      return k;
    }
  };

  // module_bound = n builds B(tau_n O, O, 1)(d); n = 1 is B(1, O, 1)(d).
  LevelledComplex(const Operad& o, int module_bound, int d)
      : o_(o), n_(module_bound), d_(d) {
    if (o_.dim(1) != 1 || o_.basis(1).slots[0].first != 0)
      throw std::invalid_argument("two-sided bar: operad is not reduced");
    if (o_.bound() < d) throw std::invalid_argument("two-sided bar: arity bound too small");
    for (int a = 2; a <= d; ++a)
      for (int f = 0; f < o_.dim(a); ++f)
        if (o_.basis(a).degree(f) != 0)
          throw std::invalid_argument("two-sided bar: operad not concentrated in degree 0");
    const auto& chains = leveldetail::all_chains(d);
    for (int ci = 0; ci < int(chains.size()); ++ci) {
      const auto& info = chains[ci];
      if (info.top_arity > n_ || o_.dim(info.top_arity) == 0) continue;
      bool ok = true;
      for (auto& v : info.verts)
        if (o_.dim(int(v.children.size())) == 0) ok = false;
      if (!ok) continue;
      Elem e;
      e.chain = ci;
      e.lab.assign(info.verts.size() + 1, 0);
      for (;;) {
        int id = int(elems_.size());
        lookup_[e.key()] = id;
        int deg = int(info.levels.size());
        pos_[id] = space_.dim(deg);
        space_.set_dim(deg, space_.dim(deg) + 1);
        elems_.push_back(e);
        int v = int(e.lab.size()) - 1;
        while (v >= 0) {
          int ar = v == int(info.verts.size()) ? info.top_arity
                                               : int(info.verts[v].children.size());
          if (++e.lab[v] < o_.dim(ar)) break;
          e.lab[v] = 0;
          --v;
        }
        if (v < 0) break;
      }
    }
  }

  int arity() const { return d_; }
  int module_bound() const { return n_; }
  const GradedSpace& space() const { return space_; }
  int dim() const { return int(elems_.size()); }
  const std::vector<Elem>& elems() const { return elems_; }
  int id_of(const leveldetail::Key& k) const { return lookup_.at(k); }
  int find_id(const leveldetail::Key& k) const {
    auto it = lookup_.find(k);
    return it == lookup_.end() ? -1 : it->second;
  }
  int pos_of(int id) const { return pos_.at(id); }
  int degree(const Elem& e) const {
    return int(leveldetail::all_chains(d_)[e.chain].levels.size());
  }

  // Simplicial differential: the bottom face augments to zero, the faces
  // 1..p-1 merge adjacent operad levels, face p composes into the module and
  // truncates.
  detail::Combo<leveldetail::Key> d_elem(const Elem& e) const {
    detail::Combo<leveldetail::Key> out;
    const auto& info = leveldetail::all_chains(d_)[e.chain];
    int p = int(info.levels.size());
    for (int i = 1; i <= p; ++i) {
      int sign = (i % 2 == 0) ? 1 : -1;
      merge_face(e, info, i, sign, out);
    }
    return out;
  }

  detail::Combo<leveldetail::Key> act_elem(const Elem& e, const Perm& sigma) const {
    const auto& info = leveldetail::all_chains(d_)[e.chain];
    int p = int(info.levels.size());
    // Relabel every level; level 0 is the discrete partition, whose block
    // permutation is sigma itself.
    std::vector<SetPartition> newlev(p);
    std::vector<Perm> bp(p + 1);
    bp[0] = sigma;
    for (int l = 1; l <= p; ++l) {
      auto [np, perm] = relabel_partition(info.levels[l - 1], sigma);
      newlev[l - 1] = std::move(np);
      bp[l] = std::move(perm);
    }
    int nci = lookup_chain(newlev, d_);
    const auto& ninfo = leveldetail::all_chains(d_)[nci];
    std::vector<std::pair<std::vector<int>, Rat>> partial{
        {std::vector<int>(e.lab.size(), -1), Rat(1)}};
    auto twist = [&](int ar, const Perm& pi, int lab, int slot) {
      auto tw = o_.act_apply(ar, o_.seq.at(ar).act(pi), {{lab, Rat(1)}});
      std::vector<std::pair<std::vector<int>, Rat>> next;
      for (auto& [sel, c] : partial)
        for (auto& [xf, cx] : tw) {
          auto s2 = sel;
          s2[slot] = xf;
          next.push_back({std::move(s2), Rat(c * cx)});
        }
      partial.swap(next);
    };
    for (int vi = 0; vi < int(info.verts.size()); ++vi) {
      const auto& v = info.verts[vi];
      int m = int(v.children.size());
      // Images of the children under the relabeling, ranked within the block.
      std::vector<int> img(m);
      for (int j = 0; j < m; ++j) img[j] = bp[v.level - 1][v.children[j]];
      std::vector<int> sorted = img;
      std::sort(sorted.begin(), sorted.end());
      Perm pi(m);
      for (int j = 0; j < m; ++j)
        pi[j] = int(std::lower_bound(sorted.begin(), sorted.end(), img[j]) - sorted.begin());
      int nslot = ninfo.vert_pos.at({v.level, bp[v.level][v.block]});
      twist(m, pi, e.lab[vi], nslot);
    }
    // Top label: children are the blocks of P_p in order, so the block
    // permutation of the top level is the twist itself.
    Perm pit = p == 0 ? sigma : bp[p];
    twist(info.top_arity, pit, e.lab.back(), int(ninfo.verts.size()));
    detail::Combo<leveldetail::Key> out;
    for (auto& [sel, c] : partial) {
      Elem e2{nci, sel};
      detail::combo_add(out, e2.key(), c);
    }
    return out;
  }

  SigmaComplex complex() const {
    SigmaComplex sc;
    sc.n = d_;
    sc.gen.resize(std::max(0, d_ - 1));
    sc.cx.space = space_;
    std::map<int, Mat> dmats;
    for (auto& [k, dk] : space_.dims)
      if (space_.dim(k - 1) > 0) dmats[k] = Mat(space_.dim(k - 1), dk);
    for (int id = 0; id < dim(); ++id) {
      const Elem& e = elems_[id];
      int k = degree(e);
      if (!dmats.count(k)) continue;
      for (auto& [key, c] : d_elem(e)) dmats[k].at(pos_.at(lookup_.at(key)), pos_.at(id)) += c;
    }
    for (auto& [k, m] : dmats) sc.cx.set_d(k, std::move(m));
    for (int i = 0; i + 1 < d_; ++i) {
      Perm s = adjacent_transposition(d_, i);
      std::map<int, Mat> g;
      for (auto& [k, dk] : space_.dims) g[k] = Mat(dk, dk);
      for (int id = 0; id < dim(); ++id) {
        const Elem& e = elems_[id];
        int k = degree(e);
        for (auto& [key, c] : act_elem(e, s))
          g[k].at(pos_.at(lookup_.at(key)), pos_.at(id)) += c;
      }
      sc.gen[i] = std::move(g);
    }
    return sc;
  }

  SparseMat sparse_d(int k) const {
    SparseMat m(space_.dim(k - 1), space_.dim(k));
    for (int id = 0; id < dim(); ++id) {
      const Elem& e = elems_[id];
      if (degree(e) != k) continue;
      for (auto& [key, c] : d_elem(e)) m.add(pos_.at(lookup_.at(key)), pos_.at(id), c);
    }
    return m;
  }

  std::map<int, Rat> chain_traces(const Perm& sigma) const {
    std::map<int, Rat> tr;
    for (auto& [k, dk] : space_.dims) tr[k] = 0;
    for (int id = 0; id < dim(); ++id) {
      const Elem& e = elems_[id];
      auto key = e.key();
      for (auto& [k2, c] : act_elem(e, sigma))
        if (k2 == key) tr[degree(e)] += c;
    }
    return tr;
  }

 private:
  static int lookup_chain(const std::vector<SetPartition>& levels, int d);

  // One face of the differential: merge level i with the one above it (the
  // module when i == p), composing each coarse block's label with its
  // children and unshuffling the grandchild blocks into sorted order.
  void merge_face(const Elem& e, const leveldetail::ChainInfo& info, int i, int sign,
                  detail::Combo<leveldetail::Key>& out) const {
    int p = int(info.levels.size());
    const SetPartition below =
        i >= 2 ? info.levels[i - 2] : leveldetail::discrete_partition(d_);
    const SetPartition& mid = info.levels[i - 1];
    bool top = (i == p);
    SetPartition above;
    if (top)
      above = {std::vector<int>{}};  // single block: the module vertex
    else
      above = info.levels[i];
    if (top && int(below.size()) > n_) return;  // truncation kills the face

    std::vector<SetPartition> newlev;
    for (int l = 1; l <= p; ++l)
      if (l != i) newlev.push_back(info.levels[l - 1]);
    int nci = lookup_chain(newlev, d_);
    const auto& ninfo = leveldetail::all_chains(d_)[nci];

    auto ch_mid = leveldetail::block_children(below, mid);
    std::vector<std::vector<int>> ch_above;
    if (top) {
      ch_above.assign(1, std::vector<int>(mid.size()));
      std::iota(ch_above[0].begin(), ch_above[0].end(), 0);
    } else {
      ch_above = leveldetail::block_children(mid, above);
    }

    std::vector<std::pair<std::vector<int>, Rat>> partial{
        {std::vector<int>(ninfo.verts.size() + 1, -1), Rat(sign)}};
    auto put = [&](int slot, const detail::Combo<int>& val) {
      std::vector<std::pair<std::vector<int>, Rat>> next;
      for (auto& [sel, c] : partial)
        for (auto& [xf, cx] : val) {
          auto s2 = sel;
          s2[slot] = xf;
          next.push_back({std::move(s2), Rat(c * cx)});
        }
      partial.swap(next);
    };
    // Labels away from the merged pair of levels carry over unchanged.
    for (int vi = 0; vi < int(info.verts.size()); ++vi) {
      const auto& v = info.verts[vi];
      if (v.level == i || v.level == i + 1) continue;
      int nl = v.level < i ? v.level : v.level - 1;
      put(ninfo.vert_pos.at({nl, v.block}), {{e.lab[vi], Rat(1)}});
    }
    if (!top && p >= 1) put(int(ninfo.verts.size()), {{e.lab.back(), Rat(1)}});

    // Composite labels for the blocks of the upper level of the pair.
    for (int b = 0; b < int(above.size()); ++b) {
      const auto& cs = ch_above[b];
      int m = int(cs.size());
      std::vector<int> grand;  // all below-blocks under b, ascending
      for (int c : cs) grand.insert(grand.end(), ch_mid[c].begin(), ch_mid[c].end());
      std::vector<int> sorted = grand;
      std::sort(sorted.begin(), sorted.end());
      int K = int(grand.size());
      if (K == 1) continue;  // unchanged block, stays a unit
      detail::Combo<int> cur;
      if (top)
        cur = {{e.lab.back(), Rat(1)}};
      else if (m >= 2)
        cur = {{e.lab[info.vert_pos.at({i + 1, b})], Rat(1)}};
      else
        cur = {{0, Rat(1)}};  // unit parent; the single child passes through
      int cur_ar = m;
      for (int j = m - 1; j >= 0; --j) {
        int kj = int(ch_mid[cs[j]].size());
        if (kj == 1) continue;
        detail::Combo<int> childv{{e.lab[info.vert_pos.at({i, cs[j]})], Rat(1)}};
        cur = o_.comp_apply(cur_ar, j, kj, cur, childv);
        cur_ar += kj - 1;
      }
      Perm rho(K);
      for (int t = 0; t < K; ++t)
        rho[t] = int(std::lower_bound(sorted.begin(), sorted.end(), grand[t]) - sorted.begin());
      if (!is_identity(rho)) cur = o_.act_apply(K, o_.seq.at(K).act(rho), cur);
      int slot = top ? int(ninfo.verts.size()) : ninfo.vert_pos.at({i, b});
      put(slot, cur);
    }
    for (auto& [sel, c] : partial) {
      Elem e2{nci, sel};
      detail::combo_add(out, e2.key(), c);
    }
  }

  Operad o_;
  int n_, d_;
  std::vector<Elem> elems_;
  std::map<leveldetail::Key, int> lookup_;
  std::map<int, int> pos_;
  GradedSpace space_;
};

inline int LevelledComplex::lookup_chain(const std::vector<SetPartition>& levels, int d) {
  static std::map<int, std::map<std::vector<SetPartition>, int>> cache;
  auto& m = cache[d];
  if (m.empty()) {
    const auto& chains = leveldetail::all_chains(d);
    for (int i = 0; i < int(chains.size()); ++i) m[chains[i].levels] = i;
  }
  return m.at(levels);
}

// ---------------------------------------------------------------------------

inline SigmaComplex two_sided_bar(const Operad& o, int module_bound, int d) {
  return LevelledComplex(o, module_bound, d).complex();
}

inline SigmaComplex kn_complex(const Operad& o, int n, int d) {
  return two_sided_bar(o, n, d);
}

// The tower projection K_n(d) -> K_m(d) for m < n: kill top labels of arity
// above m.
inline ChainMap kn_tower_map(const LevelledComplex& src, const LevelledComplex& tgt) {
  assert(src.arity() == tgt.arity() && tgt.module_bound() <= src.module_bound());
  ChainMap f;
  f.source = src.space();
  f.target = tgt.space();
  std::map<int, Mat> mats;
  for (auto& [k, dk] : src.space().dims) mats[k] = Mat(tgt.space().dim(k), dk);
  for (int id = 0; id < src.dim(); ++id) {
    const auto& e = src.elems()[id];
    auto key = e.key();
    int k = src.degree(e);
    const auto& info = leveldetail::all_chains(src.arity())[e.chain];
    if (info.top_arity > tgt.module_bound()) continue;
    mats[k].at(tgt.pos_of(tgt.id_of(key)), src.pos_of(id)) = 1;
  }
  for (auto& [k, m] : mats) f.set(k, std::move(m));
  return f;
}

struct KnDegreeRow {
  int degree = 0;
  int chain_dim = 0;
  int h_dim = 0;
};

// Homology dimensions of K_n(d) from sparse ranks.
inline std::vector<KnDegreeRow> kn_degree_table(const Operad& o, int n, int d) {
  LevelledComplex lc(o, n, d);
  std::vector<KnDegreeRow> out;
  if (lc.space().dims.empty()) return out;
  int lo = lc.space().min_deg(), hi = lc.space().max_deg();
  std::map<int, int> ranks;
  for (int k = lo; k <= hi + 1; ++k) ranks[k] = sparse_rank(lc.sparse_d(k));
  for (int k = lo; k <= hi; ++k)
    out.push_back({k, lc.space().dim(k), lc.space().dim(k) - ranks[k] - ranks[k + 1]});
  return out;
}

}  // namespace opk
