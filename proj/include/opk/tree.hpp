#pragma once

// Rooted trees with labeled leaves and internal vertices of arity >= 2, in a
// canonical form: children of every vertex are ordered by the minimal leaf of
// their subtree, and vertices are numbered in pre-order. Tree surgery
// (edge contraction, single-edge cuts, grafting) reports enough bookkeeping --
// vertex reorderings and per-vertex slot permutations -- for callers to track
// Koszul signs and decoration twists.

#include <algorithm>
#include <cassert>
#include <map>
#include <tuple>
#include <vector>

#include "opk/perm.hpp"

namespace opk {

// A child slot holds either a leaf label (c >= 0, labels are 0-based) or an
// internal vertex (c < 0 encodes vertex ~c).
inline bool child_is_leaf(int c) { return c >= 0; }
inline int child_vertex(int c) { return ~c; }
inline int vertex_as_child(int v) { return ~v; }

struct Tree {
  int leaves = 0;
  std::vector<std::vector<int>> kids;  // kids[v], v in pre-order; root is 0

  int vertex_count() const { return int(kids.size()); }
  int arity(int v) const { return int(kids[v].size()); }

  bool operator==(const Tree& o) const { return leaves == o.leaves && kids == o.kids; }
  bool operator<(const Tree& o) const {
    return std::tie(leaves, kids) < std::tie(o.leaves, o.kids);
  }
};

namespace treedetail {

inline int min_leaf_below(const Tree& t, int c) {
  if (child_is_leaf(c)) return c;
  int m = t.leaves;
  for (int k : t.kids[child_vertex(c)]) m = std::min(m, min_leaf_below(t, k));
  return m;
}

// Number of vertices in the subtree rooted at vertex v.
inline int subtree_size(const Tree& t, int v) {
  int n = 1;
  for (int c : t.kids[v])
    if (!child_is_leaf(c)) n += subtree_size(t, child_vertex(c));
  return n;
}

}  // namespace treedetail

struct Canonicalized {
  Tree tree;
  std::vector<int> vertex_map;   // source id -> canonical id
  std::vector<Perm> slot_perm;   // per source vertex: old slot -> new slot
};

// Re-canonicalizes a structurally valid tree (root 0, arbitrary vertex ids and
// child orders). Leaf labels must be distinct 0..leaves-1.
inline Canonicalized canonicalize(const Tree& raw) {
  Canonicalized out;
  int nv = raw.vertex_count();
  out.vertex_map.assign(nv, -1);
  out.slot_perm.assign(nv, {});
  out.tree.leaves = raw.leaves;
  if (nv == 0) return out;
  out.tree.kids.resize(nv);
  int next = 0;
  auto dfs = [&](auto&& self, int v) -> int {
    int id = next++;
    out.vertex_map[v] = id;
    int a = raw.arity(v);
    std::vector<std::pair<int, int>> order(a);  // (min leaf, old slot)
    for (int j = 0; j < a; ++j) order[j] = {treedetail::min_leaf_below(raw, raw.kids[v][j]), j};
    std::sort(order.begin(), order.end());
    Perm sp(a);
    for (int t = 0; t < a; ++t) sp[order[t].second] = t;
    out.slot_perm[v] = std::move(sp);
    out.tree.kids[id].resize(a);
    for (int t = 0; t < a; ++t) {
      int c = raw.kids[v][order[t].second];
      out.tree.kids[id][t] =
          child_is_leaf(c) ? c : vertex_as_child(self(self, child_vertex(c)));
    }
    return id;
  };
  dfs(dfs, 0);
  assert(next == nv);
  return out;
}

// parent[v] and the slot of v within it; root gets (-1, -1).
inline std::vector<std::pair<int, int>> tree_parents(const Tree& t) {
  std::vector<std::pair<int, int>> par(t.vertex_count(), {-1, -1});
  for (int v = 0; v < t.vertex_count(); ++v)
    for (int j = 0; j < t.arity(v); ++j)
      if (!child_is_leaf(t.kids[v][j])) par[child_vertex(t.kids[v][j])] = {v, j};
  return par;
}

// Sorted leaf labels under each vertex.
inline std::vector<std::vector<int>> tree_leaf_sets(const Tree& t) {
  std::vector<std::vector<int>> ls(t.vertex_count());
  for (int v = t.vertex_count() - 1; v >= 0; --v) {
    for (int c : t.kids[v]) {
      if (child_is_leaf(c))
        ls[v].push_back(c);
      else
        ls[v].insert(ls[v].end(), ls[child_vertex(c)].begin(), ls[child_vertex(c)].end());
    }
    std::sort(ls[v].begin(), ls[v].end());
  }
  return ls;
}

// All canonical trees with d labeled leaves and every internal vertex of arity
// at least two; d = 1 yields the vertex-free identity tree. Enumeration order
// is deterministic (partition order, then block choices with the last block
// varying fastest).
inline const std::vector<Tree>& all_trees(int d) {
  static std::map<int, std::vector<Tree>> cache;
  auto it = cache.find(d);
  if (it != cache.end()) return it->second;
  std::vector<Tree> out;
  assert(d >= 1);
  if (d == 1) {
    out.push_back(Tree{1, {}});
    return cache.emplace(d, std::move(out)).first->second;
  }
  // Partitions of {0..d-1} (blocks by minimal element, elements sorted): the
  // root's children are the blocks, so at least two of them.
  std::vector<std::vector<std::vector<int>>> parts;
  {
    std::vector<int> rgs(d, 0);
    auto emit = [&]() {
      int k = 0;
      for (int x : rgs) k = std::max(k, x + 1);
      if (k < 2) return;
      std::vector<std::vector<int>> p(k);
      for (int i = 0; i < d; ++i) p[rgs[i]].push_back(i);
      parts.push_back(std::move(p));
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
    rec(rec, 0, -1);
  }
  for (auto& p : parts) {
    int k = int(p.size());
    // Per block: a single leaf, or any tree on the block's labels.
    std::vector<int> choice(k, 0), limit(k);
    for (int j = 0; j < k; ++j)
      limit[j] = int(p[j].size()) == 1 ? 1 : int(all_trees(int(p[j].size())).size());
    for (;;) {
      Tree t;
      t.leaves = d;
      t.kids.push_back({});  // root
      for (int j = 0; j < k; ++j) {
        if (int(p[j].size()) == 1) {
          t.kids[0].push_back(p[j][0]);
        } else {
          const Tree& sub = all_trees(int(p[j].size()))[choice[j]];
          int off = t.vertex_count();
          t.kids[0].push_back(vertex_as_child(off));
          for (auto row : sub.kids) {
            for (int& c : row)
              c = child_is_leaf(c) ? p[j][c] : vertex_as_child(child_vertex(c) + off);
            t.kids.push_back(std::move(row));
          }
        }
      }
      // Blocks are in min order and subtrees arrive canonical under an
      // order-preserving relabeling, so t is canonical as built.
      out.push_back(std::move(t));
      int j = k - 1;
      while (j >= 0) {
        if (++choice[j] < limit[j]) break;
        choice[j] = 0;
        --j;
      }
      if (j < 0) break;
    }
  }
  return cache.emplace(d, std::move(out)).first->second;
}

// ---------------------------------------------------------------------------
// Edge contraction: merge internal vertex c into its parent.

struct Contraction {
  Tree tree;                  // canonical result
  int parent = -1;            // pre-order ids in the source tree
  int child = -1;
  int slot = -1;              // slot of the child within the parent
  std::vector<int> vertex_map;  // source id (c mapping with its parent) -> result id
  // Slot permutation of the merged vertex: positions refer to the parent's
  // slots with the child's slots spliced in at `slot`, images to the canonical
  // child order of the merged vertex. All other vertices keep their slots.
  Perm merged_slot_perm;
};

inline Contraction contract_edge(const Tree& t, int c) {
  assert(c > 0 && c < t.vertex_count());
  auto par = tree_parents(t);
  auto [p, slot] = par[c];
  assert(p >= 0);
  Tree raw;
  raw.leaves = t.leaves;
  // Intermediate ids: source order with c removed.
  std::vector<int> interm(t.vertex_count(), -1);
  int next = 0;
  for (int v = 0; v < t.vertex_count(); ++v)
    if (v != c) interm[v] = next++;
  interm[c] = interm[p];
  raw.kids.resize(next);
  for (int v = 0; v < t.vertex_count(); ++v) {
    if (v == c) continue;
    std::vector<int> row;
    for (int j = 0; j < t.arity(v); ++j) {
      int ch = t.kids[v][j];
      if (v == p && j == slot) {
        for (int cc : t.kids[c])
          row.push_back(child_is_leaf(cc) ? cc : vertex_as_child(interm[child_vertex(cc)]));
      } else {
        row.push_back(child_is_leaf(ch) ? ch : vertex_as_child(interm[child_vertex(ch)]));
      }
    }
    raw.kids[interm[v]] = std::move(row);
  }
  Canonicalized can = canonicalize(raw);
  Contraction out;
  out.tree = std::move(can.tree);
  out.parent = p;
  out.child = c;
  out.slot = slot;
  out.vertex_map.resize(t.vertex_count());
  for (int v = 0; v < t.vertex_count(); ++v) out.vertex_map[v] = can.vertex_map[interm[v]];
  out.merged_slot_perm = can.slot_perm[interm[p]];
  // Contracting one edge cannot disturb sibling order elsewhere.
  for (int v = 0; v < next; ++v)
    if (v != interm[p]) assert(is_identity(can.slot_perm[v]));
  return out;
}

// ---------------------------------------------------------------------------
// Single-edge cut above vertex c: lower subtree and the upper remainder.

struct Cut {
  Tree upper, lower;
  int child = -1;                // cut vertex in the source
  std::vector<int> leaf_set;     // sorted source leaves below the cut
  // Source vertices of the lower tree are the contiguous pre-order block
  // [child, child + lower.vertex_count()); upper keeps the rest in order. The
  // upper leaf that replaces the subtree carries the label of its block (all
  // other source leaves become singleton blocks, blocks ordered by minimum).
};

inline Cut cut_edge(const Tree& t, int c) {
  assert(c > 0 && c < t.vertex_count());
  Cut out;
  out.child = c;
  out.leaf_set = tree_leaf_sets(t)[c];
  int sub = treedetail::subtree_size(t, c);
  int k = int(out.leaf_set.size());
  // Order-preserving relabel of the lower leaves.
  std::map<int, int> down;
  for (int i = 0; i < k; ++i) down[out.leaf_set[i]] = i;
  out.lower.leaves = k;
  out.lower.kids.resize(sub);
  for (int v = 0; v < sub; ++v) {
    out.lower.kids[v] = t.kids[c + v];
    for (int& ch : out.lower.kids[v])
      ch = child_is_leaf(ch) ? down.at(ch) : vertex_as_child(child_vertex(ch) - c);
  }
  // Upper labels: block index of each surviving leaf; the cut leaf sits at the
  // block of min(leaf_set).
  std::vector<int> up(t.leaves, -1);
  {
    int idx = 0;
    std::vector<char> in_s(t.leaves, 0);
    for (int x : out.leaf_set) in_s[x] = 1;
    int cut_label = -1;
    for (int x = 0; x < t.leaves; ++x) {
      if (in_s[x]) {
        if (x == out.leaf_set[0]) cut_label = idx++;
      } else {
        up[x] = idx++;
      }
    }
    up.push_back(cut_label);  // sentinel slot for the new leaf
  }
  out.upper.leaves = t.leaves - k + 1;
  std::vector<int> umap(t.vertex_count(), -1);
  int next = 0;
  for (int v = 0; v < t.vertex_count(); ++v)
    if (v < c || v >= c + sub) umap[v] = next++;
  out.upper.kids.resize(next);
  for (int v = 0; v < t.vertex_count(); ++v) {
    if (umap[v] < 0) continue;
    std::vector<int> row = t.kids[v];
    for (int& ch : row) {
      if (child_is_leaf(ch))
        ch = up[ch];
      else if (child_vertex(ch) == c)
        ch = up[t.leaves];  // the cut becomes a leaf
      else
        ch = vertex_as_child(umap[child_vertex(ch)]);
    }
    out.upper.kids[umap[v]] = std::move(row);
  }
  // Both relabelings are order-preserving on subtree minima, so both factors
  // are canonical as built.
  return out;
}

// ---------------------------------------------------------------------------
// Grafting: plug tree b into leaf i of tree a (labels: b shifts by i, upper
// labels beyond i shift by b.leaves - 1).

struct Graft {
  Tree tree;
  std::vector<int> a_vertex_map, b_vertex_map;  // source ids -> result ids
};

inline Graft graft(const Tree& a, int i, const Tree& b) {
  assert(i >= 0 && i < a.leaves);
  Graft out;
  int k = b.leaves;
  if (a.vertex_count() == 0) {
    // a is the identity tree; the result is b unchanged (i == 0).
    out.tree = b;
    out.b_vertex_map.resize(b.vertex_count());
    for (int v = 0; v < b.vertex_count(); ++v) out.b_vertex_map[v] = v;
    return out;
  }
  Tree raw;
  raw.leaves = a.leaves + k - 1;
  raw.kids.resize(a.vertex_count() + b.vertex_count());
  int off = a.vertex_count();
  for (int v = 0; v < a.vertex_count(); ++v) {
    raw.kids[v] = a.kids[v];
    for (int& ch : raw.kids[v]) {
      if (child_is_leaf(ch)) {
        if (ch < i) continue;
        if (ch > i) {
          ch += k - 1;
        } else if (b.vertex_count() == 0) {
          ch = i;  // identity graft: the leaf survives
        } else {
          ch = vertex_as_child(off);  // b's root replaces the leaf
        }
      }
    }
  }
  for (int v = 0; v < b.vertex_count(); ++v) {
    raw.kids[off + v] = b.kids[v];
    for (int& ch : raw.kids[off + v])
      ch = child_is_leaf(ch) ? ch + i : vertex_as_child(child_vertex(ch) + off);
  }
  Canonicalized can = canonicalize(raw);
  // The relabelings are monotone, so sibling orders survive.
  for (auto& sp : can.slot_perm) assert(is_identity(sp));
  out.tree = std::move(can.tree);
  out.a_vertex_map.assign(can.vertex_map.begin(), can.vertex_map.begin() + off);
  out.b_vertex_map.assign(can.vertex_map.begin() + off, can.vertex_map.end());
  return out;
}

// ---------------------------------------------------------------------------
// Leaf relabeling by sigma (leaf x becomes sigma(x)), re-canonicalized.

struct Relabelled {
  Tree tree;
  std::vector<int> vertex_map;
  std::vector<Perm> slot_perm;
};

inline Relabelled relabel_leaves(const Tree& t, const Perm& sigma) {
  assert(int(sigma.size()) == t.leaves);
  Tree raw = t;
  for (auto& row : raw.kids)
    for (int& c : row)
      if (child_is_leaf(c)) c = sigma[c];
  Canonicalized can = canonicalize(raw);
  return {std::move(can.tree), std::move(can.vertex_map), std::move(can.slot_perm)};
}

}  // namespace opk
