#pragma once

// Permutations of {0..n-1} in one-line notation: p[i] is the image of i.
// Composition is (p*q)(i) = p(q(i)), so matrix actions satisfy
// act(p*q) = act(p) * act(q).

#include <algorithm>
#include <cassert>
#include <numeric>
#include <vector>

namespace opk {

using Perm = std::vector<int>;

inline Perm perm_identity(int n) {
  Perm p(n);
  std::iota(p.begin(), p.end(), 0);
  return p;
}

inline bool is_identity(const Perm& p) {
  for (int i = 0; i < int(p.size()); ++i)
    if (p[i] != i) return false;
  return true;
}

inline Perm perm_compose(const Perm& p, const Perm& q) {
  assert(p.size() == q.size());
  Perm r(p.size());
  for (size_t i = 0; i < p.size(); ++i) r[i] = p[q[i]];
  return r;
}

inline Perm perm_inverse(const Perm& p) {
  Perm r(p.size());
  for (int i = 0; i < int(p.size()); ++i) r[p[i]] = i;
  return r;
}

// Adjacent transposition (i, i+1), 0-based.
inline Perm adjacent_transposition(int n, int i) {
  Perm p = perm_identity(n);
  std::swap(p[i], p[i + 1]);
  return p;
}

inline int perm_sign(const Perm& p) {
  int inv = 0;
  for (size_t i = 0; i < p.size(); ++i)
    for (size_t j = i + 1; j < p.size(); ++j)
      if (p[i] > p[j]) ++inv;
  return inv % 2 == 0 ? 1 : -1;
}

// Word w with p = s_{w[0]} * s_{w[1]} * ... (left-to-right composition order),
// so act(p) = act(s_{w[0]}) * act(s_{w[1]}) * ...
inline std::vector<int> adjacent_word(Perm p) {
  std::vector<int> w;
  for (;;) {
    int i = -1;
    for (int j = 0; j + 1 < int(p.size()); ++j)
      if (p[j] > p[j + 1]) {
        i = j;
        break;
      }
    if (i < 0) break;
    // p <- p * s_i swaps entries i, i+1 of the one-line notation.
    std::swap(p[i], p[i + 1]);
    w.push_back(i);
  }
  // p = s_{w[m-1]} ... s_{w[0]} reversed gives the original.
  std::reverse(w.begin(), w.end());
  return w;
}

// Cycle type as a partition (parts sorted descending).
inline std::vector<int> cycle_type(const Perm& p) {
  std::vector<char> seen(p.size(), 0);
  std::vector<int> parts;
  for (int i = 0; i < int(p.size()); ++i) {
    if (seen[i]) continue;
    int len = 0, j = i;
    while (!seen[j]) {
      seen[j] = 1;
      j = p[j];
      ++len;
    }
    parts.push_back(len);
  }
  std::sort(parts.rbegin(), parts.rend());
  return parts;
}

// Canonical permutation of a given cycle type: consecutive cycles.
inline Perm perm_of_cycle_type(const std::vector<int>& parts, int n) {
  int sum = 0;
  for (int x : parts) sum += x;
  assert(sum == n);
  Perm p(n);
  int base = 0;
  for (int len : parts) {
    for (int i = 0; i < len; ++i) p[base + i] = base + (i + 1) % len;
    base += len;
  }
  return p;
}

inline std::vector<std::vector<int>> all_partitions_of(int n) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  auto rec = [&](auto&& self, int rest, int maxp) -> void {
    if (rest == 0) {
      out.push_back(cur);
      return;
    }
    for (int p = std::min(rest, maxp); p >= 1; --p) {
      cur.push_back(p);
      self(self, rest - p, p);
      cur.pop_back();
    }
  };
  rec(rec, n, n);
  return out;
}

inline std::vector<Perm> all_perms(int n) {
  Perm p = perm_identity(n);
  std::vector<Perm> out;
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

// Koszul sign of reordering homogeneous tensor factors. Factor i (with degree
// degs[i]) moves to position new_pos[i]; the sign is (-1) for every inversion
// between two odd-degree factors.
inline int koszul_reorder_sign(const std::vector<int>& degs, const std::vector<int>& new_pos) {
  assert(degs.size() == new_pos.size());
  int sign = 1;
  for (size_t i = 0; i < degs.size(); ++i)
    for (size_t j = i + 1; j < degs.size(); ++j)
      if (new_pos[i] > new_pos[j] && (degs[i] % 2) && (degs[j] % 2)) sign = -sign;
  return sign;
}

// Block permutation: sigma in S_m acting on m blocks of the given sizes;
// returns the induced permutation of sum(sizes) letters where block i
// (occupying consecutive positions) moves to the position of block sigma(i).
inline Perm block_permutation(const Perm& sigma, const std::vector<int>& sizes) {
  int m = int(sigma.size());
  assert(int(sizes.size()) == m);
  std::vector<int> src_start(m, 0), dst_start(m, 0);
  for (int i = 1; i < m; ++i) src_start[i] = src_start[i - 1] + sizes[i - 1];
  // destination order: block at position j is the one with sigma(i) = j
  Perm inv = perm_inverse(sigma);
  std::vector<int> dst_of_block(m);
  {
    int cur = 0;
    for (int j = 0; j < m; ++j) {
      int blk = inv[j];
      dst_of_block[blk] = cur;
      cur += sizes[blk];
    }
  }
  int n = src_start[m - 1] + sizes[m - 1];
  Perm p(n);
  for (int i = 0; i < m; ++i)
    for (int k = 0; k < sizes[i]; ++k) p[src_start[i] + k] = dst_of_block[i] + k;
  return p;
}

}  // namespace opk
