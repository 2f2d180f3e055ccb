#pragma once

// Operads and cooperads as structured symmetric sequences: partial
// compositions stored as exact matrices over flattened bases, a full axiom
// checker (unit, equivariance, sequential/parallel associativity, Leibniz),
// the standard operads Com / Ass / Lie, free operads on tree bases, strict
// arity truncation, operadic suspension, and linear dualization.

#include <memory>
#include <random>
#include <sstream>
#include <tuple>

#include "opk/symseq.hpp"
#include "opk/tree.hpp"

namespace opk {

enum class OperadKind { Com, Ass, Lie };

inline const char* kind_name(OperadKind k) {
  switch (k) {
    case OperadKind::Com: return "com";
    case OperadKind::Ass: return "ass";
    default: return "lie";
  }
}

struct Operad {
  SymSeq seq;
  std::vector<FlatBasis> fb;  // per arity
  // comp[(m, i, k)] : O(m) (x) O(k) -> O(m+k-1), slot i is 0-based; columns
  // indexed a_flat * |O(k)| + b_flat. Compositions landing above the arity
  // bound are deliberately dropped (absent keys).
  std::map<std::tuple<int, int, int>, Mat> comp;
  std::vector<Rat> unit;  // coordinates in the flat basis of O(1)

  int bound() const { return seq.arity_bound; }
  const FlatBasis& basis(int n) const { return fb[n - 1]; }
  int dim(int n) const { return n >= 1 && n <= bound() ? fb[n - 1].size() : 0; }

  void rebuild_bases() {
    fb.clear();
    for (int n = 1; n <= bound(); ++n) fb.push_back(FlatBasis(seq.at(n).cx.space));
  }

  Mat comp_mat(int m, int i, int k) const {
    auto it = comp.find({m, i, k});
    if (it != comp.end()) return it->second;
    int n = m + k - 1;
    return Mat(n <= bound() ? dim(n) : 0, dim(m) * dim(k));
  }

  // Composition on sparse combinations (flat index -> coefficient).
  detail::Combo<int> comp_apply(int m, int i, int k, const detail::Combo<int>& a,
                                const detail::Combo<int>& b) const {
    detail::Combo<int> out;
    int n = m + k - 1;
    if (n > bound() || dim(n) == 0) return out;
    Mat cm = comp_mat(m, i, k);
    for (auto& [af, ca] : a)
      for (auto& [bf, cb] : b) {
        int col = af * dim(k) + bf;
        for (int r = 0; r < cm.rows(); ++r)
          if (!is_zero(cm.at(r, col))) detail::combo_add(out, r, Rat(ca * cb * cm.at(r, col)));
      }
    return out;
  }

  // Differential applied to a flat combination in O(n).
  detail::Combo<int> d_apply(int n, const detail::Combo<int>& v) const {
    detail::Combo<int> out;
    const FlatBasis& f = basis(n);
    for (auto& [fl, c] : v) {
      auto [deg, idx] = f.slots[fl];
      Mat dm = seq.at(n).cx.d(deg);
      for (int r = 0; r < dm.rows(); ++r)
        if (!is_zero(dm.at(r, idx)))
          detail::combo_add(out, f.flat(deg - 1, r), Rat(c * dm.at(r, idx)));
    }
    return out;
  }

  // Action of sigma on a flat combination in O(n).
  detail::Combo<int> act_apply(int n, const std::map<int, Mat>& act,
                               const detail::Combo<int>& v) const {
    detail::Combo<int> out;
    const FlatBasis& f = basis(n);
    for (auto& [fl, c] : v) {
      auto [deg, idx] = f.slots[fl];
      const Mat& m = act.at(deg);
      for (int r = 0; r < m.rows(); ++r)
        if (!is_zero(m.at(r, idx))) detail::combo_add(out, f.flat(deg, r), Rat(c * m.at(r, idx)));
    }
    return out;
  }
};

struct DgCooperad {
  SymSeq seq;
  std::vector<FlatBasis> fb;
  // delta[(m, i, k)] : Q(m+k-1) -> Q(m) (x) Q(k) (reduced cocomposition,
  // m, k >= 2 or the unit cases, stored only when nonzero); rows indexed
  // a_flat * |Q(k)| + b_flat.
  std::map<std::tuple<int, int, int>, Mat> delta;

  int bound() const { return seq.arity_bound; }
  const FlatBasis& basis(int n) const { return fb[n - 1]; }
  int dim(int n) const { return n >= 1 && n <= bound() ? fb[n - 1].size() : 0; }

  void rebuild_bases() {
    fb.clear();
    for (int n = 1; n <= bound(); ++n) fb.push_back(FlatBasis(seq.at(n).cx.space));
  }

  Mat delta_mat(int m, int i, int k) const {
    auto it = delta.find({m, i, k});
    if (it != delta.end()) return it->second;
    return Mat(dim(m) * dim(k), dim(m + k - 1));
  }
};

// ---------------------------------------------------------------------------
// Axiom checker. Returns the first failure as a description, or nullopt.

inline std::optional<std::string> check_operad_axioms(const Operad& o, int max_arity = 0) {
  int bound = max_arity > 0 ? std::min(max_arity, o.bound()) : o.bound();
  std::ostringstream err;
  // Underlying actions.
  for (int n = 1; n <= bound; ++n)
    if (auto e = validate_sigma(o.seq.at(n))) {
      err << "arity " << n << " action: " << *e;
      return err.str();
    }
  // Reduced unit.
  if (o.dim(1) != 1 || o.basis(1).slots[0].first != 0) return "O(1) is not Q in degree 0";
  if (o.unit.size() != 1 || o.unit[0] != Rat(1)) return "unit vector is not the O(1) basis";
  auto unit_combo = detail::Combo<int>{{0, Rat(1)}};
  // Degree of a flat basis index.
  auto deg_of = [&](int n, int f) { return o.basis(n).slots[f].first; };
  auto basis_combo = [](int f) { return detail::Combo<int>{{f, Rat(1)}}; };
  auto equal = [](const detail::Combo<int>& x, const detail::Combo<int>& y) { return x == y; };
  auto scaled = [](detail::Combo<int> x, int s) {
    if (s == -1)
      for (auto& [k, v] : x) v = -v;
    return x;
  };

  for (int m = 1; m <= bound; ++m) {
    if (o.dim(m) == 0) continue;
    // Unit laws.
    for (int af = 0; af < o.dim(m); ++af) {
      for (int i = 0; i < m; ++i)
        if (!equal(o.comp_apply(m, i, 1, basis_combo(af), unit_combo), basis_combo(af))) {
          err << "right unit fails at arity " << m << ", slot " << i + 1 << ", basis " << af;
          return err.str();
        }
      if (!equal(o.comp_apply(1, 0, m, unit_combo, basis_combo(af)), basis_combo(af))) {
        err << "left unit fails at arity " << m << ", basis " << af;
        return err.str();
      }
    }
  }

  for (int m = 1; m <= bound; ++m)
    for (int k = 1; k <= bound; ++k) {
      int n = m + k - 1;
      if (n > bound || o.dim(m) == 0 || o.dim(k) == 0) continue;
      // Leibniz: d(a o_i b) = da o_i b + (-1)^{|a|} a o_i db.
      for (int i = 0; i < m; ++i)
        for (int af = 0; af < o.dim(m); ++af)
          for (int bf = 0; bf < o.dim(k); ++bf) {
            auto a = basis_combo(af), b = basis_combo(bf);
            auto lhs = o.d_apply(n, o.comp_apply(m, i, k, a, b));
            auto rhs = o.comp_apply(m, i, k, o.d_apply(m, a), b);
            auto second = o.comp_apply(m, i, k, a, o.d_apply(k, b));
            for (auto& [key, v] : scaled(second, deg_of(m, af) % 2 ? -1 : 1))
              detail::combo_add(rhs, key, v);
            if (!equal(lhs, rhs)) {
              err << "Leibniz fails at (" << m << " o_" << i + 1 << " " << k << "), pair (" << af
                  << "," << bf << ")";
              return err.str();
            }
          }
      // Equivariance against the adjacent generators.
      for (int j = 0; j + 1 < m; ++j) {
        Perm sj = adjacent_transposition(m, j);
        auto act_m = o.seq.at(m).act(sj);
        for (int i = 0; i < m; ++i) {
          std::vector<int> sizes(m, 1);
          sizes[sj[i]] = k;
          Perm big = block_permutation(sj, sizes);
          auto act_n = o.seq.at(n).act(big);
          for (int af = 0; af < o.dim(m); ++af)
            for (int bf = 0; bf < o.dim(k); ++bf) {
              auto lhs = o.comp_apply(m, i, k, o.act_apply(m, act_m, basis_combo(af)),
                                      basis_combo(bf));
              auto rhs = o.act_apply(
                  n, act_n, o.comp_apply(m, sj[i], k, basis_combo(af), basis_combo(bf)));
              if (!equal(lhs, rhs)) {
                err << "outer equivariance fails at (" << m << " o_" << i + 1 << " " << k
                    << "), generator s" << j + 1 << ", pair (" << af << "," << bf << ")";
                return err.str();
              }
            }
        }
      }
      for (int j = 0; j + 1 < k; ++j) {
        Perm sj = adjacent_transposition(k, j);
        auto act_k = o.seq.at(k).act(sj);
        for (int i = 0; i < m; ++i) {
          Perm big = perm_identity(n);
          std::swap(big[i + j], big[i + j + 1]);
          auto act_n = o.seq.at(n).act(big);
          for (int af = 0; af < o.dim(m); ++af)
            for (int bf = 0; bf < o.dim(k); ++bf) {
              auto lhs = o.comp_apply(m, i, k, basis_combo(af),
                                      o.act_apply(k, act_k, basis_combo(bf)));
              auto rhs = o.act_apply(
                  n, act_n, o.comp_apply(m, i, k, basis_combo(af), basis_combo(bf)));
              if (!equal(lhs, rhs)) {
                err << "inner equivariance fails at (" << m << " o_" << i + 1 << " " << k
                    << "), generator s" << j + 1;
                return err.str();
              }
            }
        }
      }
    }

  // Associativity on all composable triples.
  for (int m = 1; m <= bound; ++m)
    for (int k = 1; k <= bound; ++k)
      for (int l = 1; l <= bound; ++l) {
        int n = m + k + l - 2;
        if (n > bound) continue;
        if (o.dim(m) == 0 || o.dim(k) == 0 || o.dim(l) == 0) continue;
        for (int af = 0; af < o.dim(m); ++af)
          for (int bf = 0; bf < o.dim(k); ++bf)
            for (int cf = 0; cf < o.dim(l); ++cf) {
              auto a = basis_combo(af), b = basis_combo(bf), c = basis_combo(cf);
              // Sequential: (a o_i b) o_{i+j} c = a o_i (b o_j c).
              for (int i = 0; i < m; ++i)
                for (int j = 0; j < k; ++j) {
                  auto lhs = o.comp_apply(m + k - 1, i + j, l, o.comp_apply(m, i, k, a, b), c);
                  auto rhs = o.comp_apply(m, i, k + l - 1, a, o.comp_apply(k, j, l, b, c));
                  if (!equal(lhs, rhs)) {
                    err << "sequential associativity fails: arities (" << m << "," << k << ","
                        << l << "), slots (" << i + 1 << "," << j + 1 << "), basis (" << af
                        << "," << bf << "," << cf << ")";
                    return err.str();
                  }
                }
              // Parallel: (a o_i b) o_{j+k-1} c = (-1)^{|b||c|} (a o_j c) o_i b, i < j.
              for (int i = 0; i < m; ++i)
                for (int j = i + 1; j < m; ++j) {
                  auto lhs = o.comp_apply(m + k - 1, j + k - 1, l, o.comp_apply(m, i, k, a, b), c);
                  auto rhs = o.comp_apply(m + l - 1, i, k, o.comp_apply(m, j, l, a, c), b);
                  int sg = (deg_of(k, bf) % 2) && (deg_of(l, cf) % 2) ? -1 : 1;
                  if (!equal(lhs, scaled(rhs, sg))) {
                    err << "parallel associativity fails: arities (" << m << "," << k << "," << l
                        << "), slots (" << i + 1 << "," << j + 1 << "), basis (" << af << ","
                        << bf << "," << cf << ")";
                    return err.str();
                  }
                }
            }
      }
  return std::nullopt;
}

// Randomized spot checks of the composition axioms on random linear
// combinations (not just basis vectors): sequential and parallel
// associativity and the unit laws, with a fixed seed for reproducibility.
inline std::optional<std::string> random_composition_check(const Operad& o, int cases,
                                                           unsigned long long seed) {
  std::mt19937_64 rng(seed);
  auto rand_arity = [&](int lo, int hi) { return lo + int(rng() % (hi - lo + 1)); };
  auto rand_combo = [&](int n) {
    detail::Combo<int> v;
    int terms = 1 + int(rng() % 3);
    for (int t = 0; t < terms; ++t)
      detail::combo_add(v, int(rng() % o.dim(n)), Rat(int(rng() % 7) - 3));
    return v;
  };
  auto equal = [](const detail::Combo<int>& x, const detail::Combo<int>& y) { return x == y; };
  auto deg_of = [&](int n, int f) { return o.basis(n).slots[f].first; };
  detail::Combo<int> unit{{0, Rat(1)}};
  std::ostringstream err;
  for (int t = 0; t < cases; ++t) {
    int which = int(rng() % 3);
    if (which == 0 || o.bound() < 3) {
      // unit laws on a random combination
      int m = rand_arity(1, o.bound());
      if (o.dim(m) == 0) continue;
      auto a = rand_combo(m);
      int i = int(rng() % m);
      if (!equal(o.comp_apply(m, i, 1, a, unit), a) ||
          !equal(o.comp_apply(1, 0, m, unit, a), a)) {
        err << "case " << t << ": unit law fails at arity " << m << ", slot " << i + 1;
        return err.str();
      }
      continue;
    }
    int m = rand_arity(2, o.bound() - 1);
    int k = rand_arity(2, o.bound() - m + 1);
    if (o.dim(m) == 0 || o.dim(k) == 0) continue;
    auto a = rand_combo(m);
    int bf = int(rng() % o.dim(k));
    Rat cb = Rat(int(rng() % 7) - 3);
    detail::Combo<int> b{{bf, cb}};
    if (which == 1) {
      // sequential: (a o_i b) o_{i+j} c = a o_i (b o_j c)
      int rem = o.bound() - (m + k - 1) + 1;
      if (rem < 1) continue;
      int l = rand_arity(1, rem);
      if (o.dim(l) == 0) continue;
      auto c = rand_combo(l);
      int i = int(rng() % m), j = int(rng() % k);
      auto lhs = o.comp_apply(m + k - 1, i + j, l, o.comp_apply(m, i, k, a, b), c);
      auto rhs = o.comp_apply(m, i, k + l - 1, a, o.comp_apply(k, j, l, b, c));
      if (!equal(lhs, rhs)) {
        err << "case " << t << ": sequential associativity fails, arities (" << m << ","
            << k << "," << l << "), slots (" << i + 1 << "," << j + 1 << ")";
        return err.str();
      }
    } else {
      // parallel: distinct slots commute up to the Koszul sign
      if (m < 2) continue;
      int rem = o.bound() - (m + k - 1) + 1;
      if (rem < 1) continue;
      int l = rand_arity(1, rem);
      if (o.dim(l) == 0) continue;
      int cf = int(rng() % o.dim(l));
      detail::Combo<int> c{{cf, Rat(int(rng() % 7) - 3)}};
      int i = int(rng() % (m - 1));
      int j = i + 1 + int(rng() % (m - i - 1));
      auto lhs = o.comp_apply(m + k - 1, j + k - 1, l, o.comp_apply(m, i, k, a, b), c);
      auto rhs = o.comp_apply(m + l - 1, i, k, o.comp_apply(m, j, l, a, c), b);
      int sg = (deg_of(k, bf) % 2) && (deg_of(l, cf) % 2) ? -1 : 1;
      if (sg == -1)
        for (auto& [key, v] : rhs) v = -v;
      if (!equal(lhs, rhs)) {
        err << "case " << t << ": parallel associativity fails, arities (" << m << ","
            << k << "," << l << "), slots (" << i + 1 << "," << j + 1 << ")";
        return err.str();
      }
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Standard operads.

namespace opdetail {

using Word = std::vector<int>;  // a permutation read as an ordered product

// Substitute word u (length k) into letter i of word w: letters < i keep,
// letters > i shift by k-1, letter i expands to u shifted by i.
inline Word word_subst(const Word& w, int i, const Word& u) {
  Word out;
  out.reserve(w.size() + u.size() - 1);
  int k = int(u.size());
  for (int c : w) {
    if (c < i)
      out.push_back(c);
    else if (c > i)
      out.push_back(c + k - 1);
    else
      for (int t : u) out.push_back(t + i);
  }
  return out;
}

inline const std::map<Word, int>& word_rank(int n) {
  static std::map<int, std::map<Word, int>> cache;
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::map<Word, int> r;
  auto perms = all_perms(n);
  for (int i = 0; i < int(perms.size()); ++i) r[perms[i]] = i;
  return cache.emplace(n, std::move(r)).first->second;
}

// Commutator expansion of the left-normed bracket on the letter sequence.
inline detail::Combo<Word> left_normed_expansion(const std::vector<int>& letters) {
  detail::Combo<Word> cur{{Word{letters[0]}, Rat(1)}};
  for (size_t t = 1; t < letters.size(); ++t) {
    detail::Combo<Word> next;
    for (auto& [w, c] : cur) {
      Word ab = w;
      ab.push_back(letters[t]);
      detail::combo_add(next, ab, c);
      Word ba{letters[t]};
      ba.insert(ba.end(), w.begin(), w.end());
      detail::combo_add(next, ba, Rat(-c));
    }
    cur = std::move(next);
  }
  return cur;
}

// Columns: expansions of the left-normed basis [[..[x_0, x_{s(1)}], ..], x_{s(n-1)}]
// over permutations s of {1..n-1} in lexicographic order. Rows: words, ranked.
inline Mat lie_embedding(int n) {
  if (n == 1) {
    Mat e(1, 1);
    e.at(0, 0) = 1;
    return e;
  }
  auto tails = all_perms(n - 1);
  Mat e(int(word_rank(n).size()), int(tails.size()));
  for (int j = 0; j < int(tails.size()); ++j) {
    std::vector<int> letters{0};
    for (int x : tails[j]) letters.push_back(x + 1);
    for (auto& [w, c] : left_normed_expansion(letters)) e.at(word_rank(n).at(w), j) = c;
  }
  return e;
}

}  // namespace opdetail

inline Operad standard_operad(OperadKind kind, int arity_bound) {
  assert(arity_bound >= 1);
  Operad o;
  o.seq = SymSeq(arity_bound);
  o.unit = {Rat(1)};
  if (kind == OperadKind::Com) {
    for (int n = 1; n <= arity_bound; ++n)
      o.seq.at(n) = SigmaComplex::trivial(n, ChainComplex::point(0));
    o.rebuild_bases();
    for (int m = 1; m <= arity_bound; ++m)
      for (int k = 1; k <= arity_bound; ++k) {
        if (m + k - 1 > arity_bound) continue;
        Mat cm(1, 1);
        cm.at(0, 0) = 1;
        for (int i = 0; i < m; ++i) o.comp[{m, i, k}] = cm;
      }
    return o;
  }
  if (kind == OperadKind::Ass) {
    for (int n = 1; n <= arity_bound; ++n) {
      auto perms = all_perms(n);
      SigmaComplex m;
      m.n = n;
      m.cx.space.set_dim(0, int(perms.size()));
      m.gen.resize(std::max(0, n - 1));
      for (int i = 0; i + 1 < n; ++i) {
        Perm s = adjacent_transposition(n, i);
        Mat g(int(perms.size()), int(perms.size()));
        for (int j = 0; j < int(perms.size()); ++j)
          g.at(opdetail::word_rank(n).at(perm_compose(s, perms[j])), j) = 1;
        m.gen[i][0] = std::move(g);
      }
      o.seq.at(n) = std::move(m);
    }
    o.rebuild_bases();
    for (int m = 1; m <= arity_bound; ++m)
      for (int k = 1; k <= arity_bound; ++k) {
        int n = m + k - 1;
        if (n > arity_bound) continue;
        auto wm = all_perms(m);
        auto wk = all_perms(k);
        for (int i = 0; i < m; ++i) {
          Mat cm(o.dim(n), o.dim(m) * o.dim(k));
          for (int a = 0; a < int(wm.size()); ++a)
            for (int b = 0; b < int(wk.size()); ++b)
              cm.at(opdetail::word_rank(n).at(opdetail::word_subst(wm[a], i, wk[b])),
                    a * o.dim(k) + b) = 1;
          o.comp[{m, i, k}] = std::move(cm);
        }
      }
    return o;
  }
  // Lie, realized inside Ass by commutator expansion of the left-normed basis.
  std::vector<Mat> emb;
  std::vector<std::unique_ptr<Solver>> solvers(arity_bound);
  for (int n = 1; n <= arity_bound; ++n) emb.push_back(opdetail::lie_embedding(n));
  auto solver = [&](int n) -> Solver& {
    if (!solvers[n - 1]) solvers[n - 1] = std::make_unique<Solver>(emb[n - 1]);
    return *solvers[n - 1];
  };
  std::vector<std::vector<detail::Combo<opdetail::Word>>> expans(arity_bound);
  for (int n = 1; n <= arity_bound; ++n) {
    if (n == 1) {
      expans[0].push_back({{opdetail::Word{0}, Rat(1)}});
      continue;
    }
    for (auto& tail : all_perms(n - 1)) {
      std::vector<int> letters{0};
      for (int x : tail) letters.push_back(x + 1);
      expans[n - 1].push_back(opdetail::left_normed_expansion(letters));
    }
  }
  for (int n = 1; n <= arity_bound; ++n) {
    int dim = emb[n - 1].cols();
    SigmaComplex m;
    m.n = n;
    m.cx.space.set_dim(0, dim);
    m.gen.resize(std::max(0, n - 1));
    for (int i = 0; i + 1 < n; ++i) {
      Perm s = adjacent_transposition(n, i);
      Mat g(dim, dim);
      for (int j = 0; j < dim; ++j) {
        std::vector<Rat> moved(emb[n - 1].rows());
        for (auto& [w, c] : expans[n - 1][j]) {
          opdetail::Word sw(w.size());
          for (size_t t = 0; t < w.size(); ++t) sw[t] = s[w[t]];
          moved[opdetail::word_rank(n).at(sw)] += c;
        }
        auto x = solver(n).solve(moved);
        if (!x) throw std::logic_error("standard_operad: Lie action escapes the span");
        for (int r = 0; r < dim; ++r) g.at(r, j) = (*x)[r];
      }
      m.gen[i][0] = std::move(g);
    }
    o.seq.at(n) = std::move(m);
  }
  o.rebuild_bases();
  for (int m = 1; m <= arity_bound; ++m)
    for (int k = 1; k <= arity_bound; ++k) {
      int n = m + k - 1;
      if (n > arity_bound) continue;
      for (int i = 0; i < m; ++i) {
        Mat cm(o.dim(n), o.dim(m) * o.dim(k));
        for (int a = 0; a < o.dim(m); ++a)
          for (int b = 0; b < o.dim(k); ++b) {
            std::vector<Rat> vec(emb[n - 1].rows());
            for (auto& [wa, ca] : expans[m - 1][a])
              for (auto& [wb, cb] : expans[k - 1][b])
                vec[opdetail::word_rank(n).at(opdetail::word_subst(wa, i, wb))] += ca * cb;
            auto x = solver(n).solve(vec);
            if (!x) throw std::logic_error("standard_operad: Lie composition escapes the span");
            for (int r = 0; r < o.dim(n); ++r) cm.at(r, a * o.dim(k) + b) = (*x)[r];
          }
        o.comp[{m, i, k}] = std::move(cm);
      }
    }
  return o;
}

// ---------------------------------------------------------------------------
// Free operad on generators concentrated in arities >= 2.

struct FreeOperadBasis {
  struct Elem {
    int tree = 0;          // index into all_trees(n)
    std::vector<int> dec;  // per vertex, flat index into generators(arity)
    std::vector<int> key() const {
      std::vector<int> k{tree};
      k.insert(k.end(), dec.begin(), dec.end());
      return k;
    }
  };

  SymSeq generators;
  int arity_bound = 1;
  std::vector<FlatBasis> gfb;
  // Per arity: basis element list, degree, lookup, and degree layout.
  std::vector<std::vector<Elem>> elems;
  std::vector<std::vector<int>> degs;
  std::vector<std::map<std::vector<int>, int>> lookup;
  std::vector<std::map<int, std::vector<int>>> by_degree;
  std::vector<std::map<int, std::map<int, int>>> pos;
  std::vector<std::vector<int>> flat_of;  // element id -> flat basis index
  Operad op;

  // Vertex degrees of an element, in pre-order.
  std::vector<int> vertex_degs(int n, const Elem& e) const {
    const Tree& t = all_trees(n)[e.tree];
    std::vector<int> vd(t.vertex_count());
    for (int v = 0; v < t.vertex_count(); ++v) vd[v] = gfb[t.arity(v) - 1].degree(e.dec[v]);
    return vd;
  }

  void build();
};

inline void FreeOperadBasis::build() {
  Operad& o = op;
  o.seq = SymSeq(arity_bound);
  o.unit = {Rat(1)};
  gfb.clear();
  for (int n = 1; n <= generators.arity_bound; ++n)
    gfb.push_back(FlatBasis(generators.at(n).cx.space));
  elems.assign(arity_bound, {});
  degs.assign(arity_bound, {});
  lookup.assign(arity_bound, {});
  by_degree.assign(arity_bound, {});
  pos.assign(arity_bound, {});
  flat_of.assign(arity_bound, {});

  auto elem_degree = [&](int n, const Elem& e) {
    const Tree& t = all_trees(n)[e.tree];
    int deg = 0;
    for (int v = 0; v < t.vertex_count(); ++v) deg += gfb[t.arity(v) - 1].degree(e.dec[v]);
    return deg;
  };

  for (int n = 1; n <= arity_bound; ++n) {
    const auto& trees = all_trees(n);
    for (int ti = 0; ti < int(trees.size()); ++ti) {
      const Tree& t = trees[ti];
      bool ok = true;
      for (int v = 0; v < t.vertex_count() && ok; ++v)
        if (gfb[t.arity(v) - 1].size() == 0) ok = false;
      if (!ok) continue;
      std::vector<int> dec(t.vertex_count(), 0);
      for (;;) {
        Elem e{ti, dec};
        int deg = elem_degree(n, e);
        int id = int(elems[n - 1].size());
        elems[n - 1].push_back(e);
        degs[n - 1].push_back(deg);
        lookup[n - 1][e.key()] = id;
        pos[n - 1][deg][id] = int(by_degree[n - 1][deg].size());
        by_degree[n - 1][deg].push_back(id);
        int v = t.vertex_count() - 1;
        while (v >= 0) {
          if (++dec[v] < gfb[t.arity(v) - 1].size()) break;
          dec[v] = 0;
          --v;
        }
        if (v < 0) break;
      }
    }
  }

  // Chain complexes with the Leibniz differential over vertices.
  for (int n = 1; n <= arity_bound; ++n) {
    SigmaComplex sc;
    sc.n = n;
    sc.gen.resize(std::max(0, n - 1));
    for (auto& [k, ids] : by_degree[n - 1]) sc.cx.space.set_dim(k, int(ids.size()));
    for (auto& [k, ids] : by_degree[n - 1]) {
      if (!by_degree[n - 1].count(k - 1)) continue;
      Mat dm(int(by_degree[n - 1].at(k - 1).size()), int(ids.size()));
      for (int col = 0; col < int(ids.size()); ++col) {
        const Elem& e = elems[n - 1][ids[col]];
        const Tree& t = all_trees(n)[e.tree];
        auto vd = vertex_degs(n, e);
        int prefix = 0;
        for (int v = 0; v < t.vertex_count(); ++v) {
          const FlatBasis& f = gfb[t.arity(v) - 1];
          auto [gdeg, gidx] = f.slots[e.dec[v]];
          Mat dg = generators.at(t.arity(v)).cx.d(gdeg);
          Rat sign = prefix % 2 == 0 ? 1 : -1;
          for (int r = 0; r < dg.rows(); ++r)
            if (!is_zero(dg.at(r, gidx))) {
              Elem e2 = e;
              e2.dec[v] = f.flat(gdeg - 1, r);
              int id2 = lookup[n - 1].at(e2.key());
              dm.at(pos[n - 1].at(k - 1).at(id2), col) += sign * dg.at(r, gidx);
            }
          prefix += vd[v];
        }
      }
      sc.cx.set_d(k, std::move(dm));
    }
    o.seq.at(n) = std::move(sc);
  }

  // Sigma action: relabel leaves, twist decorations by the slot permutations,
  // Koszul sign from the vertex reordering.
  auto act_elem = [&](int n, const Elem& e, const Perm& sigma) {
    const Tree& t = all_trees(n)[e.tree];
    auto rel = relabel_leaves(t, sigma);
    int nti = -1;
    const auto& trees = all_trees(n);
    for (int ti = 0; ti < int(trees.size()); ++ti)
      if (trees[ti] == rel.tree) {
        nti = ti;
        break;
      }
    assert(nti >= 0);
    auto vd = vertex_degs(n, e);
    int sign = koszul_reorder_sign(vd, rel.vertex_map);
    // Expand the slot-permutation action vertex by vertex.
    std::vector<std::pair<std::vector<int>, Rat>> partial{
        {std::vector<int>(t.vertex_count(), -1), Rat(sign)}};
    for (int v = 0; v < t.vertex_count(); ++v) {
      const FlatBasis& f = gfb[t.arity(v) - 1];
      auto [gdeg, gidx] = f.slots[e.dec[v]];
      auto amap = generators.at(t.arity(v)).act(rel.slot_perm[v]);
      const Mat& am = amap.at(gdeg);
      std::vector<std::pair<std::vector<int>, Rat>> next;
      for (auto& [sel, c] : partial)
        for (int r = 0; r < am.rows(); ++r) {
          if (is_zero(am.at(r, gidx))) continue;
          auto s2 = sel;
          s2[rel.vertex_map[v]] = f.flat(gdeg, r);
          next.push_back({std::move(s2), Rat(c * am.at(r, gidx))});
        }
      partial.swap(next);
    }
    detail::Combo<std::vector<int>> out;
    for (auto& [sel, c] : partial) {
      Elem e2{nti, sel};
      detail::combo_add(out, e2.key(), c);
    }
    return out;
  };

  for (int n = 2; n <= arity_bound; ++n) {
    for (int i = 0; i + 1 < n; ++i) {
      Perm s = adjacent_transposition(n, i);
      std::map<int, Mat> g;
      for (auto& [k, ids] : by_degree[n - 1]) {
        Mat gm(int(ids.size()), int(ids.size()));
        for (int col = 0; col < int(ids.size()); ++col)
          for (auto& [key, c] : act_elem(n, elems[n - 1][ids[col]], s))
            gm.at(pos[n - 1].at(k).at(lookup[n - 1].at(key)), col) += c;
        g[k] = std::move(gm);
      }
      o.seq.at(n).gen[i] = std::move(g);
    }
  }
  o.rebuild_bases();

  // Element id -> flat basis index (enumeration order mixes degrees).
  for (int n = 1; n <= arity_bound; ++n)
    for (int id = 0; id < int(elems[n - 1].size()); ++id) {
      int deg = degs[n - 1][id];
      flat_of[n - 1].push_back(o.basis(n).flat(deg, pos[n - 1].at(deg).at(id)));
    }

  // Compositions by grafting.
  for (int m = 1; m <= arity_bound; ++m)
    for (int k = 1; k <= arity_bound; ++k) {
      int n = m + k - 1;
      if (n > arity_bound) continue;
      if (elems[m - 1].empty() || elems[k - 1].empty()) continue;
      for (int i = 0; i < m; ++i) {
        Mat cm(o.dim(n), o.dim(m) * o.dim(k));
        for (int a = 0; a < int(elems[m - 1].size()); ++a)
          for (int b = 0; b < int(elems[k - 1].size()); ++b) {
            const Elem& ea = elems[m - 1][a];
            const Elem& eb = elems[k - 1][b];
            const Tree& ta = all_trees(m)[ea.tree];
            const Tree& tb = all_trees(k)[eb.tree];
            Graft gr = graft(ta, i, tb);
            int nti = -1;
            const auto& trees = all_trees(n);
            for (int ti = 0; ti < int(trees.size()); ++ti)
              if (trees[ti] == gr.tree) {
                nti = ti;
                break;
              }
            assert(nti >= 0);
            // Koszul sign: factors ordered (a-vertices, b-vertices) move to
            // the interleaved pre-order of the graft.
            std::vector<int> fdeg, fpos;
            auto va = vertex_degs(m, ea);
            auto vb = vertex_degs(k, eb);
            for (int v = 0; v < int(va.size()); ++v) {
              fdeg.push_back(va[v]);
              fpos.push_back(gr.a_vertex_map[v]);
            }
            for (int v = 0; v < int(vb.size()); ++v) {
              fdeg.push_back(vb[v]);
              fpos.push_back(gr.b_vertex_map[v]);
            }
            int sign = koszul_reorder_sign(fdeg, fpos);
            Elem out;
            out.tree = nti;
            out.dec.assign(gr.tree.vertex_count(), -1);
            for (int v = 0; v < int(va.size()); ++v) out.dec[gr.a_vertex_map[v]] = ea.dec[v];
            for (int v = 0; v < int(vb.size()); ++v) out.dec[gr.b_vertex_map[v]] = eb.dec[v];
            int id = lookup[n - 1].at(out.key());
            cm.at(flat_of[n - 1][id],
                  flat_of[m - 1][a] * o.dim(k) + flat_of[k - 1][b]) += sign;
          }
        o.comp[{m, i, k}] = std::move(cm);
      }
    }

  // Flat order sanity: the by-degree layout must match the FlatBasis order.
  for (int n = 1; n <= arity_bound; ++n)
    for (auto& [k, ids] : by_degree[n - 1]) assert(o.basis(n).offset.count(k));
}

inline FreeOperadBasis build_free_operad(const SymSeq& generators, int arity_bound) {
  if (!generators.at(1).is_zero())
    throw std::invalid_argument("free_operad: generators nonzero in arity 1");
  assert(generators.arity_bound >= arity_bound);
  FreeOperadBasis f;
  f.generators = generators;
  f.arity_bound = arity_bound;
  f.build();
  return f;
}

inline Operad free_operad(const SymSeq& generators, int arity_bound) {
  return build_free_operad(generators, arity_bound).op;
}

// ---------------------------------------------------------------------------
// Strict truncation: arities > n zeroed, compositions landing above n dropped.

inline Operad operad_truncate(const Operad& o, int n) {
  assert(n >= 1);
  Operad t;
  t.seq = SymSeq(o.bound());
  t.unit = o.unit;
  for (int m = 1; m <= std::min(n, o.bound()); ++m) t.seq.at(m) = o.seq.at(m);
  t.rebuild_bases();
  for (auto& [key, cm] : o.comp) {
    auto [m, i, k] = key;
    if (m > n || k > n || m + k - 1 > n) continue;
    t.comp[key] = cm;
  }
  return t;
}

// ---------------------------------------------------------------------------
// Operadic suspension: (sO)(d) = sgn_d (x) O(d) shifted up by d-1, with the
// composition signs this forces (the Hadamard twist by the endomorphism
// operad of a shifted line).

inline Operad operadic_suspension(const Operad& o) {
  Operad s;
  s.seq = SymSeq(o.bound());
  s.unit = o.unit;
  for (int d = 1; d <= o.bound(); ++d) {
    const SigmaComplex& m = o.seq.at(d);
    SigmaComplex sm;
    sm.n = d;
    sm.cx = shift_complex(m.cx, d - 1);
    sm.gen.resize(std::max(0, d - 1));
    // Materialize per degree: implicit identity actions still pick up the sign.
    for (int i = 0; i + 1 < d; ++i)
      for (auto& [k, dm] : m.cx.space.dims) sm.gen[i][k + d - 1] = m.gen_at(i, k).scaled(-1);
    s.seq.at(d) = std::move(sm);
  }
  s.rebuild_bases();
  for (auto& [key, cm] : o.comp) {
    auto [m, i, k] = key;
    int n = m + k - 1;
    Mat out(cm.rows(), cm.cols());
    // column (af, bf): sign (-1)^{(k-1)(i)} (0-based slot: i letters precede)
    // times (-1)^{(m-1)|b|} from moving the suspension factor past b.
    for (int af = 0; af < o.dim(m); ++af)
      for (int bf = 0; bf < o.dim(k); ++bf) {
        int col = af * o.dim(k) + bf;
        int e = (k - 1) * i + (m - 1) * o.basis(k).degree(bf);
        Rat sign = e % 2 == 0 ? 1 : -1;
        for (int r = 0; r < cm.rows(); ++r)
          if (!is_zero(cm.at(r, col))) out.at(r, col) = sign * cm.at(r, col);
      }
    // Flat indices are degree-shifted but order-preserved per arity, so the
    // row/column layouts of o and s agree.
    assert(s.dim(n) == cm.rows() && s.dim(m) == o.dim(m) && s.dim(k) == o.dim(k));
    s.comp[key] = std::move(out);
  }
  return s;
}

// ---------------------------------------------------------------------------
// Linear dualization. Dual degrees are negated; generator matrices transpose;
// cocomposition components are the transposed compositions.

namespace opdetail {

inline SigmaComplex dual_sigma(const SigmaComplex& m) {
  SigmaComplex d;
  d.n = m.n;
  for (auto& [k, dm] : m.cx.space.dims) d.cx.space.set_dim(-k, dm);
  for (auto& [k, mat] : m.cx.diff) d.cx.set_d(-k + 1, mat.transpose());
  d.gen.resize(std::max(0, m.n - 1));
  for (int i = 0; i + 1 < m.n; ++i)
    for (auto& [k, g] : m.gen[i]) d.gen[i][-k] = g.transpose();
  return d;
}

// flat index map original -> dual (degree negation permutes the layout)
inline std::vector<int> dual_flat_map(const FlatBasis& orig, const FlatBasis& dual) {
  std::vector<int> map(orig.size());
  for (int f = 0; f < orig.size(); ++f) map[f] = dual.flat(-orig.degree(f), orig.index(f));
  return map;
}

}  // namespace opdetail

inline DgCooperad dualize_to_cooperad(const Operad& o) {
  DgCooperad q;
  q.seq = SymSeq(o.bound());
  for (int n = 1; n <= o.bound(); ++n) q.seq.at(n) = opdetail::dual_sigma(o.seq.at(n));
  q.rebuild_bases();
  std::vector<std::vector<int>> fmap;
  for (int n = 1; n <= o.bound(); ++n)
    fmap.push_back(opdetail::dual_flat_map(o.basis(n), q.basis(n)));
  for (auto& [key, cm] : o.comp) {
    auto [m, i, k] = key;
    int n = m + k - 1;
    Mat dm(o.dim(m) * o.dim(k), o.dim(n));
    for (int r = 0; r < cm.rows(); ++r)
      for (int c = 0; c < cm.cols(); ++c) {
        if (is_zero(cm.at(r, c))) continue;
        int af = c / o.dim(k), bf = c % o.dim(k);
        dm.at(fmap[m - 1][af] * q.dim(k) + fmap[k - 1][bf], fmap[n - 1][r]) = cm.at(r, c);
      }
    q.delta[key] = std::move(dm);
  }
  return q;
}

// Arity truncation of a cooperad: the sub-cooperad of arities <= n (reduced
// cocomposition never raises arity), with the inclusion as the tautological
// identity on the kept terms.
inline DgCooperad cooperad_truncate(const DgCooperad& q, int n) {
  DgCooperad t;
  t.seq = SymSeq(q.bound());
  for (int m = 1; m <= std::min(n, q.bound()); ++m) t.seq.at(m) = q.seq.at(m);
  t.rebuild_bases();
  for (auto& [key, dm] : q.delta) {
    auto [m, i, k] = key;
    if (m > n || k > n || m + k - 1 > n) continue;
    t.delta[key] = dm;
  }
  return t;
}

// Dual check of cooperad axioms: transpose back to an operad and reuse the
// operad checker. Valid for cooperads whose terms are finite-dimensional.
inline std::optional<std::string> check_cooperad_axioms(const DgCooperad& q, int max_arity = 0) {
  Operad o;
  o.seq = SymSeq(q.bound());
  for (int n = 1; n <= q.bound(); ++n) o.seq.at(n) = opdetail::dual_sigma(q.seq.at(n));
  o.rebuild_bases();
  o.unit = {Rat(1)};
  std::vector<std::vector<int>> fmap;
  for (int n = 1; n <= q.bound(); ++n)
    fmap.push_back(opdetail::dual_flat_map(q.basis(n), o.basis(n)));
  for (auto& [key, dm] : q.delta) {
    auto [m, i, k] = key;
    int n = m + k - 1;
    Mat cm(o.dim(n), o.dim(m) * o.dim(k));
    for (int r = 0; r < dm.rows(); ++r)
      for (int c = 0; c < dm.cols(); ++c) {
        if (is_zero(dm.at(r, c))) continue;
        int af = r / q.dim(k), bf = r % q.dim(k);
        cm.at(fmap[n - 1][c], fmap[m - 1][af] * o.dim(k) + fmap[k - 1][bf]) = dm.at(r, c);
      }
    o.comp[{m, i, k}] = std::move(cm);
  }
  return check_operad_axioms(o, max_arity);
}

}  // namespace opk
