#pragma once

// Finite-dimensional Sigma_n-representations in chain complexes. Actions are
// stored as the n-1 adjacent-transposition generators; arbitrary permutations
// are realized as reduced words. Coxeter relations plus d-equivariance give an
// exhaustive validation of the stored data.

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "opk/chain.hpp"
#include "opk/perm.hpp"

namespace opk {

struct SigmaComplex {
  int n = 1;
  ChainComplex cx;
  // gen[i] = action of s_i = (i, i+1), degree-preserving, per degree.
  std::vector<std::map<int, Mat>> gen;
  // Optional fast path for complexes whose action is cheaper to compute
  // directly (tree and forest bases) than as a generator word.
  std::function<std::map<int, Mat>(const Perm&)> direct_act;

  Mat gen_at(int i, int k) const {
    auto it = gen[i].find(k);
    if (it != gen[i].end()) return it->second;
    return Mat::identity(cx.dim(k));  // identity off the stored degrees
  }

  std::map<int, Mat> act(const Perm& sigma) const {
    assert(int(sigma.size()) == n);
    if (direct_act) return direct_act(sigma);
    std::map<int, Mat> out;
    auto word = adjacent_word(sigma);
    for (auto& [k, dm] : cx.space.dims) {
      Mat m = Mat::identity(dm);
      for (int i : word) m = m * gen_at(i, k);
      out[k] = std::move(m);
    }
    return out;
  }

  // Trivial action on a complex.
  static SigmaComplex trivial(int n, ChainComplex c) {
    SigmaComplex s;
    s.n = n;
    s.cx = std::move(c);
    s.gen.resize(std::max(0, n - 1));
    return s;
  }

  static SigmaComplex zero(int n) { return trivial(n, ChainComplex{}); }

  bool is_zero() const { return cx.space.dims.empty(); }
};

// Validates Coxeter relations and d-equivariance exactly; returns an error
// description, or nullopt on success.
inline std::optional<std::string> validate_sigma(const SigmaComplex& m) {
  const int n = m.n;
  if (int(m.gen.size()) != std::max(0, n - 1)) return "wrong generator count";
  for (auto& [k, dm] : m.cx.space.dims) {
    for (int i = 0; i + 1 < n; ++i) {
      Mat s = m.gen_at(i, k);
      if (s.rows() != dm || s.cols() != dm) return "generator shape mismatch";
      if (s * s != Mat::identity(dm))
        return "involution s" + std::to_string(i + 1) + "^2 != id in degree " +
               std::to_string(k);
    }
    for (int i = 0; i + 1 < n; ++i)
      for (int j = i + 2; j + 1 < n; ++j) {
        Mat si = m.gen_at(i, k), sj = m.gen_at(j, k);
        if (si * sj != sj * si)
          return "commutation s" + std::to_string(i + 1) + " s" + std::to_string(j + 1) +
                 " failed in degree " + std::to_string(k);
      }
    for (int i = 0; i + 2 < n; ++i) {
      Mat a = m.gen_at(i, k), b = m.gen_at(i + 1, k);
      if (a * b * a != b * a * b)
        return "braid relation s" + std::to_string(i + 1) + " s" + std::to_string(i + 2) +
               " failed in degree " + std::to_string(k);
    }
  }
  // d-equivariance.
  int lo = m.cx.space.min_deg(), hi = m.cx.space.max_deg();
  for (int k = lo; k <= hi; ++k) {
    Mat dk = m.cx.d(k);
    for (int i = 0; i + 1 < n; ++i)
      if (m.gen_at(i, k - 1) * dk != dk * m.gen_at(i, k))
        return "s" + std::to_string(i + 1) + " does not commute with d in degree " +
               std::to_string(k);
  }
  return std::nullopt;
}

inline SigmaComplex build_sigma_module(int n, ChainComplex cx,
                                       std::vector<std::map<int, Mat>> gens) {
  SigmaComplex m;
  m.n = n;
  m.cx = std::move(cx);
  m.gen = std::move(gens);
  if (auto err = validate_sigma(m)) throw std::invalid_argument("build_sigma_module: " + *err);
  return m;
}

struct SymmetrizerReport {
  std::map<int, Mat> projector;  // averaging idempotent per degree
  GradedSpace coinvariants;      // quotient model
  GradedSpace invariants;        // subspace model (image of the projector)
  std::map<int, Mat> invariant_basis;    // columns span the invariants
  std::map<int, Mat> coinvariant_reps;   // representative columns for the quotient
  std::map<int, Mat> norm;               // coinvariants model -> invariants model
  bool norm_iso = true;
};

// Char-0 Maschke averaging, optionally against the sign character. The
// projector is (1/n!) sum_sigma (+-) act(sigma); invariants are its image,
// coinvariants the quotient by span{(+-)sigma v - v}, and the norm map
// sum_sigma (+-) act(sigma) from representatives into the invariants.
inline SymmetrizerReport symmetrize(const SigmaComplex& m, bool sign_twist = false) {
  SymmetrizerReport rep;
  const int n = m.n;
  auto perms = all_perms(n);
  std::vector<std::map<int, Mat>> acts;
  acts.reserve(perms.size());
  for (auto& s : perms) acts.push_back(m.act(s));
  Rat inv_order(1);
  inv_order /= Rat(long(perms.size()));
  for (auto& [k, dm] : m.cx.space.dims) {
    Mat sum(dm, dm);
    for (size_t i = 0; i < perms.size(); ++i) {
      int sg = sign_twist ? perm_sign(perms[i]) : 1;
      sum = sum + (sg > 0 ? acts[i].at(k) : acts[i].at(k).scaled(-1));
    }
    Mat proj = sum.scaled(inv_order);
    if (proj * proj != proj) throw std::logic_error("symmetrize: projector not idempotent");
    RowReduceResult rr = row_reduce(proj);
    rep.invariants.set_dim(k, rr.rank);
    rep.invariant_basis[k] = rr.image;
    // Coinvariants: V / span{(+-)sigma v - v} = image of proj as quotient;
    // take the same pivot columns of proj as quotient representatives.
    Mat aug(dm, dm * int(perms.size()));
    {
      int c = 0;
      for (size_t i = 0; i < perms.size(); ++i) {
        int sg = sign_twist ? perm_sign(perms[i]) : 1;
        Mat rel = (sg > 0 ? acts[i].at(k) : acts[i].at(k).scaled(-1)) - Mat::identity(dm);
        for (int j = 0; j < dm; ++j, ++c)
          for (int r = 0; r < dm; ++r) aug.at(r, c) = rel.at(r, j);
      }
    }
    RowReduceResult rel_rr = row_reduce(aug);
    int codim = dm - rel_rr.rank;
    rep.coinvariants.set_dim(k, codim);
    // Quotient representatives: standard basis vectors completing the
    // relation subspace, chosen by pivoting through [relations | identity].
    Mat comb = Mat::hcat(rel_rr.image, Mat::identity(dm));
    RowReduceResult comb_rr = row_reduce(comb);
    Mat reps(dm, codim);
    int got = 0;
    for (int pc : comb_rr.pivot_cols)
      if (pc >= rel_rr.rank) reps.at(pc - rel_rr.rank, got++) = 1;
    assert(got == codim);
    rep.coinvariant_reps[k] = reps;
    // Norm map on representatives, expressed in the invariant basis.
    Mat norm_vals = sum * reps;
    Solver sol(rr.image);
    Mat norm(rr.rank, codim);
    for (int j = 0; j < codim; ++j) {
      auto x = sol.solve(norm_vals.col_vec(j));
      if (!x) throw std::logic_error("symmetrize: norm image escapes invariants");
      for (int i = 0; i < rr.rank; ++i) norm.at(i, j) = (*x)[i];
    }
    rep.norm[k] = norm;
    if (codim != rr.rank || rank_of(norm) != codim) rep.norm_iso = false;
    rep.projector[k] = std::move(proj);
  }
  return rep;
}

struct CharacterValue {
  std::map<int, Rat> per_degree;
  Rat alternating_sum;
};

// Trace of any permutation of the given cycle type, per degree.
inline CharacterValue character(const SigmaComplex& m, const std::vector<int>& type) {
  int sum = 0;
  for (int p : type) sum += p;
  if (sum != m.n) throw std::invalid_argument("character: cycle type does not sum to n");
  Perm sigma = perm_of_cycle_type(type, m.n);
  auto a = m.act(sigma);
  CharacterValue cv;
  cv.alternating_sum = 0;
  for (auto& [k, dm] : m.cx.space.dims) {
    Rat tr = 0;
    const Mat& mk = a.at(k);
    for (int i = 0; i < dm; ++i) tr += mk.at(i, i);
    cv.per_degree[k] = tr;
    cv.alternating_sum += (k % 2 == 0) ? tr : -tr;
  }
  return cv;
}

// Character of the induced action on homology, computed on representative
// cycles (the action preserves cycles modulo boundaries).
inline std::map<int, Rat> character_on_homology(const SigmaComplex& m, const Homology& h,
                                                const std::vector<int>& type) {
  Perm sigma = perm_of_cycle_type(type, m.n);
  auto a = m.act(sigma);
  std::map<int, Rat> out;
  for (auto& [k, hd] : h.h.dims) {
    HomologyClassSolver cls(h, k);
    Mat moved = a.at(k) * h.reps.at(k);
    Rat tr = 0;
    for (int j = 0; j < hd; ++j) {
      auto coords = cls.express(moved.col_vec(j));
      tr += coords[j];
    }
    out[k] = tr;
  }
  return out;
}

}  // namespace opk
