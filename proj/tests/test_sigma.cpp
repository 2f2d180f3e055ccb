#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "opk/sigma.hpp"

using namespace opk;

namespace {

// Regular representation of Sigma_n in degree 0: basis = permutations in
// lexicographic order, action by left multiplication.
SigmaComplex regular_rep(int n) {
  auto perms = all_perms(n);
  std::map<Perm, int> idx;
  for (int i = 0; i < int(perms.size()); ++i) idx[perms[i]] = i;
  SigmaComplex m;
  m.n = n;
  m.cx.space.set_dim(0, int(perms.size()));
  m.gen.resize(n - 1);
  for (int i = 0; i + 1 < n; ++i) {
    Perm s = adjacent_transposition(n, i);
    Mat g(int(perms.size()), int(perms.size()));
    for (int j = 0; j < int(perms.size()); ++j) g.at(idx.at(perm_compose(s, perms[j])), j) = 1;
    m.gen[i][0] = std::move(g);
  }
  return m;
}

}  // namespace

TEST_CASE("adjacent word reconstructs the permutation") {
  std::mt19937_64 rng(3);
  for (int n = 1; n <= 6; ++n)
    for (auto& p : all_perms(std::min(n, 4))) {
      auto w = adjacent_word(p);
      Perm q = perm_identity(int(p.size()));
      for (int i : w) q = perm_compose(q, adjacent_transposition(int(p.size()), i));
      CHECK(q == p);
    }
}

TEST_CASE("trivial action accepted") {
  ChainComplex c;
  c.space.set_dim(0, 2);
  c.space.set_dim(1, 1);
  SigmaComplex m = SigmaComplex::trivial(4, c);
  CHECK(!validate_sigma(m).has_value());
}

TEST_CASE("regular representation accepted; acts like the group") {
  for (int n = 2; n <= 4; ++n) {
    SigmaComplex m = regular_rep(n);
    CHECK(!validate_sigma(m).has_value());
    // act is a homomorphism
    auto perms = all_perms(n);
    std::mt19937_64 rng(17);
    for (int t = 0; t < 5; ++t) {
      const Perm& a = perms[rng() % perms.size()];
      const Perm& b = perms[rng() % perms.size()];
      CHECK(m.act(perm_compose(a, b)).at(0) == m.act(a).at(0) * m.act(b).at(0));
    }
  }
}

TEST_CASE("broken braid relation rejected with braid error") {
  // n=3, s1 = swap on Q^2, s2 = identity: involutions hold, braid fails
  SigmaComplex m;
  m.n = 3;
  m.cx.space.set_dim(0, 2);
  m.gen.resize(2);
  Mat sw(2, 2);
  sw.at(0, 1) = sw.at(1, 0) = 1;
  m.gen[0][0] = sw;
  m.gen[1][0] = Mat::identity(2);
  auto err = validate_sigma(m);
  REQUIRE(err.has_value());
  CHECK(err->find("braid") != std::string::npos);
}

TEST_CASE("symmetrize regular rep of Sigma_2") {
  auto rep = symmetrize(regular_rep(2), false);
  CHECK(rep.coinvariants.dim(0) == 1);
  CHECK(rep.invariants.dim(0) == 1);
  CHECK(rep.norm_iso);
}

TEST_CASE("symmetrize trivial rep of Sigma_3") {
  auto rep = symmetrize(SigmaComplex::trivial(3, ChainComplex::point(0)), false);
  CHECK(rep.coinvariants.dim(0) == 1);
  CHECK(rep.norm_iso);
}

TEST_CASE("sign-twisted regular rep of Sigma_3: multiplicity of sgn is 1") {
  auto rep = symmetrize(regular_rep(3), true);
  CHECK(rep.coinvariants.dim(0) == 1);
  CHECK(rep.invariants.dim(0) == 1);
  CHECK(rep.norm_iso);
}

TEST_CASE("projector idempotent in every degree (validated internally)") {
  // symmetrize throws if P^2 != P; just exercise a graded example
  ChainComplex c;
  c.space.set_dim(0, 2);
  c.space.set_dim(1, 2);
  Mat d(2, 2);
  d.at(0, 0) = 1;
  d.at(1, 1) = 1;
  c.set_d(1, std::move(d));
  SigmaComplex m = SigmaComplex::trivial(2, c);
  // overwrite with the swap action in both degrees (commutes with d = id)
  Mat sw(2, 2);
  sw.at(0, 1) = sw.at(1, 0) = 1;
  m.gen[0][0] = sw;
  m.gen[0][1] = sw;
  REQUIRE(!validate_sigma(m).has_value());
  auto rep = symmetrize(m, false);
  CHECK(rep.invariants.dim(0) == 1);
  CHECK(rep.invariants.dim(1) == 1);
}

TEST_CASE("character of regular rep of Sigma_3") {
  SigmaComplex m = regular_rep(3);
  CHECK(character(m, {1, 1, 1}).per_degree.at(0) == Rat(6));
  CHECK(character(m, {2, 1}).per_degree.at(0) == Rat(0));
  CHECK(character(m, {3}).per_degree.at(0) == Rat(0));
}

TEST_CASE("character of trivial rep is 1") {
  SigmaComplex m = SigmaComplex::trivial(4, ChainComplex::point(0));
  for (auto& t : all_partitions_of(4)) CHECK(character(m, t).per_degree.at(0) == Rat(1));
}

TEST_CASE("character rejects bad cycle type") {
  SigmaComplex m = SigmaComplex::trivial(3, ChainComplex::point(0));
  CHECK_THROWS(character(m, {2, 2}));
}

TEST_CASE("character is conjugation invariant (random words)") {
  std::mt19937_64 rng(23);
  SigmaComplex m = regular_rep(4);
  auto perms = all_perms(4);
  for (int t = 0; t < 10; ++t) {
    const Perm& a = perms[rng() % perms.size()];
    const Perm& g = perms[rng() % perms.size()];
    Perm conj = perm_compose(perm_compose(g, a), perm_inverse(g));
    Rat tra = 0, trc = 0;
    Mat ma = m.act(a).at(0), mc = m.act(conj).at(0);
    for (int i = 0; i < ma.rows(); ++i) {
      tra += ma.at(i, i);
      trc += mc.at(i, i);
    }
    CHECK(tra == trc);
    CHECK(cycle_type(a) == cycle_type(conj));
  }
}

TEST_CASE("build_sigma_module validates and throws on bad input") {
  Mat sw(2, 2);
  sw.at(0, 1) = sw.at(1, 0) = 1;
  ChainComplex c;
  c.space.set_dim(0, 2);
  CHECK_NOTHROW(build_sigma_module(2, c, {{{0, sw}}}));
  Mat notinv(2, 2);
  notinv.at(0, 0) = 2;
  notinv.at(1, 1) = 1;
  CHECK_THROWS(build_sigma_module(2, c, {{{0, notinv}}}));
}
