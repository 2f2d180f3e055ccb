#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "opk/bar.hpp"
#include "opk/levelled.hpp"
#include "test_util.hpp"

using namespace opk;

namespace {

bool lv_d_squared(const LevelledComplex& lc) {
  for (const auto& e : lc.elems()) {
    detail::Combo<leveldetail::Key> dd;
    for (auto& [k1, c1] : lc.d_elem(e))
      for (auto& [k2, c2] : lc.d_elem(lc.elems()[lc.id_of(k1)]))
        detail::combo_add(dd, k2, Rat(c1 * c2));
    if (!dd.empty()) return false;
  }
  return true;
}

int total_h_dim(const Homology& h) {
  int t = 0;
  for (auto& [k, d] : h.h.dims) t += d;
  return t;
}

}  // namespace

TEST_CASE("strict partition chains of small sets") {
  // [3]: the empty chain, 4 one-step coarsenings, and 3 two-step chains
  CHECK(leveldetail::all_chains(3).size() == 8);
  CHECK(leveldetail::all_chains(1).size() == 1);
  CHECK(leveldetail::all_chains(2).size() == 2);
}

TEST_CASE("levelled dims: unit module over Com") {
  Operad com = standard_operad(OperadKind::Com, 4);
  LevelledComplex k3(com, 1, 3);
  CHECK(k3.space().dims == std::map<int, int>{{1, 1}, {2, 3}});
  // chains 0 < ... < full on [4]: 1 direct, 13 through one midpoint,
  // 18 of length three (only 2+1+1 types admit a further coarsening)
  LevelledComplex k4(com, 1, 4);
  CHECK(k4.space().dims == std::map<int, int>{{1, 1}, {2, 13}, {3, 18}});
  // module bound 2 at arity 3: tops of one or two blocks
  LevelledComplex t(com, 2, 3);
  CHECK(t.space().dims == std::map<int, int>{{1, 4}, {2, 3}});
}

TEST_CASE("levelled differential squares to zero (elementwise)") {
  for (auto kind : {OperadKind::Com, OperadKind::Ass, OperadKind::Lie}) {
    Operad o = standard_operad(kind, 4);
    for (int d = 2; d <= 4; ++d)
      for (int n : {1, 2, d}) CHECK(lv_d_squared(LevelledComplex(o, n, d)));
  }
}

TEST_CASE("levelled complexes carry valid Sigma-actions") {
  for (auto kind : {OperadKind::Com, OperadKind::Ass, OperadKind::Lie}) {
    Operad o = standard_operad(kind, 4);
    for (int d = 2; d <= 4; ++d)
      for (int n : {1, 2, d}) {
        auto err = validate_sigma(two_sided_bar(o, n, d));
        if (err) FAIL(kind_name(kind), " n=", n, " d=", d, ": ", *err);
      }
  }
}

TEST_CASE("levelled and tree bar models have equal homology") {
  for (auto kind : {OperadKind::Com, OperadKind::Ass, OperadKind::Lie}) {
    Operad o = standard_operad(kind, 4);
    BarComplex b(o, 4);
    for (int d = 2; d <= 4; ++d) {
      SigmaComplex lv = two_sided_bar(o, 1, d);
      SigmaComplex tr = b.complex(d);
      Homology hl = homology(lv.cx);
      Homology ht = homology(tr.cx);
      CHECK(hl.h.dims == ht.h.dims);
      for (auto& type : all_partitions_of(d)) {
        auto cl = character_on_homology(lv, hl, type);
        auto ct = character_on_homology(tr, ht, type);
        CHECK(cl.at(d - 1) == ct.at(d - 1));
      }
    }
  }
}

TEST_CASE("two-sided bar with full module coefficients is acyclic") {
  for (auto kind : {OperadKind::Com, OperadKind::Ass, OperadKind::Lie}) {
    Operad o = standard_operad(kind, 4);
    for (int d = 2; d <= 4; ++d)
      CHECK(total_h_dim(homology(two_sided_bar(o, d, d).cx)) == 0);
  }
}

TEST_CASE("K_n(d) homology concentrates in degree d-n") {
  for (auto kind : {OperadKind::Com, OperadKind::Ass, OperadKind::Lie}) {
    Operad o = standard_operad(kind, 4);
    for (auto [n, d] : std::vector<std::pair<int, int>>{{2, 3}, {2, 4}, {3, 4}}) {
      Homology h = homology(kn_complex(o, n, d).cx);
      CHECK(h.h.dim(d - n) > 0);
      for (auto& [k, hd] : h.h.dims) CHECK((k == d - n || hd == 0));
    }
  }
  // hand count over Com at (n,d) = (2,3): chains have dims 4 and 3, Euler -1
  Homology h = homology(kn_complex(standard_operad(OperadKind::Com, 3), 2, 3).cx);
  CHECK(h.h.dims == std::map<int, int>{{1, 1}});
}

TEST_CASE("tower projections are chain maps, zero on homology") {
  for (auto kind : {OperadKind::Com, OperadKind::Ass, OperadKind::Lie}) {
    Operad o = standard_operad(kind, 4);
    LevelledComplex src(o, 3, 4), tgt(o, 2, 4);
    ChainMap f = kn_tower_map(src, tgt);
    ChainComplex scx = src.complex().cx, tcx = tgt.complex().cx;
    CHECK(f.commutes(scx, tcx));
    bool nonzero = false;
    for (auto& [k, m] : f.comp) nonzero = nonzero || !m.is_zero();
    CHECK(nonzero);
    Homology hs = homology(scx), ht = homology(tcx);
    for (auto& [k, hd] : hs.h.dims) {
      if (hd == 0 || ht.h.dim(k) == 0) continue;
      HomologyClassSolver solver(ht, k);
      Mat img = f.at(k) * hs.reps.at(k);
      for (int c = 0; c < img.cols(); ++c) {
        std::vector<Rat> v(img.rows());
        for (int i = 0; i < img.rows(); ++i) v[i] = img.at(i, c);
        for (Rat& x : solver.express(v)) CHECK(x == 0);
      }
    }
  }
}

TEST_CASE("associative K_n homology characters vanish off the identity") {
  Operad ass = standard_operad(OperadKind::Ass, 4);
  for (auto [n, d] : std::vector<std::pair<int, int>>{{2, 3}, {2, 4}, {3, 4}}) {
    SigmaComplex sc = kn_complex(ass, n, d);
    Homology h = homology(sc.cx);
    for (auto& type : all_partitions_of(d)) {
      if (int(type.size()) == d) continue;  // identity type
      for (auto& [k, tr] : character_on_homology(sc, h, type)) CHECK(tr == 0);
    }
  }
}

TEST_CASE("sparse degree table matches dense homology") {
  for (auto kind : {OperadKind::Com, OperadKind::Ass}) {
    Operad o = standard_operad(kind, 4);
    Homology h = homology(kn_complex(o, 2, 4).cx);
    for (auto& row : kn_degree_table(o, 2, 4)) {
      CHECK(row.chain_dim == LevelledComplex(o, 2, 4).space().dim(row.degree));
      CHECK(row.h_dim == h.h.dim(row.degree));
    }
  }
}

TEST_CASE("chain traces at the identity give the dimensions") {
  Operad com = standard_operad(OperadKind::Com, 4);
  LevelledComplex lc(com, 2, 4);
  Perm id(4);
  std::iota(id.begin(), id.end(), 0);
  auto tr = lc.chain_traces(id);
  for (auto& [k, dk] : lc.space().dims) CHECK(tr.at(k) == dk);
}
