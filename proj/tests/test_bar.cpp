#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "opk/bar.hpp"
#include "test_util.hpp"

using namespace opk;

namespace {

int factorial(int n) { return n <= 1 ? 1 : n * factorial(n - 1); }

int double_factorial_dim(int n) {  // (2n-3)!!
  int e = 1;
  for (int k = 3; k <= n; ++k) e *= 2 * k - 3;
  return n >= 2 ? e : 1;
}

// d^2 = 0 checked elementwise through the combo interface.
template <class C>
bool d_squared_zero_elementwise(const C& c, int n) {
  for (const auto& e : c.elems(n)) {
    detail::Combo<bardetail::Key> dd;
    for (auto& [k1, c1] : c.d_elem(n, e))
      for (auto& [k2, c2] : c.d_elem(n, c.elems(n)[c.id_of(n, k1)]))
        detail::combo_add(dd, k2, Rat(c1 * c2));
    if (!dd.empty()) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("bar dims by vertex count") {
  BarComplex bcom(standard_operad(OperadKind::Com, 4), 4);
  CHECK(bcom.space(2).dims == std::map<int, int>{{1, 1}});
  CHECK(bcom.space(3).dims == std::map<int, int>{{1, 1}, {2, 3}});
  CHECK(bcom.space(4).dims == std::map<int, int>{{1, 1}, {2, 10}, {3, 15}});

  BarComplex bass(standard_operad(OperadKind::Ass, 3), 3);
  CHECK(bass.space(3).dims == std::map<int, int>{{1, 6}, {2, 12}});

  BarComplex blie(standard_operad(OperadKind::Lie, 4), 4);
  CHECK(blie.space(4).dims == std::map<int, int>{{1, 6}, {2, 20}, {3, 15}});
}

TEST_CASE("bar differential squares to zero (elementwise up to arity 5)") {
  for (auto kind : {OperadKind::Com, OperadKind::Ass, OperadKind::Lie}) {
    BarComplex b(standard_operad(kind, 5), 5);
    for (int n = 2; n <= 5; ++n) CHECK(d_squared_zero_elementwise(b, n));
  }
}

TEST_CASE("bar complexes carry valid Sigma-actions") {
  for (auto kind : {OperadKind::Com, OperadKind::Ass, OperadKind::Lie}) {
    BarComplex b(standard_operad(kind, 4), 4);
    for (int n = 2; n <= 4; ++n) {
      auto err = validate_sigma(b.complex(n));
      if (err) FAIL(kind_name(kind), "(", n, "): ", *err);
    }
  }
}

TEST_CASE("bar homology: Koszul dual sizes and characters") {
  // H(B Com)(n) in degree n-1 of dim (n-1)!; H(B Lie)(n) of dim 1;
  // H(B Ass)(n) of dim n!. Characters match the operadic suspension of the
  // dual-side operad (the Q-linear dual keeps the character).
  Operad com = standard_operad(OperadKind::Com, 4);
  Operad ass = standard_operad(OperadKind::Ass, 4);
  Operad lie = standard_operad(OperadKind::Lie, 4);
  Operad scom = operadic_suspension(com);
  Operad sass = operadic_suspension(ass);
  Operad slie = operadic_suspension(lie);
  struct Row {
    const Operad *o, *dual;
  };
  std::vector<Row> rows{{&com, &slie}, {&ass, &sass}, {&lie, &scom}};
  for (auto& row : rows) {
    BarComplex b(*row.o, 4);
    for (int n = 2; n <= 4; ++n) {
      SigmaComplex sc = b.complex(n);
      Homology h = homology(sc.cx);
      for (auto& [k, hd] : h.h.dims) CHECK((k == n - 1 || hd == 0));
      CHECK(h.h.dim(n - 1) == row.dual->dim(n));
      for (auto& type : all_partitions_of(n)) {
        Rat want = character(row.dual->seq.at(n), type).per_degree.at(n - 1);
        CHECK(character_on_homology(sc, h, type).at(n - 1) == want);
      }
    }
  }
}

TEST_CASE("bar cooperad satisfies the dual axioms") {
  for (auto kind : {OperadKind::Com, OperadKind::Lie, OperadKind::Ass}) {
    int bound = kind == OperadKind::Ass ? 3 : 4;
    DgCooperad q = bar_construction(standard_operad(kind, bound), bound);
    auto err = check_cooperad_axioms(q);
    if (err) FAIL(kind_name(kind), ": ", *err);
  }
}

TEST_CASE("delta_subset agrees with the stored delta on contiguous subsets") {
  DgCooperad q = bar_construction(standard_operad(OperadKind::Ass, 4), 4);
  for (int k = 2; k < 4; ++k)
    for (int i = 0; i + k <= 4; ++i) {
      std::vector<int> T(k);
      std::iota(T.begin(), T.end(), i);
      CHECK(delta_subset(q, 4, T) == q.delta_mat(4 - k + 1, i, k));
    }
}

TEST_CASE("cobar differential squares to zero and actions are valid") {
  for (auto kind : {OperadKind::Com, OperadKind::Ass, OperadKind::Lie}) {
    DgCooperad q = bar_construction(standard_operad(kind, 4), 4);
    CobarComplex cc(q, 4);
    for (int n = 2; n <= 4; ++n) {
      CHECK(d_squared_zero_elementwise(cc, n));
      auto err = validate_sigma(cc.complex(n));
      if (err) FAIL(kind_name(kind), "(", n, "): ", *err);
    }
  }
}

TEST_CASE("koszul unit: bar-cobar resolves the operad") {
  for (auto kind : {OperadKind::Com, OperadKind::Ass, OperadKind::Lie}) {
    auto err = check_koszul_unit(standard_operad(kind, 4), 4);
    if (err) FAIL(kind_name(kind), ": ", *err);
  }
}

TEST_CASE("counit maps are chain maps with the right shapes") {
  Operad com = standard_operad(OperadKind::Com, 3);
  auto maps = counit_to_operad(com, 3);
  REQUIRE(maps.size() == 3);
  for (int n = 1; n <= 3; ++n) {
    CHECK(maps[n - 1].target == com.seq.at(n).cx.space);
    CHECK(maps[n - 1].at(0).rows() == com.dim(n));
  }
}

TEST_CASE("cobar of the trivial truncation is the unit operad") {
  DgCooperad q = cooperad_truncate(bar_construction(standard_operad(OperadKind::Com, 3), 3), 1);
  CobarComplex cc(q, 3);
  CHECK(cc.dim(1) == 1);
  CHECK(cc.dim(2) == 0);
  CHECK(cc.dim(3) == 0);
}

TEST_CASE("cobar is a dg operad (grafting compositions pass the axioms)") {
  Operad c1 = cobar_construction(bar_construction(standard_operad(OperadKind::Com, 3), 3), 3);
  auto e1 = check_operad_axioms(c1);
  if (e1) FAIL("C(B Com): ", *e1);
  Operad c2 = cobar_construction(bar_construction(standard_operad(OperadKind::Ass, 3), 3), 3);
  auto e2 = check_operad_axioms(c2);
  if (e2) FAIL("C(B Ass): ", *e2);
}

TEST_CASE("phi on one arity: stable range isomorphisms") {
  Operad com = standard_operad(OperadKind::Com, 5);
  Operad ass = standard_operad(OperadKind::Ass, 4);
  Operad lie = standard_operad(OperadKind::Lie, 4);
  for (int n = 2; n <= 4; ++n)
    for (int k = 2; k <= n; ++k) {
      auto r = phi_arity_homology(com, n, k);
      CHECK(r.matches_operad);
    }
  CHECK(phi_arity_homology(ass, 3, 3).matches_operad);
  CHECK(phi_arity_homology(ass, 3, 2).matches_operad);
  CHECK(phi_arity_homology(lie, 3, 3).matches_operad);
  CHECK(phi_arity_homology(lie, 4, 3).matches_operad);
  // outside the range the truncation shows: C(tau_2 B Com)(k) is the free
  // binary tree operad, H_0 of dim (2k-3)!!
  for (int k = 3; k <= 5; ++k) {
    auto r = phi_arity_homology(com, 2, k);
    CHECK_FALSE(r.matches_operad);
    CHECK(r.h.dim(0) == double_factorial_dim(k));
  }
}

TEST_CASE("bar term formula (dense range)") {
  for (auto kind : {OperadKind::Com, OperadKind::Ass, OperadKind::Lie}) {
    Operad o = standard_operad(kind, 4);
    for (int n = 2; n <= 4; ++n) {
      auto err = check_bar_term_formula(o, n);
      if (err) FAIL(kind_name(kind), " n=", n, ": ", *err);
    }
  }
}

TEST_CASE("bar term formula agrees between dense and sparse paths") {
  // force the sparse path on a case small enough to also run densely
  Operad com = standard_operad(OperadKind::Com, 4);
  auto dense = check_bar_term_formula(com, 4);
  auto sparse = check_bar_term_formula(com, 4, /*dense_limit=*/1);
  CHECK_FALSE(dense.has_value());
  CHECK_FALSE(sparse.has_value());
}
