#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "opk/operad.hpp"
#include "test_util.hpp"

using namespace opk;

namespace {

// All commutator expansions of complete binary bracketings on every ordering
// of n letters; a brute-force span oracle for Lie(n) inside Q[Sigma_n].
void all_bracketings(const std::vector<int>& letters,
                     std::vector<detail::Combo<opdetail::Word>>& out) {
  int n = int(letters.size());
  if (n == 1) {
    out.push_back({{opdetail::Word{letters[0]}, Rat(1)}});
    return;
  }
  for (int split = 1; split < n; ++split) {
    std::vector<int> l(letters.begin(), letters.begin() + split);
    std::vector<int> r(letters.begin() + split, letters.end());
    std::vector<detail::Combo<opdetail::Word>> ls, rs;
    all_bracketings(l, ls);
    all_bracketings(r, rs);
    for (auto& a : ls)
      for (auto& b : rs) {
        detail::Combo<opdetail::Word> c;
        for (auto& [wa, ca] : a)
          for (auto& [wb, cb] : b) {
            opdetail::Word ab = wa;
            ab.insert(ab.end(), wb.begin(), wb.end());
            detail::combo_add(c, ab, Rat(ca * cb));
            opdetail::Word ba = wb;
            ba.insert(ba.end(), wa.begin(), wa.end());
            detail::combo_add(c, ba, Rat(-ca * cb));
          }
        out.push_back(std::move(c));
      }
  }
}

int factorial(int n) { return n <= 1 ? 1 : n * factorial(n - 1); }

}  // namespace

TEST_CASE("tree enumeration counts") {
  // leaf-labeled rooted trees, internal arity >= 2: 1, 1, 4, 26, 236
  CHECK(all_trees(1).size() == 1);
  CHECK(all_trees(2).size() == 1);
  CHECK(all_trees(3).size() == 4);
  CHECK(all_trees(4).size() == 26);
  CHECK(all_trees(5).size() == 236);
}

TEST_CASE("trees are canonical and distinct") {
  for (int d = 2; d <= 5; ++d) {
    std::set<Tree> seen;
    for (const Tree& t : all_trees(d)) {
      CHECK(seen.insert(t).second);
      // children sorted by min leaf, arities >= 2, pre-order ids
      auto ls = tree_leaf_sets(t);
      CHECK(int(ls[0].size()) == d);
      for (int v = 0; v < t.vertex_count(); ++v) {
        CHECK(t.arity(v) >= 2);
        int last = -1;
        for (int c : t.kids[v]) {
          int ml = child_is_leaf(c) ? c : ls[child_vertex(c)][0];
          CHECK(ml > last);
          last = ml;
        }
      }
      Canonicalized can = canonicalize(t);
      CHECK(can.tree == t);
      for (int v = 0; v < t.vertex_count(); ++v) CHECK(can.vertex_map[v] == v);
    }
  }
}

TEST_CASE("contract and cut are inverse up to grafting") {
  for (const Tree& t : all_trees(4)) {
    for (int c = 1; c < t.vertex_count(); ++c) {
      Cut cut = cut_edge(t, c);
      // contiguous leaf windows regraft to the original
      bool contiguous = true;
      for (size_t i = 1; i < cut.leaf_set.size(); ++i)
        if (cut.leaf_set[i] != cut.leaf_set[i - 1] + 1) contiguous = false;
      if (!contiguous) continue;
      int i = cut.leaf_set[0];
      Graft g = graft(cut.upper, i, cut.lower);
      CHECK(g.tree == t);
    }
  }
}

TEST_CASE("relabel is a group action on trees") {
  for (const Tree& t : all_trees(3)) {
    for (auto& a : all_perms(3))
      for (auto& b : all_perms(3)) {
        Tree one = relabel_leaves(relabel_leaves(t, b).tree, a).tree;
        Tree two = relabel_leaves(t, perm_compose(a, b)).tree;
        CHECK(one == two);
      }
  }
}

TEST_CASE("standard operad dims") {
  Operad com = standard_operad(OperadKind::Com, 4);
  Operad ass = standard_operad(OperadKind::Ass, 4);
  Operad lie = standard_operad(OperadKind::Lie, 5);
  for (int n = 1; n <= 4; ++n) {
    CHECK(com.dim(n) == 1);
    CHECK(ass.dim(n) == factorial(n));
  }
  for (int n = 1; n <= 5; ++n) CHECK(lie.dim(n) == factorial(n - 1));
}

TEST_CASE("Lie span oracle: all bracketings span exactly the left-normed span") {
  for (int n = 2; n <= 5; ++n) {
    Mat emb = opdetail::lie_embedding(n);
    std::vector<detail::Combo<opdetail::Word>> all;
    std::vector<int> letters(n);
    std::iota(letters.begin(), letters.end(), 0);
    std::sort(letters.begin(), letters.end());
    do {
      all_bracketings(letters, all);
    } while (std::next_permutation(letters.begin(), letters.end()));
    Mat big(emb.rows(), int(all.size()));
    for (int j = 0; j < int(all.size()); ++j)
      for (auto& [w, c] : all[j]) big.at(opdetail::word_rank(n).at(w), j) = c;
    int r_all = rank_of(big);
    CHECK(r_all == factorial(n - 1));
    CHECK(rank_of(emb) == factorial(n - 1));
    CHECK(rank_of(Mat::hcat(emb, big)) == factorial(n - 1));
  }
}

TEST_CASE("operad axioms: Com, Ass, Lie pass at arity 5") {
  auto e1 = check_operad_axioms(standard_operad(OperadKind::Com, 5));
  if (e1) FAIL("Com: ", *e1);
  auto e2 = check_operad_axioms(standard_operad(OperadKind::Ass, 5));
  if (e2) FAIL("Ass: ", *e2);
  auto e3 = check_operad_axioms(standard_operad(OperadKind::Lie, 5));
  if (e3) FAIL("Lie: ", *e3);
}

TEST_CASE("corrupted composition is caught with a located triple") {
  Operad ass = standard_operad(OperadKind::Ass, 3);
  ass.comp[{2, 0, 2}].at(0, 0) += 1;
  auto err = check_operad_axioms(ass);
  REQUIRE(err.has_value());
  // the corruption may surface first as an equivariance or associativity
  // failure; either way the report locates the offending composition
  CHECK(err->find("(2 o_1 2)") != std::string::npos);
}

TEST_CASE("free operad dims") {
  SymSeq bin(4);
  bin.at(2) = SigmaComplex::trivial(2, ChainComplex::point(0));
  Operad f = free_operad(bin, 4);
  CHECK(f.dim(1) == 1);
  CHECK(f.dim(2) == 1);
  CHECK(f.dim(3) == 3);
  CHECK(f.dim(4) == 15);  // (2n-3)!!

  SymSeq none(3);
  Operad unit = free_operad(none, 3);
  CHECK(unit.dim(1) == 1);
  CHECK(unit.dim(2) == 0);
  CHECK(unit.dim(3) == 0);

  SymSeq bt(3);
  bt.at(2) = SigmaComplex::trivial(2, ChainComplex::point(0));
  bt.at(3) = SigmaComplex::trivial(3, ChainComplex::point(0));
  CHECK(free_operad(bt, 3).dim(3) == 4);  // 3 binary trees + 1 corolla

  SymSeq g1(1);
  g1.at(1) = SigmaComplex::trivial(1, ChainComplex::point(0));
  CHECK_THROWS(free_operad(g1, 1));
}

TEST_CASE("free binary double factorial up to arity 6") {
  SymSeq bin(6);
  bin.at(2) = SigmaComplex::trivial(2, ChainComplex::point(0));
  Operad f = free_operad(bin, 6);
  int expect = 1;
  for (int n = 2; n <= 6; ++n) {
    expect = n == 2 ? 1 : expect * (2 * n - 3);
    CHECK(f.dim(n) == expect);
  }
}

TEST_CASE("free operad passes axioms (including a graded generator)") {
  SymSeq gens(4);
  gens.at(2) = SigmaComplex::trivial(2, ChainComplex::point(1));  // odd degree
  gens.at(3) = testutil::sign_rep(3, 0);
  Operad f = free_operad(gens, 4);
  auto err = check_operad_axioms(f);
  if (err) FAIL(*err);
}

TEST_CASE("truncation") {
  Operad ass = standard_operad(OperadKind::Ass, 4);
  Operad t1 = operad_truncate(ass, 1);
  CHECK(t1.dim(1) == 1);
  for (int n = 2; n <= 4; ++n) CHECK(t1.dim(n) == 0);
  Operad t9 = operad_truncate(ass, 9);
  for (int n = 1; n <= 4; ++n) CHECK(t9.dim(n) == ass.dim(n));
  CHECK(t9.comp.size() == ass.comp.size());
  Operad t2 = operad_truncate(ass, 2);
  CHECK(t2.comp_mat(2, 0, 2).is_zero());
  // functoriality
  Operad a = operad_truncate(operad_truncate(ass, 3), 2);
  Operad b = operad_truncate(ass, 2);
  CHECK(a.comp.size() == b.comp.size());
  for (int n = 1; n <= 4; ++n) CHECK(a.dim(n) == b.dim(n));
  auto err = check_operad_axioms(t2);
  if (err) FAIL(*err);
}

TEST_CASE("operadic suspension") {
  Operad scom = operadic_suspension(standard_operad(OperadKind::Com, 5));
  CHECK(scom.dim(2) == 1);
  CHECK(scom.basis(2).degree(0) == 1);
  CHECK(scom.seq.at(2).gen_at(0, 1).at(0, 0) == Rat(-1));
  CHECK(scom.dim(1) == 1);
  CHECK(scom.basis(1).degree(0) == 0);
  // character of (sCom)(3) at cycle type 2+1 is the sign: -1
  CHECK(character(scom.seq.at(3), {2, 1}).per_degree.at(2) == Rat(-1));
  auto err = check_operad_axioms(scom);
  if (err) FAIL("sCom: ", *err);
  auto err2 = check_operad_axioms(operadic_suspension(standard_operad(OperadKind::Ass, 4)));
  if (err2) FAIL("sAss: ", *err2);
  auto err3 = check_operad_axioms(operadic_suspension(standard_operad(OperadKind::Lie, 4)));
  if (err3) FAIL("sLie: ", *err3);
}

TEST_CASE("dualization") {
  Operad ass = standard_operad(OperadKind::Ass, 4);
  DgCooperad q = dualize_to_cooperad(ass);
  for (int n = 1; n <= 4; ++n) CHECK(q.dim(n) == factorial(n));
  auto err = check_cooperad_axioms(q);
  if (err) FAIL(*err);
  DgCooperad com_dual = dualize_to_cooperad(standard_operad(OperadKind::Com, 4));
  for (int n = 1; n <= 4; ++n) CHECK(com_dual.dim(n) == 1);
  // dual of a graded operad: degrees negate
  DgCooperad sd = dualize_to_cooperad(operadic_suspension(standard_operad(OperadKind::Com, 3)));
  CHECK(sd.basis(3).degree(0) == -2);
  auto err2 = check_cooperad_axioms(sd);
  if (err2) FAIL(*err2);
  DgCooperad t = cooperad_truncate(q, 2);
  CHECK(t.dim(2) == 2);
  CHECK(t.dim(3) == 0);
}

TEST_CASE("suspension squares with duality at the character level") {
  // characters of (sO)^dual match sgn (x) O-character placed in the dual degree
  for (auto kind : {OperadKind::Com, OperadKind::Ass, OperadKind::Lie}) {
    Operad o = standard_operad(kind, 4);
    DgCooperad sd = dualize_to_cooperad(operadic_suspension(o));
    for (int n = 2; n <= 4; ++n) {
      for (auto& type : all_partitions_of(n)) {
        Perm sigma = perm_of_cycle_type(type, n);
        Rat expect = Rat(perm_sign(sigma)) * character(o.seq.at(n), type).per_degree.at(0);
        CHECK(character(sd.seq.at(n), type).per_degree.at(-(n - 1)) == expect);
      }
    }
  }
}
