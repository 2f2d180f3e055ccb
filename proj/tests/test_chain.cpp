#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "opk/chain.hpp"

using namespace opk;

namespace {

// Random bounded complex: choose dims, then a valid differential by taking
// d = B*A with A*B = 0 is overkill; instead pick random d and project the
// failing part away via composing with kernels. Simpler: random dims in
// degrees [-2, 4] and differentials built from a random chain of maps
// d_k = P_{k-1} * Q_k where Q maps into a shared middle space and P out of
// it, with P*Q = 0 arranged by splitting coordinates.
ChainComplex random_complex(std::mt19937_64& rng, int maxdim = 3) {
  // Build from a direct sum of elementary pieces: points and intervals.
  ChainComplex c;
  std::map<int, std::vector<std::pair<int, int>>> cols;  // deg -> (kind marker)
  int lo = -2, hi = 4;
  std::map<int, int> dim;
  struct Interval {
    int top;   // degree of source
    int si, ti;  // index in top, top-1
  };
  std::vector<Interval> ivs;
  for (int k = lo; k <= hi; ++k) {
    int points = int(rng() % (maxdim + 1));
    dim[k] += points;
  }
  for (int k = lo + 1; k <= hi; ++k) {
    int n = int(rng() % 2);
    for (int i = 0; i < n; ++i) {
      ivs.push_back({k, dim[k], dim[k - 1]});
      dim[k] += 1;
      dim[k - 1] += 1;
    }
  }
  for (auto& [k, d] : dim) c.space.set_dim(k, d);
  for (auto& iv : ivs) {
    Mat d = c.d(iv.top);
    d.at(iv.ti, iv.si) = int(rng() % 5) + 1;
    c.set_d(iv.top, std::move(d));
  }
  return c;
}

std::map<int, int> kunneth(const GradedSpace& a, const GradedSpace& b) {
  std::map<int, int> out;
  for (auto& [p, dp] : a.dims)
    for (auto& [q, dq] : b.dims) out[p + q] += dp * dq;
  for (auto it = out.begin(); it != out.end();)
    it = it->second == 0 ? out.erase(it) : std::next(it);
  return out;
}

std::map<int, int> nonzero_dims(const GradedSpace& g) {
  std::map<int, int> out;
  for (auto& [k, d] : g.dims)
    if (d) out[k] = d;
  return out;
}

}  // namespace

TEST_CASE("homology of exact two-term complex vanishes") {
  ChainComplex c;
  c.space.set_dim(0, 1);
  c.space.set_dim(1, 1);
  Mat d(1, 1);
  d.at(0, 0) = 1;
  c.set_d(1, std::move(d));
  auto h = homology(c);
  CHECK(h.h.total_dim() == 0);
}

TEST_CASE("homology of zero differential") {
  ChainComplex c;
  c.space.set_dim(0, 1);
  c.space.set_dim(1, 1);
  auto h = homology(c);
  CHECK(h.h.dim(0) == 1);
  CHECK(h.h.dim(1) == 1);
}

TEST_CASE("homology rejects d^2 != 0") {
  ChainComplex c;
  c.space.set_dim(0, 1);
  c.space.set_dim(1, 1);
  c.space.set_dim(2, 1);
  Mat d1(1, 1), d2(1, 1);
  d1.at(0, 0) = 1;
  d2.at(0, 0) = 1;
  c.set_d(1, std::move(d1));
  c.set_d(2, std::move(d2));
  CHECK_THROWS(homology(c));
}

TEST_CASE("homology of surjective 3->1 map (bar of Com at arity 3 shape)") {
  // Q^3 --d--> Q^1 in degrees 2 -> 1, d = [1 1 1]
  ChainComplex c;
  c.space.set_dim(1, 1);
  c.space.set_dim(2, 3);
  Mat d(1, 3);
  d.at(0, 0) = d.at(0, 1) = d.at(0, 2) = 1;
  c.set_d(2, std::move(d));
  auto h = homology(c);
  CHECK(h.h.dim(2) == 2);
  CHECK(h.h.dim(1) == 0);
}

TEST_CASE("mapping cone of identity is acyclic") {
  std::mt19937_64 rng(7);
  ChainComplex a = random_complex(rng);
  ChainMap id = ChainMap::identity(a);
  ChainComplex cone = mapping_cone(id, a, a);
  CHECK(cone.d_squared_zero());
  CHECK(homology(cone).h.total_dim() == 0);
}

TEST_CASE("mapping cone of zero map splits") {
  std::mt19937_64 rng(8);
  ChainComplex a = random_complex(rng);
  ChainComplex b = random_complex(rng);
  ChainMap z;
  z.source = a.space;
  z.target = b.space;
  ChainComplex cone = mapping_cone(z, a, b);
  auto hc = homology(cone);
  auto ha = homology(a);
  auto hb = homology(b);
  for (int k = -4; k <= 8; ++k) CHECK(hc.h.dim(k) == hb.h.dim(k) + ha.h.dim(k - 1));
}

TEST_CASE("cone of multiplication by 2 is acyclic over Q") {
  ChainComplex a = ChainComplex::point(0);
  ChainMap f;
  f.source = f.target = a.space;
  Mat m(1, 1);
  m.at(0, 0) = 2;
  f.set(0, std::move(m));
  ChainComplex cone = mapping_cone(f, a, a);
  CHECK(homology(cone).h.total_dim() == 0);
}

TEST_CASE("cone Euler identity") {
  std::mt19937_64 rng(9);
  for (int t = 0; t < 10; ++t) {
    ChainComplex a = random_complex(rng);
    ChainComplex b = random_complex(rng);
    ChainMap z;  // zero map is always a chain map
    z.source = a.space;
    z.target = b.space;
    ChainComplex cone = mapping_cone(z, a, b);
    auto hc = homology(cone), ha = homology(a), hb = homology(b);
    CHECK(hc.h.euler() == hb.h.euler() - ha.h.euler());
  }
}

TEST_CASE("tensor unit law") {
  std::mt19937_64 rng(10);
  ChainComplex a = random_complex(rng);
  ChainComplex unit = ChainComplex::point(0);
  ChainComplex t = tensor_complexes(a, unit);
  CHECK(nonzero_dims(t.space) == nonzero_dims(a.space));
  for (auto& [k, m] : a.diff) CHECK(t.d(k) == m);
}

TEST_CASE("tensor degree additivity") {
  ChainComplex a = ChainComplex::point(1);
  ChainComplex t = tensor_complexes(a, a);
  CHECK(t.dim(2) == 1);
  CHECK(t.space.total_dim() == 1);
}

TEST_CASE("Kunneth over Q on random complexes") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 15; ++t) {
    ChainComplex a = random_complex(rng);
    ChainComplex b = random_complex(rng);
    ChainComplex ab = tensor_complexes(a, b);
    CHECK(ab.d_squared_zero());
    auto h = homology(ab);
    auto expect = kunneth(homology(a).h, homology(b).h);
    CHECK(nonzero_dims(h.h) == expect);
  }
}

TEST_CASE("shift by zero is identity; Q shifted") {
  std::mt19937_64 rng(12);
  ChainComplex a = random_complex(rng);
  ChainComplex s0 = shift_complex(a, 0);
  CHECK(nonzero_dims(s0.space) == nonzero_dims(a.space));
  ChainComplex q = ChainComplex::point(0);
  CHECK(shift_complex(q, 1).dim(1) == 1);
}

TEST_CASE("shift round trip and homology shift") {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 10; ++t) {
    ChainComplex a = random_complex(rng);
    int k = int(rng() % 5) - 2;
    ChainComplex s = shift_complex(a, k);
    ChainComplex back = shift_complex(s, -k);
    CHECK(nonzero_dims(back.space) == nonzero_dims(a.space));
    for (int d = -5; d <= 8; ++d) CHECK(back.d(d) == a.d(d));
    auto ha = homology(a), hs = homology(s);
    for (int d = -5; d <= 8; ++d) CHECK(hs.h.dim(d) == ha.h.dim(d - k));
  }
}
