#include <doctest.h>

#include <map>
#include <set>

#include "ietlab/error.hpp"
#include "ietlab/lattice.hpp"
#include "ietlab/perm.hpp"

using namespace ietlab;

namespace {
Permutation P(const char* s) { return Permutation::parse(s); }

std::set<std::set<int>> orbit_set(const SingularityData& s) {
  std::set<std::set<int>> out;
  for (const auto& o : s.orbits) out.insert(std::set<int>(o.begin(), o.end()));
  return out;
}
}  // namespace

TEST_CASE("parsing and validation") {
  CHECK(P("4 3 2 1").to_string() == "4 3 2 1");
  CHECK_THROWS_AS(P("1 1"), InvalidInput);
  CHECK_THROWS_AS(P("1 x"), InvalidInput);
  CHECK_THROWS_AS(P(""), InvalidInput);
  CHECK(P("3 1 2").inverse() == P("2 3 1"));
}

TEST_CASE("irreducibility and rotations") {
  CHECK(is_irreducible(P("2 1")));
  CHECK_FALSE(is_irreducible(P("1 2")));
  CHECK(is_irreducible(P("3 1 2")));
  CHECK_FALSE(is_irreducible(P("2 1 3")));
  CHECK(is_rotation(P("2 1")));
  CHECK(is_rotation(P("3 1 2")));
  CHECK_FALSE(is_rotation(P("4 3 2 1")));
  CHECK_THROWS_AS(require_irreducible(P("1 2")), ReducibleError);
}

TEST_CASE("singularity data") {
  auto s2 = singularity_data(P("2 1"));
  CHECK(s2.sigma == std::vector<int>{1, 2, 0});
  CHECK(s2.nOrbits == 1);
  CHECK(s2.genus == 1);

  auto s3 = singularity_data(P("3 2 1"));
  CHECK(orbit_set(s3) == std::set<std::set<int>>{{0, 2}, {1, 3}});
  CHECK(s3.genus == 1);

  auto s4 = singularity_data(P("4 3 2 1"));
  CHECK(s4.nOrbits == 1);
  CHECK(s4.orbits[0].size() == 5);
  CHECK(s4.genus == 2);
}

TEST_CASE("H subspace examples") {
  auto h2 = h_subspace(P("2 1"));
  CHECK(h2.dim == 2);
  CHECK(h2.annihilators.size() == 1);
  CHECK(h2.annihilators[0] == std::vector<Rational>{0, 0});

  auto h3 = h_subspace(P("3 2 1"));
  CHECK(h3.dim == 2);
  bool found = false;
  for (const auto& b : h3.annihilators)
    if (b == std::vector<Rational>{1, -1, 1}) found = true;
  CHECK(found);
  BigMatrix expected{{BigInt(1), BigInt(1), BigInt(0)}, {BigInt(0), BigInt(1), BigInt(1)}};
  CHECK(same_lattice(h3.latticeBasis.transpose(), expected));
  CHECK(h3.leftInverse * h3.latticeBasis == BigMatrix::identity(2));

  auto h4 = h_subspace(P("4 3 2 1"));
  CHECK(h4.dim == 4);
  CHECK(h4.latticeBasis == BigMatrix::identity(4));
}

TEST_CASE("rauzy neighbors and classes") {
  auto [a, b] = rauzy_neighbors(P("2 1"));
  CHECK(a == P("2 1"));
  CHECK(b == P("2 1"));
  auto [c, e] = rauzy_neighbors(P("4 3 2 1"));
  CHECK(c == P("4 1 3 2"));
  CHECK(e == P("2 4 3 1"));
  CHECK(rauzy_class(P("2 1")).size() == 1);
  auto cls = rauzy_class(P("4 3 2 1"));
  CHECK(cls.size() == 7);
  for (const auto& q : cls) CHECK(singularity_data(q).genus == 2);
  for (const auto& q : rauzy_class(P("3 2 1"))) CHECK(singularity_data(q).genus == 1);
}

TEST_CASE("Nogueira-Rudolph vectors") {
  auto v = nr_vectors(P("4 3 2 1"));
  CHECK(v[0] == std::vector<int>{0, 1, 1, 1});
  CHECK(v[3] == std::vector<int>{-1, -1, -1, 0});
  BigMatrix m(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) m(i, j) = v[i][j];
  CHECK(rational_rank(m) == 4);
}

TEST_CASE("combinatorial invariants up to d = 6") {
  for (int d = 2; d <= 6; ++d) {
    std::map<Permutation, int> classOf;
    int nextId = 0;
    for (const auto& p : irreducible_permutations(d)) {
      auto s = singularity_data(p);
      auto h = h_subspace(p);
      CHECK(h.dim == d - s.nOrbits + 1);
      CHECK(h.dim % 2 == 0);
      int excess = 0;
      for (int nu : s.coneOrders) excess += nu - 1;
      CHECK(excess == 2 * s.genus - 2);
      if (!classOf.count(p)) {
        int id = nextId++;
        bool hasStandard = false;
        for (const auto& q : rauzy_class(p)) {
          CHECK(classOf.count(q) == 0);
          classOf[q] = id;
          hasStandard = hasStandard || is_standard(q);
        }
        CHECK(hasStandard);
      }
    }
  }
}
