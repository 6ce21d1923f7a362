#include <gtest/gtest.h>

#include <random>

#include "mdinv/chain_complex.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using mdinv::AbelianGroup;
using mdinv::ChainComplex;
using mdinv::ChainMap;
using mdinv::IntMatrix;

namespace {

ChainComplex projective_plane() {
  // One vertex, one edge a, one face with boundary a^2.
  return ChainComplex({1, 1, 1}, {IntMatrix(1, 1), IntMatrix::from_rows({{2}})});
}

// Oracle group: free rank from rational ranks, torsion from the minor-gcd
// invariant factors of the incoming boundary.
AbelianGroup oracle_homology(const ChainComplex& c, long n) {
  const std::size_t in_rank = oracle::rational_rank(testgen::to_small(c.boundary(n + 1)));
  const std::size_t out_rank = c.rank(n) == 0 ? 0 : oracle::rational_rank(testgen::to_small(c.boundary(n)));
  AbelianGroup g;
  g.free_rank = c.rank(n) - out_rank - in_rank;
  if (c.rank(n) > 0 && c.rank(n + 1) > 0)
    for (long long d : oracle::invariant_factors(testgen::to_small(c.boundary(n + 1))))
      if (d > 1) g.torsion.push_back(d);
  return g;
}

}  // namespace

TEST(ChainComplex, ShapeValidation) {
  EXPECT_THROW(ChainComplex({1, 2}, {IntMatrix(2, 1)}), mdinv::ValidationError);
  EXPECT_THROW(ChainComplex({1, 2}, {}), mdinv::ValidationError);
}

TEST(ChainComplex, SmallSpaces) {
  EXPECT_EQ(mdinv::to_string(mdinv::homology(ChainComplex::circle(), 1)), "Z");
  EXPECT_EQ(mdinv::to_string(mdinv::homology(ChainComplex::torus(), 1)), "Z^2");
  EXPECT_EQ(mdinv::to_string(mdinv::homology(ChainComplex::torus(), 2)), "Z");
  EXPECT_EQ(mdinv::to_string(mdinv::homology(projective_plane(), 1)), "Z/2");
  EXPECT_EQ(mdinv::to_string(mdinv::homology(projective_plane(), 2)), "0");
  EXPECT_EQ(mdinv::to_string(mdinv::homology(projective_plane(), 5)), "0");
  EXPECT_EQ(mdinv::euler_characteristic(ChainComplex::torus()), 0);
  EXPECT_EQ(mdinv::euler_characteristic(projective_plane()), 1);
}

TEST(ChainComplex, DetectsBadComposition) {
  const ChainComplex bad({1, 1, 1}, {IntMatrix::from_rows({{1}}), IntMatrix::from_rows({{1}})});
  const auto defects = mdinv::verify_complex(bad);
  ASSERT_EQ(defects.size(), 1u);
  EXPECT_EQ(defects[0].degree, 1);
  EXPECT_THROW(mdinv::homology(bad, 1), mdinv::ValidationError);
}

TEST(ChainComplex, RandomComplexesMatchOracle) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    const ChainComplex c = testgen::random_complex(rng);
    ASSERT_TRUE(mdinv::verify_complex(c).empty());
    long alternating = 0;
    for (long n = 0; n <= c.top_degree(); ++n) {
      const AbelianGroup h = mdinv::homology(c, n);
      EXPECT_EQ(h, oracle_homology(c, n)) << "degree " << n;
      alternating += (n % 2 ? -1 : 1) * static_cast<long>(h.free_rank);
    }
    EXPECT_EQ(alternating, mdinv::euler_characteristic(c));
  }
}

TEST(ChainComplex, BasisCoordinatesAreUnitVectors) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    const ChainComplex c = testgen::random_complex(rng);
    for (long n = 0; n <= c.top_degree(); ++n) {
      const mdinv::HomologyBasis basis(c, n);
      const auto& gens = basis.generators();
      for (std::size_t j = 0; j < gens.size(); ++j) {
        EXPECT_TRUE(c.boundary(n).apply(gens[j]) == mdinv::IntVector(c.rank(n - 1)));
        const auto coords = basis.coordinates(gens[j]);
        for (std::size_t i = 0; i < coords.size(); ++i) EXPECT_EQ(coords[i], i == j ? 1 : 0);
      }
      // Boundaries have zero class.
      for (std::size_t col = 0; col < c.rank(n + 1); ++col) {
        for (const auto& x : basis.coordinates(c.boundary(n + 1).column(col))) EXPECT_EQ(x, 0);
      }
    }
  }
}

TEST(ChainMap, DegreeMapOnCircle) {
  const ChainMap triple(ChainComplex::circle(), ChainComplex::circle(),
                        {IntMatrix::identity(1), IntMatrix::from_rows({{3}})});
  EXPECT_EQ(mdinv::induced_map(triple, 1), IntMatrix::from_rows({{3}}));
  EXPECT_EQ(mdinv::induced_map(compose(triple, triple), 1), IntMatrix::from_rows({{9}}));
  EXPECT_EQ(mdinv::induced_map(ChainMap::identity(projective_plane()), 1), IntMatrix::from_rows({{1}}));
}

TEST(ChainMap, RejectsNonChainMaps) {
  // RP2 -> circle cannot send a to a generator: the face has nowhere to go.
  EXPECT_THROW(ChainMap(projective_plane(), ChainComplex::circle(), {IntMatrix::identity(1), IntMatrix::identity(1)}),
               mdinv::ValidationError);
  EXPECT_THROW(ChainMap(ChainComplex::circle(), ChainComplex::circle(), {IntMatrix::identity(2)}),
               mdinv::ValidationError);
}

TEST(ChainMap, TorsionCoordinatesAreReduced) {
  const ChainMap triple(projective_plane(), projective_plane(),
                        {IntMatrix::identity(1), IntMatrix::from_rows({{3}}), IntMatrix::from_rows({{3}})});
  EXPECT_EQ(mdinv::induced_map(triple, 1), IntMatrix::from_rows({{1}}));
}

TEST(AbelianGroup, Text) {
  EXPECT_EQ(mdinv::to_string(AbelianGroup{}), "0");
  EXPECT_EQ(mdinv::to_string(AbelianGroup{2, {2, 6}}), "Z^2 + Z/2 + Z/6");
}
