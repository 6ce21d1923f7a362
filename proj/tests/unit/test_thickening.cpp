#include <gtest/gtest.h>

#include <random>

#include "mdinv/io.hpp"
#include "mdinv/thickening.hpp"
#include "support/generators.hpp"
#include "support/thickening_probe.hpp"

using mdinv::PieceKind;
using mdinv::Rational;
using mdinv::RVector;
using mdinv::SimplicialComplex;

namespace {

RVector r(std::initializer_list<Rational> xs) { return RVector(xs); }

SimplicialComplex standard_simplex(std::size_t k) {
  std::vector<RVector> vertices;
  for (std::size_t i = 0; i <= k; ++i) {
    RVector v(k);
    if (i > 0) v[i - 1] = 1;
    vertices.push_back(std::move(v));
  }
  std::vector<std::size_t> all(k + 1);
  for (std::size_t i = 0; i <= k; ++i) all[i] = i;
  return SimplicialComplex(std::move(vertices), {all});
}

// Three triangles around the origin: a nonconvex planar fan.
SimplicialComplex fan() {
  return SimplicialComplex({r({0, 0}), r({2, 0}), r({1, 2}), r({-1, 2}), r({-2, 0})}, {{0, 1, 2}, {0, 2, 3}, {0, 3, 4}});
}

std::vector<SimplicialComplex> test_complexes() {
  std::vector<SimplicialComplex> out;
  for (const char* name : {"thick_interval.json", "thick_triangle.json", "thick_two_segments.json", "thick_tetra_pair.json"})
    out.push_back(testgen::load_fixture(name).thickening->complex);
  out.push_back(fan());
  out.push_back(standard_simplex(3));
  // A segment in the plane: ambient dimension above k.
  out.push_back(SimplicialComplex({r({0, 0}), r({3, 1})}, {{0, 1}}));
  return out;
}

}  // namespace

TEST(Thickening, RejectsBadComplexes) {
  EXPECT_THROW(SimplicialComplex({r({0}), r({1}), r({2})}, {{0, 1}, {2}}), mdinv::ValidationError);
  EXPECT_THROW(SimplicialComplex({r({0, 0}), r({1, 1}), r({2, 2})}, {{0, 1, 2}}), mdinv::ValidationError);
  EXPECT_THROW(SimplicialComplex({r({0}), r({1})}, {{0, 1}, {1, 0}}), mdinv::ValidationError);
  EXPECT_THROW(SimplicialComplex({r({0}), r({1})}, {{0, 0}}), mdinv::ValidationError);
  EXPECT_THROW(SimplicialComplex({r({0}), r({1})}, {{0, 2}}), mdinv::ValidationError);
}

TEST(Thickening, IntervalPieces) {
  const SimplicialComplex k = standard_simplex(1);
  const auto pieces = mdinv::decompose(k);
  ASSERT_EQ(pieces.size(), 3u);
  EXPECT_EQ(pieces[0].kind, PieceKind::Core);
  EXPECT_EQ(pieces[0].vertices, (std::vector<RVector>{r({Rational(1, 4)}), r({Rational(3, 4)})}));
  EXPECT_EQ(pieces[1].face, (std::vector<std::size_t>{0}));
  EXPECT_EQ(pieces[1].relative_volume, Rational(1, 4));
  EXPECT_EQ(pieces[0].volume, Rational(1, 2));

  const auto loc = mdinv::locate(k, r({Rational(1, 8)}));
  EXPECT_EQ(loc.kind, PieceKind::Collar);
  EXPECT_EQ(loc.piece, 1u);
  ASSERT_TRUE(loc.coords);
  EXPECT_EQ(loc.coords->u, r({Rational(1, 2)}));
  // The shared boundary point belongs to the core.
  EXPECT_EQ(mdinv::locate(k, r({Rational(1, 4)})).kind, PieceKind::Core);
  EXPECT_THROW(mdinv::locate(k, r({Rational(-1, 8)})), mdinv::DomainError);
  EXPECT_THROW(mdinv::locate(k, r({1, 2})), mdinv::ValidationError);
}

TEST(Thickening, PieceCountsAndVolumes) {
  for (std::size_t dim = 0; dim <= 3; ++dim) {
    const SimplicialComplex k = dim == 0 ? SimplicialComplex({r({})}, {{0}}) : standard_simplex(dim);
    const auto pieces = mdinv::decompose(k);
    EXPECT_EQ(pieces.size(), (std::size_t{1} << (dim + 1)) - 1) << "k = " << dim;
    Rational rel = 0;
    for (const auto& p : pieces) rel += p.relative_volume;
    EXPECT_EQ(rel, 1);
  }
  for (const SimplicialComplex& k : test_complexes()) {
    const auto pieces = mdinv::decompose(k);
    const std::size_t per = (std::size_t{1} << (k.dimension() + 1)) - 1;
    ASSERT_EQ(pieces.size(), per * k.simplices().size());
    for (std::size_t s = 0; s < k.simplices().size(); ++s) {
      Rational rel = 0;
      std::optional<Rational> vol = k.volume(s) ? std::optional<Rational>(0) : std::nullopt;
      for (std::size_t i = 0; i < per; ++i) {
        const auto& p = pieces[s * per + i];
        EXPECT_EQ(p.simplex, s);
        EXPECT_GT(p.relative_volume, 0);
        rel += p.relative_volume;
        if (vol) *vol += *p.volume;
      }
      EXPECT_EQ(rel, 1);
      EXPECT_EQ(vol, k.volume(s));
    }
  }
}

TEST(Thickening, TriangulationCellsLocateInTheirPiece) {
  for (const SimplicialComplex& k : test_complexes()) {
    const auto pieces = mdinv::decompose(k);
    for (std::size_t i = 0; i < pieces.size(); ++i) {
      for (const auto& cell : pieces[i].triangulation) {
        RVector center(k.ambient_dimension());
        for (std::size_t v : cell)
          for (std::size_t c = 0; c < center.size(); ++c)
            center[c] += pieces[i].vertices[v][c] / static_cast<long long>(cell.size());
        const auto loc = mdinv::locate(k, center);
        // Interior points of shared simplices may tie to a lower simplex.
        if (loc.simplex == pieces[i].simplex) {
          EXPECT_EQ(loc.piece, i);
        }
        EXPECT_EQ(pieces[loc.piece].kind, pieces[i].kind);
        EXPECT_EQ(pieces[loc.piece].face.size(), pieces[i].face.size());
      }
    }
  }
}

TEST(Thickening, CoverageAndRoundTrip) {
  std::mt19937_64 rng(4242);
  const auto complexes = test_complexes();
  for (int trial = 0; trial < 10000; ++trial) {
    const SimplicialComplex& k = complexes[static_cast<std::size_t>(trial) % complexes.size()];
    const RVector x = testgen::random_point(k, rng);
    const auto loc = mdinv::locate(k, x);
    if (loc.kind == PieceKind::Collar) {
      ASSERT_TRUE(loc.coords);
      for (const Rational& u : loc.coords->u) {
        EXPECT_GE(u, 0);
        EXPECT_LE(u, 1);
      }
      Rational sum = 0;
      for (const Rational& p : loc.coords->projection) sum += p;
      EXPECT_EQ(sum, 1);
      EXPECT_EQ(mdinv::collar_point(k, loc.simplex, loc.face, loc.coords->projection, loc.coords->u), x);
    } else {
      for (const Rational& l : loc.barycentric) EXPECT_GE(l, Rational(1, 2 * static_cast<long long>(k.dimension() + 1)));
    }
  }
}

TEST(Thickening, ExtensionReproducesCoreInputs) {
  std::mt19937_64 rng(8);
  for (const SimplicialComplex& k : test_complexes()) {
    std::vector<std::vector<RVector>> values;
    for (const auto& simplex : k.simplices()) {
      std::vector<RVector> v;
      for (std::size_t i = 0; i < simplex.size(); ++i)
        v.push_back(r({Rational(static_cast<long long>(rng() % 21) - 10, 3), Rational(static_cast<long long>(rng() % 7))}));
      values.push_back(std::move(v));
    }
    const mdinv::VertexSamples g(values);
    g.check(k);
    const std::size_t n = k.dimension() + 1;
    for (int trial = 0; trial < 200; ++trial) {
      const std::size_t s = rng() % k.simplices().size();
      const RVector y = testgen::random_weights(rng, n, 50);
      RVector core(n);
      for (std::size_t i = 0; i < n; ++i) core[i] = (y[i] + Rational(1, static_cast<long long>(n))) / 2;
      const auto ext = mdinv::extend(k, g, k.point(s, core));
      ASSERT_EQ(ext.location.kind, PieceKind::Core);
      ASSERT_EQ(ext.location.simplex, s);
      EXPECT_EQ(ext.value, g(s, y));
    }
  }
}

TEST(Thickening, WeightsAreConvex) {
  std::mt19937_64 rng(99);
  for (const SimplicialComplex& k : test_complexes()) {
    std::vector<RVector> per_vertex;
    for (std::size_t v = 0; v < k.vertices().size(); ++v) per_vertex.push_back(r({Rational(static_cast<long long>(v * v))}));
    const auto g = testgen::global_samples(k, per_vertex);
    for (int trial = 0; trial < 300; ++trial) {
      const auto ext = mdinv::extend(k, g, testgen::random_point(k, rng));
      ASSERT_FALSE(ext.terms.empty());
      Rational total = 0;
      for (const auto& t : ext.terms) {
        EXPECT_GE(t.weight, 0);
        total += t.weight;
      }
      EXPECT_EQ(total, 1);
    }
  }
}

TEST(Thickening, AgreeingInputsGiveContinuousExtension) {
  std::mt19937_64 rng(2718);
  const Rational eps(1, 1000000000);
  std::size_t pairs = 0;
  double worst = 0;
  const auto complexes = test_complexes();
  for (int trial = 0; pairs < 2000; ++trial) {
    const SimplicialComplex& k = complexes[static_cast<std::size_t>(trial) % complexes.size()];
    std::vector<RVector> per_vertex;
    for (std::size_t v = 0; v < k.vertices().size(); ++v)
      per_vertex.push_back(r({Rational(static_cast<long long>(rng() % 9)), Rational(static_cast<long long>(rng() % 5), 2)}));
    const auto g = testgen::global_samples(k, per_vertex);
    const auto pair = testgen::boundary_pair(k, rng, eps);
    try {
      worst = std::max(worst, testgen::max_abs_difference(mdinv::extend(k, g, pair.a).value, mdinv::extend(k, g, pair.b).value));
      ++pairs;
    } catch (const mdinv::DomainError&) {
      // The perturbation left |K|; not a straddling pair.
    }
  }
  EXPECT_LE(worst, 1e-6);
}

TEST(Thickening, SharedVertexAveragesDisagreeingInputs) {
  const auto doc = testgen::load_fixture("thick_two_segments.json");
  const auto& k = doc.thickening->complex;
  const auto ext = mdinv::extend(k, *doc.thickening->samples, k.vertices()[1]);
  EXPECT_EQ(ext.location.kind, PieceKind::Collar);
  ASSERT_EQ(ext.terms.size(), 2u);
  EXPECT_EQ(ext.terms[0].weight, Rational(1, 2));
  EXPECT_EQ(ext.value, r({4}));
}

TEST(Thickening, ShrinkIsHalfwayToTheBarycenter) {
  const SimplicialComplex k = standard_simplex(2);
  EXPECT_EQ(mdinv::shrink(k, 1, {0, 1}), r({Rational(3, 4), 0}));
  EXPECT_THROW(mdinv::shrink(k, 2, {0, 1}), mdinv::ValidationError);
}
