#include <gtest/gtest.h>

#include <random>
#include <set>

#include "mdinv/presentation.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using mdinv::GroupHom;
using mdinv::Presentation;
using mdinv::Word;

namespace {

const std::vector<std::string> kNames = {"a", "b", "c"};

Word w(const std::string& text) { return mdinv::parse_word(text, kNames); }
std::string s(const Word& word) { return mdinv::to_string(word, kNames); }

}  // namespace

TEST(Word, ParseAndPrint) {
  EXPECT_EQ(s(w("a*b^-1*a^3")), "a*b^-1*a*a*a");
  EXPECT_EQ(s(w(" a * a^-1 ")), "1");
  EXPECT_EQ(s(w("1")), "1");
  EXPECT_EQ(s(w("")), "1");
  EXPECT_EQ(s(w("c^-2*b^0")), "c^-1*c^-1");
  EXPECT_THROW(w("d"), mdinv::ValidationError);
  EXPECT_THROW(w("a^x"), mdinv::ValidationError);
  EXPECT_THROW(w("a**b"), mdinv::ValidationError);
}

TEST(Word, FreeReductionAndInverse) {
  const Word x = w("a*b*c");
  EXPECT_TRUE((x * x.inverse()).empty());
  EXPECT_EQ(s(w("b^-1*a*b").cyclically_reduced()), "a");
  EXPECT_EQ(w("a*b*a^-1*b^-1").cyclic_key(), w("b^-1*a*b*a^-1").cyclic_key());
  EXPECT_EQ(w("a*b*a^-1*b^-1").cyclic_key(), w("b*a*b^-1*a^-1").cyclic_key());
  EXPECT_EQ(w("a^3*b^-2").exponent_sums(3), (mdinv::IntVector{3, -2, 0}));
  EXPECT_EQ(w("a").power(-3), w("a^-3"));
}

TEST(Word, RandomWordsRoundTrip) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const Word x = testgen::random_word(rng, 3, 8);
    EXPECT_EQ(w(s(x)), x);
    EXPECT_TRUE((x.inverse() * x).empty());
  }
}

TEST(Presentation, TextAndAbelianization) {
  const Presentation p(kNames, {w("a*b*a^-1*b^-1"), w("c^2")});
  EXPECT_EQ(mdinv::to_string(p), "< a, b, c | a*b*a^-1*b^-1, c*c >");
  EXPECT_EQ(mdinv::to_string(mdinv::abelianize(p)), "Z^2 + Z/2");
  EXPECT_EQ(mdinv::to_string(Presentation::free({"x"})), "< x | >");
  EXPECT_THROW(Presentation({"a"}, {w("b")}), mdinv::ValidationError);
}

TEST(Presentation, MappingTorus) {
  const Presentation p = mdinv::mapping_torus(1, GroupHom(1, {Word::generator(0, -1)}));
  EXPECT_EQ(mdinv::to_string(p), "< x1, t | t*x1*t^-1*x1 >");
  EXPECT_EQ(mdinv::to_string(mdinv::abelianize(p)), "Z + Z/2");
}

TEST(Tietze, EliminatesGenerators) {
  const Presentation p(kNames, {w("a*b^-1"), w("c*a*c^-1*a^-1")});
  EXPECT_EQ(mdinv::to_string(mdinv::tietze_simplify(p)), "< a, c | c*a*c^-1*a^-1 >");
  const Presentation q(kNames, {w("c*a*b")});
  EXPECT_EQ(mdinv::to_string(mdinv::tietze_simplify(q)), "< a, b | >");
  const Presentation trefoil({"x", "y"}, {mdinv::parse_word("x*y*x*y^-1*x^-1*y^-1", std::vector<std::string>{"x", "y"})});
  EXPECT_EQ(mdinv::tietze_simplify(trefoil), trefoil);
}

TEST(Tietze, TrackingIsConsistent) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 300; ++trial) {
    const Presentation p = testgen::random_presentation(rng);
    const auto r = mdinv::tietze_simplify_tracked(p);
    // Abelianization agrees with the oracle on the original relation matrix.
    const auto oracle_factors = oracle::invariant_factors(testgen::to_small(p.relation_matrix()));
    mdinv::AbelianGroup expected;
    expected.free_rank = p.generator_count() - (p.relators().empty() ? 0 : oracle::rational_rank(testgen::to_small(p.relation_matrix())));
    if (!p.relators().empty())
      for (long long d : oracle_factors)
        if (d > 1) expected.torsion.push_back(d);
    EXPECT_EQ(mdinv::abelianize(r.presentation), expected) << mdinv::to_string(p);

    // Kept generators map to themselves.
    for (std::size_t k = 0; k < r.kept.size(); ++k) EXPECT_EQ(r.substitution.image(r.kept[k]), Word::generator(k));
    // Every original relator becomes trivial or one of the final relators.
    std::set<std::vector<mdinv::Letter>> keys;
    for (const Word& rel : r.presentation.relators()) keys.insert(rel.cyclically_reduced().cyclic_key());
    for (const Word& rel : p.relators()) {
      const Word image = r.substitution.apply(rel).cyclically_reduced();
      if (!image.empty()) {
        EXPECT_TRUE(keys.count(image.cyclic_key())) << mdinv::to_string(p);
      }
    }
    EXPECT_TRUE(mdinv::preserves_relators_abelian(r.substitution, p, r.presentation));
    // Deterministic.
    EXPECT_EQ(mdinv::tietze_simplify(p), r.presentation);
  }
}

TEST(GraphOfGroups, TwoToriGluedAlongBoundary) {
  const Presentation torus({"c", "d"}, {mdinv::parse_word("c*d*c^-1*d^-1", std::vector<std::string>{"c", "d"})});
  const Presentation a = Presentation({"c@n0", "d@n0"}, torus.relators());
  const Presentation b = Presentation({"c@n1", "d@n1"}, torus.relators());
  mdinv::GraphOfGroupsLayout layout;
  const Presentation g = mdinv::graph_of_groups(
      {a, b}, {{0, 1, Word::generator(0), Word::generator(1), Word::generator(1), Word::generator(0), "s@e0"}}, &layout);
  EXPECT_EQ(g.generator_count(), 4u);
  EXPECT_TRUE(layout.tree_edge[0]);
  EXPECT_EQ(mdinv::to_string(mdinv::abelianize(g)), "Z^2");
}

TEST(GraphOfGroups, LoopAddsStableLetter) {
  const Presentation circle({"c"}, {});
  mdinv::GraphOfGroupsLayout layout;
  const Presentation g =
      mdinv::graph_of_groups({circle}, {{0, 0, Word::generator(0), Word(), Word::generator(0), Word(), "s"}}, &layout);
  EXPECT_FALSE(layout.tree_edge[0]);
  EXPECT_EQ(mdinv::to_string(g), "< c, s | s*c*s^-1*c^-1 >");
}

TEST(GroupHom, ComposeAndAbelianMatrix) {
  const GroupHom f(2, {w("a*b"), w("b^-1")});
  const GroupHom id = GroupHom::identity(2);
  EXPECT_EQ(mdinv::compose(f, id), f);
  EXPECT_EQ(mdinv::compose(f, f).image(0), w("a"));
  EXPECT_EQ(f.abelian_matrix(), mdinv::IntMatrix::from_rows({{1, 0}, {1, -1}}));
  EXPECT_THROW(GroupHom(1, {w("b")}), mdinv::ValidationError);
}
