#pragma once

// Random inputs for property tests. Everything is driven by an explicit
// seed so failures reproduce.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mdinv/io.hpp"
#include "mdinv/rated_graph.hpp"
#include "oracles.hpp"

namespace testgen {

using mdinv::Word;

inline std::size_t pick(std::mt19937_64& rng, std::size_t n) { return static_cast<std::size_t>(rng() % n); }

inline oracle::Small random_small_matrix(std::mt19937_64& rng, int max_dim, int bound) {
  const int r = 1 + static_cast<int>(pick(rng, max_dim));
  const int c = 1 + static_cast<int>(pick(rng, max_dim));
  oracle::Small m(r, std::vector<long long>(c));
  for (auto& row : m)
    for (auto& x : row) x = static_cast<long long>(pick(rng, 2 * bound + 1)) - bound;
  return m;
}

inline mdinv::IntMatrix to_matrix(const oracle::Small& m) {
  const std::size_t r = m.size(), c = r ? m[0].size() : 0;
  mdinv::IntMatrix out(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) out(i, j) = m[i][j];
  return out;
}

inline oracle::Small to_small(const mdinv::IntMatrix& m) {
  oracle::Small out(m.rows(), std::vector<long long>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out[i][j] = static_cast<long long>(m(i, j));
  return out;
}

inline Word random_word(std::mt19937_64& rng, std::size_t generators, std::size_t max_length) {
  std::vector<mdinv::Letter> letters;
  const std::size_t len = pick(rng, max_length + 1);
  for (std::size_t i = 0; i < len && generators > 0; ++i)
    letters.push_back({pick(rng, generators), pick(rng, 2) ? 1 : -1});
  return Word(letters);
}

inline mdinv::Presentation random_presentation(std::mt19937_64& rng) {
  const std::size_t g = 1 + pick(rng, 4);
  std::vector<std::string> names;
  for (std::size_t i = 0; i < g; ++i) names.push_back(std::string(1, static_cast<char>('a' + i)));
  std::vector<Word> relators;
  const std::size_t k = pick(rng, 5);
  for (std::size_t i = 0; i < k; ++i) relators.push_back(random_word(rng, g, 6));
  return mdinv::Presentation(names, relators);
}

/// Random valid complex: d1 is the incidence matrix of a random graph and
/// d2 combines random cycles, so d1 d2 = 0 by construction.
inline mdinv::ChainComplex random_complex(std::mt19937_64& rng) {
  const std::size_t v = 1 + pick(rng, 4);
  const std::size_t e = pick(rng, 6);
  mdinv::IntMatrix d1(v, e);
  for (std::size_t j = 0; j < e; ++j) {
    const std::size_t a = pick(rng, v), b = pick(rng, v);
    d1(a, j) += 1;
    d1(b, j) -= 1;
  }
  const mdinv::SmithForm s = mdinv::smith_normal_form(d1);
  const mdinv::IntMatrix kernel = s.v.column_block(s.rank, e);
  const std::size_t f = pick(rng, 4);
  mdinv::IntMatrix mix(kernel.cols(), f);
  for (std::size_t i = 0; i < mix.rows(); ++i)
    for (std::size_t j = 0; j < f; ++j) mix(i, j) = static_cast<long long>(pick(rng, 7)) - 3;
  return mdinv::ChainComplex({v, e, f}, {d1, kernel * mix});
}

/// Random rated graph: at most 5 nodes, fiber rank at most 3, rates drawn
/// from {1, 3/2, 2, 3}. Monodromies are permutations twisted by inner
/// automorphisms, so every fiber-cycle product is a valid lambda.
inline mdinv::RatedGraph random_rated_graph(std::mt19937_64& rng) {
  using namespace mdinv;
  const std::vector<Rate> rates = {Rate(1), Rate(Rational(3, 2)), Rate(2), Rate(3)};
  const std::size_t n = 1 + pick(rng, 5);
  std::vector<std::size_t> ids(n);
  for (std::size_t i = 0; i < n; ++i) ids[i] = 10 * i + pick(rng, 10);
  std::shuffle(ids.begin(), ids.end(), rng);

  struct Boundary {
    Word mu;
    Word lambda;
  };
  std::vector<NodePiece> nodes;
  std::vector<std::vector<Boundary>> boundaries(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (pick(rng, 3) == 0) {
      if (pick(rng, 2)) {
        Presentation p({"c", "d"}, {});
        p = Presentation({"c", "d"}, {p.parse("c*d*c^-1*d^-1")});
        boundaries[i].push_back({p.parse("c"), p.parse("d")});
        nodes.push_back(NodePiece::conical(ids[i], p));
      } else {
        const std::size_t k = 1 + pick(rng, 3);
        std::vector<std::string> names;
        for (std::size_t j = 0; j < k; ++j) names.push_back("a" + std::to_string(j + 1));
        for (std::size_t j = 0; j < k; ++j)
          boundaries[i].push_back({Word::generator(j), Word::generator(j, static_cast<int>(pick(rng, 3)))});
        nodes.push_back(NodePiece::conical(ids[i], Presentation::free(names)));
      }
    } else {
      const std::size_t r = pick(rng, 4);
      std::vector<std::size_t> sigma(r);
      for (std::size_t j = 0; j < r; ++j) sigma[j] = j;
      std::shuffle(sigma.begin(), sigma.end(), rng);
      std::vector<Word> mono;
      for (std::size_t j = 0; j < r; ++j) {
        const Word w = random_word(rng, r, 2);
        mono.push_back(w * Word::generator(sigma[j]) * w.inverse());
      }
      const Word t = Word::generator(r);
      boundaries[i].push_back({t, Word()});
      std::vector<bool> seen(r, false);
      for (std::size_t j = 0; j < r; ++j) {
        if (seen[j]) continue;
        Word cycle;
        for (std::size_t k = j; !seen[k]; k = sigma[k]) {
          seen[k] = true;
          cycle *= Word::generator(k);
        }
        boundaries[i].push_back({t * random_word(rng, r, 2), cycle});
      }
      nodes.push_back(NodePiece::fibered(ids[i], rates[pick(rng, rates.size())], r, mono));
    }
  }

  std::vector<EdgePiece> edges;
  auto connect = [&](std::size_t a, std::size_t b) {
    EdgePiece e;
    e.id = edges.size() * 3 + 1;
    const Boundary& ba = boundaries[a][pick(rng, boundaries[a].size())];
    const Boundary& bb = boundaries[b][pick(rng, boundaries[b].size())];
    e.ends[0].node = ids[a];
    e.ends[0].mu = ba.mu;
    e.ends[0].lambda = ba.lambda;
    e.ends[1].node = ids[b];
    e.ends[1].mu = bb.mu;
    e.ends[1].lambda = bb.lambda;
    edges.push_back(std::move(e));
  };
  for (std::size_t i = 1; i < n; ++i) connect(pick(rng, i), i);
  const std::size_t extra = pick(rng, 3);
  for (std::size_t k = 0; k < extra; ++k) connect(pick(rng, n), pick(rng, n));
  std::shuffle(edges.begin(), edges.end(), rng);
  return RatedGraph(nodes, edges);
}

inline std::string fixture_path(const std::string& name) { return std::string(MDINV_FIXTURE_DIR) + "/" + name; }

inline mdinv::InputDocument load_fixture(const std::string& name) {
  std::ifstream in(fixture_path(name));
  if (!in) throw std::runtime_error("missing fixture " + name);
  return mdinv::parse_input(in);
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Rated-graph fixtures shipped in the repository.
inline const std::vector<std::string>& graph_fixtures() {
  static const std::vector<std::string> names = {"tn1.json",         "conical_torus.json", "wedge3_link.json",
                                                 "klein.json",       "three_rates.json",   "cycle.json",
                                                 "multiplier.json"};
  return names;
}

}  // namespace testgen
