#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "mdinv/chain_complex.hpp"
#include "mdinv/errors.hpp"
#include "mdinv/presentation.hpp"
#include "mdinv/rate.hpp"

namespace mdinv {

enum class NodeKind { Conical, Fibered };

inline std::string to_string(NodeKind k) { return k == NodeKind::Conical ? "conical" : "fibered"; }

/// One piece of the rated decomposition.
///
/// Fibered pieces are mapping tori of a free group of rank `fiber_rank`
/// under `monodromy`; their presentation and cellular model are derived.
/// Conical pieces carry a user presentation and optionally a cellular model;
/// without one the presentation complex is used.
struct NodePiece {
  std::size_t id = 0;
  NodeKind kind = NodeKind::Conical;
  Rate rate;
  std::size_t fiber_rank = 0;
  std::vector<Word> monodromy;
  Presentation presentation;
  std::optional<ChainComplex> complex;

  static NodePiece conical(std::size_t id, Presentation p, std::optional<ChainComplex> c = std::nullopt) {
    NodePiece n;
    n.id = id;
    n.kind = NodeKind::Conical;
    n.rate = Rate(1);
    n.presentation = std::move(p);
    n.complex = std::move(c);
    return n;
  }

  static NodePiece fibered(std::size_t id, Rate rate, std::size_t fiber_rank, std::vector<Word> monodromy) {
    NodePiece n;
    n.id = id;
    n.kind = NodeKind::Fibered;
    n.rate = std::move(rate);
    n.fiber_rank = fiber_rank;
    n.monodromy = std::move(monodromy);
    return n;
  }

  /// Presentation with local generator names (x1..xr, t for fibered pieces).
  Presentation local_presentation() const {
    if (kind == NodeKind::Conical) return presentation;
    return mapping_torus(fiber_rank, GroupHom(fiber_rank, monodromy));
  }

  /// Cellular model. Fibered: one vertex, edges x1..xr, t, one 2-cell per
  /// mapping-torus relation. Conical default: the presentation complex.
  ChainComplex local_complex() const {
    if (complex) return *complex;
    const Presentation p = local_presentation();
    return ChainComplex({1, p.generator_count(), p.relators().size()},
                        {IntMatrix(1, p.generator_count()), p.relation_matrix()});
  }

  /// True when 1-cells are the generators and 2-cells the relators.
  bool has_presentation_complex() const { return !complex.has_value(); }

  /// Index of the base generator t of a fibered piece.
  std::size_t base_generator() const { return fiber_rank; }

  /// Fibration degree: exponent sum of t.
  Integer delta(const Word& w) const {
    if (kind != NodeKind::Fibered) throw DomainError("fibration degree on a conical piece");
    return w.exponent_sums(fiber_rank + 1)[fiber_rank];
  }

  std::string suffix() const { return "@n" + std::to_string(id); }
};

/// One side of a torus gluing: images of the torus generators mu and
/// lambda as words in the node presentation and as cellular chains.
/// Missing chains are filled in by `RatedGraph` validation.
struct EdgeEnd {
  std::size_t node = 0;  // node id
  Word mu;
  Word lambda;
  std::optional<IntVector> mu_chain;
  std::optional<IntVector> lambda_chain;
  std::optional<IntVector> face_chain;
  std::size_t vertex = 0;
};

struct EdgePiece {
  std::size_t id = 0;
  std::array<EdgeEnd, 2> ends;
};

/// Validated rated decomposition graph. Nodes and edges are stored sorted
/// by id; end 0 of every edge is the end with the smaller node id.
class RatedGraph {
 public:
  RatedGraph(std::vector<NodePiece> nodes, std::vector<EdgePiece> edges)
      : nodes_(std::move(nodes)), edges_(std::move(edges)) {
    validate();
  }

  const std::vector<NodePiece>& nodes() const noexcept { return nodes_; }
  const std::vector<EdgePiece>& edges() const noexcept { return edges_; }

  std::size_t node_index(std::size_t id) const {
    const auto it = index_.find(id);
    if (it == index_.end()) throw ValidationError("no node with id " + std::to_string(id));
    return it->second;
  }
  const NodePiece& node(std::size_t id) const { return nodes_[node_index(id)]; }

  Rate max_rate() const {
    Rate m(1);
    for (const NodePiece& n : nodes_) m = std::max(m, n.rate);
    return m;
  }

 private:
  void validate();
  void resolve_end(EdgeEnd& end, const std::string& path) const;

  std::vector<NodePiece> nodes_;
  std::vector<EdgePiece> edges_;
  std::map<std::size_t, std::size_t> index_;
};

/// A connected set of collapsed fibered nodes with their base-circle
/// multipliers: node A's t maps to L^{multiplier}. Multipliers are positive
/// with gcd 1.
struct CollapseComponent {
  std::vector<std::size_t> members;  // node indices, increasing
  std::vector<Integer> multipliers;  // aligned with members
  std::vector<std::size_t> internal_edges;  // edge indices
};

namespace detail {

inline bool is_cycle(const ChainComplex& c, long degree, const IntVector& chain) {
  for (const Integer& x : c.boundary(degree).apply(chain))
    if (x != 0) return false;
  return true;
}

inline Integer integer_lcm(const Integer& a, const Integer& b) { return a / gcd(a, b) * b; }

}  // namespace detail

/// Components of the subgraph spanned by nodes with rate > b, with
/// multipliers solving delta_A(mu) m_A = delta_B(mu) m_B on internal edges.
/// Throws ValidationError when no positive solution exists. Every fibered
/// end has delta(mu) != 0, so each component has a one-dimensional solution
/// space.
inline std::vector<CollapseComponent> collapse_components(const RatedGraph& g, const Rate& b) {
  const auto& nodes = g.nodes();
  const auto& edges = g.edges();
  std::vector<bool> collapsed(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) collapsed[i] = nodes[i].rate > b;

  std::vector<std::optional<std::size_t>> component(nodes.size());
  std::vector<CollapseComponent> out;
  for (std::size_t start = 0; start < nodes.size(); ++start) {
    if (!collapsed[start] || component[start]) continue;
    const std::size_t c = out.size();
    out.emplace_back();
    std::map<std::size_t, Rational> mult{{start, Rational(1)}};
    std::vector<std::size_t> stack{start};
    component[start] = c;
    while (!stack.empty()) {
      const std::size_t u = stack.back();
      stack.pop_back();
      for (std::size_t e = 0; e < edges.size(); ++e) {
        const std::size_t a = g.node_index(edges[e].ends[0].node);
        const std::size_t bb = g.node_index(edges[e].ends[1].node);
        if (a != u && bb != u) continue;
        if (!collapsed[a] || !collapsed[bb]) continue;
        const Integer da = nodes[a].delta(edges[e].ends[0].mu);
        const Integer db = nodes[bb].delta(edges[e].ends[1].mu);
        const std::string where = "edge " + std::to_string(edges[e].id);
        for (auto [from, to, dfrom, dto] : {std::tuple{a, bb, da, db}, std::tuple{bb, a, db, da}}) {
          if (from != u) continue;
          const Rational want = mult.at(u) * Rational(dfrom) / Rational(dto);
          if (want <= 0)
            throw ValidationError(where + ": base degrees of mu have opposite signs");
          const auto it = mult.find(to);
          if (it == mult.end()) {
            mult.emplace(to, want);
          } else if (it->second != want) {
            throw ValidationError(where + ": base degrees of mu are inconsistent around a cycle");
          }
        }
        for (std::size_t v : {a, bb}) {
          if (!component[v]) {
            component[v] = c;
            stack.push_back(v);
          }
        }
      }
    }
    Integer denominators = 1;
    for (const auto& [v, m] : mult)
      denominators = detail::integer_lcm(denominators, boost::multiprecision::denominator(m));
    Integer common = 0;
    std::vector<Integer> scaled;
    for (const auto& [v, m] : mult) {
      scaled.push_back(boost::multiprecision::numerator(m) * (denominators / boost::multiprecision::denominator(m)));
      common = gcd(common, scaled.back());
    }
    std::size_t k = 0;
    for (const auto& [v, m] : mult) {
      out[c].members.push_back(v);
      out[c].multipliers.push_back(scaled[k++] / common);
    }
  }
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const std::size_t a = g.node_index(edges[e].ends[0].node);
    const std::size_t bb = g.node_index(edges[e].ends[1].node);
    if (collapsed[a] && collapsed[bb]) out[*component[a]].internal_edges.push_back(e);
  }
  return out;
}

inline void RatedGraph::resolve_end(EdgeEnd& end, const std::string& path) const {
  const NodePiece& n = node(end.node);
  const Presentation p = n.local_presentation();
  const ChainComplex c = n.local_complex();
  auto fail = [&path](const std::string& field, const std::string& msg) {
    throw InputError(path + field, msg);
  };
  if (end.mu.max_generator_plus_one() > p.generator_count()) fail(".mu", "generator out of range");
  if (end.lambda.max_generator_plus_one() > p.generator_count()) fail(".lambda", "generator out of range");
  if (n.kind == NodeKind::Fibered && n.delta(end.lambda) != 0)
    fail(".lambda", "lambda must lie in the fiber (exponent sum of t must be 0)");
  if (n.kind == NodeKind::Fibered && n.delta(end.mu) == 0)
    fail(".mu", "mu must cover the base circle (exponent sum of t must be nonzero)");
  if (end.vertex >= c.rank(0)) fail(".vertex", "vertex index out of range");

  const bool words_are_cells = n.has_presentation_complex();
  for (auto [chain, word, field] : {std::tuple{&end.mu_chain, &end.mu, ".mu_chain"},
                                    std::tuple{&end.lambda_chain, &end.lambda, ".lambda_chain"}}) {
    if (!*chain) {
      if (!words_are_cells) fail(field, "required when the node has an explicit complex");
      *chain = word->exponent_sums(p.generator_count());
    }
    if ((*chain)->size() != c.rank(1)) fail(field, "length must equal the number of 1-cells");
    if (!detail::is_cycle(c, 1, **chain)) fail(field, "chain is not a cycle");
    if (words_are_cells) {
      IntVector diff = **chain;
      const IntVector ab = word->exponent_sums(p.generator_count());
      for (std::size_t i = 0; i < diff.size(); ++i) diff[i] -= ab[i];
      if (!in_column_lattice(c.boundary(2), diff))
        fail(field, "chain is not homologous to the abelianized word");
    }
  }

  if (!end.face_chain) {
    if (n.kind == NodeKind::Fibered) {
      const Integer d = n.delta(end.mu);
      IntVector face = end.lambda.exponent_sums(n.fiber_rank + 1);
      face.pop_back();
      for (Integer& x : face) x *= d;
      end.face_chain = std::move(face);
    } else {
      const Word comm = end.mu * end.lambda * end.mu.inverse() * end.lambda.inverse();
      if (comm.empty()) {
        end.face_chain = IntVector(c.rank(2));
      } else if (words_are_cells) {
        const Word cyc = comm.cyclically_reduced();
        auto is_rotation = [](const Word& a, const Word& b) {
          const auto& x = a.letters();
          const auto& y = b.letters();
          if (x.size() != y.size()) return false;
          for (std::size_t r = 0; r < x.size(); ++r) {
            bool same = true;
            for (std::size_t i = 0; i < x.size() && same; ++i) same = x[(r + i) % x.size()] == y[i];
            if (same) return true;
          }
          return false;
        };
        for (std::size_t i = 0; i < p.relators().size() && !end.face_chain; ++i) {
          const Word rel = p.relators()[i].cyclically_reduced();
          int sign = is_rotation(cyc, rel) ? 1 : is_rotation(cyc.inverse(), rel) ? -1 : 0;
          if (sign == 0) continue;
          IntVector face(c.rank(2));
          face[i] = sign;
          end.face_chain = std::move(face);
        }
      }
      if (!end.face_chain)
        fail(".face_chain", "required: [mu, lambda] is not a relator of the node presentation");
    }
  }
  if (end.face_chain->size() != c.rank(2)) fail(".face_chain", "length must equal the number of 2-cells");
  if (!detail::is_cycle(c, 2, *end.face_chain))
    fail(".face_chain", n.kind == NodeKind::Fibered
                            ? "torus 2-chain is not a cycle: abelianized lambda is not fixed by the monodromy"
                            : "chain is not a cycle");
}

inline void RatedGraph::validate() {
  if (nodes_.empty()) throw InputError("$.nodes", "at least one node is required");
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const std::string path = "$.nodes[" + std::to_string(i) + "]";
    NodePiece& n = nodes_[i];
    if (!index_.emplace(n.id, i).second) throw InputError(path + ".id", "duplicate node id");
    if (n.rate.is_infinite() || n.rate < Rate(1)) throw InputError(path + ".rate", "rate must be a finite rational >= 1");
    if (n.kind == NodeKind::Conical) {
      if (n.rate != Rate(1)) throw InputError(path + ".rate", "conical pieces have rate 1");
      if (n.complex) {
        if (!verify_complex(*n.complex).empty())
          throw InputError(path + ".complex", "boundary maps do not compose to zero");
        if (homology(*n.complex, 0) != AbelianGroup{1, {}})
          throw InputError(path + ".complex", "complex must be connected");
        if (homology(*n.complex, 1) != abelianize(n.presentation))
          throw InputError(path + ".complex", "first homology does not match the abelianized presentation");
      }
    } else {
      if (n.monodromy.size() != n.fiber_rank)
        throw InputError(path + ".monodromy", "expected " + std::to_string(n.fiber_rank) + " image words");
      for (std::size_t k = 0; k < n.monodromy.size(); ++k)
        if (n.monodromy[k].max_generator_plus_one() > n.fiber_rank)
          throw InputError(path + ".monodromy[" + std::to_string(k) + "]", "uses a generator outside x1..x" +
                                                                                std::to_string(n.fiber_rank));
    }
  }
  std::map<std::size_t, bool> edge_ids;
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    const std::string path = "$.edges[" + std::to_string(e) + "]";
    EdgePiece& edge = edges_[e];
    if (!edge_ids.emplace(edge.id, true).second) throw InputError(path + ".id", "duplicate edge id");
    for (std::size_t j = 0; j < 2; ++j) {
      const std::string end_path = path + ".ends[" + std::to_string(j) + "]";
      if (!index_.count(edge.ends[j].node)) throw InputError(end_path + ".node", "unknown node id");
      resolve_end(edge.ends[j], end_path);
    }
    if (edge.ends[0].node > edge.ends[1].node) std::swap(edge.ends[0], edge.ends[1]);
  }

  // Sort by id; positions above were input positions for error paths.
  std::vector<std::size_t> order;
  for (const auto& [id, i] : index_) order.push_back(i);
  std::vector<NodePiece> sorted;
  for (std::size_t i : order) sorted.push_back(std::move(nodes_[i]));
  nodes_ = std::move(sorted);
  index_.clear();
  for (std::size_t i = 0; i < nodes_.size(); ++i) index_.emplace(nodes_[i].id, i);
  std::sort(edges_.begin(), edges_.end(), [](const EdgePiece& a, const EdgePiece& b) { return a.id < b.id; });

  std::vector<Presentation> groups;
  for (const NodePiece& n : nodes_) groups.push_back(n.local_presentation());
  std::vector<GroupEdge> group_edges;
  for (const EdgePiece& edge : edges_)
    group_edges.push_back({node_index(edge.ends[0].node), node_index(edge.ends[1].node), edge.ends[0].mu,
                           edge.ends[0].lambda, edge.ends[1].mu, edge.ends[1].lambda, ""});
  try {
    detail::spanning_tree(nodes_.size(), group_edges);
  } catch (const ValidationError& e) {
    throw InputError("$.edges", "the decomposition graph must be connected");
  }
  try {
    collapse_components(*this, Rate(1));
  } catch (const ValidationError& e) {
    throw InputError("$.edges", e.what());
  }
}

}  // namespace mdinv
