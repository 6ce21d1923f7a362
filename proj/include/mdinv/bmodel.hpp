#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mdinv/chain_complex.hpp"
#include "mdinv/errors.hpp"
#include "mdinv/presentation.hpp"
#include "mdinv/rate.hpp"
#include "mdinv/rated_graph.hpp"

namespace mdinv {

/// A node of the (b,1)-model: either a kept piece or the base circle of a
/// collapsed component.
struct ModelNode {
  std::string label;                 // "n3", or "n2_5" for a multi-piece circle
  std::vector<std::size_t> members;  // graph node indices
  std::vector<Integer> multipliers;  // per member, collapsed nodes only
  bool collapsed = false;
  Presentation presentation;         // generator names carry the @n suffix
  ChainComplex complex;
};

struct ModelEnd {
  std::size_t node = 0;  // model node index
  Word mu;
  Word lambda;
  IntVector mu_chain;
  IntVector lambda_chain;
  IntVector face_chain;
  std::size_t vertex = 0;
};

struct ModelEdge {
  std::size_t graph_edge = 0;  // index into RatedGraph::edges()
  std::size_t id = 0;
  std::array<ModelEnd, 2> ends;
};

/// Torus cells per degree: one vertex, mu and lambda, one face.
inline std::size_t torus_rank(long n) { return (n == 0 || n == 2) ? 1 : n == 1 ? 2 : 0; }

/// The (b,1)-homotopy model: a graph of spaces with its presentation and
/// total chain complex.
///
/// Chain layout in each degree n: node blocks C_n(node) in model-node order,
/// then edge blocks C_{n-1}(T^2) in model-edge order. The differential on an
/// edge block is (inclusion at end 0) - (inclusion at end 1).
struct BModel {
  Rate b;
  std::vector<ModelNode> nodes;
  std::vector<ModelEdge> edges;
  std::vector<std::size_t> node_of;                // graph node -> model node
  std::vector<std::optional<std::size_t>> edge_of;  // graph edge -> model edge
  Presentation presentation;                        // before simplification
  GraphOfGroupsLayout layout;
  ChainComplex complex;
  std::vector<std::vector<std::size_t>> node_offset;  // [degree][model node]
  std::vector<std::vector<std::size_t>> edge_offset;  // [degree][model edge]

  long top_degree() const { return complex.top_degree(); }
};

namespace detail {

inline std::string circle_label(const RatedGraph& g, const std::vector<std::size_t>& members) {
  std::string label = "n";
  for (std::size_t i = 0; i < members.size(); ++i) {
    if (i) label += "_";
    label += std::to_string(g.nodes()[members[i]].id);
  }
  return label;
}

inline Presentation suffixed(const Presentation& p, const std::string& suffix) {
  std::vector<std::string> names;
  for (const std::string& n : p.generators()) names.push_back(n + suffix);
  return Presentation(std::move(names), p.relators());
}

/// Collapse of a fibered piece onto its base circle: x_i -> 1, t -> L^m.
inline GroupHom collapse_hom(const NodePiece& n, const Integer& multiplier) {
  std::vector<Word> images(n.fiber_rank);
  images.push_back(Word::generator(0).power(static_cast<long>(multiplier)));
  return GroupHom(1, std::move(images));
}

}  // namespace detail

inline BModel build_model(const RatedGraph& g, const Rate& b) {
  if (b < Rate(1)) throw ValidationError("b must be >= 1, got " + to_string(b));
  BModel m;
  m.b = b;
  const auto& nodes = g.nodes();
  const auto& edges = g.edges();

  const std::vector<CollapseComponent> components = collapse_components(g, b);
  std::vector<std::optional<std::size_t>> component_of(nodes.size());
  std::vector<Integer> multiplier(nodes.size());
  for (std::size_t c = 0; c < components.size(); ++c)
    for (std::size_t k = 0; k < components[c].members.size(); ++k) {
      component_of[components[c].members[k]] = c;
      multiplier[components[c].members[k]] = components[c].multipliers[k];
    }

  // Model nodes in order of their smallest member id.
  m.node_of.assign(nodes.size(), 0);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (component_of[i]) {
      const CollapseComponent& comp = components[*component_of[i]];
      if (comp.members.front() != i) {
        m.node_of[i] = m.node_of[comp.members.front()];
        continue;
      }
      ModelNode node;
      node.label = detail::circle_label(g, comp.members);
      node.members = comp.members;
      node.multipliers = comp.multipliers;
      node.collapsed = true;
      node.presentation = Presentation::free({"t@" + node.label});
      node.complex = ChainComplex::circle();
      m.node_of[i] = m.nodes.size();
      m.nodes.push_back(std::move(node));
    } else {
      ModelNode node;
      node.label = "n" + std::to_string(nodes[i].id);
      node.members = {i};
      node.presentation = detail::suffixed(nodes[i].local_presentation(), nodes[i].suffix());
      node.complex = nodes[i].local_complex();
      m.node_of[i] = m.nodes.size();
      m.nodes.push_back(std::move(node));
    }
  }

  m.edge_of.assign(edges.size(), std::nullopt);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const std::size_t a = g.node_index(edges[e].ends[0].node);
    const std::size_t c = g.node_index(edges[e].ends[1].node);
    if (component_of[a] && component_of[c]) continue;  // internal to a collapsed component
    ModelEdge me;
    me.graph_edge = e;
    me.id = edges[e].id;
    for (std::size_t j = 0; j < 2; ++j) {
      const EdgeEnd& end = edges[e].ends[j];
      const std::size_t i = g.node_index(end.node);
      ModelEnd& out = me.ends[j];
      out.node = m.node_of[i];
      if (component_of[i]) {
        const GroupHom h = detail::collapse_hom(nodes[i], multiplier[i]);
        const std::size_t t = nodes[i].base_generator();
        out.mu = h.apply(end.mu);
        out.lambda = h.apply(end.lambda);
        out.mu_chain = {(*end.mu_chain)[t] * multiplier[i]};
        out.lambda_chain = {(*end.lambda_chain)[t] * multiplier[i]};
        out.face_chain = {};
        out.vertex = 0;
      } else {
        out.mu = end.mu;
        out.lambda = end.lambda;
        out.mu_chain = *end.mu_chain;
        out.lambda_chain = *end.lambda_chain;
        out.face_chain = *end.face_chain;
        out.vertex = end.vertex;
      }
    }
    m.edge_of[e] = m.edges.size();
    m.edges.push_back(std::move(me));
  }

  std::vector<Presentation> groups;
  for (const ModelNode& n : m.nodes) groups.push_back(n.presentation);
  std::vector<GroupEdge> group_edges;
  for (const ModelEdge& e : m.edges)
    group_edges.push_back({e.ends[0].node, e.ends[1].node, e.ends[0].mu, e.ends[0].lambda, e.ends[1].mu,
                           e.ends[1].lambda, "s@e" + std::to_string(e.id)});
  m.presentation = graph_of_groups(groups, group_edges, &m.layout);

  long top = 3;
  for (const ModelNode& n : m.nodes) top = std::max(top, n.complex.top_degree());
  std::vector<std::size_t> ranks;
  m.node_offset.assign(static_cast<std::size_t>(top + 1), {});
  m.edge_offset.assign(static_cast<std::size_t>(top + 1), {});
  for (long n = 0; n <= top; ++n) {
    std::size_t r = 0;
    for (const ModelNode& node : m.nodes) {
      m.node_offset[static_cast<std::size_t>(n)].push_back(r);
      r += node.complex.rank(n);
    }
    for (std::size_t e = 0; e < m.edges.size(); ++e) {
      m.edge_offset[static_cast<std::size_t>(n)].push_back(r);
      r += torus_rank(n - 1);
    }
    ranks.push_back(r);
  }

  std::vector<IntMatrix> boundaries;
  for (long n = 1; n <= top; ++n) {
    const auto un = static_cast<std::size_t>(n);
    IntMatrix d(ranks[un - 1], ranks[un]);
    for (std::size_t k = 0; k < m.nodes.size(); ++k) {
      const IntMatrix local = m.nodes[k].complex.boundary(n);
      for (std::size_t i = 0; i < local.rows(); ++i)
        for (std::size_t j = 0; j < local.cols(); ++j)
          d(m.node_offset[un - 1][k] + i, m.node_offset[un][k] + j) = local(i, j);
    }
    for (std::size_t e = 0; e < m.edges.size(); ++e) {
      const std::size_t col = m.edge_offset[un][e];
      for (std::size_t j = 0; j < 2; ++j) {
        const ModelEnd& end = m.edges[e].ends[j];
        const int sign = j == 0 ? 1 : -1;
        const std::size_t row = m.node_offset[un - 1][end.node];
        auto add = [&](std::size_t c, const IntVector& chain) {
          for (std::size_t i = 0; i < chain.size(); ++i) d(row + i, col + c) += sign * chain[i];
        };
        if (n == 1) d(row + end.vertex, col) += sign;
        if (n == 2) {
          add(0, end.mu_chain);
          add(1, end.lambda_chain);
        }
        if (n == 3) add(0, end.face_chain);
      }
    }
    boundaries.push_back(std::move(d));
  }
  m.complex = ChainComplex(std::move(ranks), std::move(boundaries));
  return m;
}

/// Deterministic serialization of everything in the model except b.
inline std::string canonical_string(const BModel& m) {
  std::string out = "nodes:";
  for (const ModelNode& n : m.nodes) {
    out += "{" + n.label + (n.collapsed ? " collapsed" : " kept") + " mult[";
    for (const Integer& x : n.multipliers) out += x.str() + ",";
    out += "] " + to_string(n.presentation) + " ranks[";
    for (std::size_t r : n.complex.ranks()) out += std::to_string(r) + ",";
    out += "]}";
  }
  out += " edges:";
  for (const ModelEdge& e : m.edges) {
    out += "{e" + std::to_string(e.id);
    for (const ModelEnd& end : e.ends) {
      const auto& names = m.nodes[end.node].presentation.generators();
      out += " " + std::to_string(end.node) + ":" + to_string(end.mu, names) + "," + to_string(end.lambda, names);
    }
    out += "}";
  }
  out += " pi1:" + to_string(m.presentation) + " complex:";
  for (long n = 1; n <= m.complex.top_degree(); ++n) out += " d" + std::to_string(n) + "=" + to_string(m.complex.boundary(n));
  return out;
}

inline Presentation pi1(const BModel& m) { return tietze_simplify(m.presentation); }
inline Presentation pi1(const RatedGraph& g, const Rate& b) { return pi1(build_model(g, b)); }

inline AbelianGroup homology(const RatedGraph& g, const Rate& b, long n) {
  if (n < 0) throw ValidationError("degree must be nonnegative");
  return homology(build_model(g, b).complex, n);
}

/// Mismatches between abelianized pi1 and H1; empty iff they agree.
inline std::vector<std::string> hurewicz_check(const BModel& m) {
  const AbelianGroup ab = abelianize(m.presentation);
  const AbelianGroup h1 = homology(m.complex, 1);
  if (ab == h1) return {};
  return {"b=" + to_string(m.b) + ": abelianized pi1 is " + to_string(ab) + " but H1 is " + to_string(h1)};
}
inline std::vector<std::string> hurewicz_check(const RatedGraph& g, const Rate& b) {
  return hurewicz_check(build_model(g, b));
}

/// Map from the model at b to the model at b' <= b.
struct StructureMap {
  Rate from;
  Rate to;
  ChainMap chain;
  GroupHom pi1;             // between the unsimplified presentations
  GroupHom pi1_simplified;  // between the Tietze-simplified presentations

  IntMatrix homology(long n) const { return induced_map(chain, n); }
};

namespace detail {

inline Word power_word(std::size_t generator, const Integer& k) {
  return Word::generator(generator).power(static_cast<long>(k));
}

}  // namespace detail

inline StructureMap structure_map(const RatedGraph& g, const BModel& hi, const BModel& lo) {
  if (hi.b < lo.b)
    throw ValidationError("structure maps go from larger to smaller b: " + to_string(hi.b) + " < " + to_string(lo.b));
  const auto& gnodes = g.nodes();

  // Chain level.
  std::vector<IntMatrix> comps;
  for (long n = 0; n <= std::max(hi.top_degree(), lo.top_degree()); ++n) {
    const auto un = static_cast<std::size_t>(n);
    IntMatrix f(lo.complex.rank(n), hi.complex.rank(n));
    for (std::size_t k = 0; k < hi.nodes.size(); ++k) {
      const ModelNode& src = hi.nodes[k];
      const std::size_t target = lo.node_of[src.members.front()];
      const ModelNode& dst = lo.nodes[target];
      const std::size_t r0 = un < lo.node_offset.size() ? lo.node_offset[un][target] : 0;
      const std::size_t c0 = un < hi.node_offset.size() ? hi.node_offset[un][k] : 0;
      if (!src.collapsed && !dst.collapsed) {
        for (std::size_t i = 0; i < src.complex.rank(n); ++i) f(r0 + i, c0 + i) = 1;
      } else if (n == 0) {
        f(r0, c0) = 1;
      } else if (n == 1) {
        const std::size_t a = src.members.front();
        const auto pos = std::find(dst.members.begin(), dst.members.end(), a) - dst.members.begin();
        const Integer& target_mult = dst.multipliers[static_cast<std::size_t>(pos)];
        if (!src.collapsed) {
          f(r0, c0 + gnodes[a].base_generator()) = target_mult;
        } else {
          if (target_mult % src.multipliers.front() != 0)
            throw ConsistencyError("collapse multipliers are not compatible between levels");
          f(r0, c0) = target_mult / src.multipliers.front();
        }
      }
    }
    for (std::size_t e = 0; e < hi.edges.size(); ++e) {
      const auto target = lo.edge_of[hi.edges[e].graph_edge];
      if (!target) continue;
      for (std::size_t i = 0; i < torus_rank(n - 1); ++i)
        f(lo.edge_offset[un][*target] + i, hi.edge_offset[un][e] + i) = 1;
    }
    comps.push_back(std::move(f));
  }
  std::optional<ChainMap> chain;
  try {
    chain.emplace(hi.complex, lo.complex, std::move(comps));
  } catch (const ValidationError& e) {
    throw ConsistencyError(std::string("structure map is not a chain map: ") + e.what());
  }

  // Circle multipliers must scale uniformly.
  for (const ModelNode& src : hi.nodes) {
    if (!src.collapsed) continue;
    const ModelNode& dst = lo.nodes[lo.node_of[src.members.front()]];
    std::optional<Integer> ratio;
    for (std::size_t k = 0; k < src.members.size(); ++k) {
      const auto pos = std::find(dst.members.begin(), dst.members.end(), src.members[k]) - dst.members.begin();
      const Integer& t = dst.multipliers[static_cast<std::size_t>(pos)];
      if (t % src.multipliers[k] != 0 || (ratio && *ratio != t / src.multipliers[k]))
        throw ConsistencyError("collapse multipliers are not proportional between levels");
      ratio = t / src.multipliers[k];
    }
  }

  // Group level. Paths from the root along the spanning tree at `hi`, read
  // in the presentation at `lo`.
  auto crossing = [&](std::size_t hi_edge, bool forward) {
    const auto lo_edge = lo.edge_of[hi.edges[hi_edge].graph_edge];
    if (!lo_edge || !lo.layout.stable_letter[*lo_edge]) return Word();
    const Word s = Word::generator(*lo.layout.stable_letter[*lo_edge]);
    return forward ? s.inverse() : s;  // forward = from end 0 to end 1
  };
  std::vector<std::optional<Word>> path(hi.nodes.size());
  path[0] = Word();
  for (bool progress = true; progress;) {
    progress = false;
    for (std::size_t v = 0; v < hi.nodes.size(); ++v) {
      if (path[v]) continue;
      const std::size_t e = *hi.layout.parent_edge[v];
      const ModelEdge& edge = hi.edges[e];
      const bool forward = edge.ends[1].node == v;
      const std::size_t parent = forward ? edge.ends[0].node : edge.ends[1].node;
      if (!path[parent]) continue;
      path[v] = *path[parent] * crossing(e, forward);
      progress = true;
    }
  }

  std::vector<Word> images;
  for (std::size_t k = 0; k < hi.nodes.size(); ++k) {
    const ModelNode& src = hi.nodes[k];
    const std::size_t target = lo.node_of[src.members.front()];
    const ModelNode& dst = lo.nodes[target];
    const std::size_t base = lo.layout.node_offset[target];
    for (std::size_t gen = 0; gen < src.presentation.generator_count(); ++gen) {
      Word w;
      if (!dst.collapsed) {
        w = Word::generator(base + gen);
      } else {
        const std::size_t a = src.members.front();
        const auto pos = std::find(dst.members.begin(), dst.members.end(), a) - dst.members.begin();
        const Integer& t = dst.multipliers[static_cast<std::size_t>(pos)];
        if (!src.collapsed)
          w = gen == gnodes[a].base_generator() ? detail::power_word(base, t) : Word();
        else
          w = detail::power_word(base, t / src.multipliers.front());
      }
      images.push_back(*path[k] * w * path[k]->inverse());
    }
  }
  for (std::size_t e = 0; e < hi.edges.size(); ++e) {
    if (!hi.layout.stable_letter[e]) continue;
    const ModelEdge& edge = hi.edges[e];
    images.push_back(*path[edge.ends[1].node] * crossing(e, false) * path[edge.ends[0].node]->inverse());
  }
  GroupHom hom(lo.presentation.generator_count(), std::move(images));
  if (!preserves_relators_abelian(hom, hi.presentation, lo.presentation))
    throw ConsistencyError("structure map on pi1 does not respect relators after abelianization");

  const TietzeResult simple_hi = tietze_simplify_tracked(hi.presentation);
  const TietzeResult simple_lo = tietze_simplify_tracked(lo.presentation);
  std::vector<Word> simple_images;
  for (std::size_t k : simple_hi.kept) simple_images.push_back(simple_lo.substitution.apply(hom.image(k)));
  GroupHom simple(simple_lo.presentation.generator_count(), std::move(simple_images));

  return {hi.b, lo.b, std::move(*chain), std::move(hom), std::move(simple)};
}

inline StructureMap structure_map(const RatedGraph& g, const Rate& b, const Rate& b_lower) {
  if (b < b_lower)
    throw ValidationError("structure maps need b >= b': " + to_string(b) + " < " + to_string(b_lower));
  return structure_map(g, build_model(g, b), build_model(g, b_lower));
}

/// Sorted distinct node rates together with 1.
inline std::vector<Rate> jump_set(const RatedGraph& g) {
  std::vector<Rate> out{Rate(1)};
  for (const NodePiece& n : g.nodes()) out.push_back(n.rate);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// Invariants of one model.
struct LevelInvariants {
  Presentation pi1;
  AbelianGroup abelianization;
  std::vector<AbelianGroup> homology;  // degrees 0..max_degree

  /// Everything except b, for constancy comparisons.
  std::string key() const {
    std::string k = to_string(pi1) + " ab=" + to_string(abelianization);
    for (const AbelianGroup& h : homology) k += " " + to_string(h);
    return k;
  }
};

inline LevelInvariants invariants(const BModel& m, long max_degree = 3) {
  LevelInvariants out{pi1(m), abelianize(m.presentation), {}};
  for (long n = 0; n <= max_degree; ++n) out.homology.push_back(homology(m.complex, n));
  return out;
}

/// One level of the filtration: the half-open interval [b, upper), or the
/// point b = inf when `upper` is empty and b is infinite.
struct Level {
  Rate b;
  std::optional<Rate> upper;
  BModel model;
  LevelInvariants invariants;
  std::vector<Rate> samples;  // interior points checked for constancy
};

struct BFiltration {
  std::vector<Rate> jumps;
  std::vector<Level> levels;        // one per jump, then inf
  std::vector<StructureMap> maps;   // maps[k]: levels[k + 1] -> levels[k]
};

/// Two interior rationals of [lo, hi), or of [lo, inf) when hi is empty.
inline std::array<Rate, 2> interior_samples(const Rate& lo, const std::optional<Rate>& hi) {
  if (!hi || hi->is_infinite()) return {Rate(lo.value() + 1), Rate(lo.value() + 2)};
  return {Rate((lo.value() + hi->value()) / 2), Rate((2 * lo.value() + hi->value()) / 3)};
}

/// Evaluates every interval between jumps and b = inf; throws
/// ConsistencyError if invariants differ inside an interval.
inline BFiltration filtration(const RatedGraph& g, long max_degree = 3) {
  BFiltration f;
  f.jumps = jump_set(g);
  for (std::size_t k = 0; k <= f.jumps.size(); ++k) {
    Level level;
    if (k == f.jumps.size()) {
      level.b = Rate::infinity();
    } else {
      level.b = f.jumps[k];
      level.upper = k + 1 < f.jumps.size() ? std::optional<Rate>(f.jumps[k + 1]) : std::optional<Rate>(Rate::infinity());
    }
    level.model = build_model(g, level.b);
    level.invariants = invariants(level.model, max_degree);
    if (!level.b.is_infinite()) {
      for (const Rate& s : interior_samples(level.b, level.upper)) {
        level.samples.push_back(s);
        const std::string key = invariants(build_model(g, s), max_degree).key();
        if (key != level.invariants.key())
          throw ConsistencyError("invariants change inside [" + to_string(level.b) + ", " + to_string(*level.upper) +
                                 "): at " + to_string(s) + " got " + key + ", expected " + level.invariants.key());
      }
    }
    f.levels.push_back(std::move(level));
  }
  for (std::size_t k = 0; k + 1 < f.levels.size(); ++k)
    f.maps.push_back(structure_map(g, f.levels[k + 1].model, f.levels[k].model));
  return f;
}

/// Link of a b-cone: a presentation and a cellular model of the same space.
struct LinkData {
  Presentation presentation;
  ChainComplex complex;

  static LinkData from_presentation(Presentation p) {
    ChainComplex c({1, p.generator_count(), p.relators().size()},
                   {IntMatrix(1, p.generator_count()), p.relation_matrix()});
    return {std::move(p), std::move(c)};
  }
};

struct BConeResult {
  bool trivial = false;
  std::optional<Presentation> pi1;  // degree 1 only
  AbelianGroup group;
};

/// Invariants of the b-cone over a link at rate b_query: trivial below b,
/// the link's invariants from b on. Degree 0 is always H0 of the link.
inline BConeResult bcone(const LinkData& link, const Rate& b, const Rate& b_query, long k) {
  if (b < Rate(1)) throw ValidationError("cone rate b must be >= 1");
  if (b_query < Rate(1)) throw ValidationError("query rate must be >= 1");
  if (k < 0) throw ValidationError("degree must be nonnegative");
  BConeResult out;
  if (k == 0) {
    out.group = homology(link.complex, 0);
    return out;
  }
  if (b_query < b) {
    out.trivial = true;
    if (k == 1) out.pi1 = Presentation();
    return out;
  }
  if (k == 1) out.pi1 = tietze_simplify(link.presentation);
  out.group = homology(link.complex, k);
  out.trivial = out.group.is_trivial() && (!out.pi1 || out.pi1->generator_count() == 0);
  return out;
}

}  // namespace mdinv
