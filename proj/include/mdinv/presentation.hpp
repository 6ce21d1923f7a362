#pragma once

#include <algorithm>
#include <cstddef>
#include <deque>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "mdinv/chain_complex.hpp"
#include "mdinv/errors.hpp"
#include "mdinv/smith.hpp"
#include "mdinv/word.hpp"

namespace mdinv {

/// Finitely presented group < generators | relators >.
class Presentation {
 public:
  Presentation() = default;

  Presentation(std::vector<std::string> generators, std::vector<Word> relators)
      : generators_(std::move(generators)), relators_(std::move(relators)) {
    for (std::size_t i = 0; i < relators_.size(); ++i)
      if (relators_[i].max_generator_plus_one() > generators_.size())
        throw ValidationError("relator " + std::to_string(i) + " uses a generator index out of range");
  }

  /// Free group on the given names.
  static Presentation free(std::vector<std::string> generators) {
    return Presentation(std::move(generators), {});
  }

  const std::vector<std::string>& generators() const noexcept { return generators_; }
  const std::vector<Word>& relators() const noexcept { return relators_; }
  std::size_t generator_count() const noexcept { return generators_.size(); }

  Word parse(std::string_view text) const { return parse_word(text, generators_); }

  /// Exponent sums: one row per generator, one column per relator.
  IntMatrix relation_matrix() const {
    std::vector<IntVector> columns;
    for (const Word& r : relators_) columns.push_back(r.exponent_sums(generators_.size()));
    return IntMatrix::from_columns(generators_.size(), columns);
  }

  friend bool operator==(const Presentation&, const Presentation&) = default;

 private:
  std::vector<std::string> generators_;
  std::vector<Word> relators_;
};

/// "< a, b | a*b*a^-1*b^-1 >"; no relators prints "< a | >".
inline std::string to_string(const Presentation& p) {
  std::string out = "< ";
  for (std::size_t i = 0; i < p.generators().size(); ++i) {
    if (i) out += ", ";
    out += p.generators()[i];
  }
  out += p.generators().empty() ? "| " : " | ";
  for (std::size_t i = 0; i < p.relators().size(); ++i) {
    if (i) out += ", ";
    out += to_string(p.relators()[i], p.generators());
  }
  out += p.relators().empty() ? ">" : " >";
  return out;
}

/// Homomorphism given by the image word of each source generator.
///
/// Only the syntax is validated; whether relators are preserved is a
/// separate (abelian) check, see `preserves_relators_abelian`.
class GroupHom {
 public:
  GroupHom() = default;
  GroupHom(std::size_t target_generators, std::vector<Word> images)
      : target_generators_(target_generators), images_(std::move(images)) {
    for (std::size_t i = 0; i < images_.size(); ++i)
      if (images_[i].max_generator_plus_one() > target_generators_)
        throw ValidationError("image of generator " + std::to_string(i) + " is out of range");
  }

  static GroupHom identity(std::size_t n) {
    std::vector<Word> images;
    for (std::size_t i = 0; i < n; ++i) images.push_back(Word::generator(i));
    return GroupHom(n, std::move(images));
  }

  std::size_t source_generators() const noexcept { return images_.size(); }
  std::size_t target_generators() const noexcept { return target_generators_; }
  const std::vector<Word>& images() const noexcept { return images_; }
  const Word& image(std::size_t g) const { return images_.at(g); }

  Word apply(const Word& w) const {
    if (w.max_generator_plus_one() > images_.size())
      throw ValidationError("word uses generators outside the homomorphism's domain");
    return w.substitute(images_);
  }

  /// Matrix of the induced map on exponent sums (target x source).
  IntMatrix abelian_matrix() const {
    std::vector<IntVector> columns;
    for (const Word& w : images_) columns.push_back(w.exponent_sums(target_generators_));
    return IntMatrix::from_columns(target_generators_, columns);
  }

  friend bool operator==(const GroupHom&, const GroupHom&) = default;

 private:
  std::size_t target_generators_ = 0;
  std::vector<Word> images_;
};

/// `after` o `before`.
inline GroupHom compose(const GroupHom& after, const GroupHom& before) {
  if (before.target_generators() != after.source_generators())
    throw ValidationError("composing homomorphisms with mismatched generator counts");
  std::vector<Word> images;
  for (const Word& w : before.images()) images.push_back(after.apply(w));
  return GroupHom(after.target_generators(), std::move(images));
}

inline AbelianGroup abelianize(const Presentation& p) {
  return AbelianGroup::from_relations(p.generator_count(), smith_normal_form(p.relation_matrix()));
}

/// Checks that every source relator maps into the relator lattice of the
/// target after abelianization. Necessary for f to be a homomorphism.
inline bool preserves_relators_abelian(const GroupHom& f, const Presentation& source,
                                       const Presentation& target) {
  if (f.source_generators() != source.generator_count() ||
      f.target_generators() != target.generator_count())
    return false;
  const IntMatrix lattice = target.relation_matrix();
  for (const Word& r : source.relators())
    if (!in_column_lattice(lattice, f.apply(r).exponent_sums(target.generator_count())))
      return false;
  return true;
}

/// P with the killed words appended as relators.
inline Presentation quotient(const Presentation& p, const std::vector<Word>& killed) {
  std::vector<Word> relators = p.relators();
  relators.insert(relators.end(), killed.begin(), killed.end());
  return Presentation(p.generators(), std::move(relators));
}

/// < x1..xr, t | t xi t^-1 phi(xi)^-1 >, t last.
inline Presentation mapping_torus(std::size_t fiber_rank, const GroupHom& phi) {
  if (phi.source_generators() != fiber_rank || phi.target_generators() != fiber_rank)
    throw ValidationError("monodromy must map a free group of rank " + std::to_string(fiber_rank) +
                          " to itself, got " + std::to_string(phi.source_generators()) + " -> " +
                          std::to_string(phi.target_generators()));
  std::vector<std::string> names;
  for (std::size_t i = 1; i <= fiber_rank; ++i) names.push_back("x" + std::to_string(i));
  names.push_back("t");
  const Word t = Word::generator(fiber_rank);
  std::vector<Word> relators;
  for (std::size_t i = 0; i < fiber_rank; ++i)
    relators.push_back(t * Word::generator(i) * t.inverse() * phi.image(i).inverse());
  return Presentation(std::move(names), std::move(relators));
}

/// One edge of a graph of groups with edge group Z^2 = <mu, lambda>.
/// Words are in the respective endpoint presentations.
struct GroupEdge {
  std::size_t node0 = 0;
  std::size_t node1 = 0;
  Word mu0;
  Word lambda0;
  Word mu1;
  Word lambda1;
  std::string stable_name;  // used if the edge is outside the spanning tree
};

/// Tree/non-tree classification produced by `graph_of_groups`.
struct GraphOfGroupsLayout {
  std::vector<std::size_t> node_offset;     // first global generator of each node
  std::vector<bool> tree_edge;              // per edge
  std::vector<std::optional<std::size_t>> stable_letter;  // global index, non-tree edges
  std::vector<std::optional<std::size_t>> parent_edge;    // BFS tree, per node
};

namespace detail {

inline GraphOfGroupsLayout spanning_tree(std::size_t node_count, const std::vector<GroupEdge>& edges) {
  GraphOfGroupsLayout layout;
  layout.tree_edge.assign(edges.size(), false);
  layout.stable_letter.assign(edges.size(), std::nullopt);
  layout.parent_edge.assign(node_count, std::nullopt);
  if (node_count == 0) throw ValidationError("graph of groups needs at least one node");

  std::vector<std::size_t> order(edges.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::tie(edges[a].node0, edges[a].node1, a) < std::tie(edges[b].node0, edges[b].node1, b);
  });

  std::vector<bool> seen(node_count, false);
  std::deque<std::size_t> queue{0};
  seen[0] = true;
  while (!queue.empty()) {
    const std::size_t u = queue.front();
    queue.pop_front();
    for (std::size_t e : order) {
      const GroupEdge& edge = edges[e];
      if (edge.node0 == edge.node1) continue;
      std::size_t other;
      if (edge.node0 == u) other = edge.node1;
      else if (edge.node1 == u) other = edge.node0;
      else continue;
      if (seen[other]) continue;
      seen[other] = true;
      layout.tree_edge[e] = true;
      layout.parent_edge[other] = e;
      queue.push_back(other);
    }
  }
  for (std::size_t v = 0; v < node_count; ++v)
    if (!seen[v]) throw ValidationError("graph is disconnected: node index " + std::to_string(v) +
                                        " is unreachable from node index 0");
  return layout;
}

}  // namespace detail

/// Seifert-van Kampen colimit of a connected graph of groups with Z^2 edge
/// groups. Node generators keep their names and order; one stable letter per
/// non-tree edge follows, in edge order. Relators: node relators in node
/// order, then per edge mu then lambda; empty relators are dropped.
inline Presentation graph_of_groups(const std::vector<Presentation>& nodes,
                                    const std::vector<GroupEdge>& edges,
                                    GraphOfGroupsLayout* layout_out = nullptr) {
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const GroupEdge& edge = edges[e];
    if (edge.node0 >= nodes.size() || edge.node1 >= nodes.size())
      throw ValidationError("edge " + std::to_string(e) + " references a missing node");
    auto check = [&](const Word& w, std::size_t node, const char* what) {
      if (w.max_generator_plus_one() > nodes[node].generator_count())
        throw ValidationError(std::string("edge ") + std::to_string(e) + " " + what +
                              " uses generators outside its node");
    };
    check(edge.mu0, edge.node0, "mu at end 0");
    check(edge.lambda0, edge.node0, "lambda at end 0");
    check(edge.mu1, edge.node1, "mu at end 1");
    check(edge.lambda1, edge.node1, "lambda at end 1");
  }
  GraphOfGroupsLayout layout = detail::spanning_tree(nodes.size(), edges);

  std::vector<std::string> names;
  std::vector<Word> relators;
  for (const Presentation& p : nodes) {
    layout.node_offset.push_back(names.size());
    for (const Word& r : p.relators()) relators.push_back(r.shifted(names.size()));
    names.insert(names.end(), p.generators().begin(), p.generators().end());
  }
  for (std::size_t e = 0; e < edges.size(); ++e) {
    if (layout.tree_edge[e]) continue;
    layout.stable_letter[e] = names.size();
    names.push_back(edges[e].stable_name.empty() ? "s" + std::to_string(e) : edges[e].stable_name);
  }
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const GroupEdge& edge = edges[e];
    const std::size_t o0 = layout.node_offset[edge.node0];
    const std::size_t o1 = layout.node_offset[edge.node1];
    for (const auto& [w0, w1] : {std::pair{&edge.mu0, &edge.mu1}, std::pair{&edge.lambda0, &edge.lambda1}}) {
      Word r;
      if (layout.tree_edge[e]) {
        r = w0->shifted(o0) * w1->shifted(o1).inverse();
      } else {
        const Word s = Word::generator(*layout.stable_letter[e]);
        r = s * w0->shifted(o0) * s.inverse() * w1->shifted(o1).inverse();
      }
      if (!r.empty()) relators.push_back(std::move(r));
    }
  }
  if (layout_out) *layout_out = layout;
  return Presentation(std::move(names), std::move(relators));
}

/// Result of `tietze_simplify_tracked`: the simplified presentation, the
/// original generators that survive (in order), and for every original
/// generator its expression in the surviving ones.
struct TietzeResult {
  Presentation presentation;
  std::vector<std::size_t> kept;
  GroupHom substitution;  // original generators -> simplified presentation
};

/// Deterministic Tietze simplification.
///
/// Repeats until nothing changes: cyclically reduce relators, drop empty and
/// duplicate ones (up to rotation and inversion), then take the shortest
/// relator containing a generator exactly once (lowest index on ties; within
/// it the highest-numbered such generator) and eliminate that generator.
inline TietzeResult tietze_simplify_tracked(const Presentation& p) {
  const std::size_t n = p.generator_count();
  std::vector<Word> images;  // in original numbering
  for (std::size_t g = 0; g < n; ++g) images.push_back(Word::generator(g));
  std::vector<bool> alive(n, true);
  std::vector<Word> relators = p.relators();

  for (;;) {
    std::vector<Word> cleaned;
    std::set<std::vector<Letter>> keys;
    for (const Word& r : relators) {
      Word c = r.cyclically_reduced();
      if (c.empty()) continue;
      if (!keys.insert(c.cyclic_key()).second) continue;
      cleaned.push_back(std::move(c));
    }
    relators = std::move(cleaned);

    std::optional<std::pair<std::size_t, std::size_t>> pick;  // relator, generator
    for (std::size_t i = 0; i < relators.size(); ++i) {
      if (pick && relators[i].length() >= relators[pick->first].length()) continue;
      std::optional<std::size_t> best;
      for (const Letter& l : relators[i].letters())
        if (relators[i].occurrences(l.generator) == 1 && (!best || l.generator > *best))
          best = l.generator;
      if (best) pick = {i, *best};
    }
    if (!pick) break;

    // r = A g^e B = 1  =>  g = A^-1 B^-1 (e = 1) or g = B A (e = -1).
    const auto [ri, g] = *pick;
    const auto& ls = relators[ri].letters();
    std::size_t pos = 0;
    while (ls[pos].generator != g) ++pos;
    const Word a(std::vector<Letter>(ls.begin(), ls.begin() + static_cast<std::ptrdiff_t>(pos)));
    const Word b(std::vector<Letter>(ls.begin() + static_cast<std::ptrdiff_t>(pos) + 1, ls.end()));
    const Word value = ls[pos].exponent > 0 ? a.inverse() * b.inverse() : b * a;

    std::vector<Word> subst;
    for (std::size_t h = 0; h < n; ++h) subst.push_back(h == g ? value : Word::generator(h));
    relators.erase(relators.begin() + static_cast<std::ptrdiff_t>(ri));
    for (Word& r : relators) r = r.substitute(subst);
    for (Word& w : images) w = w.substitute(subst);
    alive[g] = false;
  }

  std::vector<std::size_t> renumber(n, 0);
  std::vector<std::string> names;
  std::vector<std::size_t> kept;
  for (std::size_t g = 0; g < n; ++g) {
    if (!alive[g]) continue;
    renumber[g] = kept.size();
    kept.push_back(g);
    names.push_back(p.generators()[g]);
  }
  std::vector<Word> to_new;
  for (std::size_t g = 0; g < n; ++g)
    to_new.push_back(alive[g] ? Word::generator(renumber[g]) : Word());
  for (Word& r : relators) r = r.substitute(to_new);
  for (Word& w : images) w = w.substitute(to_new);
  GroupHom substitution(kept.size(), std::move(images));
  return {Presentation(std::move(names), std::move(relators)), std::move(kept),
          std::move(substitution)};
}

inline Presentation tietze_simplify(const Presentation& p) {
  return tietze_simplify_tracked(p).presentation;
}

}  // namespace mdinv
