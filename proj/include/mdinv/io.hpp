#pragma once

#include <cctype>
#include <cstdint>
#include <istream>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "mdinv/bmodel.hpp"
#include "mdinv/errors.hpp"
#include "mdinv/presentation.hpp"
#include "mdinv/rated_graph.hpp"
#include "mdinv/thickening.hpp"

namespace mdinv {

using Json = nlohmann::json;

/// Optional simplicial complex with affine samples for `thicken`.
struct ThickeningInput {
  SimplicialComplex complex;
  std::optional<VertexSamples> samples;
};

/// Parsed input document (schema version "1").
struct InputDocument {
  std::vector<NodePiece> nodes;
  std::vector<EdgePiece> edges;
  std::optional<LinkData> link;
  std::optional<ThickeningInput> thickening;

  /// Validated graph; throws InputError when there are no nodes.
  RatedGraph graph() const { return RatedGraph(nodes, edges); }
};

namespace io_detail {

/// Cursor into the JSON tree that knows its own path for error messages.
class Node {
 public:
  Node(const Json& j, std::string path) : j_(&j), path_(std::move(path)) {}

  const Json& json() const { return *j_; }
  const std::string& path() const { return path_; }

  [[noreturn]] void fail(const std::string& message) const { throw InputError(path_, message); }

  Node field(const std::string& key) const {
    require_object();
    const auto it = j_->find(key);
    if (it == j_->end()) throw InputError(path_ + "." + key, "missing required field");
    return Node(*it, path_ + "." + key);
  }

  std::optional<Node> optional_field(const std::string& key) const {
    require_object();
    const auto it = j_->find(key);
    if (it == j_->end()) return std::nullopt;
    return Node(*it, path_ + "." + key);
  }

  void allow_only(const std::set<std::string>& keys) const {
    require_object();
    for (const auto& [key, value] : j_->items())
      if (!keys.count(key)) throw InputError(path_ + "." + key, "unknown field");
  }

  std::vector<Node> items() const {
    if (!j_->is_array()) fail("expected an array");
    std::vector<Node> out;
    for (std::size_t i = 0; i < j_->size(); ++i) out.emplace_back((*j_)[i], path_ + "[" + std::to_string(i) + "]");
    return out;
  }

  std::string string() const {
    if (!j_->is_string()) fail("expected a string");
    return j_->get<std::string>();
  }

  std::size_t count() const {
    if (!j_->is_number_unsigned() && !(j_->is_number_integer() && j_->get<std::int64_t>() >= 0))
      fail("expected a nonnegative integer");
    return j_->get<std::size_t>();
  }

  /// Integer given as a JSON integer or a decimal string.
  Integer integer() const {
    if (j_->is_number_integer()) return Integer(j_->get<std::int64_t>());
    if (j_->is_number_unsigned()) return Integer(j_->get<std::uint64_t>());
    if (j_->is_string()) {
      try {
        return parse_integer(j_->get<std::string>());
      } catch (const ValidationError& e) {
        fail(e.what());
      }
    }
    fail("expected an integer");
  }

  /// Rational given as "p/q", "p" or a JSON integer. Floats are rejected.
  Rational rational() const {
    if (j_->is_number_float()) fail("floating-point numbers are not allowed; write rationals as \"p/q\"");
    if (j_->is_number_integer() || j_->is_number_unsigned()) return Rational(integer());
    if (!j_->is_string()) fail("expected a rational string \"p/q\"");
    try {
      return parse_rational(j_->get<std::string>());
    } catch (const ValidationError& e) {
      fail(e.what());
    }
  }

  Rate rate() const {
    if (j_->is_string() && j_->get<std::string>() == "inf") return Rate::infinity();
    const Rational q = rational();
    if (q < 0) fail("rate must be nonnegative");
    return Rate(q);
  }

  IntVector integers() const {
    IntVector out;
    for (const Node& n : items()) out.push_back(n.integer());
    return out;
  }

  RVector rationals() const {
    RVector out;
    for (const Node& n : items()) out.push_back(n.rational());
    return out;
  }

 private:
  void require_object() const {
    if (!j_->is_object()) fail("expected an object");
  }

  const Json* j_;
  std::string path_;
};

inline bool valid_generator_name(const std::string& s) {
  if (s.empty() || std::isdigit(static_cast<unsigned char>(s[0]))) return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  return true;
}

inline Word word_at(const Node& n, const std::vector<std::string>& names) {
  try {
    return parse_word(n.string(), names);
  } catch (const InputError&) {
    throw;
  } catch (const ValidationError& e) {
    n.fail(e.what());
  }
}

inline Presentation presentation_at(const Node& n) {
  n.allow_only({"generators", "relators"});
  std::vector<std::string> names;
  std::set<std::string> seen;
  for (const Node& g : n.field("generators").items()) {
    std::string name = g.string();
    if (!valid_generator_name(name)) g.fail("generator names use letters, digits and '_' and start with a non-digit");
    if (!seen.insert(name).second) g.fail("duplicate generator name");
    names.push_back(std::move(name));
  }
  std::vector<Word> relators;
  if (const auto rels = n.optional_field("relators"))
    for (const Node& r : rels->items()) relators.push_back(word_at(r, names));
  return Presentation(std::move(names), std::move(relators));
}

inline ChainComplex complex_at(const Node& n) {
  n.allow_only({"ranks", "boundaries"});
  std::vector<std::size_t> ranks;
  for (const Node& r : n.field("ranks").items()) ranks.push_back(r.count());
  if (ranks.empty()) n.field("ranks").fail("at least one degree is required");
  const auto bnodes = n.field("boundaries").items();
  if (bnodes.size() + 1 != ranks.size())
    n.field("boundaries").fail("expected " + std::to_string(ranks.size() - 1) + " boundary matrices");
  std::vector<IntMatrix> boundaries;
  for (std::size_t k = 0; k < bnodes.size(); ++k) {
    const auto rows = bnodes[k].items();
    const std::size_t want_rows = ranks[k];
    const std::size_t want_cols = ranks[k + 1];
    if (rows.size() != want_rows)
      bnodes[k].fail("expected " + std::to_string(want_rows) + " rows");
    IntMatrix m(want_rows, want_cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const IntVector row = rows[i].integers();
      if (row.size() != want_cols) rows[i].fail("expected " + std::to_string(want_cols) + " entries");
      for (std::size_t j = 0; j < want_cols; ++j) m(i, j) = row[j];
    }
    boundaries.push_back(std::move(m));
  }
  return ChainComplex(std::move(ranks), std::move(boundaries));
}

inline NodePiece node_at(const Node& n) {
  const std::string kind = n.field("kind").string();
  NodePiece piece;
  piece.id = n.field("id").count();
  if (kind == "conical") {
    n.allow_only({"id", "kind", "rate", "presentation", "complex"});
    piece.kind = NodeKind::Conical;
    piece.rate = n.optional_field("rate") ? n.field("rate").rate() : Rate(1);
    piece.presentation = presentation_at(n.field("presentation"));
    if (const auto c = n.optional_field("complex")) piece.complex = complex_at(*c);
  } else if (kind == "fibered") {
    n.allow_only({"id", "kind", "rate", "fiber_rank", "monodromy"});
    piece.kind = NodeKind::Fibered;
    piece.rate = n.field("rate").rate();
    piece.fiber_rank = n.field("fiber_rank").count();
    std::vector<std::string> names;
    for (std::size_t i = 1; i <= piece.fiber_rank; ++i) names.push_back("x" + std::to_string(i));
    for (const Node& w : n.field("monodromy").items()) piece.monodromy.push_back(word_at(w, names));
    if (piece.monodromy.size() != piece.fiber_rank)
      n.field("monodromy").fail("expected " + std::to_string(piece.fiber_rank) + " image words");
  } else {
    n.field("kind").fail("expected \"conical\" or \"fibered\"");
  }
  return piece;
}

inline EdgePiece edge_at(const Node& n, const std::vector<NodePiece>& nodes) {
  n.allow_only({"id", "ends"});
  EdgePiece edge;
  edge.id = n.field("id").count();
  const auto ends = n.field("ends").items();
  if (ends.size() != 2) n.field("ends").fail("an edge has exactly two ends");
  for (std::size_t j = 0; j < 2; ++j) {
    const Node& e = ends[j];
    e.allow_only({"node", "mu", "lambda", "mu_chain", "lambda_chain", "face_chain", "vertex"});
    EdgeEnd& end = edge.ends[j];
    end.node = e.field("node").count();
    const NodePiece* piece = nullptr;
    for (const NodePiece& p : nodes)
      if (p.id == end.node) piece = &p;
    if (!piece) e.field("node").fail("unknown node id");
    const std::vector<std::string> names = piece->local_presentation().generators();
    end.mu = word_at(e.field("mu"), names);
    end.lambda = word_at(e.field("lambda"), names);
    if (const auto c = e.optional_field("mu_chain")) end.mu_chain = c->integers();
    if (const auto c = e.optional_field("lambda_chain")) end.lambda_chain = c->integers();
    if (const auto c = e.optional_field("face_chain")) end.face_chain = c->integers();
    if (const auto v = e.optional_field("vertex")) end.vertex = v->count();
  }
  return edge;
}

inline ThickeningInput thickening_at(const Node& n) {
  n.allow_only({"vertices", "simplices", "samples"});
  std::vector<RVector> vertices;
  for (const Node& v : n.field("vertices").items()) vertices.push_back(v.rationals());
  std::vector<std::vector<std::size_t>> simplices;
  for (const Node& s : n.field("simplices").items()) {
    std::vector<std::size_t> ids;
    for (const Node& i : s.items()) ids.push_back(i.count());
    simplices.push_back(std::move(ids));
  }
  std::optional<SimplicialComplex> complex;
  try {
    complex.emplace(std::move(vertices), simplices);
  } catch (const InputError&) {
    throw;
  } catch (const ValidationError& e) {
    n.fail(e.what());
  }
  ThickeningInput out{std::move(*complex), std::nullopt};
  if (const auto samples = n.optional_field("samples")) {
    // Samples are listed per simplex in the order of its vertex ids.
    std::vector<std::vector<RVector>> values;
    for (const Node& s : samples->items()) {
      std::vector<RVector> per_vertex;
      for (const Node& v : s.items()) per_vertex.push_back(v.rationals());
      values.push_back(std::move(per_vertex));
    }
    try {
      VertexSamples vs(std::move(values));
      vs.check(out.complex);
      out.samples = std::move(vs);
    } catch (const ValidationError& e) {
      samples->fail(e.what());
    }
  }
  return out;
}

}  // namespace io_detail

/// Parses and validates the input document structure. Graph-level rules
/// (connectivity, gluing data) are checked by `InputDocument::graph()`.
inline InputDocument parse_input(const Json& j) {
  const io_detail::Node root(j, "$");
  root.allow_only({"schema_version", "nodes", "edges", "link_complex", "thickening"});
  const io_detail::Node version = root.field("schema_version");
  if (version.string() != "1") version.fail("unsupported schema version (expected \"1\")");

  InputDocument doc;
  if (const auto nodes = root.optional_field("nodes"))
    for (const auto& n : nodes->items()) doc.nodes.push_back(io_detail::node_at(n));
  if (const auto edges = root.optional_field("edges"))
    for (const auto& e : edges->items()) doc.edges.push_back(io_detail::edge_at(e, doc.nodes));
  if (const auto link = root.optional_field("link_complex")) {
    link->allow_only({"presentation", "complex"});
    const Presentation p = io_detail::presentation_at(link->field("presentation"));
    LinkData data = LinkData::from_presentation(p);
    if (const auto c = link->optional_field("complex")) {
      data.complex = io_detail::complex_at(*c);
      if (!verify_complex(data.complex).empty()) c->fail("boundary maps do not compose to zero");
    }
    doc.link = std::move(data);
  }
  if (const auto t = root.optional_field("thickening")) doc.thickening = io_detail::thickening_at(*t);
  return doc;
}

inline InputDocument parse_input(std::istream& in) {
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InputError("$", std::string("malformed JSON: ") + e.what());
  }
  return parse_input(j);
}

// Output helpers. Integers are JSON numbers when they fit in 64 bits and
// decimal strings otherwise.

inline Json to_json(const Integer& x) {
  if (const auto v = to_int64(x)) return *v;
  return x.str();
}

inline Json to_json(const AbelianGroup& g) {
  Json torsion = Json::array();
  for (const Integer& d : g.torsion) torsion.push_back(to_json(d));
  return {{"rank", g.free_rank}, {"torsion", torsion}, {"text", to_string(g)}};
}

inline Json to_json(const IntMatrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Json to_json(const Presentation& p) {
  Json relators = Json::array();
  for (const Word& r : p.relators()) relators.push_back(to_string(r, p.generators()));
  return {{"generators", p.generators()}, {"relators", relators}, {"text", to_string(p)}};
}

inline Json to_json(const RVector& v) {
  Json out = Json::array();
  for (const Rational& q : v) out.push_back(to_string(q));
  return out;
}

}  // namespace mdinv
