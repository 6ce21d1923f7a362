#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "mdinv/errors.hpp"
#include "mdinv/numbers.hpp"

namespace mdinv {

using RVector = std::vector<Rational>;

namespace detail {

/// Solves A y = rhs exactly for a full-column-rank A (rows >= cols).
/// Returns nullopt if the system is inconsistent.
inline std::optional<RVector> solve_exact(std::vector<RVector> a, RVector rhs) {
  const std::size_t rows = a.size();
  const std::size_t cols = rows == 0 ? 0 : a[0].size();
  std::vector<std::size_t> pivot_row;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols; ++c) {
    std::size_t p = r;
    while (p < rows && a[p][c] == 0) ++p;
    if (p == rows) throw ValidationError("degenerate simplex: vertices are affinely dependent");
    std::swap(a[p], a[r]);
    std::swap(rhs[p], rhs[r]);
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || a[i][c] == 0) continue;
      const Rational f = a[i][c] / a[r][c];
      for (std::size_t j = c; j < cols; ++j) a[i][j] -= f * a[r][j];
      rhs[i] -= f * rhs[r];
    }
    pivot_row.push_back(r++);
  }
  for (std::size_t i = r; i < rows; ++i)
    if (rhs[i] != 0) return std::nullopt;
  RVector y(cols);
  for (std::size_t c = 0; c < cols; ++c) y[c] = rhs[pivot_row[c]] / a[pivot_row[c]][c];
  return y;
}

inline std::size_t rank_exact(std::vector<RVector> a) {
  const std::size_t rows = a.size();
  const std::size_t cols = rows == 0 ? 0 : a[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && a[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(a[p], a[r]);
    for (std::size_t i = r + 1; i < rows; ++i) {
      if (a[i][c] == 0) continue;
      const Rational f = a[i][c] / a[r][c];
      for (std::size_t j = c; j < cols; ++j) a[i][j] -= f * a[r][j];
    }
    ++r;
  }
  return r;
}

inline Rational determinant_exact(std::vector<RVector> a) {
  const std::size_t n = a.size();
  Rational det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && a[p][c] == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      std::swap(a[p], a[c]);
      det = -det;
    }
    det *= a[c][c];
    for (std::size_t i = c + 1; i < n; ++i) {
      if (a[i][c] == 0) continue;
      const Rational f = a[i][c] / a[c][c];
      for (std::size_t j = c; j < n; ++j) a[i][j] -= f * a[c][j];
    }
  }
  return det;
}

inline Rational abs_rational(const Rational& q) { return q < 0 ? Rational(-q) : q; }

}  // namespace detail

/// Pure-dimensional simplicial complex with exact vertex coordinates.
/// Simplices are the maximal ones; their faces are implied.
class SimplicialComplex {
 public:
  SimplicialComplex(std::vector<RVector> vertices, std::vector<std::vector<std::size_t>> simplices)
      : vertices_(std::move(vertices)), simplices_(std::move(simplices)) {
    if (vertices_.empty()) throw ValidationError("complex has no vertices");
    ambient_ = vertices_[0].size();
    for (std::size_t v = 0; v < vertices_.size(); ++v)
      if (vertices_[v].size() != ambient_)
        throw ValidationError("vertex " + std::to_string(v) + " has " + std::to_string(vertices_[v].size()) +
                              " coordinates, expected " + std::to_string(ambient_));
    if (simplices_.empty()) throw ValidationError("complex has no simplices");
    std::set<std::vector<std::size_t>> seen;
    for (std::size_t s = 0; s < simplices_.size(); ++s) {
      auto& simplex = simplices_[s];
      const std::string where = "simplex " + std::to_string(s);
      std::sort(simplex.begin(), simplex.end());
      if (simplex.empty()) throw ValidationError(where + " is empty");
      if (std::adjacent_find(simplex.begin(), simplex.end()) != simplex.end())
        throw ValidationError(where + " repeats a vertex");
      for (std::size_t v : simplex)
        if (v >= vertices_.size()) throw ValidationError(where + " references a missing vertex");
      if (simplex.size() != simplices_[0].size())
        throw ValidationError(where + " has dimension " + std::to_string(simplex.size() - 1) +
                              "; only pure-dimensional complexes are supported");
      if (!seen.insert(simplex).second) throw ValidationError(where + " is a duplicate");
      std::vector<RVector> diffs;
      for (std::size_t i = 1; i < simplex.size(); ++i) {
        RVector d(ambient_);
        for (std::size_t c = 0; c < ambient_; ++c) d[c] = vertices_[simplex[i]][c] - vertices_[simplex[0]][c];
        diffs.push_back(std::move(d));
      }
      if (detail::rank_exact(diffs) != simplex.size() - 1)
        throw ValidationError(where + " is not affinely independent");
    }
  }

  std::size_t ambient_dimension() const noexcept { return ambient_; }
  /// Dimension k of every maximal simplex.
  std::size_t dimension() const noexcept { return simplices_[0].size() - 1; }
  const std::vector<RVector>& vertices() const noexcept { return vertices_; }
  const std::vector<std::vector<std::size_t>>& simplices() const noexcept { return simplices_; }

  /// Barycentric coordinates of x with respect to simplex s, or nullopt when
  /// x is off its affine hull. Coordinates may be negative.
  std::optional<RVector> barycentric(std::size_t s, const RVector& x) const {
    if (x.size() != ambient_) throw ValidationError("point has the wrong number of coordinates");
    const auto& simplex = simplices_.at(s);
    std::vector<RVector> a(ambient_ + 1, RVector(simplex.size()));
    RVector rhs(ambient_ + 1);
    for (std::size_t c = 0; c < ambient_; ++c) {
      for (std::size_t i = 0; i < simplex.size(); ++i) a[c][i] = vertices_[simplex[i]][c];
      rhs[c] = x[c];
    }
    for (std::size_t i = 0; i < simplex.size(); ++i) a[ambient_][i] = 1;
    rhs[ambient_] = 1;
    return detail::solve_exact(std::move(a), std::move(rhs));
  }

  RVector point(std::size_t s, const RVector& bary) const {
    const auto& simplex = simplices_.at(s);
    if (bary.size() != simplex.size()) throw ValidationError("barycentric vector has the wrong length");
    RVector x(ambient_);
    for (std::size_t i = 0; i < simplex.size(); ++i)
      for (std::size_t c = 0; c < ambient_; ++c) x[c] += bary[i] * vertices_[simplex[i]][c];
    return x;
  }

  /// k-dimensional volume of simplex s when ambient dimension equals k.
  std::optional<Rational> volume(std::size_t s) const {
    if (ambient_ != dimension()) return std::nullopt;
    const auto& simplex = simplices_.at(s);
    std::vector<RVector> m;
    for (std::size_t i = 1; i < simplex.size(); ++i) {
      RVector row(ambient_);
      for (std::size_t c = 0; c < ambient_; ++c) row[c] = vertices_[simplex[i]][c] - vertices_[simplex[0]][c];
      m.push_back(std::move(row));
    }
    Rational vol = detail::abs_rational(detail::determinant_exact(m));
    for (std::size_t i = 2; i <= dimension(); ++i) vol /= i;
    return vol;
  }

 private:
  std::vector<RVector> vertices_;
  std::vector<std::vector<std::size_t>> simplices_;
  std::size_t ambient_ = 0;
};

/// v^f = (b_f + v) / 2, with b_f the barycenter of f.
inline RVector shrink(const SimplicialComplex& k, std::size_t v, std::vector<std::size_t> face) {
  if (std::find(face.begin(), face.end(), v) == face.end())
    throw ValidationError("vertex " + std::to_string(v) + " is not in the face");
  RVector out(k.ambient_dimension());
  const Rational share(1, 2 * static_cast<long long>(face.size()));
  for (std::size_t w : face)
    for (std::size_t c = 0; c < out.size(); ++c) out[c] += share * k.vertices().at(w)[c];
  for (std::size_t c = 0; c < out.size(); ++c) out[c] += k.vertices()[v][c] / 2;
  return out;
}

enum class PieceKind { Core, Collar };

inline std::string to_string(PieceKind k) { return k == PieceKind::Core ? "core" : "collar"; }

/// Core(T) = [T^T] or Collar(f, T) = [f^{*T}] of one maximal simplex T.
struct ThickeningPiece {
  PieceKind kind = PieceKind::Core;
  std::size_t simplex = 0;
  std::vector<std::size_t> face;               // global vertex ids; all of T for the core
  std::vector<RVector> barycentric_vertices;   // with respect to T
  std::vector<RVector> vertices;               // ambient coordinates
  std::vector<std::vector<std::size_t>> triangulation;  // indices into `vertices`
  Rational relative_volume;                    // volume(piece) / volume(T)
  std::optional<Rational> volume;              // when the ambient dimension equals k
};

/// Collar coordinates: the base point y in [f^T] and cube coordinates u,
/// one per vertex of T outside f.
struct Trivialization {
  RVector base_point;                      // barycentric with respect to T
  RVector projection;                      // weights on f of the projected point in [f]
  std::vector<std::size_t> cube_vertices;  // global vertex ids of T \ f
  RVector u;                               // in [0, 1], aligned with cube_vertices
};

/// Local (per-simplex) geometry shared by decompose, locate and extend.
/// Faces are sets of local vertex positions 0..n-1.
namespace detail {

inline std::vector<std::size_t> sorted_complement(std::size_t n, const std::vector<std::size_t>& face) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < n; ++i)
    if (std::find(face.begin(), face.end(), i) == face.end()) out.push_back(i);
  return out;
}

/// Barycentric coordinates of v^{f''} inside T (n vertices).
inline RVector shrunk_vertex(std::size_t n, std::size_t v, const std::vector<std::size_t>& f2) {
  RVector out(n);
  const Rational share(1, 2 * static_cast<long long>(f2.size()));
  for (std::size_t w : f2) out[w] += share;
  out[v] += Rational(1, 2);
  return out;
}

inline Rational kuhn_step(std::size_t m, std::size_t j) { return Rational(1, 2 * static_cast<long long>(m + j)); }

/// Cube coordinates (a_0..a_r via u) of barycentric point lam for collar (g, T).
/// Returns nullopt when lam is outside the collar.
struct CollarCoords {
  RVector projection;  // p on g, sums to 1
  RVector u;           // aligned with the complement of g
};

inline std::optional<CollarCoords> collar_coords(const RVector& lam, const std::vector<std::size_t>& g) {
  const std::size_t n = lam.size();
  const std::size_t m = g.size();
  const std::vector<std::size_t> rest = sorted_complement(n, g);
  for (const Rational& x : lam)
    if (x < 0) return std::nullopt;

  Rational outside = 0;
  for (std::size_t j : rest) outside += lam[j];
  CollarCoords out;
  for (std::size_t v : g) {
    Rational p = 2 * (lam[v] + outside / m) - Rational(1, static_cast<long long>(m));
    if (p < 0) return std::nullopt;
    out.projection.push_back(std::move(p));
  }

  std::vector<std::size_t> order(rest.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return lam[rest[a]] > lam[rest[b]]; });
  const std::size_t r = rest.size();
  RVector a(r + 1);
  Rational total = 0;
  for (std::size_t i = 0; i < r; ++i) {
    const Rational next = i + 1 < r ? lam[rest[order[i + 1]]] : Rational(0);
    a[i + 1] = (lam[rest[order[i]]] - next) / kuhn_step(m, i + 1);
    total += a[i + 1];
  }
  if (total > 1) return std::nullopt;
  out.u.assign(r, Rational(0));
  Rational tail = 0;
  for (std::size_t i = r; i-- > 0;) {
    tail += a[i + 1];
    out.u[order[i]] = tail;
  }
  return out;
}

/// Inverse of `collar_coords`: the barycentric point with projection p and
/// cube coordinates u.
inline RVector collar_point(std::size_t n, const std::vector<std::size_t>& g, const RVector& p, const RVector& u) {
  const std::size_t m = g.size();
  const std::vector<std::size_t> rest = sorted_complement(n, g);
  const std::size_t r = rest.size();
  if (p.size() != m || u.size() != r) throw ValidationError("collar coordinates have the wrong size");
  std::vector<std::size_t> order(r);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return u[a] > u[b]; });
  RVector a(r + 1);
  for (std::size_t i = 0; i < r; ++i) a[i + 1] = u[order[i]] - (i + 1 < r ? u[order[i + 1]] : Rational(0));
  a[0] = 1 - (r ? u[order[0]] : Rational(0));
  RVector lam(n);
  Rational on_face = 0;
  for (std::size_t j = 0; j <= r; ++j) on_face += a[j] * kuhn_step(m, j);
  for (std::size_t k = 0; k < m; ++k) lam[g[k]] = p[k] / 2 + on_face;
  Rational z = 0;
  for (std::size_t i = r; i-- > 0;) {
    z += a[i + 1] * kuhn_step(m, i + 1);
    lam[rest[order[i]]] = z;
  }
  return lam;
}

inline bool in_core(const RVector& lam) {
  const Rational floor(1, 2 * static_cast<long long>(lam.size()));
  return std::all_of(lam.begin(), lam.end(), [&](const Rational& x) { return x >= floor; });
}

/// Proper nonempty faces of an n-vertex simplex as local position sets,
/// ordered by size then lexicographically.
inline std::vector<std::vector<std::size_t>> proper_faces(std::size_t n) {
  std::vector<std::vector<std::size_t>> faces;
  for (std::size_t mask = 1; mask + 1 < (std::size_t{1} << n); ++mask) {
    std::vector<std::size_t> f;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (std::size_t{1} << i)) f.push_back(i);
    faces.push_back(std::move(f));
  }
  std::sort(faces.begin(), faces.end(), [](const auto& a, const auto& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
  return faces;
}

/// Staircase triangulation of Delta_g x (Kuhn chain simplex) for each
/// ordering of the complement. Vertex (i, S) has index i * 2^r + mask(S).
inline std::vector<std::vector<std::size_t>> collar_triangulation(std::size_t m, std::size_t r) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> perm(r);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    std::vector<std::size_t> chain{0};
    for (std::size_t j = 0; j < r; ++j) chain.push_back(chain.back() | (std::size_t{1} << perm[j]));
    // Monotone lattice paths from (0, 0) to (m - 1, r).
    const std::size_t steps = m - 1 + r;
    for (std::size_t mask = 0; mask < (std::size_t{1} << steps); ++mask) {
      if (static_cast<std::size_t>(__builtin_popcountll(mask)) != r) continue;
      std::size_t i = 0;
      std::size_t j = 0;
      std::vector<std::size_t> simplex{i * (std::size_t{1} << r) + chain[j]};
      for (std::size_t s = 0; s < steps; ++s) {
        if (mask & (std::size_t{1} << s)) ++j;
        else ++i;
        simplex.push_back(i * (std::size_t{1} << r) + chain[j]);
      }
      out.push_back(std::move(simplex));
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

/// |det| of a k-simplex in the chart dropping the first barycentric coordinate.
inline Rational chart_volume(const std::vector<RVector>& pts) {
  const std::size_t k = pts.size() - 1;
  if (k == 0) return 1;
  std::vector<RVector> m;
  for (std::size_t i = 1; i <= k; ++i) {
    RVector row(k);
    for (std::size_t c = 0; c < k; ++c) row[c] = pts[i][c + 1] - pts[0][c + 1];
    m.push_back(std::move(row));
  }
  return abs_rational(determinant_exact(std::move(m)));
}

}  // namespace detail

/// Skeleton thickening of every maximal simplex: the core followed by one
/// collar per proper face, faces ordered by size then vertex ids.
inline std::vector<ThickeningPiece> decompose(const SimplicialComplex& k) {
  std::vector<ThickeningPiece> out;
  const std::size_t n = k.dimension() + 1;
  for (std::size_t s = 0; s < k.simplices().size(); ++s) {
    const auto& simplex = k.simplices()[s];
    const std::optional<Rational> total = k.volume(s);
    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), 0);

    auto finish = [&](ThickeningPiece& piece) {
      for (const RVector& b : piece.barycentric_vertices) piece.vertices.push_back(k.point(s, b));
      piece.relative_volume = 0;
      for (const auto& tri : piece.triangulation) {
        std::vector<RVector> pts;
        for (std::size_t i : tri) pts.push_back(piece.barycentric_vertices[i]);
        piece.relative_volume += detail::chart_volume(pts);
      }
      if (total) piece.volume = piece.relative_volume * *total;
    };

    ThickeningPiece core;
    core.kind = PieceKind::Core;
    core.simplex = s;
    core.face = simplex;
    for (std::size_t v = 0; v < n; ++v) core.barycentric_vertices.push_back(detail::shrunk_vertex(n, v, all));
    core.triangulation.push_back(all);
    finish(core);
    out.push_back(std::move(core));

    for (const auto& g : detail::proper_faces(n)) {
      const std::vector<std::size_t> rest = detail::sorted_complement(n, g);
      const std::size_t r = rest.size();
      ThickeningPiece piece;
      piece.kind = PieceKind::Collar;
      piece.simplex = s;
      for (std::size_t v : g) piece.face.push_back(simplex[v]);
      for (std::size_t v : g)
        for (std::size_t mask = 0; mask < (std::size_t{1} << r); ++mask) {
          std::vector<std::size_t> f2 = g;
          for (std::size_t j = 0; j < r; ++j)
            if (mask & (std::size_t{1} << j)) f2.push_back(rest[j]);
          piece.barycentric_vertices.push_back(detail::shrunk_vertex(n, v, f2));
        }
      piece.triangulation = detail::collar_triangulation(g.size(), r);
      finish(piece);
      out.push_back(std::move(piece));
    }
  }
  return out;
}

/// Where a point lies. `piece` indexes the output of `decompose`.
struct Location {
  std::size_t piece = 0;
  PieceKind kind = PieceKind::Core;
  std::size_t simplex = 0;
  std::vector<std::size_t> face;  // global vertex ids
  RVector barycentric;            // with respect to the simplex
  std::optional<Trivialization> coords;
};

namespace detail {

struct Candidate {
  std::size_t kind;                 // 0 core, 1 collar
  std::size_t face_dim;
  std::vector<std::size_t> face;    // global ids
  std::size_t simplex;
  std::size_t position;             // within the simplex's pieces
  std::vector<std::size_t> local_face;
  RVector lam;
  std::optional<CollarCoords> coords;

  auto key() const { return std::tie(kind, face_dim, face, simplex); }
};

}  // namespace detail

/// Locates x. Ties: cores first, then the smallest (dim f, sorted vertex
/// ids), then the lowest simplex index. Throws DomainError outside |K|.
inline Location locate(const SimplicialComplex& k, const RVector& x) {
  const std::size_t n = k.dimension() + 1;
  const auto faces = detail::proper_faces(n);
  std::optional<detail::Candidate> best;
  for (std::size_t s = 0; s < k.simplices().size(); ++s) {
    const std::optional<RVector> lam = k.barycentric(s, x);
    if (!lam || std::any_of(lam->begin(), lam->end(), [](const Rational& q) { return q < 0; })) continue;
    const auto& simplex = k.simplices()[s];
    auto offer = [&](detail::Candidate c) {
      if (!best || c.key() < best->key()) best = std::move(c);
    };
    if (detail::in_core(*lam)) {
      offer({0, n - 1, simplex, s, 0, {}, *lam, std::nullopt});
      continue;
    }
    for (std::size_t f = 0; f < faces.size(); ++f) {
      auto coords = detail::collar_coords(*lam, faces[f]);
      if (!coords) continue;
      std::vector<std::size_t> global;
      for (std::size_t v : faces[f]) global.push_back(simplex[v]);
      offer({1, faces[f].size() - 1, std::move(global), s, f + 1, faces[f], *lam, std::move(coords)});
      break;  // faces are already in tie-break order within one simplex
    }
  }
  if (!best) throw DomainError("point is outside the complex");

  Location loc;
  loc.piece = best->simplex * ((std::size_t{1} << n) - 1) + best->position;
  loc.kind = best->kind == 0 ? PieceKind::Core : PieceKind::Collar;
  loc.simplex = best->simplex;
  loc.face = best->face;
  loc.barycentric = best->lam;
  if (best->coords) {
    Trivialization t;
    t.projection = best->coords->projection;
    t.u = best->coords->u;
    t.base_point.assign(n, Rational(1, 2 * static_cast<long long>(n)));
    for (std::size_t i = 0; i < best->local_face.size(); ++i) t.base_point[best->local_face[i]] += t.projection[i] / 2;
    const auto& simplex = k.simplices()[best->simplex];
    for (std::size_t j : detail::sorted_complement(n, best->local_face)) t.cube_vertices.push_back(simplex[j]);
    loc.coords = std::move(t);
  }
  return loc;
}

/// Inverse trivialization: the point of Collar(face, T) with projection
/// weights p on `face` (global ids, summing to 1) and cube coordinates u on
/// the remaining vertices of T in increasing id order.
inline RVector collar_point(const SimplicialComplex& k, std::size_t s, const std::vector<std::size_t>& face,
                            const RVector& p, const RVector& u) {
  const auto& simplex = k.simplices().at(s);
  std::vector<std::size_t> local;
  for (std::size_t v : face) {
    const auto it = std::find(simplex.begin(), simplex.end(), v);
    if (it == simplex.end()) throw ValidationError("face vertex " + std::to_string(v) + " is not in the simplex");
    local.push_back(static_cast<std::size_t>(it - simplex.begin()));
  }
  std::sort(local.begin(), local.end());
  return k.point(s, detail::collar_point(simplex.size(), local, p, u));
}

/// g_T evaluated at a point of [T] given in barycentric coordinates.
using SimplexFunction = std::function<RVector(std::size_t simplex, const RVector& barycentric)>;

/// Affine g_T given by its values at the vertices of T.
class VertexSamples {
 public:
  /// values[s][i] is the value at the i-th (sorted) vertex of simplex s.
  explicit VertexSamples(std::vector<std::vector<RVector>> values) : values_(std::move(values)) {
    for (const auto& simplex : values_)
      for (const RVector& v : simplex) {
        if (!dimension_) dimension_ = v.size();
        if (v.size() != *dimension_) throw ValidationError("sample values have inconsistent dimensions");
      }
  }

  std::size_t value_dimension() const { return dimension_.value_or(0); }
  const std::vector<std::vector<RVector>>& values() const noexcept { return values_; }

  RVector operator()(std::size_t s, const RVector& bary) const {
    const auto& vals = values_.at(s);
    if (vals.size() != bary.size()) throw ValidationError("sample count does not match simplex size");
    RVector out(value_dimension());
    for (std::size_t i = 0; i < bary.size(); ++i)
      for (std::size_t c = 0; c < out.size(); ++c) out[c] += bary[i] * vals[i][c];
    return out;
  }

  void check(const SimplicialComplex& k) const {
    if (values_.size() != k.simplices().size())
      throw ValidationError("need samples for each of the " + std::to_string(k.simplices().size()) + " simplices");
    for (std::size_t s = 0; s < values_.size(); ++s)
      if (values_[s].size() != k.simplices()[s].size())
        throw ValidationError("simplex " + std::to_string(s) + " needs one sample per vertex");
  }

 private:
  std::vector<std::vector<RVector>> values_;
  std::optional<std::size_t> dimension_;
};

/// One contribution to an extension value: weight * g_simplex(point).
struct ExtensionTerm {
  std::size_t simplex = 0;
  RVector point;  // barycentric in that simplex
  Rational weight;
  RVector value;
};

struct Extension {
  Location location;
  std::vector<ExtensionTerm> terms;  // weights are positive and sum to 1
  RVector value;
};

/// Convex interpolation of the g_T across |K|.
///
/// On a core, the value is g_T(tau_T(x)) with tau_T the dilation of [T^T]
/// onto [T]. On Collar(f, T), every maximal simplex T_i containing f
/// contributes g_i at the projection of x onto [f], weighted by a bump that
/// is 1 on T_i and decays with the cube coordinates of the vertices of T
/// that T_i lacks; bumps are normalized to sum to 1.
inline Extension extend(const SimplicialComplex& k, const SimplexFunction& g, const RVector& x) {
  Extension ext;
  ext.location = locate(k, x);
  const Location& loc = ext.location;
  const std::size_t n = k.dimension() + 1;

  if (loc.kind == PieceKind::Core) {
    RVector tau(n);
    for (std::size_t i = 0; i < n; ++i) tau[i] = 2 * loc.barycentric[i] - Rational(1, static_cast<long long>(n));
    ext.terms.push_back({loc.simplex, tau, Rational(1), g(loc.simplex, tau)});
  } else {
    const Trivialization& t = *loc.coords;
    std::vector<Rational> bumps;
    for (std::size_t i = 0; i < k.simplices().size(); ++i) {
      const auto& other = k.simplices()[i];
      if (!std::includes(other.begin(), other.end(), loc.face.begin(), loc.face.end())) continue;
      Rational bump = 1;
      for (std::size_t c = 0; c < t.cube_vertices.size(); ++c)
        if (!std::binary_search(other.begin(), other.end(), t.cube_vertices[c])) bump *= 1 - t.u[c];
      if (bump == 0) continue;
      RVector point(other.size());
      for (std::size_t f = 0; f < loc.face.size(); ++f) {
        const auto pos = std::lower_bound(other.begin(), other.end(), loc.face[f]) - other.begin();
        point[static_cast<std::size_t>(pos)] = t.projection[f];
      }
      ext.terms.push_back({i, point, bump, g(i, point)});
    }
    Rational total = 0;
    for (const ExtensionTerm& term : ext.terms) total += term.weight;
    for (ExtensionTerm& term : ext.terms) term.weight /= total;
  }
  for (const ExtensionTerm& term : ext.terms) {
    if (ext.value.empty()) ext.value.assign(term.value.size(), Rational(0));
    if (term.value.size() != ext.value.size()) throw ValidationError("g values have inconsistent dimensions");
    for (std::size_t c = 0; c < ext.value.size(); ++c) ext.value[c] += term.weight * term.value[c];
  }
  return ext;
}

}  // namespace mdinv
