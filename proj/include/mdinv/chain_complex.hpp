#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mdinv/errors.hpp"
#include "mdinv/int_matrix.hpp"
#include "mdinv/smith.hpp"

namespace mdinv {

/// Finitely generated abelian group Z^free_rank + Z/d1 + ... with d1 | d2 | ...
struct AbelianGroup {
  std::size_t free_rank = 0;
  std::vector<Integer> torsion;

  bool is_trivial() const { return free_rank == 0 && torsion.empty(); }

  /// Builds the group from invariant factors of a relation matrix with
  /// `generators` rows; unit factors are dropped.
  static AbelianGroup from_relations(std::size_t generators, const SmithForm& snf) {
    AbelianGroup g;
    g.free_rank = generators - snf.rank;
    for (std::size_t i = 0; i < snf.rank; ++i)
      if (snf.d(i, i) > 1) g.torsion.push_back(snf.d(i, i));
    return g;
  }

  friend bool operator==(const AbelianGroup&, const AbelianGroup&) = default;
};

/// "0", "Z", "Z^2 + Z/2 + Z/6".
inline std::string to_string(const AbelianGroup& g) {
  std::string out;
  auto append = [&out](const std::string& part) {
    if (!out.empty()) out += " + ";
    out += part;
  };
  if (g.free_rank == 1) append("Z");
  if (g.free_rank > 1) append("Z^" + std::to_string(g.free_rank));
  for (const Integer& d : g.torsion) append("Z/" + d.str());
  return out.empty() ? "0" : out;
}

/// Chain complex C_N -> ... -> C_1 -> C_0 of free abelian groups.
///
/// `boundary(n)` is the c_{n-1} x c_n matrix of d_n. Degrees outside 1..N
/// yield the appropriately shaped zero map, so d_0 and d_{N+1} exist.
class ChainComplex {
 public:
  ChainComplex() = default;

  ChainComplex(std::vector<std::size_t> ranks, std::vector<IntMatrix> boundaries)
      : ranks_(std::move(ranks)), boundaries_(std::move(boundaries)) {
    const std::size_t expected = ranks_.empty() ? 0 : ranks_.size() - 1;
    if (boundaries_.size() != expected)
      throw ValidationError("chain complex with " + std::to_string(ranks_.size()) +
                            " degrees needs " + std::to_string(expected) + " boundary maps, got " +
                            std::to_string(boundaries_.size()));
    for (std::size_t n = 1; n < ranks_.size(); ++n) {
      const IntMatrix& d = boundaries_[n - 1];
      if (d.rows() != ranks_[n - 1] || d.cols() != ranks_[n])
        throw ValidationError("boundary d" + std::to_string(n) + " has shape " +
                              std::to_string(d.rows()) + "x" + std::to_string(d.cols()) +
                              ", expected " + std::to_string(ranks_[n - 1]) + "x" +
                              std::to_string(ranks_[n]));
    }
  }

  /// One vertex, one edge.
  static ChainComplex circle() { return ChainComplex({1, 1}, {IntMatrix(1, 1)}); }

  /// One vertex, two edges (mu, lambda), one face; all boundaries vanish.
  static ChainComplex torus() {
    return ChainComplex({1, 2, 1}, {IntMatrix(1, 2), IntMatrix(2, 1)});
  }

  /// Index of the top degree; -1 for the empty complex.
  long top_degree() const { return static_cast<long>(ranks_.size()) - 1; }

  std::size_t rank(long n) const {
    if (n < 0 || n > top_degree()) return 0;
    return ranks_[static_cast<std::size_t>(n)];
  }

  const std::vector<std::size_t>& ranks() const noexcept { return ranks_; }
  const std::vector<IntMatrix>& boundaries() const noexcept { return boundaries_; }

  IntMatrix boundary(long n) const {
    if (n >= 1 && n <= top_degree()) return boundaries_[static_cast<std::size_t>(n - 1)];
    return IntMatrix(rank(n - 1), rank(n));
  }

  friend bool operator==(const ChainComplex&, const ChainComplex&) = default;

 private:
  std::vector<std::size_t> ranks_;
  std::vector<IntMatrix> boundaries_;
};

inline long euler_characteristic(const ChainComplex& c) {
  long chi = 0;
  for (long n = 0; n <= c.top_degree(); ++n)
    chi += (n % 2 == 0 ? 1 : -1) * static_cast<long>(c.rank(n));
  return chi;
}

struct ComplexDefect {
  long degree;
  std::string message;
};

/// Every degree n with d_n d_{n+1} != 0. Empty iff the complex is valid.
inline std::vector<ComplexDefect> verify_complex(const ChainComplex& c) {
  std::vector<ComplexDefect> report;
  for (long n = 1; n < c.top_degree(); ++n) {
    if (!(c.boundary(n) * c.boundary(n + 1)).is_zero())
      report.push_back({n, "d" + std::to_string(n) + " * d" + std::to_string(n + 1) + " != 0"});
  }
  return report;
}

/// A homology group together with the cycles generating it.
///
/// Generators are ordered torsion first (by increasing order), then free.
/// `order[i]` is the order of generator i, 0 for free generators.
class HomologyBasis {
 public:
  HomologyBasis() = default;

  HomologyBasis(const ChainComplex& c, long n) : degree_(n), chain_rank_(c.rank(n)) {
    if (chain_rank_ == 0) return;
    const SmithForm cycles = smith_normal_form(c.boundary(n));
    const std::size_t r = cycles.rank;
    const std::size_t k = chain_rank_ - r;

    // Columns r.. of V span ker d_n; rows r.. of V^{-1} give coordinates in
    // that basis.
    const IntMatrix kernel = cycles.v.column_block(r, chain_rank_);
    const IntMatrix coordinates = cycles.v_inverse.row_block(r, chain_rank_);
    const IntMatrix full = cycles.v_inverse * c.boundary(n + 1);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < full.cols(); ++j)
        if (full(i, j) != 0)
          throw ValidationError("homology of an invalid complex: d" + std::to_string(n) +
                                " * d" + std::to_string(n + 1) + " != 0");
    const IntMatrix relations = full.row_block(r, chain_rank_);

    const SmithForm quotient = smith_normal_form(relations);
    const IntMatrix basis = kernel * quotient.u_inverse;
    to_generators_ = quotient.u * coordinates;

    for (std::size_t i = 0; i < k; ++i) {
      if (i < quotient.rank) {
        const Integer& d = quotient.d(i, i);
        if (d == 1) continue;
        group_.torsion.push_back(d);
        order_.push_back(d);
      } else {
        ++group_.free_rank;
        order_.push_back(0);
      }
      rows_.push_back(i);
      generators_.push_back(basis.column(i));
    }
  }

  long degree() const noexcept { return degree_; }
  const AbelianGroup& group() const noexcept { return group_; }
  const std::vector<IntVector>& generators() const noexcept { return generators_; }
  const std::vector<Integer>& orders() const noexcept { return order_; }

  /// Coordinates of the class of `cycle` on the generators; torsion
  /// coordinates are reduced into [0, d).
  IntVector coordinates(std::span<const Integer> cycle) const {
    if (cycle.size() != chain_rank_)
      throw ValidationError("chain length does not match degree " + std::to_string(degree_));
    IntVector out;
    if (chain_rank_ == 0) return out;
    const IntVector all = to_generators_.apply(cycle);
    for (std::size_t g = 0; g < rows_.size(); ++g) {
      Integer x = all[rows_[g]];
      if (order_[g] != 0) {
        x %= order_[g];
        if (x < 0) x += order_[g];
      }
      out.push_back(std::move(x));
    }
    return out;
  }

 private:
  long degree_ = 0;
  std::size_t chain_rank_ = 0;
  AbelianGroup group_;
  std::vector<IntVector> generators_;
  std::vector<Integer> order_;
  std::vector<std::size_t> rows_;
  IntMatrix to_generators_;
};

/// H_n(C). Degrees outside the complex give the trivial group.
inline AbelianGroup homology(const ChainComplex& c, long n) {
  return HomologyBasis(c, n).group();
}

/// Chain map f: C -> C', one matrix f_n of shape c'_n x c_n per degree.
class ChainMap {
 public:
  /// Throws ValidationError naming the first degree where d' f_n != f_{n-1} d.
  ChainMap(ChainComplex source, ChainComplex target, std::vector<IntMatrix> components)
      : source_(std::move(source)), target_(std::move(target)), components_(std::move(components)) {
    const long top = std::max(source_.top_degree(), target_.top_degree());
    components_.resize(static_cast<std::size_t>(top + 1));
    for (long n = 0; n <= top; ++n) {
      IntMatrix& f = components_[static_cast<std::size_t>(n)];
      if (f.rows() == 0 && f.cols() == 0) f = IntMatrix(target_.rank(n), source_.rank(n));
      if (f.rows() != target_.rank(n) || f.cols() != source_.rank(n))
        throw ValidationError("chain map component f" + std::to_string(n) + " has shape " +
                              std::to_string(f.rows()) + "x" + std::to_string(f.cols()) +
                              ", expected " + std::to_string(target_.rank(n)) + "x" +
                              std::to_string(source_.rank(n)));
    }
    for (long n = 1; n <= top; ++n) {
      if (target_.boundary(n) * component(n) != component(n - 1) * source_.boundary(n))
        throw ValidationError("chain map does not commute with boundaries in degree " +
                              std::to_string(n));
    }
  }

  static ChainMap identity(const ChainComplex& c) {
    std::vector<IntMatrix> comps;
    for (long n = 0; n <= c.top_degree(); ++n) comps.push_back(IntMatrix::identity(c.rank(n)));
    return ChainMap(c, c, std::move(comps));
  }

  const ChainComplex& source() const noexcept { return source_; }
  const ChainComplex& target() const noexcept { return target_; }

  IntMatrix component(long n) const {
    if (n >= 0 && n < static_cast<long>(components_.size()))
      return components_[static_cast<std::size_t>(n)];
    return IntMatrix(target_.rank(n), source_.rank(n));
  }

  /// `after` o `before`.
  friend ChainMap compose(const ChainMap& after, const ChainMap& before) {
    if (!(after.source_ == before.target_))
      throw ValidationError("composing chain maps with mismatched complexes");
    const long top = std::max({before.source_.top_degree(), after.target_.top_degree(),
                               before.target_.top_degree()});
    std::vector<IntMatrix> comps;
    for (long n = 0; n <= top; ++n) comps.push_back(after.component(n) * before.component(n));
    return ChainMap(before.source_, after.target_, std::move(comps));
  }

 private:
  ChainComplex source_;
  ChainComplex target_;
  std::vector<IntMatrix> components_;
};

/// Matrix of H_n(f) on the canonical generators of `HomologyBasis`: column j
/// holds the coordinates of the image of source generator j.
inline IntMatrix induced_map(const ChainMap& f, long n) {
  const HomologyBasis source(f.source(), n);
  const HomologyBasis target(f.target(), n);
  const IntMatrix fn = f.component(n);
  IntMatrix out(target.generators().size(), source.generators().size());
  for (std::size_t j = 0; j < source.generators().size(); ++j) {
    const IntVector image = target.coordinates(fn.apply(source.generators()[j]));
    for (std::size_t i = 0; i < image.size(); ++i) out(i, j) = image[i];
  }
  return out;
}

/// Reduces row i of `m` modulo `orders[i]` where that order is nonzero.
inline IntMatrix reduce_torsion_rows(IntMatrix m, const std::vector<Integer>& orders) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (orders[i] == 0) continue;
    for (std::size_t j = 0; j < m.cols(); ++j) {
      m(i, j) %= orders[i];
      if (m(i, j) < 0) m(i, j) += orders[i];
    }
  }
  return m;
}

}  // namespace mdinv
