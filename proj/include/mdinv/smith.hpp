#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "mdinv/int_matrix.hpp"

namespace mdinv {

/// Smith normal form `U * M * V = D` with the inverses of both transforms.
///
/// `D` is diagonal with nonnegative entries d1 | d2 | ... ; `rank` counts the
/// nonzero ones. The inverses are carried along so callers can change bases
/// in both directions without a separate inversion.
struct SmithForm {
  IntMatrix u;
  IntMatrix u_inverse;
  IntMatrix d;
  IntMatrix v;
  IntMatrix v_inverse;
  std::size_t rank = 0;

  std::vector<Integer> invariant_factors() const {
    std::vector<Integer> out;
    for (std::size_t i = 0; i < rank; ++i) out.push_back(d(i, i));
    return out;
  }
};

namespace detail {

class SmithReducer {
 public:
  explicit SmithReducer(const IntMatrix& m)
      : a_(m),
        u_(IntMatrix::identity(m.rows())),
        u_inv_(IntMatrix::identity(m.rows())),
        v_(IntMatrix::identity(m.cols())),
        v_inv_(IntMatrix::identity(m.cols())) {}

  SmithForm run() {
    const std::size_t limit = std::min(a_.rows(), a_.cols());
    std::size_t t = 0;
    for (; t < limit; ++t) {
      if (!reduce_at(t)) break;
    }
    for (std::size_t i = 0; i < t; ++i)
      if (a_(i, i) < 0) negate_row(i);
    return SmithForm{std::move(u_), std::move(u_inv_), std::move(a_), std::move(v_),
                     std::move(v_inv_), t};
  }

 private:
  // Minimal |entry| over the trailing block; ties go to the lowest row, then
  // the lowest column.
  std::optional<std::pair<std::size_t, std::size_t>> find_pivot(std::size_t t) const {
    std::optional<std::pair<std::size_t, std::size_t>> best;
    Integer best_abs;
    for (std::size_t i = t; i < a_.rows(); ++i)
      for (std::size_t j = t; j < a_.cols(); ++j) {
        const Integer& x = a_(i, j);
        if (x == 0) continue;
        Integer ax = abs(x);
        if (!best || ax < best_abs) {
          best = {i, j};
          best_abs = std::move(ax);
        }
      }
    return best;
  }

  bool reduce_at(std::size_t t) {
    for (;;) {
      const auto pivot = find_pivot(t);
      if (!pivot) return false;
      swap_rows(t, pivot->first);
      swap_columns(t, pivot->second);

      bool clean = true;
      for (std::size_t i = t + 1; i < a_.rows(); ++i) {
        if (a_(i, t) == 0) continue;
        Integer q = a_(i, t) / a_(t, t);
        add_row_multiple(i, t, -q);
        if (a_(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < a_.cols(); ++j) {
        if (a_(t, j) == 0) continue;
        Integer q = a_(t, j) / a_(t, t);
        add_column_multiple(j, t, -q);
        if (a_(t, j) != 0) clean = false;
      }
      if (!clean) continue;

      // Row and column are clear; enforce divisibility of the remainder.
      bool divisible = true;
      for (std::size_t i = t + 1; i < a_.rows() && divisible; ++i)
        for (std::size_t j = t + 1; j < a_.cols(); ++j)
          if (a_(i, j) % a_(t, t) != 0) {
            add_row_multiple(t, i, 1);
            divisible = false;
            break;
          }
      if (divisible) return true;
    }
  }

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    a_.swap_rows(a, b);
    u_.swap_rows(a, b);
    u_inv_.swap_columns(a, b);
  }
  void swap_columns(std::size_t a, std::size_t b) {
    if (a == b) return;
    a_.swap_columns(a, b);
    v_.swap_columns(a, b);
    v_inv_.swap_rows(a, b);
  }
  void add_row_multiple(std::size_t target, std::size_t source, const Integer& c) {
    a_.add_row_multiple(target, source, c);
    u_.add_row_multiple(target, source, c);
    u_inv_.add_column_multiple(source, target, -c);
  }
  void add_column_multiple(std::size_t target, std::size_t source, const Integer& c) {
    a_.add_column_multiple(target, source, c);
    v_.add_column_multiple(target, source, c);
    v_inv_.add_row_multiple(source, target, -c);
  }
  void negate_row(std::size_t i) {
    a_.negate_row(i);
    u_.negate_row(i);
    u_inv_.negate_column(i);
  }

  IntMatrix a_;
  IntMatrix u_;
  IntMatrix u_inv_;
  IntMatrix v_;
  IntMatrix v_inv_;
};

}  // namespace detail

/// Total function; deterministic for a given input.
inline SmithForm smith_normal_form(const IntMatrix& m) {
  return detail::SmithReducer(m).run();
}

inline std::size_t rank(const IntMatrix& m) { return smith_normal_form(m).rank; }

/// True iff `v` is an integer combination of the columns of `m`.
inline bool in_column_lattice(const IntMatrix& m, std::span<const Integer> v) {
  const SmithForm s = smith_normal_form(m);
  const IntVector w = s.u.apply(v);
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i < s.rank) {
      if (w[i] % s.d(i, i) != 0) return false;
    } else if (w[i] != 0) {
      return false;
    }
  }
  return true;
}

}  // namespace mdinv
