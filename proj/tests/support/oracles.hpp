#pragma once

// Reference computations that share no code with the library: Leibniz
// determinants, gcd of minors, and rational Gaussian elimination.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace oracle {

using Small = std::vector<std::vector<long long>>;
using BigRational = boost::multiprecision::cpp_rational;

inline long long leibniz_det(const Small& m, const std::vector<int>& rows, const std::vector<int>& cols) {
  const int k = static_cast<int>(rows.size());
  std::vector<int> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  long long total = 0;
  do {
    int inversions = 0;
    for (int i = 0; i < k; ++i)
      for (int j = i + 1; j < k; ++j)
        if (perm[i] > perm[j]) ++inversions;
    long long term = inversions % 2 ? -1 : 1;
    for (int i = 0; i < k && term != 0; ++i) term *= m[rows[i]][cols[perm[i]]];
    total += term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

inline void subsets(int n, int k, int start, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == k) {
    out.push_back(cur);
    return;
  }
  for (int i = start; i < n; ++i) {
    cur.push_back(i);
    subsets(n, k, i + 1, cur, out);
    cur.pop_back();
  }
}

/// D_k = gcd of all k x k minors, for k = 1..min(rows, cols).
inline std::vector<long long> minor_gcds(const Small& m) {
  const int r = static_cast<int>(m.size());
  const int c = r == 0 ? 0 : static_cast<int>(m[0].size());
  std::vector<long long> out;
  for (int k = 1; k <= std::min(r, c); ++k) {
    std::vector<std::vector<int>> rs, cs;
    std::vector<int> cur;
    subsets(r, k, 0, cur, rs);
    subsets(c, k, 0, cur, cs);
    long long g = 0;
    for (const auto& rr : rs)
      for (const auto& cc : cs) g = std::gcd(g, std::llabs(leibniz_det(m, rr, cc)));
    out.push_back(g);
  }
  return out;
}

/// Nonzero invariant factors d_k = D_k / D_{k-1}.
inline std::vector<long long> invariant_factors(const Small& m) {
  std::vector<long long> out;
  long long previous = 1;
  for (long long d : minor_gcds(m)) {
    if (d == 0) break;
    out.push_back(d / previous);
    previous = d;
  }
  return out;
}

/// Rank over Q by plain elimination on rationals.
inline std::size_t rational_rank(const Small& m) {
  if (m.empty()) return 0;
  std::vector<std::vector<BigRational>> a;
  for (const auto& row : m) a.emplace_back(row.begin(), row.end());
  const std::size_t rows = a.size(), cols = a[0].size();
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t p = rank;
    while (p < rows && a[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(a[p], a[rank]);
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == rank || a[i][c] == 0) continue;
      const BigRational f = a[i][c] / a[rank][c];
      for (std::size_t j = 0; j < cols; ++j) a[i][j] -= f * a[rank][j];
    }
    ++rank;
  }
  return rank;
}

}  // namespace oracle
