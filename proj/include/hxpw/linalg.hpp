#pragma once

// Small dense linear algebra over the ambient binary field.  Rows are
// fixed-width std::arrays; all routines work for any subfield since the
// arithmetic is that of the ambient field.

#include <array>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "hxpw/field.hpp"

namespace hxpw {

template <std::size_t N>
using FeVec = std::array<Fe, N>;

template <std::size_t N>
FeVec<N> zero_vec(const Field& f) {
  FeVec<N> v;
  v.fill(f.zero());
  return v;
}

template <std::size_t N>
bool is_zero_vec(const FeVec<N>& v) {
  for (const auto& x : v) {
    if (!x.is_zero()) return false;
  }
  return true;
}

template <std::size_t N>
FeVec<N> scale(Fe c, const FeVec<N>& v) {
  FeVec<N> out;
  for (std::size_t i = 0; i < N; ++i) out[i] = c * v[i];
  return out;
}

template <std::size_t N>
FeVec<N> add(const FeVec<N>& a, const FeVec<N>& b) {
  FeVec<N> out;
  for (std::size_t i = 0; i < N; ++i) out[i] = a[i] + b[i];
  return out;
}

/// Projective normalisation: first nonzero coordinate becomes 1.
template <std::size_t N>
FeVec<N> normalize(const FeVec<N>& v) {
  for (std::size_t i = 0; i < N; ++i) {
    if (!v[i].is_zero()) return scale(v[i].inv(), v);
  }
  throw std::invalid_argument("cannot normalise the zero vector");
}

/// Reduced row-echelon form; zero rows are dropped.
template <std::size_t N>
std::vector<FeVec<N>> rref(std::vector<FeVec<N>> rows) {
  std::size_t r = 0;
  for (std::size_t col = 0; col < N && r < rows.size(); ++col) {
    std::size_t piv = r;
    while (piv < rows.size() && rows[piv][col].is_zero()) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[r], rows[piv]);
    rows[r] = scale(rows[r][col].inv(), rows[r]);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i != r && !rows[i][col].is_zero()) rows[i] = add(rows[i], scale(rows[i][col], rows[r]));
    }
    ++r;
  }
  rows.resize(r);
  return rows;
}

template <std::size_t N>
std::size_t rank(std::vector<FeVec<N>> rows) {
  return rref(std::move(rows)).size();
}

/// Basis (in RREF) of { x : <row, x> = 0 for every row }.
template <std::size_t N>
std::vector<FeVec<N>> null_space(const Field& f, std::vector<FeVec<N>> rows) {
  const auto red = rref(std::move(rows));
  std::array<int, N> pivot_row;
  pivot_row.fill(-1);
  for (std::size_t i = 0; i < red.size(); ++i) {
    for (std::size_t c = 0; c < N; ++c) {
      if (!red[i][c].is_zero()) {
        pivot_row[c] = static_cast<int>(i);
        break;
      }
    }
  }
  std::vector<FeVec<N>> basis;
  for (std::size_t freec = 0; freec < N; ++freec) {
    if (pivot_row[freec] >= 0) continue;
    auto v = zero_vec<N>(f);
    v[freec] = f.one();
    for (std::size_t c = 0; c < N; ++c) {
      if (pivot_row[c] >= 0) v[c] = red[pivot_row[c]][freec];  // char 2: no sign
    }
    basis.push_back(v);
  }
  return rref(std::move(basis));
}

/// Encodings of a vector, for hashing and ordering.
template <std::size_t N>
std::array<std::uint32_t, N> encode(const FeVec<N>& v) {
  std::array<std::uint32_t, N> out;
  for (std::size_t i = 0; i < N; ++i) out[i] = v[i].bits();
  return out;
}

}  // namespace hxpw
