#pragma once

// Symmetric association schemes given by relation tables: axiom check,
// intersection numbers, exact eigenmatrices, Krein parameters, polynomial
// orderings, fusions, strong regularity and primitivity.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "hxpw/parallel.hpp"

namespace hxpw {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;
using RatMatrix = std::vector<std::vector<Rational>>;

/// "num/den" with den >= 1.
inline std::string rat_str(const Rational& r) {
  return numerator(r).str() + "/" + denominator(r).str();
}

/// n x n table of class indices; 0 exactly on the diagonal.
class RelationTable {
 public:
  RelationTable() = default;
  RelationTable(std::size_t n, int d) : n_(n), d_(d), cls_(n * n, 0) {
    if (d < 1 || d > 255) throw std::invalid_argument("class count out of range");
  }

  std::size_t n() const { return n_; }
  int d() const { return d_; }
  std::uint8_t operator()(std::size_t x, std::size_t y) const { return cls_[x * n_ + y]; }
  void set(std::size_t x, std::size_t y, int c) {
    if (c < 0 || c > d_) throw std::invalid_argument("class index out of range");
    cls_[x * n_ + y] = static_cast<std::uint8_t>(c);
    cls_[y * n_ + x] = static_cast<std::uint8_t>(c);
  }
  const std::vector<std::uint8_t>& data() const { return cls_; }

  /// Throws unless the table is symmetric with 0 exactly on the diagonal.
  void validate() const {
    for (std::size_t x = 0; x < n_; ++x) {
      if ((*this)(x, x) != 0) throw std::invalid_argument("nonzero diagonal entry");
      for (std::size_t y = x + 1; y < n_; ++y) {
        if ((*this)(x, y) != (*this)(y, x)) throw std::invalid_argument("table is not symmetric");
        if ((*this)(x, y) == 0 || (*this)(x, y) > d_) {
          throw std::invalid_argument("invalid off-diagonal class");
        }
      }
    }
  }

  /// Unordered pair counts per class (index 0 unused).
  std::vector<std::uint64_t> class_pair_counts() const {
    std::vector<std::uint64_t> c(d_ + 1, 0);
    for (std::size_t x = 0; x < n_; ++x)
      for (std::size_t y = x + 1; y < n_; ++y) ++c[(*this)(x, y)];
    return c;
  }

  std::vector<int> empty_classes() const {
    const auto c = class_pair_counts();
    std::vector<int> out;
    for (int i = 1; i <= d_; ++i)
      if (c[i] == 0) out.push_back(i);
    return out;
  }

  friend bool operator==(const RelationTable& a, const RelationTable& b) {
    return a.n_ == b.n_ && a.d_ == b.d_ && a.cls_ == b.cls_;
  }

 private:
  std::size_t n_ = 0;
  int d_ = 0;
  std::vector<std::uint8_t> cls_;
};

/// Packed 0/1 adjacency rows.
class BitRows {
 public:
  BitRows(std::size_t n) : n_(n), words_((n + 63) / 64), bits_(n * words_, 0) {}
  void set(std::size_t x, std::size_t y) { bits_[x * words_ + y / 64] |= std::uint64_t{1} << (y % 64); }
  bool test(std::size_t x, std::size_t y) const {
    return (bits_[x * words_ + y / 64] >> (y % 64)) & 1;
  }
  const std::uint64_t* row(std::size_t x) const { return bits_.data() + x * words_; }
  std::size_t words() const { return words_; }
  std::size_t n() const { return n_; }

  static std::uint64_t common(const BitRows& a, std::size_t x, const BitRows& b, std::size_t y) {
    const std::uint64_t* ra = a.row(x);
    const std::uint64_t* rb = b.row(y);
    std::uint64_t c = 0;
    for (std::size_t w = 0; w < a.words_; ++w) c += static_cast<std::uint64_t>(std::popcount(ra[w] & rb[w]));
    return c;
  }

 private:
  std::size_t n_, words_;
  std::vector<std::uint64_t> bits_;
};

inline BitRows class_graph(const RelationTable& t, const std::vector<int>& classes) {
  std::vector<bool> in(t.d() + 1, false);
  for (int c : classes) in.at(c) = true;
  BitRows g(t.n());
  for (std::size_t x = 0; x < t.n(); ++x)
    for (std::size_t y = 0; y < t.n(); ++y)
      if (x != y && in[t(x, y)]) g.set(x, y);
  return g;
}

class NotAScheme : public std::runtime_error {
 public:
  NotAScheme(int k_, int i_, int j_, std::size_t x_, std::size_t y_, std::int64_t want, std::int64_t got)
      : std::runtime_error(describe(k_, i_, j_, x_, y_, want, got)),
        k(k_), i(i_), j(j_), x(x_), y(y_), expected(want), found(got) {}
  int k, i, j;
  std::size_t x, y;
  std::int64_t expected, found;

 private:
  static std::string describe(int k, int i, int j, std::size_t x, std::size_t y, std::int64_t want,
                              std::int64_t got) {
    std::ostringstream os;
    os << "not a scheme: p^" << k << "_{" << i << j << "} is " << got << " at pair (" << x << ","
       << y << ") but " << want << " at the reference pair";
    return os.str();
  }
};

struct SchemeAnalytics {
  std::size_t n = 0;
  int d = 0;
  std::vector<std::int64_t> valencies;
  /// p[k][i][j] = |{z : (x,z) in R_i, (z,y) in R_j}| for (x,y) in R_k.
  std::vector<std::vector<std::vector<std::int64_t>>> p;

  /// B_i[j][k] = p^k_{ij}.  Rows of P are right eigenvectors of every B_i.
  RatMatrix intersection_matrix(int i) const {
    RatMatrix b(d + 1, std::vector<Rational>(d + 1));
    for (int j = 0; j <= d; ++j)
      for (int k = 0; k <= d; ++k) b[j][k] = p[k][i][j];
    return b;
  }
};

/// Checks every composition count p^k_{ij} is independent of the base pair.
/// Throws NotAScheme with the first witness (lowest x, then y) otherwise.
inline SchemeAnalytics verify_scheme(const RelationTable& t, unsigned threads = 1) {
  t.validate();
  const std::size_t n = t.n();
  const int d = t.d();
  std::vector<BitRows> adj;
  adj.reserve(d + 1);
  for (int c = 0; c <= d; ++c) adj.emplace_back(n);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) adj[t(x, y)].set(x, y);

  using Counts = std::vector<std::vector<std::int64_t>>;
  auto counts_at = [&](std::size_t x, std::size_t y) {
    Counts c(d + 1, std::vector<std::int64_t>(d + 1, 0));
    for (int i = 0; i <= d; ++i)
      for (int j = 0; j <= d; ++j)
        c[i][j] = static_cast<std::int64_t>(BitRows::common(adj[i], x, adj[j], y));
    return c;
  };

  SchemeAnalytics a;
  a.n = n;
  a.d = d;
  a.p.assign(d + 1, Counts());
  std::vector<bool> have(d + 1, false);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = x; y < n; ++y) {
      const int k = t(x, y);
      if (!have[k]) {
        have[k] = true;
        a.p[k] = counts_at(x, y);
      }
    }
  for (int k = 0; k <= d; ++k) {
    if (!have[k]) throw std::invalid_argument("class " + std::to_string(k) + " is empty");
    for (int i = 0; i <= d; ++i)
      for (int j = 0; j < i; ++j)
        if (a.p[k][i][j] != a.p[k][j][i]) {
          std::size_t rx = 0, ry = 0;
          for (std::size_t x = 0; x < n && rx == ry; ++x)
            for (std::size_t y = x; y < n; ++y)
              if (t(x, y) == k) {
                rx = x;
                ry = y;
                break;
              }
          throw NotAScheme(k, i, j, ry, rx, a.p[k][i][j], a.p[k][j][i]);
        }
  }

  struct Witness {
    bool found = false;
    std::size_t x = 0, y = 0;
    int k = 0, i = 0, j = 0;
    std::int64_t want = 0, got = 0;
  };
  std::vector<Witness> per_row(n);
  parallel_rows(n, threads, [&](std::size_t x) {
    for (std::size_t y = x; y < n; ++y) {
      const int k = t(x, y);
      const auto& ref = a.p[k];
      for (int i = 0; i <= d; ++i)
        for (int j = 0; j <= d; ++j) {
          const auto got = static_cast<std::int64_t>(BitRows::common(adj[i], x, adj[j], y));
          if (got != ref[i][j]) {
            per_row[x] = Witness{true, x, y, k, i, j, ref[i][j], got};
            return;
          }
        }
    }
  });
  for (const auto& w : per_row) {
    if (w.found) throw NotAScheme(w.k, w.i, w.j, w.x, w.y, w.want, w.got);
  }
  a.valencies.resize(d + 1);
  for (int i = 0; i <= d; ++i) a.valencies[i] = a.p[0][i][i];
  return a;
}

/// Standard identities p^k_{ij} = p^k_{ji} and k_k p^k_{ij} = k_i p^i_{kj}.
inline bool check_intersection_identities(const SchemeAnalytics& a) {
  for (int k = 0; k <= a.d; ++k)
    for (int i = 0; i <= a.d; ++i)
      for (int j = 0; j <= a.d; ++j) {
        if (a.p[k][i][j] != a.p[k][j][i]) return false;
        if (a.valencies[k] * a.p[k][i][j] != a.valencies[i] * a.p[i][k][j]) return false;
      }
  return true;
}

// ---- exact rational linear algebra ---------------------------------------------

namespace ratla {

inline RatMatrix identity(std::size_t n) {
  RatMatrix m(n, std::vector<Rational>(n, Rational(0)));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

inline RatMatrix mul(const RatMatrix& a, const RatMatrix& b) {
  const std::size_t n = a.size(), m = b[0].size(), k = b.size();
  RatMatrix c(n, std::vector<Rational>(m, Rational(0)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t l = 0; l < k; ++l)
      if (a[i][l] != 0)
        for (std::size_t j = 0; j < m; ++j) c[i][j] += a[i][l] * b[l][j];
  return c;
}

/// RREF in place; returns pivot columns.
inline std::vector<std::size_t> rref(RatMatrix& m) {
  std::vector<std::size_t> pivots;
  if (m.empty()) return pivots;
  const std::size_t cols = m[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < m.size(); ++c) {
    std::size_t piv = r;
    while (piv < m.size() && m[piv][c] == 0) ++piv;
    if (piv == m.size()) continue;
    std::swap(m[r], m[piv]);
    const Rational inv = 1 / m[r][c];
    for (auto& v : m[r]) v *= inv;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i == r || m[i][c] == 0) continue;
      const Rational f = m[i][c];
      for (std::size_t j = 0; j < cols; ++j) m[i][j] -= f * m[r][j];
    }
    pivots.push_back(c);
    ++r;
  }
  m.resize(r);
  return pivots;
}

/// Column vectors spanning the null space of m (rows x cols).
inline std::vector<std::vector<Rational>> null_space(RatMatrix m, std::size_t cols) {
  const auto pivots = rref(m);
  std::vector<std::vector<Rational>> basis;
  std::vector<int> pivot_row(cols, -1);
  for (std::size_t r = 0; r < pivots.size(); ++r) pivot_row[pivots[r]] = static_cast<int>(r);
  for (std::size_t f = 0; f < cols; ++f) {
    if (pivot_row[f] >= 0) continue;
    std::vector<Rational> v(cols, Rational(0));
    v[f] = 1;
    for (std::size_t c = 0; c < cols; ++c)
      if (pivot_row[c] >= 0) v[c] = -m[pivot_row[c]][f];
    basis.push_back(v);
  }
  return basis;
}

inline std::optional<RatMatrix> inverse(const RatMatrix& a) {
  const std::size_t n = a.size();
  RatMatrix aug(n, std::vector<Rational>(2 * n, Rational(0)));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug[i][j] = a[i][j];
    aug[i][n + i] = 1;
  }
  const auto piv = rref(aug);
  if (piv.size() != n || piv.back() != n - 1) return std::nullopt;
  RatMatrix inv(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv[i][j] = aug[i][n + j];
  return inv;
}

/// Characteristic polynomial det(xI - A), coefficients low degree first,
/// by the Faddeev-LeVerrier recursion.
inline std::vector<Rational> charpoly(const RatMatrix& a) {
  const std::size_t n = a.size();
  std::vector<Rational> c(n + 1, Rational(0));
  c[n] = 1;
  RatMatrix m(n, std::vector<Rational>(n, Rational(0)));
  for (std::size_t k = 1; k <= n; ++k) {
    RatMatrix am = mul(a, m);
    for (std::size_t i = 0; i < n; ++i) am[i][i] += c[n - k + 1];
    m = am;
    const RatMatrix amk = mul(a, m);
    Rational tr = 0;
    for (std::size_t i = 0; i < n; ++i) tr += amk[i][i];
    c[n - k] = -tr / Rational(static_cast<long>(k));
  }
  return c;
}

inline Rational eval(const std::vector<Rational>& poly, const Rational& x) {
  Rational acc = 0;
  for (std::size_t i = poly.size(); i-- > 0;) acc = acc * x + poly[i];
  return acc;
}

/// Divides by (x - r); r must be a root.
inline std::vector<Rational> deflate(const std::vector<Rational>& poly, const Rational& r) {
  const std::size_t n = poly.size() - 1;
  std::vector<Rational> out(n, Rational(0));
  Rational carry = 0;
  for (std::size_t i = n + 1; i-- > 1;) {
    carry = poly[i] + carry * r;
    out[i - 1] = carry;
  }
  return out;
}

}  // namespace ratla

class NonIntegralSpectrum : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Integer roots of an integer polynomial with multiplicity, searched in
/// [-bound, bound].  Throws if any root is not an integer in that range.
inline std::vector<std::pair<std::int64_t, int>> integer_roots(std::vector<Rational> poly,
                                                               std::int64_t bound) {
  std::vector<std::pair<std::int64_t, int>> roots;
  for (std::int64_t r = -bound; r <= bound && poly.size() > 1; ++r) {
    int mult = 0;
    while (poly.size() > 1 && ratla::eval(poly, Rational(r)) == 0) {
      poly = ratla::deflate(poly, Rational(r));
      ++mult;
    }
    if (mult) roots.emplace_back(r, mult);
  }
  if (poly.size() > 1) throw NonIntegralSpectrum("characteristic polynomial has a non-integer root");
  return roots;
}

struct Eigenmatrices {
  /// Rows: eigenspaces (row 0 the valency row); columns: relations.
  RatMatrix P;
  /// Q = n P^{-1}; rows: relations; columns: eigenspaces.
  RatMatrix Q;
  std::vector<Rational> multiplicities;
};

/// First and second eigenmatrices by simultaneous diagonalisation of the
/// intersection matrices.  B_1's eigenspaces are split further by B_2, B_3,
/// ... when eigenvalues repeat.
inline Eigenmatrices eigenmatrix(const SchemeAnalytics& a) {
  const int d = a.d;
  const std::size_t dim = d + 1;
  using Col = std::vector<Rational>;
  std::vector<std::vector<Col>> spaces;
  {
    std::vector<Col> full;
    for (std::size_t i = 0; i < dim; ++i) {
      Col e(dim, Rational(0));
      e[i] = 1;
      full.push_back(e);
    }
    spaces.push_back(full);
  }
  for (int i = 1; i <= d; ++i) {
    bool split_needed = false;
    for (const auto& s : spaces) split_needed |= s.size() > 1;
    if (!split_needed) break;
    const RatMatrix b = a.intersection_matrix(i);
    const auto roots = integer_roots(ratla::charpoly(b), a.valencies[i]);
    std::vector<std::vector<Col>> next;
    for (const auto& s : spaces) {
      if (s.size() == 1) {
        next.push_back(s);
        continue;
      }
      std::size_t covered = 0;
      for (const auto& [theta, mult] : roots) {
        // (B - theta I) V c = 0  ->  eigenvectors V c inside s.
        RatMatrix bv(dim, std::vector<Rational>(s.size(), Rational(0)));
        for (std::size_t r = 0; r < dim; ++r)
          for (std::size_t c = 0; c < s.size(); ++c) {
            Rational acc = 0;
            for (std::size_t l = 0; l < dim; ++l) {
              const Rational m = b[r][l] - (r == l ? Rational(theta) : Rational(0));
              acc += m * s[c][l];
            }
            bv[r][c] = acc;
          }
        const auto coeffs = ratla::null_space(bv, s.size());
        if (coeffs.empty()) continue;
        std::vector<Col> sub;
        for (const auto& cf : coeffs) {
          Col v(dim, Rational(0));
          for (std::size_t c = 0; c < s.size(); ++c)
            for (std::size_t l = 0; l < dim; ++l) v[l] += cf[c] * s[c][l];
          sub.push_back(v);
        }
        covered += sub.size();
        next.push_back(sub);
      }
      if (covered != s.size()) throw std::runtime_error("intersection matrix is not diagonalisable");
    }
    spaces = std::move(next);
  }
  if (spaces.size() != dim) throw std::runtime_error("eigenspaces could not be separated");

  Eigenmatrices out;
  std::vector<std::vector<Rational>> rows;
  for (const auto& s : spaces) {
    Col v = s[0];
    if (v[0] == 0) throw std::runtime_error("eigenvector with zero leading entry");
    const Rational lead = v[0];
    for (auto& x : v) x /= lead;
    rows.push_back(v);
  }
  std::vector<Rational> val_row(a.valencies.begin(), a.valencies.end());
  auto it = std::find(rows.begin(), rows.end(), val_row);
  if (it == rows.end()) throw std::runtime_error("valency row missing from eigenmatrix");
  rows.erase(it);
  std::sort(rows.begin(), rows.end(), [](const Col& x, const Col& y) { return y < x; });
  out.P.push_back(val_row);
  for (auto& r : rows) out.P.push_back(r);

  const auto inv = ratla::inverse(out.P);
  if (!inv) throw std::runtime_error("eigenmatrix is singular");
  out.Q = *inv;
  for (auto& r : out.Q)
    for (auto& x : r) x *= static_cast<long>(a.n);
  Rational total = 0;
  for (std::size_t j = 0; j < dim; ++j) {
    const Rational m = out.Q[0][j];
    if (m <= 0 || denominator(m) != 1) throw std::runtime_error("multiplicity is not a positive integer");
    out.multiplicities.push_back(m);
    total += m;
  }
  if (total != static_cast<long>(a.n)) throw std::runtime_error("multiplicities do not sum to n");
  return out;
}

/// P * Q == n I.
inline bool check_pq(const Eigenmatrices& e, std::size_t n) {
  const auto pq = ratla::mul(e.P, e.Q);
  for (std::size_t i = 0; i < pq.size(); ++i)
    for (std::size_t j = 0; j < pq.size(); ++j)
      if (pq[i][j] != (i == j ? Rational(static_cast<long>(n)) : Rational(0))) return false;
  return true;
}

/// sum_l m_l P[l][i] P[l][j] == n k_i delta_ij.
inline bool check_orthogonality(const Eigenmatrices& e, const SchemeAnalytics& a) {
  const std::size_t dim = e.P.size();
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) {
      Rational s = 0;
      for (std::size_t l = 0; l < dim; ++l) s += e.multiplicities[l] * e.P[l][i] * e.P[l][j];
      const Rational want = i == j ? Rational(static_cast<long>(a.n) * a.valencies[i]) : Rational(0);
      if (s != want) return false;
    }
  return true;
}

/// Krein parameters q[k][i][j] = (m_i m_j / n) sum_l P[i][l] P[j][l] P[k][l] / k_l^2.
inline std::vector<std::vector<std::vector<Rational>>> krein_parameters(const Eigenmatrices& e,
                                                                        const SchemeAnalytics& a) {
  const int d = a.d;
  std::vector<std::vector<std::vector<Rational>>> qk(
      d + 1, std::vector<std::vector<Rational>>(d + 1, std::vector<Rational>(d + 1)));
  for (int k = 0; k <= d; ++k)
    for (int i = 0; i <= d; ++i)
      for (int j = 0; j <= d; ++j) {
        Rational s = 0;
        for (int l = 0; l <= d; ++l) {
          const Rational kl = a.valencies[l];
          s += e.P[i][l] * e.P[j][l] * e.P[k][l] / (kl * kl);
        }
        qk[k][i][j] = e.multiplicities[i] * e.multiplicities[j] / Rational(static_cast<long>(a.n)) * s;
      }
  return qk;
}

/// Orderings (0, s_1, ..., s_d) of {0..d} under which the matrix
/// L[j][k] = num[k][s_1][j] is tridiagonal with nonzero off-diagonals.
template <typename Num>
std::vector<std::vector<int>> tridiagonal_orderings(
    const std::vector<std::vector<std::vector<Num>>>& num, int d) {
  std::vector<int> perm(d);
  std::iota(perm.begin(), perm.end(), 1);
  std::vector<std::vector<int>> out;
  do {
    std::vector<int> ord = {0};
    ord.insert(ord.end(), perm.begin(), perm.end());
    const int one = ord[1];
    bool ok = true;
    for (int a = 0; a <= d && ok; ++a)
      for (int b = 0; b <= d && ok; ++b) {
        const bool zero = num[ord[b]][one][ord[a]] == 0;
        if (std::abs(a - b) > 1 && !zero) ok = false;
        if (std::abs(a - b) == 1 && zero) ok = false;
      }
    if (ok) out.push_back(ord);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

struct KreinReport {
  std::vector<std::vector<std::vector<Rational>>> q;
  bool nonnegative = true;
  std::vector<std::vector<int>> q_polynomial_orderings;
  std::vector<std::vector<int>> p_polynomial_orderings;
};

class NegativeKrein : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline KreinReport krein_and_qpoly(const Eigenmatrices& e, const SchemeAnalytics& a) {
  KreinReport r;
  r.q = krein_parameters(e, a);
  for (int k = 0; k <= a.d; ++k)
    for (int i = 0; i <= a.d; ++i)
      for (int j = 0; j <= a.d; ++j)
        if (r.q[k][i][j] < 0) {
          throw NegativeKrein("negative Krein parameter q^" + std::to_string(k) + "_{" +
                              std::to_string(i) + std::to_string(j) + "} = " + rat_str(r.q[k][i][j]));
        }
  r.q_polynomial_orderings = tridiagonal_orderings(r.q, a.d);
  r.p_polynomial_orderings = tridiagonal_orderings(a.p, a.d);
  return r;
}

/// Relabels class c by the index (1-based) of the part containing it.
inline RelationTable fuse(const RelationTable& t, const std::vector<std::vector<int>>& grouping) {
  std::vector<int> part(t.d() + 1, 0);
  for (std::size_t g = 0; g < grouping.size(); ++g) {
    if (grouping[g].empty()) throw std::invalid_argument("empty part in fusion");
    for (int c : grouping[g]) {
      if (c < 1 || c > t.d() || part[c] != 0) throw std::invalid_argument("grouping is not a partition");
      part[c] = static_cast<int>(g) + 1;
    }
  }
  for (int c = 1; c <= t.d(); ++c)
    if (part[c] == 0) throw std::invalid_argument("grouping is not a partition");
  RelationTable out(t.n(), static_cast<int>(grouping.size()));
  for (std::size_t x = 0; x < t.n(); ++x)
    for (std::size_t y = x + 1; y < t.n(); ++y) out.set(x, y, part[t(x, y)]);
  return out;
}

struct SrgResult {
  bool ok = false;
  /// Complete or empty graph: mu (or lambda) undefined.
  bool degenerate = false;
  std::int64_t v = 0, k = 0, lambda = -1, mu = -1;
  std::string witness;
};

/// Strong regularity of the graph formed by the union of the given classes,
/// by counting common neighbours of every vertex pair.
inline SrgResult srg_check(const RelationTable& t, const std::vector<int>& merged, unsigned threads = 1) {
  if (merged.empty()) throw std::invalid_argument("empty class union");
  const BitRows g = class_graph(t, merged);
  const std::size_t n = t.n();
  SrgResult r;
  r.v = static_cast<std::int64_t>(n);
  std::vector<std::int64_t> deg(n);
  for (std::size_t x = 0; x < n; ++x) deg[x] = static_cast<std::int64_t>(BitRows::common(g, x, g, x));
  r.k = deg[0];
  for (std::size_t x = 0; x < n; ++x)
    if (deg[x] != r.k) {
      r.witness = "vertex " + std::to_string(x) + " has degree " + std::to_string(deg[x]);
      return r;
    }
  if (r.k == static_cast<std::int64_t>(n) - 1 || r.k == 0) {
    r.degenerate = true;
    r.ok = true;
    if (r.k > 0) r.lambda = r.k - 1;
    return r;
  }
  std::vector<std::int64_t> lam(n, -1), mu(n, -1);
  std::vector<std::string> bad(n);
  parallel_rows(n, threads, [&](std::size_t x) {
    for (std::size_t y = x + 1; y < n; ++y) {
      const auto c = static_cast<std::int64_t>(BitRows::common(g, x, g, y));
      auto& slot = g.test(x, y) ? lam[x] : mu[x];
      if (slot < 0) slot = c;
      if (slot != c) {
        bad[x] = "pair (" + std::to_string(x) + "," + std::to_string(y) + ") has " + std::to_string(c) +
                 " common neighbours";
        return;
      }
    }
  });
  for (std::size_t x = 0; x < n; ++x) {
    if (!bad[x].empty()) {
      r.witness = bad[x];
      return r;
    }
    for (auto* target : {&r.lambda, &r.mu}) {
      const std::int64_t val = target == &r.lambda ? lam[x] : mu[x];
      if (val < 0) continue;
      if (*target < 0) *target = val;
      if (*target != val) {
        r.witness = "vertex " + std::to_string(x) + " disagrees on " +
                    std::string(target == &r.lambda ? "lambda" : "mu");
        return r;
      }
    }
  }
  r.ok = true;
  return r;
}

/// Whether the graph of each class 1..d is connected.
inline std::vector<bool> class_connectivity(const RelationTable& t) {
  std::vector<bool> out(t.d() + 1, true);
  const std::size_t n = t.n();
  for (int c = 1; c <= t.d(); ++c) {
    std::vector<bool> seen(n, false);
    std::vector<std::size_t> stack = {0};
    seen[0] = true;
    std::size_t reached = 1;
    while (!stack.empty()) {
      const std::size_t x = stack.back();
      stack.pop_back();
      for (std::size_t y = 0; y < n; ++y)
        if (!seen[y] && t(x, y) == c) {
          seen[y] = true;
          ++reached;
          stack.push_back(y);
        }
    }
    out[c] = reached == n;
  }
  return out;
}

inline bool is_primitive(const RelationTable& t) {
  const auto conn = class_connectivity(t);
  return std::all_of(conn.begin() + 1, conn.end(), [](bool b) { return b; });
}

}  // namespace hxpw
