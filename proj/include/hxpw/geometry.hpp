#pragma once

// Projective geometry of PG(3,q^2) with the hermitian polar space H(3,q^2),
// the embedded symplectic space W-hat, the Klein correspondence onto PG(5),
// and the GF(q)-subspace V-tilde carrying the elliptic quadric Q^-(5,q).

#include <algorithm>
#include <array>
#include <cstdint>
#include <stdexcept>
#include <unordered_set>
#include <vector>

#include "hxpw/field.hpp"
#include "hxpw/linalg.hpp"

namespace hxpw {

using Vec4 = FeVec<4>;
using Vec6 = FeVec<6>;

/// 64-bit key of a 4-vector whose encodings fit in 16 bits each (h <= 4).
inline std::uint64_t pack4(const Vec4& v) {
  std::uint64_t k = 0;
  for (const auto& x : v) k = (k << 16) | x.bits();
  return k;
}

/// Point of PG(3,q^2) with its first nonzero coordinate equal to 1.
struct ProjPoint4 {
  Vec4 v;

  static ProjPoint4 of(const Vec4& raw) { return ProjPoint4{normalize(raw)}; }
  std::uint64_t key() const { return pack4(v); }
  friend bool operator==(const ProjPoint4& a, const ProjPoint4& b) { return a.key() == b.key(); }
  friend bool operator<(const ProjPoint4& a, const ProjPoint4& b) { return a.key() < b.key(); }
};

struct LineKey {
  std::uint64_t hi = 0, lo = 0;
  friend bool operator==(const LineKey& a, const LineKey& b) { return a.hi == b.hi && a.lo == b.lo; }
  friend bool operator<(const LineKey& a, const LineKey& b) {
    return a.hi != b.hi ? a.hi < b.hi : a.lo < b.lo;
  }
};

struct LineKeyHash {
  std::size_t operator()(const LineKey& k) const {
    return std::hash<std::uint64_t>()(k.hi * 0x9e3779b97f4a7c15ULL ^ k.lo);
  }
};

/// Line of PG(3,q^2) stored as its 2x4 reduced row-echelon basis, which is
/// unique, so equality is bitwise.
struct Line4 {
  std::array<Vec4, 2> rows;

  static Line4 span(const Vec4& a, const Vec4& b) {
    auto red = rref<4>({a, b});
    if (red.size() != 2) throw std::invalid_argument("vectors do not span a line");
    return Line4{{red[0], red[1]}};
  }
  LineKey key() const { return LineKey{pack4(rows[0]), pack4(rows[1])}; }
  friend bool operator==(const Line4& a, const Line4& b) { return a.key() == b.key(); }
  friend bool operator<(const Line4& a, const Line4& b) { return a.key() < b.key(); }

  /// The q^2+1 points, ordered as row0 + c*row1 for c ascending, then row1.
  std::vector<ProjPoint4> points(const Field& f) const {
    std::vector<ProjPoint4> out;
    out.reserve(f.gf_q2().size() + 1);
    for (const Fe& c : f.gf_q2()) out.push_back(ProjPoint4::of(add(rows[0], scale(c, rows[1]))));
    out.push_back(ProjPoint4::of(rows[1]));
    return out;
  }
};

/// Number of common points of two lines: 0, 1, or q^2+1 when equal.
inline std::size_t meet_size(const Field& f, const Line4& l, const Line4& m) {
  switch (rank<4>({l.rows[0], l.rows[1], m.rows[0], m.rows[1]})) {
    case 4: return 0;
    case 3: return 1;
    default: return f.gf_q2().size() + 1;
  }
}

/// (alpha, x^q, x, beta) with alpha, beta in GF(q) and x in GF(q^2).
struct WHatVec {
  Fe alpha, x, beta;

  static WHatVec make(const Field& f, Fe alpha, Fe x, Fe beta) {
    if (!f.in_gf_q(alpha) || !f.in_gf_q(beta) || !f.in_gf_q2(x)) {
      throw std::invalid_argument("malformed W-hat vector");
    }
    return WHatVec{alpha, x, beta};
  }
  static WHatVec from_vec4(const Field& f, const Vec4& v) {
    if (v[1] != v[2].frob(f.h())) throw std::invalid_argument("malformed W-hat vector");
    return make(f, v[0], v[2], v[3]);
  }
  Vec4 vec4(const Field& f) const { return {alpha, x.frob(f.h()), x, beta}; }
};

/// Element (x, x^q, y, y^q, z, z^q) of V-tilde, stored by (x, y, z).
struct VTilde {
  Fe x, y, z;

  Vec6 expand(const Field& f) const {
    const int h = f.h();
    return {x, x.frob(h), y, y.frob(h), z, z.frob(h)};
  }
  static VTilde from_vec6(const Field& f, const Vec6& v) {
    const int h = f.h();
    for (int i = 0; i < 6; i += 2) {
      if (!f.in_gf_q2(v[i]) || v[i + 1] != v[i].frob(h)) {
        throw std::invalid_argument("vector is not in V-tilde");
      }
    }
    return VTilde{v[0], v[2], v[4]};
  }
  friend VTilde operator+(const VTilde& a, const VTilde& b) {
    return VTilde{a.x + b.x, a.y + b.y, a.z + b.z};
  }
  friend VTilde operator*(Fe c, const VTilde& a) { return VTilde{c * a.x, c * a.y, c * a.z}; }
  bool is_zero() const { return x.is_zero() && y.is_zero() && z.is_zero(); }
};

struct LinesThrough {
  std::vector<Line4> lines;
  std::vector<bool> meets_what;
};

class Geometry {
 public:
  explicit Geometry(FieldPtr field) : f_(std::move(field)) {}

  const Field& field() const { return *f_; }
  const FieldPtr& field_ptr() const { return f_; }
  int h() const { return f_->h(); }
  std::uint64_t q() const { return f_->q(); }

  Vec4 vec4(std::uint32_t a, std::uint32_t b, std::uint32_t c, std::uint32_t d) const {
    return {f_->elem(a), f_->elem(b), f_->elem(c), f_->elem(d)};
  }

  // ---- hermitian form and the involution tau ------------------------------

  /// h(X,Y) = X1 Y4^q + X2 Y2^q + X3 Y3^q + X4 Y1^q.
  Fe hermitian(const Vec4& u, const Vec4& v) const {
    const int k = h();
    return u[0] * v[3].frob(k) + u[1] * v[1].frob(k) + u[2] * v[2].frob(k) + u[3] * v[0].frob(k);
  }
  bool is_isotropic(const ProjPoint4& p) const { return hermitian(p.v, p.v).is_zero(); }
  bool is_totally_isotropic(const Line4& l) const {
    return hermitian(l.rows[0], l.rows[0]).is_zero() && hermitian(l.rows[1], l.rows[1]).is_zero() &&
           hermitian(l.rows[0], l.rows[1]).is_zero();
  }

  /// (X1,X2,X3,X4) -> (X1^q, X3^q, X2^q, X4^q).
  Vec4 tau(const Vec4& v) const {
    const int k = h();
    return {v[0].frob(k), v[2].frob(k), v[1].frob(k), v[3].frob(k)};
  }
  ProjPoint4 tau(const ProjPoint4& p) const { return ProjPoint4::of(tau(p.v)); }
  Line4 tau(const Line4& l) const { return Line4::span(tau(l.rows[0]), tau(l.rows[1])); }

  // ---- W-hat ----------------------------------------------------------------

  /// A point is spanned by a W-hat vector iff it is fixed by tau: the fixed
  /// vectors of tau are exactly the W-hat vectors, and a fixed point can be
  /// rescaled to a fixed vector.
  bool in_what(const ProjPoint4& p) const { return tau(p) == p; }

  /// l contains a W-hat point iff l meets its tau-image.
  bool meets_what(const Line4& l) const {
    const Line4 t = tau(l);
    return rank<4>({l.rows[0], l.rows[1], t.rows[0], t.rows[1]}) <= 3;
  }

  /// Extended totally isotropic line of W(3,q).
  bool is_what_line(const Line4& l) const { return tau(l) == l && is_totally_isotropic(l); }

  Fe qhat(const WHatVec& u) const { return u.alpha * u.beta + u.x.pow(q() + 1); }
  Fe bhat(const WHatVec& u, const WHatVec& v) const {
    const int k = h();
    return u.alpha * v.beta + u.beta * v.alpha + u.x * v.x.frob(k) + u.x.frob(k) * v.x;
  }

  // ---- enumeration ------------------------------------------------------------

  /// Every normalised point of PG(3,q^2), in a fixed order.
  template <typename Fn>
  void for_each_point(Fn&& fn) const {
    const auto& k2 = f_->gf_q2();
    const Fe z = f_->zero(), o = f_->one();
    for (const Fe& a : k2)
      for (const Fe& b : k2)
        for (const Fe& c : k2) fn(ProjPoint4{{o, a, b, c}});
    for (const Fe& b : k2)
      for (const Fe& c : k2) fn(ProjPoint4{{z, o, b, c}});
    for (const Fe& c : k2) fn(ProjPoint4{{z, z, o, c}});
    fn(ProjPoint4{{z, z, z, o}});
  }

  std::vector<ProjPoint4> isotropic_points() const {
    std::vector<ProjPoint4> out;
    for_each_point([&](const ProjPoint4& p) {
      if (is_isotropic(p)) out.push_back(p);
    });
    return out;
  }

  /// Points of PG(3,q^2) spanned by a W-hat vector.
  std::vector<ProjPoint4> what_points() const {
    std::vector<ProjPoint4> out;
    for_each_point([&](const ProjPoint4& p) {
      if (in_what(p)) out.push_back(p);
    });
    return out;
  }

  /// The q+1 totally isotropic lines through an isotropic point, sorted, each
  /// flagged by whether it meets W-hat.
  LinesThrough h_lines_through(const ProjPoint4& p) const {
    if (!is_isotropic(p)) throw std::invalid_argument("point is not isotropic");
    const Field& f = *f_;
    const int k = h();
    // p^perp = { v : h(v,p) = 0 }, a plane through p.
    const Vec4 functional = {p.v[3].frob(k), p.v[1].frob(k), p.v[2].frob(k), p.v[0].frob(k)};
    const auto plane = null_space<4>(f, {functional});
    std::vector<Vec4> comp;
    for (const auto& b : plane) {
      std::vector<Vec4> trial = {p.v};
      trial.insert(trial.end(), comp.begin(), comp.end());
      trial.push_back(b);
      if (rank<4>(trial) == trial.size()) comp.push_back(b);
      if (comp.size() == 2) break;
    }
    if (comp.size() != 2) throw std::logic_error("degenerate tangent plane");
    LinesThrough out;
    auto consider = [&](const Vec4& v) {
      if (hermitian(v, v).is_zero()) out.lines.push_back(Line4::span(p.v, v));
    };
    for (const Fe& c : f.gf_q2()) consider(add(comp[0], scale(c, comp[1])));
    consider(comp[1]);
    std::sort(out.lines.begin(), out.lines.end());
    for (const auto& l : out.lines) out.meets_what.push_back(meets_what(l));
    return out;
  }

  /// All lines of H(3,q^2), sorted.
  std::vector<Line4> h_lines() const {
    std::vector<Line4> all;
    std::unordered_set<LineKey, LineKeyHash> seen;
    for (const auto& p : isotropic_points()) {
      for (const auto& l : h_lines_through(p).lines) {
        if (seen.insert(l.key()).second) all.push_back(l);
      }
    }
    std::sort(all.begin(), all.end());
    return all;
  }

  // ---- Klein correspondence ---------------------------------------------------

  /// Plücker coordinates (p01, p02, p03, p12, p31, p23), p_ij = x_i y_j + x_j y_i,
  /// normalised projectively.  The image satisfies X1X6 + X2X5 + X3X4 = 0.
  Vec6 klein_map(const Line4& l) const {
    const Vec4& a = l.rows[0];
    const Vec4& b = l.rows[1];
    auto p = [&](int i, int j) { return a[i] * b[j] + a[j] * b[i]; };
    const Vec6 raw = {p(0, 1), p(0, 2), p(0, 3), p(1, 2), p(3, 1), p(2, 3)};
    if (is_zero_vec(raw)) throw std::invalid_argument("rank-deficient line");
    return normalize(raw);
  }

  static Fe klein_quadric(const Vec6& x) { return x[0] * x[5] + x[1] * x[4] + x[2] * x[3]; }

  // ---- V-tilde ------------------------------------------------------------------

  /// Q~(w) = x z^q + x^q z + y^{q+1}.
  Fe qtilde(const VTilde& w) const {
    const int k = h();
    return w.x * w.z.frob(k) + w.x.frob(k) * w.z + w.y.pow(q() + 1);
  }
  /// b~(w,w') = x z'^q + x^q z' + y y'^q + y^q y' + z x'^q + z^q x'.
  Fe btilde(const VTilde& a, const VTilde& b) const {
    const int k = h();
    return a.x * b.z.frob(k) + a.x.frob(k) * b.z + a.y * b.y.frob(k) + a.y.frob(k) * b.y +
           a.z * b.x.frob(k) + a.z.frob(k) * b.x;
  }

  /// Scalar multiple of v lying in V-tilde, if v spans a point of PG(V-tilde).
  /// Uses the semilinear involution T fixing V-tilde: if T(v) = mu v then
  /// lambda v + T(lambda v) is a nonzero fixed vector for a suitable lambda.
  VTilde vtilde_representative(const Vec6& v) const {
    const Field& f = *f_;
    const int k = h();
    auto T = [&](const Vec6& u) -> Vec6 {
      return {u[1].frob(k), u[0].frob(k), u[3].frob(k), u[2].frob(k), u[5].frob(k), u[4].frob(k)};
    };
    for (const Fe& lambda : {f.one(), f.zeta()}) {
      const Vec6 lv = scale(lambda, v);
      const Vec6 fixed = add(lv, T(lv));
      if (!is_zero_vec(fixed)) {
        if (rank<6>({fixed, v}) != 1) break;
        return VTilde::from_vec6(f, fixed);
      }
    }
    throw std::invalid_argument("vector does not span a point of V-tilde");
  }

  /// GF(q)-coordinates (x_a, x_b, y_a, y_b, z_a, z_b) with u = u_a + u_b zeta.
  FeVec<6> coords(const VTilde& w) const {
    FeVec<6> out;
    const Fe parts[3] = {w.x, w.y, w.z};
    for (int i = 0; i < 3; ++i) {
      const Fe b = parts[i] + parts[i].frob(h());
      out[2 * i] = parts[i] + b * f_->zeta();
      out[2 * i + 1] = b;
    }
    return out;
  }
  VTilde from_coords(const FeVec<6>& c) const {
    const Fe zt = f_->zeta();
    return VTilde{c[0] + c[1] * zt, c[2] + c[3] * zt, c[4] + c[5] * zt};
  }

  /// Canonical GF(q)-coordinates of the point <w> of PG(V-tilde).
  FeVec<6> vpoint(const VTilde& w) const { return normalize(coords(w)); }

  /// GF(q)-basis (RREF in coordinates) of the b~-orthogonal complement.
  std::vector<VTilde> perp(const std::vector<VTilde>& xs) const {
    std::vector<FeVec<6>> rows;
    for (const auto& u : xs) {
      FeVec<6> row;
      for (int j = 0; j < 6; ++j) {
        auto e = zero_vec<6>(*f_);
        e[j] = f_->one();
        row[j] = btilde(from_coords(e), u);
      }
      rows.push_back(row);
    }
    std::vector<VTilde> out;
    for (const auto& c : null_space<6>(*f_, rows)) out.push_back(from_coords(c));
    return out;
  }

  std::size_t vtilde_rank(const std::vector<VTilde>& xs) const {
    std::vector<FeVec<6>> rows;
    for (const auto& w : xs) rows.push_back(coords(w));
    return rank<6>(rows);
  }

  /// All points of PG of the GF(q)-span, as canonical coordinates.
  std::vector<FeVec<6>> span_points(const std::vector<VTilde>& basis) const {
    const auto& kq = f_->gf_q();
    const std::size_t dim = basis.size();
    std::vector<FeVec<6>> out;
    std::vector<std::size_t> idx(dim, 0);
    std::size_t total = 1;
    for (std::size_t i = 0; i < dim; ++i) total *= kq.size();
    for (std::size_t n = 1; n < total; ++n) {
      std::size_t m = n;
      VTilde w{f_->zero(), f_->zero(), f_->zero()};
      for (std::size_t i = 0; i < dim; ++i) {
        w = w + kq[m % kq.size()] * basis[i];
        m /= kq.size();
      }
      if (!w.is_zero()) out.push_back(vpoint(w));
    }
    std::sort(out.begin(), out.end(), [](const FeVec<6>& a, const FeVec<6>& b) {
      return encode(a) < encode(b);
    });
    out.erase(std::unique(out.begin(), out.end(),
                          [](const FeVec<6>& a, const FeVec<6>& b) { return encode(a) == encode(b); }),
              out.end());
    return out;
  }

  /// Gamma = {(x, x^q, c, c, z, z^q) : c in GF(q)} contains <w>.
  bool in_gamma(const VTilde& w) const { return f_->in_gf_q(w.y); }

  VTilde w0() const { return VTilde{f_->zero(), f_->one(), f_->zero()}; }

 private:
  FieldPtr f_;
};

}  // namespace hxpw
