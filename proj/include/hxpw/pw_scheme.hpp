#pragma once

// The hermitian side: the relative hemisystem {m_t} of H(3,q^2) with respect
// to W(3,q), its subtended spreads, the geometric three-class relations, the
// Klein-quadric description through w_t and w'_t, and the PSL(2,q^2) action
// transported by g -> g (x) g^q.

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "hxpw/field.hpp"
#include "hxpw/geometry.hpp"
#include "hxpw/hx_scheme.hpp"
#include "hxpw/parallel.hpp"
#include "hxpw/scheme.hpp"

namespace hxpw {

struct HemiLine {
  Line4 line;
  TPair source;
  VTilde w;        ///< Klein image of line
  VTilde w_prime;  ///< Klein image of tau(line)
};

/// Sorted W-hat lines meeting a fixed line disjoint from W-hat.
struct Spread {
  std::vector<Line4> lines;
  std::vector<LineKey> keys() const {
    std::vector<LineKey> k;
    k.reserve(lines.size());
    for (const auto& l : lines) k.push_back(l.key());
    return k;
  }
};

inline std::size_t spread_meet(const Spread& a, const Spread& b) {
  std::size_t i = 0, j = 0, c = 0;
  while (i < a.lines.size() && j < b.lines.size()) {
    const LineKey ka = a.lines[i].key(), kb = b.lines[j].key();
    if (ka == kb) {
      ++c;
      ++i;
      ++j;
    } else if (ka < kb) {
      ++i;
    } else {
      ++j;
    }
  }
  return c;
}

enum class SpreadMethod { enumerate, tau_span };

class CertificateFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct KleinClassification {
  int cls = 0;
  Fe b_st;        ///< b~(w_s, w_t)
  Fe b_st_prime;  ///< b~(w_s, w'_t)
  Fe trace_s;     ///< Tr(s^{q+1})
  Fe trace_t;     ///< Tr(t^{q+1})
  Fe q_radical;   ///< Q~(v_{s,t})
  bool factorization_holds = false;
  bool radical_orthogonal = false;
};

struct HemisystemReport {
  bool ok = false;
  std::size_t lines = 0;
  std::size_t external_points = 0;
  std::size_t covered_points = 0;
  std::size_t incidences = 0;
  int min_count = 0, max_count = 0;
  std::string witness;
};

using Mat2 = std::array<Fe, 4>;  // [[a, b], [c, d]] row-major
using Mat4 = std::array<Vec4, 4>;

struct EquivarianceReport {
  bool ok = false;
  std::size_t samples = 0;
  std::size_t diagram_failures = 0;
  std::size_t isometry_failures = 0;
};

struct OrbitReport {
  bool ok = false;
  std::size_t orbit_size = 0;
  bool equals_hemisystem = false;
  bool touched_tau_image = false;
  bool images_disjoint_from_what = true;
};

class PwScheme {
 public:
  explicit PwScheme(const HxScheme& hx) : hx_(hx), geom_(hx.field_ptr()) {
    lines_.reserve(hx.n());
    for (const auto& tp : hx.pairs()) lines_.push_back(m_line(tp));
    for (std::size_t i = 0; i < lines_.size(); ++i) line_index_[lines_[i].line.key()] = i;
    if (line_index_.size() != lines_.size()) throw CertificateFailure("t -> m_t is not injective");
  }

  const Geometry& geometry() const { return geom_; }
  const Field& field() const { return geom_.field(); }
  const HxScheme& hx() const { return hx_; }
  const std::vector<HemiLine>& hemisystem() const { return lines_; }
  std::size_t n() const { return lines_.size(); }
  std::optional<std::size_t> line_index(const Line4& l) const {
    auto it = line_index_.find(l.key());
    if (it == line_index_.end()) return std::nullopt;
    return it->second;
  }

  /// (1, t^q, t, t^{q+1}) for finite t; (0,0,0,1) for infinity.
  Vec4 theta_vec(std::optional<Fe> t) const {
    const Field& f = field();
    if (!t) return {f.zero(), f.zero(), f.zero(), f.one()};
    const int h = f.h();
    return {f.one(), t->frob(h), *t, t->pow(f.q() + 1)};
  }
  ProjPoint4 theta(std::optional<Fe> t) const { return ProjPoint4::of(theta_vec(t)); }

  /// lambda theta(t) + lambda^{q^2} theta(t^{q^2}), a GF(q^2)-rational vector.
  Vec4 x_lambda(Fe t, Fe lambda) const {
    const Fe lc = hx_.conj(lambda);
    return add(scale(lambda, theta_vec(t)), scale(lc, theta_vec(hx_.conj(t))));
  }

  HemiLine m_line(const TPair& tp) const {
    const Field& f = field();
    const Line4 l = Line4::span(x_lambda(tp.rep, f.one()), x_lambda(tp.rep, f.omega()));
    for (const auto& r : l.rows)
      for (const auto& x : r)
        if (!f.in_gf_q2(x)) throw CertificateFailure("m_t is not GF(q^2)-rational");
    return HemiLine{l, tp, w_vec(tp.rep), w_prime_vec(tp.rep)};
  }

  Line4 tau(const Line4& l) const { return geom_.tau(l); }

  /// Klein image of m_t in V-tilde coordinates.
  VTilde w_vec(Fe t) const {
    const auto p = powers(t);  // t, t^q, t^{q^2}, t^{q^3}
    return VTilde{p[1] + p[3], p[0] * p[1] + p[2] * p[3], p[0] * p[1] * p[3] + p[1] * p[2] * p[3]};
  }
  /// Klein image of tau(m_t): y and y^q exchanged.
  VTilde w_prime_vec(Fe t) const {
    const auto p = powers(t);
    return VTilde{p[1] + p[3], p[1] * p[2] + p[0] * p[3], p[0] * p[1] * p[3] + p[1] * p[2] * p[3]};
  }

  // ---- hemisystem ---------------------------------------------------------------

  /// Every point of H(3,q^2) off W-hat must lie on exactly q/2 of the lines.
  HemisystemReport verify_hemisystem(const std::vector<Line4>& lines) const {
    const Field& f = field();
    const std::uint64_t q = f.q();
    HemisystemReport r;
    r.lines = lines.size();
    std::unordered_map<std::uint64_t, int> count;
    count.reserve(lines.size() * (f.gf_q2().size() + 1));
    for (const auto& l : lines) {
      for (const auto& p : l.points(f)) {
        if (!geom_.is_isotropic(p)) {
          r.witness = "non-isotropic point on a hemisystem line";
          return r;
        }
        if (geom_.in_what(p)) {
          r.witness = "hemisystem line meets W-hat";
          return r;
        }
        ++count[p.key()];
        ++r.incidences;
      }
    }
    if (f.h() <= 3) {
      std::size_t ext = 0;
      geom_.for_each_point([&](const ProjPoint4& p) {
        if (geom_.is_isotropic(p) && !geom_.in_what(p)) {
          ++ext;
          if (!count.count(p.key()) && r.witness.empty()) r.witness = "external point on no line";
        }
      });
      r.external_points = ext;
    } else {
      const std::uint64_t q2 = q * q;
      r.external_points = static_cast<std::size_t>((q2 + 1) * (q2 * q + 1) - (q + 1) * (q2 + 1));
    }
    r.covered_points = count.size();
    r.min_count = count.empty() ? 0 : count.begin()->second;
    r.max_count = r.min_count;
    for (const auto& [key, c] : count) {
      r.min_count = std::min(r.min_count, c);
      r.max_count = std::max(r.max_count, c);
    }
    const int want = static_cast<int>(q / 2);
    if (r.witness.empty() && (r.min_count != want || r.max_count != want)) {
      r.witness = "incidence count outside q/2";
    }
    if (r.witness.empty() && r.covered_points != r.external_points) {
      r.witness = "covered point count differs from the external point count";
    }
    r.ok = r.witness.empty();
    return r;
  }

  std::vector<Line4> hemisystem_lines() const {
    std::vector<Line4> out;
    for (const auto& hl : lines_) out.push_back(hl.line);
    return out;
  }
  std::vector<Line4> tau_lines() const {
    std::vector<Line4> out;
    for (const auto& hl : lines_) out.push_back(tau(hl.line));
    return out;
  }

  // ---- subtended spreads and the geometric relations ----------------------------

  /// For each point of l, the unique W-hat line through it among the q+1
  /// H-lines through the point.  SpreadMethod::tau_span instead takes
  /// <p, tau(p)> directly and checks it is a W-hat line; it skips the
  /// enumeration of lines through p and is used where that is too slow.
  Spread subtended_spread(const Line4& l, bool check_partition = true,
                          SpreadMethod method = SpreadMethod::enumerate) const {
    const Field& f = field();
    if (geom_.meets_what(l)) throw std::invalid_argument("line meets W-hat");
    Spread s;
    for (const auto& p : l.points(f)) {
      std::optional<Line4> pick;
      if (method == SpreadMethod::tau_span) {
        pick = Line4::span(p.v, geom_.tau(p.v));
      } else {
        const auto through = geom_.h_lines_through(p);
        for (std::size_t i = 0; i < through.lines.size(); ++i) {
          if (!through.meets_what[i]) continue;
          if (pick) throw CertificateFailure("two W-hat lines through an external point");
          pick = through.lines[i];
        }
        if (!pick) throw CertificateFailure("no W-hat line through an external point");
      }
      if (!geom_.is_what_line(*pick)) throw CertificateFailure("W-meeting line is not a W-hat line");
      s.lines.push_back(*pick);
    }
    std::sort(s.lines.begin(), s.lines.end());
    s.lines.erase(std::unique(s.lines.begin(), s.lines.end()), s.lines.end());
    const std::uint64_t q = f.q();
    if (s.lines.size() != q * q + 1) throw CertificateFailure("subtended spread has the wrong size");
    if (check_partition && !spread_partitions_what(s)) {
      throw CertificateFailure("subtended spread lines share a W-hat point");
    }
    return s;
  }

  /// The W-hat points of the spread lines are pairwise distinct and cover all
  /// (q+1)(q^2+1) of them.
  bool spread_partitions_what(const Spread& s) const {
    const Field& f = field();
    const std::uint64_t q = f.q();
    std::unordered_set<std::uint64_t> pts;
    std::size_t total = 0;
    for (const auto& l : s.lines)
      for (const auto& p : l.points(f))
        if (geom_.in_what(p)) {
          pts.insert(p.key());
          ++total;
        }
    return total == pts.size() && total == (q + 1) * (q * q + 1);
  }

  std::vector<Spread> spreads(const std::vector<Line4>& lines, unsigned threads = 1,
                              bool check_partition = true,
                              SpreadMethod method = SpreadMethod::enumerate) const {
    std::vector<Spread> out(lines.size());
    parallel_rows(lines.size(), threads,
                  [&](std::size_t i) { out[i] = subtended_spread(lines[i], check_partition, method); });
    return out;
  }

  /// 1 if the lines meet; otherwise 2 or 3 as the spreads share 1 or q+1 lines.
  int classify_pw_geometric(const Line4& l, const Line4& m, const Spread& sl, const Spread& sm) const {
    const Field& f = field();
    const std::size_t meet = meet_size(f, l, m);
    if (meet == 1) return 1;
    if (meet != 0) throw CertificateFailure("hemisystem lines coincide");
    const std::size_t common = spread_meet(sl, sm);
    if (common == 1) return 2;
    if (common == f.q() + 1) return 3;
    throw CertificateFailure("spreads of disjoint lines share " + std::to_string(common) + " lines");
  }

  RelationTable geometric_table(const std::vector<Line4>& lines, const std::vector<Spread>& sp,
                                unsigned threads = 1) const {
    RelationTable t(lines.size(), 3);
    parallel_rows(lines.size(), threads, [&](std::size_t x) {
      for (std::size_t y = x + 1; y < lines.size(); ++y)
        t.set(x, y, classify_pw_geometric(lines[x], lines[y], sp[x], sp[y]));
    });
    return t;
  }

  // ---- Klein-quadric route ----------------------------------------------------------

  /// Class from b~(w_s,w_t) and b~(w_s,w'_t), with the radical vector
  /// v = Tr(t^{q+1}) w_s + b~(w_s,w_t) w0 + Tr(s^{q+1}) w_t checked against the
  /// factorisation Q~(v) = b~(w_s,w_t) b~(w_s,w'_t).
  KleinClassification classify_pw_klein(const HemiLine& s, const HemiLine& t) const {
    const Field& f = field();
    const Geometry& g = geom_;
    KleinClassification k;
    k.b_st = g.btilde(s.w, t.w);
    k.b_st_prime = g.btilde(s.w, t.w_prime);
    k.trace_s = norm_trace(s.source.rep);
    k.trace_t = norm_trace(t.source.rep);
    const VTilde w0 = g.w0();
    const VTilde v = k.trace_t * s.w + k.b_st * w0 + k.trace_s * t.w;
    k.q_radical = g.qtilde(v);
    k.factorization_holds = k.q_radical == k.b_st * k.b_st_prime &&
                            k.q_radical == k.b_st * (k.b_st + k.trace_s * k.trace_t);
    k.radical_orthogonal =
        g.btilde(v, s.w).is_zero() && g.btilde(v, w0).is_zero() && g.btilde(v, t.w).is_zero();
    if (k.b_st.is_zero() && k.b_st_prime.is_zero()) {
      throw CertificateFailure("both Klein forms vanish for pairs " + std::to_string(s.source.index) +
                               ", " + std::to_string(t.source.index));
    }
    (void)f;
    k.cls = k.b_st.is_zero() ? 1 : (k.b_st_prime.is_zero() ? 2 : 3);
    return k;
  }

  RelationTable klein_table(unsigned threads = 1) const {
    RelationTable t(n(), 3);
    parallel_rows(n(), threads, [&](std::size_t x) {
      for (std::size_t y = x + 1; y < n(); ++y) t.set(x, y, classify_pw_klein(lines_[x], lines_[y]).cls);
    });
    return t;
  }

  /// Tr(x^{q+1}) down to GF(q).
  Fe norm_trace(Fe x) const { return field().rel_trace_to_q(x.pow(field().q() + 1)); }

  /// Q(4,q) inside L_t^perp: singular points of the orthogonal complement of
  /// <w_t, w'_t>, as canonical GF(q)-coordinates.
  std::vector<FeVec<6>> spread_image_predicted(const HemiLine& hl) const {
    std::vector<FeVec<6>> out;
    for (const auto& c : geom_.span_points(geom_.perp({hl.w, hl.w_prime}))) {
      if (geom_.qtilde(geom_.from_coords(c)).is_zero()) out.push_back(c);
    }
    return out;
  }

  /// Klein images of the spread lines, as canonical GF(q)-coordinates.
  std::vector<FeVec<6>> spread_image_actual(const Spread& s) const {
    std::vector<FeVec<6>> out;
    for (const auto& l : s.lines) out.push_back(geom_.vpoint(geom_.vtilde_representative(geom_.klein_map(l))));
    std::sort(out.begin(), out.end(), [](const FeVec<6>& a, const FeVec<6>& b) { return encode(a) < encode(b); });
    return out;
  }

  // ---- group action ------------------------------------------------------------------

  /// g (x) g^q, acting on column vectors.
  Mat4 chi(const Mat2& g) const {
    const Field& f = field();
    if ((g[0] * g[3] + g[1] * g[2]).is_zero()) throw std::invalid_argument("singular matrix");
    const int h = f.h();
    Mat4 m;
    for (int i = 0; i < 2; ++i)
      for (int k = 0; k < 2; ++k)
        for (int j = 0; j < 2; ++j)
          for (int l = 0; l < 2; ++l) m[2 * i + k][2 * j + l] = g[2 * i + j] * g[2 * k + l].frob(h);
    return m;
  }
  static Vec4 apply(const Mat4& m, const Vec4& v) {
    Vec4 out;
    for (int r = 0; r < 4; ++r) out[r] = m[r][0] * v[0] + m[r][1] * v[1] + m[r][2] * v[2] + m[r][3] * v[3];
    return out;
  }
  Vec4 chi_apply(const Mat2& g, const Vec4& v) const { return apply(chi(g), v); }
  Line4 chi_apply(const Mat2& g, const Line4& l) const {
    const Mat4 m = chi(g);
    return Line4::span(apply(m, l.rows[0]), apply(m, l.rows[1]));
  }

  /// Action on GF(q^2) u {infinity} matching theta: g (1,t)^T = (a + b t, c + d t)
  /// gives t -> (c + d t) / (a + b t).
  static std::optional<Fe> mobius(const Mat2& g, std::optional<Fe> t) {
    const Fe a = g[0], b = g[1], c = g[2], d = g[3];
    if (!t) {
      if (b.is_zero()) return std::nullopt;
      return d / b;
    }
    const Fe den = a + b * *t;
    if (den.is_zero()) return std::nullopt;
    return (c + d * *t) / den;
  }

  /// Random element of SL(2,q^2).
  Mat2 random_sl2(std::mt19937_64& rng) const {
    const auto& k2 = field().gf_q2();
    for (;;) {
      Mat2 g = {k2[rng() % k2.size()], k2[rng() % k2.size()], k2[rng() % k2.size()], k2[rng() % k2.size()]};
      const Fe det = g[0] * g[3] + g[1] * g[2];
      if (det.is_zero()) continue;
      const Fe s = field().sqrt(det).inv();
      return {s * g[0], s * g[1], s * g[2], s * g[3]};
    }
  }

  /// theta(g.t) = chi(g) theta(t) and Q-hat(chi(g) v) = Q-hat(v) on W-hat.
  EquivarianceReport verify_equivariance(std::size_t samples, std::uint64_t seed) const {
    const Field& f = field();
    std::mt19937_64 rng(seed);
    const auto& k2 = f.gf_q2();
    const auto& k1 = f.gf_q();
    EquivarianceReport r;
    for (std::size_t i = 0; i < samples; ++i) {
      const Mat2 g = random_sl2(rng);
      std::optional<Fe> t;
      const std::size_t pick = rng() % (k2.size() + 1);
      if (pick < k2.size()) t = k2[pick];
      if (!(theta(mobius(g, t)) == ProjPoint4::of(chi_apply(g, theta_vec(t))))) ++r.diagram_failures;
      const WHatVec v = WHatVec::make(f, k1[rng() % k1.size()], k2[rng() % k2.size()], k1[rng() % k1.size()]);
      const Vec4 img = chi_apply(g, v.vec4(f));
      try {
        const WHatVec w = WHatVec::from_vec4(f, img);
        if (geom_.qhat(w) != geom_.qhat(v)) ++r.isometry_failures;
      } catch (const std::invalid_argument&) {
        ++r.isometry_failures;
      }
      ++r.samples;
    }
    r.ok = r.diagram_failures == 0 && r.isometry_failures == 0;
    return r;
  }

  /// Generators of SL(2,q^2): [[1,0],[a,1]] for a over a GF(2)-basis of
  /// GF(q^2), and [[0,1],[1,0]].
  std::vector<Mat2> sl2_generators() const {
    const Field& f = field();
    std::vector<Mat2> gens;
    std::vector<std::uint32_t> basis;
    for (const Fe& a : f.gf_q2()) {
      std::uint32_t v = a.bits();
      for (std::uint32_t b : basis) v = std::min(v, v ^ b);
      if (v == 0) continue;
      basis.push_back(v);
      gens.push_back({f.one(), f.zero(), a, f.one()});
    }
    gens.push_back({f.zero(), f.one(), f.one(), f.zero()});
    return gens;
  }

  /// Closure of m_{omega pair} under the generators; must be exactly {m_t}.
  OrbitReport verify_orbit() const {
    const Field& f = field();
    OrbitReport r;
    std::unordered_set<LineKey, LineKeyHash> taus;
    for (const auto& l : tau_lines()) taus.insert(l.key());
    const auto gens = sl2_generators();
    std::vector<Mat4> mats;
    for (const auto& g : gens) mats.push_back(chi(g));
    const Line4 start = lines_[hx_.index_of(f.omega())].line;
    std::unordered_set<LineKey, LineKeyHash> seen = {start.key()};
    std::vector<Line4> frontier = {start};
    bool inside = true;
    while (!frontier.empty()) {
      const Line4 l = frontier.back();
      frontier.pop_back();
      for (const auto& m : mats) {
        const Line4 img = Line4::span(apply(m, l.rows[0]), apply(m, l.rows[1]));
        if (geom_.meets_what(img)) r.images_disjoint_from_what = false;
        if (taus.count(img.key())) r.touched_tau_image = true;
        if (!line_index(img)) inside = false;
        if (seen.insert(img.key()).second) frontier.push_back(img);
      }
    }
    r.orbit_size = seen.size();
    r.equals_hemisystem = inside && seen.size() == lines_.size();
    r.ok = r.equals_hemisystem && !r.touched_tau_image && r.images_disjoint_from_what;
    return r;
  }

 private:
  std::array<Fe, 4> powers(Fe t) const {
    const int h = field().h();
    return {t, t.frob(h), t.frob(2 * h), t.frob(3 * h)};
  }

  const HxScheme& hx_;
  Geometry geom_;
  std::vector<HemiLine> lines_;
  std::unordered_map<LineKey, std::size_t, LineKeyHash> line_index_;
};

}  // namespace hxpw
