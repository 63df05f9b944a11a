#pragma once

// The conic-side scheme on pairs {t, t^{q^2}}, t in GF(q^4) \ GF(q^2): the
// cross-ratio invariant rho, the trace classification of rho-hat into three
// classes, and the finer scheme indexed by {lambda, 1/lambda}.

#include <algorithm>
#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hxpw/field.hpp"
#include "hxpw/linalg.hpp"
#include "hxpw/parallel.hpp"
#include "hxpw/scheme.hpp"

namespace hxpw {

/// Frobenius orbit {t, t^{q^2}} represented by its smaller-encoded member.
struct TPair {
  Fe rep;
  std::size_t index = 0;
};

struct PairInvariants {
  Fe rho;
  Fe nu;                ///< 1 / (rho + 1)
  Fe rho_hat;           ///< 1 / (rho + 1/rho)
  Fe rho_hat_product;   ///< (s+t)(s'+t')(s+t')(s'+t) / ((s+s')^2 (t+t')^2)
  Fe rho_hat_nu;        ///< nu^2 + nu
  int hx_class = 0;
};

/// rho(s,t) = 1 would make rho-hat undefined.  It cannot happen for distinct
/// pairs, since it forces (s + s^{q^2})(t + t^{q^2}) = 0; it is still reported
/// rather than assumed away.
class DegenerateRho : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TraceSets {
  std::vector<Fe> t0_q2;        ///< absolute trace zero in GF(q^2)
  std::vector<Fe> s0_star;      ///< trace zero in GF(q), nonzero
  std::vector<Fe> s1;           ///< trace one in GF(q)
  std::vector<Fe> t0_minus_fq;  ///< t0_q2 outside GF(q)
};

/// Line of PG(2,q^2) as a 2x3 RREF basis.
struct PlaneLine {
  std::array<FeVec<3>, 2> rows;
  std::array<std::uint32_t, 6> key() const {
    return {rows[0][0].bits(), rows[0][1].bits(), rows[0][2].bits(),
            rows[1][0].bits(), rows[1][1].bits(), rows[1][2].bits()};
  }
  /// Coefficients (a,b,c) with a x + b y + c z = 0 on the line.
  FeVec<3> dual() const {
    const auto& u = rows[0];
    const auto& v = rows[1];
    return normalize<3>({u[1] * v[2] + u[2] * v[1], u[2] * v[0] + u[0] * v[2], u[0] * v[1] + u[1] * v[0]});
  }
};

using FineLabel = std::pair<std::uint32_t, std::uint32_t>;

class HxScheme {
 public:
  explicit HxScheme(FieldPtr field) : f_(std::move(field)) {
    const Field& f = *f_;
    const int h = f.h();
    for (const Fe& t : f.all()) {
      const Fe c = t.frob(2 * h);
      if (c != t && t.bits() < c.bits()) pairs_.push_back(TPair{t, pairs_.size()});
    }
    index_of_.assign(f.size(), -1);
    for (const auto& p : pairs_) {
      index_of_[p.rep.bits()] = static_cast<std::int64_t>(p.index);
      index_of_[conj(p.rep).bits()] = static_cast<std::int64_t>(p.index);
    }
    cls_.assign(f.size(), 0);
    for (const Fe& x : f.gf_q2()) {
      if (f.abs_trace(x, 2 * h) != 0) continue;
      sets_.t0_q2.push_back(x);
      if (x.is_zero()) continue;
      if (!f.in_gf_q(x)) {
        sets_.t0_minus_fq.push_back(x);
        cls_[x.bits()] = 3;
      } else if (f.abs_trace(x, h) == 0) {
        sets_.s0_star.push_back(x);
        cls_[x.bits()] = 1;
      } else {
        sets_.s1.push_back(x);
        cls_[x.bits()] = 2;
      }
    }
    for (const Fe& lam : f.gf_q2()) {
      if (lam.is_zero() || lam.is_one()) continue;
      const FineLabel l = fine_label(lam);
      if (l.first == lam.bits()) fine_labels_.push_back(l);
    }
    std::sort(fine_labels_.begin(), fine_labels_.end());
  }

  const Field& field() const { return *f_; }
  const FieldPtr& field_ptr() const { return f_; }
  const std::vector<TPair>& pairs() const { return pairs_; }
  std::size_t n() const { return pairs_.size(); }
  const TraceSets& trace_sets() const { return sets_; }

  Fe conj(Fe t) const { return t.frob(2 * f_->h()); }

  /// Index of the pair containing t.
  std::size_t index_of(Fe t) const {
    const std::int64_t i = index_of_.at(t.bits());
    if (i < 0) throw std::invalid_argument("element lies in GF(q^2)");
    return static_cast<std::size_t>(i);
  }

  /// (s+t)(s'+t') / ((s+t')(s'+t)) with ' the q^2-Frobenius.
  Fe rho(Fe s, Fe t) const {
    const Fe sc = conj(s), tc = conj(t);
    if (sc == s || tc == t) throw std::invalid_argument("rho: argument lies in GF(q^2)");
    if (s == t || s == tc) throw std::invalid_argument("rho: arguments belong to the same pair");
    return (s + t) * (sc + tc) / ((s + tc) * (sc + t));
  }

  /// 1 / (rho + rho^{-1}).
  Fe rho_hat(const TPair& sp, const TPair& tp) const {
    const Fe r = rho(sp.rep, tp.rep);
    if (r.is_one()) throw DegenerateRho("rho = 1 for pairs " + std::to_string(sp.index) + ", " +
                                        std::to_string(tp.index));
    return (r + r.inv()).inv();
  }

  PairInvariants invariants(const TPair& sp, const TPair& tp) const {
    PairInvariants inv;
    const Fe s = sp.rep, t = tp.rep, sc = conj(s), tc = conj(t);
    inv.rho = rho(s, t);
    inv.rho_hat = rho_hat(sp, tp);
    inv.nu = (inv.rho + f_->one()).inv();
    inv.rho_hat_nu = inv.nu * inv.nu + inv.nu;
    const Fe ds = s + sc, dt = t + tc;
    inv.rho_hat_product = (s + t) * (sc + tc) * (s + tc) * (sc + t) / (ds * ds * dt * dt);
    inv.hx_class = class_of_rho_hat(inv.rho_hat);
    return inv;
  }

  /// 1 for S0*, 2 for S1, 3 for T0(q^2) \ GF(q); 0 outside all three.
  int class_of_rho_hat(Fe v) const { return cls_.at(v.bits()); }

  int classify_hx(const TPair& sp, const TPair& tp) const {
    const int c = class_of_rho_hat(rho_hat(sp, tp));
    if (c == 0) throw std::logic_error("rho-hat outside the trace-zero classes");
    return c;
  }

  /// {rho, 1/rho} with the smaller encoding first.
  FineLabel fine_label(Fe rho_value) const {
    const Fe a = rho_value, b = rho_value.inv();
    return a.bits() < b.bits() ? FineLabel{a.bits(), b.bits()} : FineLabel{b.bits(), a.bits()};
  }
  FineLabel classify_fine(const TPair& sp, const TPair& tp) const { return fine_label(rho(sp.rep, tp.rep)); }

  /// Every {lambda, 1/lambda} with lambda in GF(q^2) \ {0,1}, sorted; class
  /// index is position + 1.
  const std::vector<FineLabel>& fine_labels() const { return fine_labels_; }
  int fine_class_index(const FineLabel& l) const {
    auto it = std::lower_bound(fine_labels_.begin(), fine_labels_.end(), l);
    if (it == fine_labels_.end() || *it != l) throw std::logic_error("unknown fine label");
    return static_cast<int>(it - fine_labels_.begin()) + 1;
  }
  /// Three-class index of a fine class, through rho-hat = 1/(lambda + 1/lambda).
  int hx_class_of_fine(const FineLabel& l) const {
    const Fe lam = f_->elem(l.first);
    return class_of_rho_hat((lam + lam.inv()).inv());
  }

  RelationTable hx_table(unsigned threads = 1) const {
    RelationTable t(n(), 3);
    parallel_rows(n(), threads, [&](std::size_t x) {
      for (std::size_t y = x + 1; y < n(); ++y) t.set(x, y, classify_hx(pairs_[x], pairs_[y]));
    });
    return t;
  }

  RelationTable fine_table(unsigned threads = 1) const {
    RelationTable t(n(), static_cast<int>(fine_labels_.size()));
    parallel_rows(n(), threads, [&](std::size_t x) {
      for (std::size_t y = x + 1; y < n(); ++y)
        t.set(x, y, fine_class_index(classify_fine(pairs_[x], pairs_[y])));
    });
    return t;
  }

  // ---- planar model ------------------------------------------------------------

  /// GF(q^2)-rational line whose extension meets the conic in the points
  /// of parameter t and t^{q^2}: spanned by lambda P(t) + lambda^{q^2} P(t^{q^2})
  /// for lambda = 1 and lambda = omega, with P(u) = (1, u, u^2).
  PlaneLine elliptic_line(const TPair& tp) const {
    const Fe t = tp.rep, tc = conj(t);
    auto x_lambda = [&](Fe lam) -> FeVec<3> {
      const Fe lc = conj(lam);
      return {lam + lc, lam * t + lc * tc, lam * t * t + lc * tc * tc};
    };
    const auto red = rref<3>({x_lambda(f_->one()), x_lambda(f_->omega())});
    if (red.size() != 2) throw std::logic_error("elliptic line basis is dependent");
    for (const auto& r : red)
      for (const auto& x : r)
        if (!f_->in_gf_q2(x)) throw std::logic_error("elliptic line is not GF(q^2)-rational");
    return PlaneLine{{red[0], red[1]}};
  }

  /// Number of points of C = {(1,u,u^2) : u in GF(q^2)} u {(0,0,1)} on the line
  /// with dual coordinates (a,b,c).
  std::size_t conic_meet(const FeVec<3>& abc) const {
    std::size_t cnt = 0;
    for (const Fe& u : f_->gf_q2())
      if ((abc[0] + abc[1] * u + abc[2] * u * u).is_zero()) ++cnt;
    if (abc[2].is_zero()) ++cnt;
    return cnt;
  }
  std::size_t conic_meet(const PlaneLine& l) const { return conic_meet(l.dual()); }

  /// Number of lines of PG(2,q^2) missing the conic.
  std::size_t passant_count() const {
    const auto& k2 = f_->gf_q2();
    const Fe z = f_->zero(), o = f_->one();
    std::size_t cnt = 0;
    auto test = [&](const FeVec<3>& abc) {
      if (conic_meet(abc) == 0) ++cnt;
    };
    for (const Fe& b : k2)
      for (const Fe& c : k2) test({o, b, c});
    for (const Fe& c : k2) test({z, o, c});
    test({z, z, o});
    return cnt;
  }

 private:
  FieldPtr f_;
  std::vector<TPair> pairs_;
  std::vector<std::int64_t> index_of_;
  std::vector<std::uint8_t> cls_;
  TraceSets sets_;
  std::vector<FineLabel> fine_labels_;
};

}  // namespace hxpw
