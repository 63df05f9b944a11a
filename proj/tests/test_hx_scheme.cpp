#include <catch_amalgamated.hpp>

#include <map>
#include <set>

#include "hxpw/hx_scheme.hpp"

using namespace hxpw;

namespace {

// Naive trace of x in GF(2^m): sum of x^{2^i} by repeated squaring.
int naive_trace(Fe x, int m) {
  Fe acc = x, y = x;
  for (int i = 1; i < m; ++i) {
    y = y * y;
    acc = acc + y;
  }
  REQUIRE(acc.bits() <= 1);
  return static_cast<int>(acc.bits());
}

// Class read off directly from the definitions of S0*, S1 and T0 \ GF(q).
int oracle_class(const Field& f, Fe v) {
  const int h = f.h();
  if (v.is_zero() || naive_trace(v, 2 * h) != 0) return 0;
  if (v.pow(f.q()) != v) return 3;
  return naive_trace(v, h) == 0 ? 1 : 2;
}

}  // namespace

TEST_CASE("pair census") {
  const std::size_t expect[] = {0, 6, 120, 2016, 32640};
  for (int h = 1; h <= 4; ++h) {
    const HxScheme hx(make_field(h));
    const std::uint64_t q = hx.field().q();
    CHECK(hx.n() == expect[h]);
    CHECK(hx.n() == (q * q * q * q - q * q) / 2);
    if (h <= 3) {
      for (const auto& p : hx.pairs()) {
        REQUIRE(hx.index_of(p.rep) == p.index);
        REQUIRE(hx.index_of(hx.conj(p.rep)) == p.index);
        REQUIRE(p.rep.bits() < hx.conj(p.rep).bits());
      }
    }
  }
  const HxScheme hx(make_field(2));
  CHECK_THROWS_AS(hx.index_of(hx.field().one()), std::invalid_argument);
}

TEST_CASE("trace-set sizes") {
  for (int h = 1; h <= 4; ++h) {
    const HxScheme hx(make_field(h));
    const std::size_t q = hx.field().q();
    const auto& s = hx.trace_sets();
    CHECK(s.t0_q2.size() == q * q / 2);
    CHECK(s.s0_star.size() == q / 2 - 1);
    CHECK(s.s1.size() == q / 2);
    CHECK(s.t0_minus_fq.size() == q * q / 2 - q);
  }
}

TEST_CASE("rho-hat identities and classification, exhaustive") {
  for (int h = 1; h <= 2; ++h) {
    const HxScheme hx(make_field(h));
    const Field& f = hx.field();
    const auto& P = hx.pairs();
    for (std::size_t x = 0; x < P.size(); ++x)
      for (std::size_t y = 0; y < P.size(); ++y) {
        if (x == y) continue;
        const auto inv = hx.invariants(P[x], P[y]);
        REQUIRE(!inv.rho.is_one());
        REQUIRE(inv.rho_hat == inv.rho_hat_product);
        REQUIRE(inv.rho_hat == inv.rho_hat_nu);
        REQUIRE(inv.hx_class == oracle_class(f, inv.rho_hat));
        REQUIRE(inv.hx_class != 0);
        // Independent of the chosen representatives.
        REQUIRE(hx.rho(hx.conj(P[x].rep), P[y].rep) == inv.rho.inv());
        REQUIRE(hx.rho(P[y].rep, P[x].rep) == inv.rho);
      }
    CHECK_THROWS_AS(hx.rho(P[0].rep, hx.conj(P[0].rep)), std::invalid_argument);
    CHECK_THROWS_AS(hx.rho(f.one(), P[0].rep), std::invalid_argument);
  }
}

TEST_CASE("class valencies") {
  const HxScheme hx1(make_field(1));
  const auto t1 = hx1.hx_table();
  CHECK(t1.class_pair_counts() == std::vector<std::uint64_t>{0, 0, 15, 0});
  CHECK(t1.empty_classes() == std::vector<int>{1, 3});

  const HxScheme hx2(make_field(2));
  const auto t2 = hx2.hx_table();
  for (std::size_t x = 0; x < t2.n(); ++x) {
    int c[4] = {0, 0, 0, 0};
    for (std::size_t y = 0; y < t2.n(); ++y) ++c[t2(x, y)];
    REQUIRE(c[0] == 1);
    REQUIRE(c[1] == 17);
    REQUIRE(c[2] == 34);
    REQUIRE(c[3] == 68);
  }
  CHECK(t2.class_pair_counts() == std::vector<std::uint64_t>{0, 1020, 2040, 4080});
  CHECK(hx2.hx_table(4) == t2);
}

TEST_CASE("fine scheme labels and fusion") {
  const HxScheme hx(make_field(2));
  CHECK(hx.fine_labels().size() == 7);
  const auto fine = hx.fine_table(3);
  const auto coarse = hx.hx_table();
  for (std::size_t x = 0; x < fine.n(); ++x)
    for (std::size_t y = x + 1; y < fine.n(); ++y) {
      const FineLabel l = hx.fine_labels()[fine(x, y) - 1];
      REQUIRE(hx.hx_class_of_fine(l) == coarse(x, y));
    }
  for (int h = 1; h <= 3; ++h) {
    const HxScheme s(make_field(h));
    const std::size_t q = s.field().q();
    CHECK(s.fine_labels().size() == q * q / 2 - 1);
  }
}

TEST_CASE("elliptic lines are the passants of the conic") {
  for (int h = 1; h <= 2; ++h) {
    const HxScheme hx(make_field(h));
    const Field& f = hx.field();
    const std::size_t q = f.q();
    std::set<std::array<std::uint32_t, 6>> keys;
    for (const auto& p : hx.pairs()) {
      const PlaneLine l = hx.elliptic_line(p);
      REQUIRE(hx.conic_meet(l) == 0);
      keys.insert(l.key());
      // Over GF(q^4) the line is secant at the parameters t and t^{q^2}.
      const auto abc = l.dual();
      const Fe t = p.rep, tc = hx.conj(t);
      REQUIRE((abc[0] + abc[1] * t + abc[2] * t * t).is_zero());
      REQUIRE((abc[0] + abc[1] * tc + abc[2] * tc * tc).is_zero());
    }
    CHECK(keys.size() == hx.n());
    CHECK(hx.passant_count() == q * q * (q * q - 1) / 2);
  }
}
