#include <catch_amalgamated.hpp>

#include <random>
#include <set>
#include <unordered_set>

#include "hxpw/geometry.hpp"

using namespace hxpw;

namespace {

Vec4 random_vec4(const Field& f, std::mt19937_64& rng) {
  const auto& k2 = f.gf_q2();
  return {k2[rng() % k2.size()], k2[rng() % k2.size()], k2[rng() % k2.size()], k2[rng() % k2.size()]};
}

Line4 random_line(const Field& f, std::mt19937_64& rng) {
  for (;;) {
    try {
      return Line4::span(random_vec4(f, rng), random_vec4(f, rng));
    } catch (const std::invalid_argument&) {
    }
  }
}

Fe klein_bilinear(const Vec6& x, const Vec6& y) {
  return x[0] * y[5] + x[5] * y[0] + x[1] * y[4] + x[4] * y[1] + x[2] * y[3] + x[3] * y[2];
}

}  // namespace

TEST_CASE("point and line censuses of H(3,q^2) and W-hat") {
  for (int h = 1; h <= 2; ++h) {
    const Geometry g(make_field(h));
    const std::uint64_t q = g.q();
    std::size_t all = 0;
    g.for_each_point([&](const ProjPoint4&) { ++all; });
    const std::uint64_t q2 = q * q;
    CHECK(all == (q2 * q2 * q2 + q2 * q2 + q2 + 1));
    const auto iso = g.isotropic_points();
    CHECK(iso.size() == (q2 + 1) * (q2 * q + 1));
    const auto what = g.what_points();
    CHECK(what.size() == (q + 1) * (q2 + 1));
    for (const auto& p : what) CHECK(g.is_isotropic(p));
    const auto lines = g.h_lines();
    CHECK(lines.size() == (q + 1) * (q2 * q + 1));
    std::size_t what_lines = 0;
    for (const auto& l : lines) {
      CHECK(g.is_totally_isotropic(l));
      if (g.is_what_line(l)) ++what_lines;
    }
    CHECK(what_lines == (q + 1) * (q2 + 1));
  }
}

TEST_CASE("lines through an isotropic point") {
  const Geometry g(make_field(2));
  const Field& f = g.field();
  for (const auto& p : g.isotropic_points()) {
    const auto lt = g.h_lines_through(p);
    REQUIRE(lt.lines.size() == g.q() + 1);
    std::size_t meeting = 0;
    for (std::size_t i = 0; i < lt.lines.size(); ++i) {
      const auto pts = lt.lines[i].points(f);
      REQUIRE(std::find(pts.begin(), pts.end(), p) != pts.end());
      REQUIRE(g.is_totally_isotropic(lt.lines[i]));
      if (lt.meets_what[i]) ++meeting;
    }
    if (g.in_what(p)) {
      CHECK(meeting == g.q() + 1);
    } else {
      REQUIRE(meeting == 1);
      // The W-hat line through an external point is <p, tau(p)>.
      const Line4 expect = Line4::span(p.v, g.tau(p.v));
      for (std::size_t i = 0; i < lt.lines.size(); ++i)
        if (lt.meets_what[i]) CHECK(lt.lines[i] == expect);
    }
  }
  auto nonsingular = ProjPoint4::of(g.vec4(0, 1, 0, 0));
  CHECK_THROWS_AS(g.h_lines_through(nonsingular), std::invalid_argument);
}

TEST_CASE("meets_what agrees with point enumeration") {
  const Geometry g(make_field(2));
  const Field& f = g.field();
  std::mt19937_64 rng(11);
  for (int i = 0; i < 300; ++i) {
    const Line4 l = random_line(f, rng);
    bool any = false;
    for (const auto& p : l.points(f)) any |= g.in_what(p);
    REQUIRE(g.meets_what(l) == any);
  }
}

TEST_CASE("tau is an involution fixing W-hat") {
  const Geometry g(make_field(2));
  const Field& f = g.field();
  std::mt19937_64 rng(3);
  for (int i = 0; i < 1000; ++i) {
    const Line4 l = random_line(f, rng);
    REQUIRE(g.tau(g.tau(l)) == l);
  }
  const Geometry g1(make_field(1));
  for (const auto& l : g1.h_lines())
    if (g1.is_what_line(l)) CHECK(g1.tau(l) == l);
  for (const auto& p : g.what_points()) {
    CHECK(g.tau(p) == p);
    if (p.v[0].is_one()) CHECK_NOTHROW(WHatVec::from_vec4(f, p.v));
  }
}

TEST_CASE("W-hat points are spanned by W-hat vectors") {
  const Geometry g(make_field(2));
  const Field& f = g.field();
  std::set<std::uint64_t> from_vectors;
  for (const Fe& a : f.gf_q())
    for (const Fe& x : f.gf_q2())
      for (const Fe& b : f.gf_q()) {
        const WHatVec w = WHatVec::make(f, a, x, b);
        const Vec4 v = w.vec4(f);
        if (!is_zero_vec(v)) from_vectors.insert(ProjPoint4::of(v).key());
        CHECK(g.hermitian(v, v).is_zero());
        CHECK(g.qhat(w) == a * b + x.pow(g.q() + 1));
      }
  std::set<std::uint64_t> fixed;
  for (const auto& p : g.what_points()) fixed.insert(p.key());
  CHECK(from_vectors == fixed);
  CHECK_THROWS_AS(WHatVec::make(f, f.omega(), f.zero(), f.zero()), std::invalid_argument);
}

TEST_CASE("hermitian form is hermitian") {
  const Geometry g(make_field(2));
  const Field& f = g.field();
  std::mt19937_64 rng(5);
  for (int i = 0; i < 500; ++i) {
    const Vec4 u = random_vec4(f, rng), v = random_vec4(f, rng);
    REQUIRE(g.hermitian(v, u) == g.hermitian(u, v).frob(f.h()));
  }
}

TEST_CASE("Klein map: quadric, incidence and V-tilde") {
  const Geometry g(make_field(2));
  const Field& f = g.field();
  std::mt19937_64 rng(9);
  for (int i = 0; i < 400; ++i) {
    const Line4 l = random_line(f, rng), m = random_line(f, rng);
    const Vec6 kl = g.klein_map(l), km = g.klein_map(m);
    REQUIRE(Geometry::klein_quadric(kl).is_zero());
    REQUIRE((meet_size(f, l, m) > 0) == klein_bilinear(kl, km).is_zero());
  }
  // H-lines map onto the singular points of the elliptic quadric of V-tilde.
  std::set<std::array<std::uint32_t, 6>> images;
  for (const auto& l : g.h_lines()) {
    const VTilde w = g.vtilde_representative(g.klein_map(l));
    REQUIRE(g.qtilde(w).is_zero());
    images.insert(encode(g.vpoint(w)));
  }
  const auto q = g.q();
  CHECK(images.size() == (q + 1) * (q * q * q + 1));
  std::vector<VTilde> basis;
  for (int j = 0; j < 6; ++j) {
    auto e = zero_vec<6>(f);
    e[j] = f.one();
    basis.push_back(g.from_coords(e));
  }
  std::set<std::array<std::uint32_t, 6>> singular;
  for (const auto& c : g.span_points(basis))
    if (g.qtilde(g.from_coords(c)).is_zero()) singular.insert(encode(c));
  CHECK(singular == images);
}

TEST_CASE("V-tilde coordinates and representatives") {
  const Geometry g(make_field(2));
  const Field& f = g.field();
  const auto& k2 = f.gf_q2();
  std::mt19937_64 rng(21);
  for (int i = 0; i < 300; ++i) {
    const VTilde w{k2[rng() % k2.size()], k2[rng() % k2.size()], k2[rng() % k2.size()]};
    if (w.is_zero()) continue;
    const auto c = g.coords(w);
    for (const auto& x : c) REQUIRE(f.in_gf_q(x));
    const VTilde back = g.from_coords(c);
    REQUIRE((back.x == w.x && back.y == w.y && back.z == w.z));
    const Fe lambda = k2[1 + rng() % (k2.size() - 1)];
    const VTilde rep = g.vtilde_representative(scale(lambda, w.expand(f)));
    REQUIRE(g.vpoint(rep) == g.vpoint(w));
    REQUIRE(g.perp({w}).size() == 5);
    REQUIRE(g.btilde(w, w).is_zero());
  }
  CHECK(g.qtilde(g.w0()) == f.one());
  CHECK(g.in_gamma(g.w0()));
  Vec6 bad = zero_vec<6>(f);
  bad[0] = f.one();
  CHECK_THROWS_AS(g.vtilde_representative(bad), std::invalid_argument);
}

TEST_CASE("canonical forms") {
  const Geometry g(make_field(2));
  const Field& f = g.field();
  const Vec4 a = g.vec4(0, 3, 5, 7);
  const Vec4 b = g.vec4(1, 0, 2, 0);
  const Line4 l = Line4::span(a, b);
  CHECK(l == Line4::span(b, add(a, scale(f.elem(6), b))));
  CHECK(l.points(f).size() == 17);
  CHECK(ProjPoint4::of(a) == ProjPoint4::of(scale(f.elem(9), a)));
  CHECK_THROWS_AS(Line4::span(a, scale(f.elem(4), a)), std::invalid_argument);
  CHECK(meet_size(f, l, l) == 17);
}
