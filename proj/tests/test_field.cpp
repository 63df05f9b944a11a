#include <catch_amalgamated.hpp>

#include <cstdint>
#include <random>
#include <set>

#include "hxpw/field.hpp"

using namespace hxpw;

namespace {

// Independent polynomial arithmetic over GF(2) for the oracles below.
std::uint64_t clmul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  const int dm = detail::poly_degree(m);
  std::uint64_t r = 0;
  while (b) {
    if (b & 1) r ^= a;
    b >>= 1;
    a <<= 1;
    if ((a >> dm) & 1) a ^= m;
  }
  return r;
}

std::uint64_t poly_gcd(std::uint64_t a, std::uint64_t b) {
  while (b) {
    std::uint64_t r = a;
    const int db = detail::poly_degree(b);
    for (int dr = detail::poly_degree(r); dr >= db && r; dr = detail::poly_degree(r)) r ^= b << (dr - db);
    a = b;
    b = r;
  }
  return a;
}

// Rabin's test: x^{2^n} = x mod f and gcd(x^{2^{n/p}} - x, f) = 1 for prime p | n.
bool rabin_irreducible(std::uint64_t f) {
  const int n = detail::poly_degree(f);
  auto x_pow_2k = [&](int k) {
    std::uint64_t x = 2;
    for (int i = 0; i < k; ++i) x = clmul_mod(x, x, f);
    return x;
  };
  if (x_pow_2k(n) != 2) return false;
  for (int p = 2; p <= n; ++p) {
    bool prime = true;
    for (int d = 2; d * d <= p; ++d) prime &= p % d != 0;
    if (!prime || n % p) continue;
    if (poly_gcd(f, x_pow_2k(n / p) ^ 2) != 1) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("modulus is the smallest irreducible of degree 4h") {
  for (int h = 1; h <= 4; ++h) {
    const Field f(h);
    const std::uint64_t top = std::uint64_t{1} << (4 * h);
    CHECK(f.modulus() >= top);
    CHECK(rabin_irreducible(f.modulus()));
    for (std::uint64_t c = top; c < f.modulus(); ++c) CHECK_FALSE(rabin_irreducible(c));
  }
  CHECK(Field(1).modulus_hex() == "0x13");
  CHECK(Field(2).modulus_hex() == "0x11b");
}

TEST_CASE("h outside 1..4 is rejected") {
  CHECK_THROWS_AS(Field(0), std::invalid_argument);
  CHECK_THROWS_AS(Field(5), std::invalid_argument);
  CHECK_THROWS_AS(make_field(-1), std::invalid_argument);
}

TEST_CASE("table multiplication matches carry-less multiplication") {
  for (int h = 1; h <= 2; ++h) {
    const Field f(h);
    for (std::uint32_t a = 0; a < f.size(); ++a)
      for (std::uint32_t b = 0; b < f.size(); ++b) {
        REQUIRE(f.mul_raw(a, b) == clmul_mod(a, b, f.modulus()));
      }
  }
  const Field f(3);
  std::mt19937_64 rng(7);
  for (int i = 0; i < 20000; ++i) {
    const std::uint32_t a = rng() % f.size(), b = rng() % f.size();
    REQUIRE(f.mul_raw(a, b) == clmul_mod(a, b, f.modulus()));
  }
}

TEST_CASE("field axioms hold on samples") {
  for (int h = 1; h <= 4; ++h) {
    auto fp = make_field(h);
    const Field& f = *fp;
    std::mt19937_64 rng(h);
    for (int i = 0; i < 2000; ++i) {
      const Fe a = f.elem(rng() % f.size()), b = f.elem(rng() % f.size()), c = f.elem(rng() % f.size());
      REQUIRE((a * b) * c == a * (b * c));
      REQUIRE(a * (b + c) == a * b + a * c);
      REQUIRE(a + a == f.zero());
      if (!a.is_zero()) {
        REQUIRE(a * a.inv() == f.one());
        REQUIRE(a.inv().bits() == f.inv_euclid(a.bits()));
      }
      REQUIRE((a + b).frob(1) == a.frob(1) + b.frob(1));
      REQUIRE((a * b).frob(3) == a.frob(3) * b.frob(3));
      REQUIRE(a.frob(f.degree()) == a);
      REQUIRE(f.sqrt(a) * f.sqrt(a) == a);
    }
  }
}

TEST_CASE("inverse of zero throws") {
  auto f = make_field(2);
  CHECK_THROWS(f->zero().inv());
  CHECK_THROWS(f->inv_euclid(0));
}

TEST_CASE("subfield tower sizes") {
  for (int h = 1; h <= 4; ++h) {
    const Field f(h);
    const std::uint64_t q = f.q();
    CHECK(f.gf_q().size() == q);
    CHECK(f.gf_q2().size() == q * q);
    CHECK(f.all().size() == f.size());
    CHECK(f.enumerate_subfield(2 * h).size() == q * q);
    for (const Fe& x : f.gf_q()) CHECK(f.in_gf_q2(x));
    CHECK_THROWS_AS(f.enumerate_subfield(3 * h), std::invalid_argument);
  }
  const Field f2(2);
  CHECK(f2.enumerate_subfield(1).size() == 2);
}

TEST_CASE("omega and zeta are the smallest solutions") {
  for (int h = 1; h <= 4; ++h) {
    const Field f(h);
    const Fe w = f.omega();
    CHECK(w.frob(2 * h) + w == f.one());
    CHECK_FALSE(f.in_gf_q2(w));
    for (std::uint32_t x = 0; x < w.bits(); ++x) CHECK((f.elem(x).frob(2 * h) + f.elem(x)) != f.one());
    const Fe z = f.zeta();
    CHECK(f.in_gf_q2(z));
    CHECK(z.frob(h) + z == f.one());
    for (std::uint32_t x = 0; x < z.bits(); ++x) {
      const Fe e = f.elem(x);
      CHECK_FALSE((f.in_gf_q2(e) && e.frob(h) + e == f.one()));
    }
  }
}

TEST_CASE("absolute and relative traces") {
  for (int h = 1; h <= 3; ++h) {
    const Field f(h);
    std::size_t zeros = 0;
    for (const Fe& x : f.gf_q2()) zeros += f.abs_trace(x, 2 * h) == 0;
    CHECK(zeros == f.gf_q2().size() / 2);
    std::set<std::uint32_t> image;
    for (const Fe& x : f.all()) {
      const Fe t = f.rel_trace_to_q(x);
      REQUIRE(f.in_gf_q(t));
      image.insert(t.bits());
    }
    CHECK(image.size() == f.q());
    for (const Fe& x : f.gf_q2()) {
      // Tr_{q^2/2} = Tr_{q/2} o Tr_{q^2/q}
      CHECK(f.abs_trace(x, 2 * h) == f.abs_trace(x + x.frob(h), h));
    }
    CHECK_THROWS_AS(f.abs_trace(f.omega(), h), std::invalid_argument);
  }
}

TEST_CASE("mixing field contexts is detected") {
  auto a = make_field(2);
  auto b = make_field(2);
  CHECK_THROWS_AS(a->one() + b->one(), std::invalid_argument);
  CHECK_THROWS_AS(a->one() * b->one(), std::invalid_argument);
  CHECK_THROWS_AS(Fe() * a->one(), std::invalid_argument);
  CHECK_THROWS_AS(Fe().inv(), std::invalid_argument);
  CHECK_THROWS_AS(a->elem(1u << 8), std::invalid_argument);
  CHECK(a->one() != b->one());
}
