#include <catch_amalgamated.hpp>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <bit>
#include <map>

#include "hxpw/hx_scheme.hpp"
#include "hxpw/scheme.hpp"

using namespace hxpw;

namespace {

RatMatrix expected_p(long q) {
  auto r = [](long num, long den) { return Rational(num, den); };
  const long q2 = q * q;
  return {
      {1, r((q - 2) * (q2 + 1), 2), r(q * (q2 + 1), 2), r(q * (q - 2) * (q2 + 1), 2)},
      {1, r(-(q - 1) * (q - 2), 2), r(-q * (q - 1), 2), q * (q - 2)},
      {1, r(-(q2 - q + 2), 2), r(q * (q + 1), 2), -q},
      {1, q - 1, 0, -q},
  };
}

bool equal_up_to_row_order(RatMatrix a, RatMatrix b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

// Hamming distance relations on {0,1}^3 (the cube).
RelationTable cube_table() {
  RelationTable t(8, 3);
  for (unsigned x = 0; x < 8; ++x)
    for (unsigned y = x + 1; y < 8; ++y) t.set(x, y, std::popcount(x ^ y));
  return t;
}

RelationTable two_copies(const RelationTable& t) {
  RelationTable out(2 * t.n(), t.d() + 1);
  for (std::size_t x = 0; x < 2 * t.n(); ++x)
    for (std::size_t y = x + 1; y < 2 * t.n(); ++y) {
      const bool same = (x < t.n()) == (y < t.n());
      out.set(x, y, same ? t(x % t.n(), y % t.n()) : t.d() + 1);
    }
  return out;
}

Eigen::MatrixXd adjacency(const RelationTable& t, int c) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(t.n(), t.n());
  for (std::size_t x = 0; x < t.n(); ++x)
    for (std::size_t y = 0; y < t.n(); ++y)
      if (t(x, y) == c) a(x, y) = 1;
  return a;
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

}  // namespace

TEST_CASE("linear algebra helpers") {
  const RatMatrix a = {{2, 1}, {1, 2}};
  const auto cp = ratla::charpoly(a);
  CHECK(cp == std::vector<Rational>{3, -4, 1});
  const auto roots = integer_roots(cp, 5);
  CHECK(roots == std::vector<std::pair<std::int64_t, int>>{{1, 1}, {3, 1}});
  CHECK_THROWS_AS(integer_roots({-2, 0, 1}, 5), NonIntegralSpectrum);
  const auto inv = ratla::inverse(a);
  REQUIRE(inv);
  CHECK(ratla::mul(a, *inv) == ratla::identity(2));
  CHECK_FALSE(ratla::inverse({{1, 2}, {2, 4}}));
  CHECK(rat_str(Rational(-3, 6)) == "-1/2");
  CHECK(rat_str(Rational(4)) == "4/1");
}

TEST_CASE("verify_scheme: HX and fine tables at h=2, with negative control") {
  const HxScheme hx(make_field(2));
  const auto t = hx.hx_table();
  const auto a = verify_scheme(t, 2);
  CHECK(a.d == 3);
  CHECK(a.valencies == std::vector<std::int64_t>{1, 17, 34, 68});
  CHECK(check_intersection_identities(a));
  CHECK(verify_scheme(t, 1).p == a.p);

  const auto fine = hx.fine_table();
  const auto af = verify_scheme(fine, 2);
  CHECK(af.d == 7);

  auto bad = t;
  bad.set(0, 1, bad(0, 1) == 1 ? 2 : 1);
  CHECK_THROWS_AS(verify_scheme(bad), NotAScheme);
  try {
    verify_scheme(bad);
  } catch (const NotAScheme& e) {
    CHECK(e.expected != e.found);
  }
}

TEST_CASE("intersection numbers against direct triple counting") {
  const HxScheme hx(make_field(2));
  const auto t = hx.hx_table();
  const auto a = verify_scheme(t);
  for (std::size_t x = 0; x < t.n(); x += 13)
    for (std::size_t y = 0; y < t.n(); y += 7) {
      std::int64_t c[4][4] = {};
      for (std::size_t z = 0; z < t.n(); ++z) ++c[t(x, z)][t(z, y)];
      for (int i = 0; i <= 3; ++i)
        for (int j = 0; j <= 3; ++j) REQUIRE(c[i][j] == a.p[t(x, y)][i][j]);
    }
}

TEST_CASE("eigenmatrix at h=2 matches the closed form and the numerical spectrum") {
  const HxScheme hx(make_field(2));
  const auto t = hx.hx_table();
  const auto a = verify_scheme(t);
  const auto e = eigenmatrix(a);
  CHECK(e.P[0] == std::vector<Rational>{1, 17, 34, 68});
  CHECK(equal_up_to_row_order(e.P, expected_p(4)));
  CHECK(check_pq(e, a.n));
  CHECK(check_orthogonality(e, a));
  Rational total = 0;
  for (const auto& m : e.multiplicities) total += m;
  CHECK(total == 120);

  // Spectrum of A_1 with multiplicities, in floating point.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(adjacency(t, 1));
  std::map<long, int> numeric;
  for (int i = 0; i < es.eigenvalues().size(); ++i) ++numeric[std::lround(es.eigenvalues()[i])];
  std::map<long, int> exact;
  for (std::size_t j = 0; j < e.P.size(); ++j)
    exact[static_cast<long>(e.P[j][1])] += static_cast<int>(e.multiplicities[j]);
  CHECK(numeric == exact);
}

TEST_CASE("Krein parameters against idempotents built in floating point") {
  const HxScheme hx(make_field(2));
  const auto t = hx.hx_table();
  const auto a = verify_scheme(t);
  const auto e = eigenmatrix(a);
  const auto kr = krein_and_qpoly(e, a);
  const int d = a.d;
  const auto n = static_cast<double>(a.n);
  // Generic combination separating the eigenspaces.
  Eigen::MatrixXd m = adjacency(t, 1) + std::sqrt(2.0) * adjacency(t, 2) + std::sqrt(3.0) * adjacency(t, 3);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  std::vector<Eigen::MatrixXd> E;
  for (int j = 0; j <= d; ++j) {
    const double theta = to_double(e.P[j][1]) + std::sqrt(2.0) * to_double(e.P[j][2]) +
                         std::sqrt(3.0) * to_double(e.P[j][3]);
    Eigen::MatrixXd proj = Eigen::MatrixXd::Zero(a.n, a.n);
    int cnt = 0;
    for (int i = 0; i < es.eigenvalues().size(); ++i)
      if (std::abs(es.eigenvalues()[i] - theta) < 1e-6) {
        proj += es.eigenvectors().col(i) * es.eigenvectors().col(i).transpose();
        ++cnt;
      }
    REQUIRE(cnt == static_cast<int>(e.multiplicities[j]));
    E.push_back(proj);
  }
  for (int i = 0; i <= d; ++i)
    for (int j = 0; j <= d; ++j) {
      const Eigen::MatrixXd had = E[i].cwiseProduct(E[j]);
      for (int k = 0; k <= d; ++k) {
        const double qk = n * (had * E[k]).trace() / to_double(e.multiplicities[k]);
        REQUIRE(std::abs(qk - to_double(kr.q[k][i][j])) < 1e-8);
      }
    }
  CHECK(kr.nonnegative);
  CHECK_FALSE(kr.q_polynomial_orderings.empty());
  CHECK(kr.p_polynomial_orderings.empty());
}

TEST_CASE("polynomial ordering search on a distance-regular control") {
  const auto t = cube_table();
  const auto a = verify_scheme(t);
  const auto e = eigenmatrix(a);
  const auto kr = krein_and_qpoly(e, a);
  CHECK(std::find(kr.p_polynomial_orderings.begin(), kr.p_polynomial_orderings.end(),
                  std::vector<int>{0, 1, 2, 3}) != kr.p_polynomial_orderings.end());
  CHECK_FALSE(kr.q_polynomial_orderings.empty());
}

TEST_CASE("eigenmatrix and Krein data at h=3") {
  const HxScheme hx(make_field(3));
  const auto t = hx.hx_table(4);
  const auto a = verify_scheme(t, 4);
  const auto e = eigenmatrix(a);
  CHECK(e.P[0] == std::vector<Rational>{1, 195, 260, 1560});
  CHECK(equal_up_to_row_order(e.P, expected_p(8)));
  CHECK(check_pq(e, a.n));
  const auto kr = krein_and_qpoly(e, a);
  CHECK_FALSE(kr.q_polynomial_orderings.empty());
  CHECK(kr.p_polynomial_orderings.empty());
  CHECK(is_primitive(t));
  const auto srg = srg_check(t, {1, 2}, 4);
  CHECK(srg.ok);
  CHECK((srg.v == 2016 && srg.k == 455 && srg.lambda == 70 && srg.mu == 112));
}

TEST_CASE("fusion, strong regularity and primitivity at h=2") {
  const HxScheme hx(make_field(2));
  const auto t = hx.hx_table();
  CHECK(fuse(t, {{1}, {2}, {3}}) == t);
  CHECK_THROWS_AS(fuse(t, {{1, 2}, {2, 3}}), std::invalid_argument);
  CHECK_THROWS_AS(fuse(t, {{1, 2}}), std::invalid_argument);
  CHECK_THROWS_AS(fuse(t, {{1, 2, 3}, {}}), std::invalid_argument);

  // Which two-class merge gives valency (q^2+1)(q-1) = 51?
  std::vector<std::vector<int>> hits;
  for (const auto& merged : {std::vector<int>{1, 2}, {1, 3}, {2, 3}}) {
    const auto r = srg_check(t, merged);
    if (r.k == 51) hits.push_back(merged);
  }
  CHECK(hits == std::vector<std::vector<int>>{{1, 2}});
  const auto r = srg_check(t, {1, 2}, 3);
  CHECK(r.ok);
  CHECK((r.v == 120 && r.k == 51 && r.lambda == 18 && r.mu == 24));
  CHECK(verify_scheme(fuse(t, {{1, 2}, {3}})).d == 2);

  // Naive common-neighbour count on a few pairs.
  const auto g = class_graph(t, {1, 2});
  for (std::size_t x = 0; x < 120; x += 17)
    for (std::size_t y = x + 1; y < 120; y += 5) {
      int c = 0;
      for (std::size_t z = 0; z < 120; ++z) c += g.test(x, z) && g.test(z, y);
      REQUIRE(c == (g.test(x, y) ? 18 : 24));
    }

  CHECK(is_primitive(t));
  const auto conn = class_connectivity(t);
  CHECK(conn == std::vector<bool>{true, true, true, true});
  CHECK_FALSE(is_primitive(two_copies(t)));
  // A non-scheme also fails strong regularity when degrees differ.
  auto bad = t;
  bad.set(0, 1, 3);
  bad.set(0, 2, 3);
  CHECK_FALSE(srg_check(bad, {1, 2}).ok);

  const HxScheme hx1(make_field(1));
  const auto k6 = srg_check(hx1.hx_table(), {1, 2});
  CHECK(k6.ok);
  CHECK(k6.degenerate);
  CHECK((k6.v == 6 && k6.k == 5));
  CHECK_THROWS_AS(verify_scheme(hx1.hx_table()), std::invalid_argument);
}
