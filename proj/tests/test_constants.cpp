#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "subgeom/constants.hpp"

using namespace subgeom;

namespace {

DriftCertificate make_cert(PhiSpec phi, double b_v, double c_v, double eps_b,
                           double eps_nu) {
  return DriftCertificate{phi,  {1.0, 2.0}, {0, 1}, {true, true},
                          b_v,  c_v,        eps_b,  eps_nu,
                          {}};
}

}  // namespace

TEST_CASE("bar_b formula") {
  CHECK(bar_b(make_cert(PhiSpec(2.0, 0.0), 3.0, 4.0, 0.5, 0.5)) ==
        doctest::Approx(7.0));
  CHECK(bar_b(make_cert(PhiSpec(1.7, 0.0), 0.0, 1.0, 0.3, 0.5)) ==
        doctest::Approx(0.3 * 1.7));
  CHECK(bar_b(make_cert(PhiSpec(1.0, 0.0), 1.0, 1.0, 0.5, 0.5)) ==
        doctest::Approx(2.5));
}

TEST_CASE("m_one formula") {
  // Constant phi, b_v + c_v = 2, eps_nu = 0.5, eps_b = 0.5.
  CHECK(m_one(make_cert(PhiSpec(1.0, 0.0), 1.0, 1.0, 0.5, 0.5)) ==
        doctest::Approx(13.0));
  // Bracket collapses when (b_v + c_v)/(1 - eps_nu) = 1.
  CHECK(m_one(make_cert(PhiSpec(1.0, 0.0), 0.1, 0.4, 0.5, 0.5)) ==
        doctest::Approx(1.0));
  // Polynomial case picks up r(1) = 1.25.
  const auto cert = make_cert(PhiSpec(1.0, 0.5), 1.0, 1.0, 0.5, 0.5);
  const double r1 = rate_r(cert.phi, cert.eps_b, 1);
  CHECK(r1 == doctest::Approx(1.25));
  CHECK(m_one(cert) == doctest::Approx(r1 * (1.0 + (2.0 * r1 / 0.5) * 3.0)));

  CHECK_THROWS_AS(m_one(make_cert(PhiSpec(1.0, 0.0), 1.0, 1.0, 0.5, 1.0)),
                  std::domain_error);
}

TEST_CASE("c_star constant-phi and degenerate branches") {
  for (double eps_nu : {0.1, 0.25, 0.5, 0.9}) {
    const auto res =
        c_star(make_cert(PhiSpec(1.0, 0.0), 1.0, 1.0, 0.5, eps_nu));
    CHECK(std::abs(res.value - 1.0 / eps_nu) <= 1e-12 / eps_nu);
    CHECK(res.tail == 0.0);
  }
  const auto one = c_star(make_cert(PhiSpec(1.0, 0.5), 1.0, 1.0, 0.5, 1.0));
  CHECK(one.value == doctest::Approx(1.0));
  CHECK(one.terms == 1);
}

TEST_CASE("c_star agrees with brute-force summation") {
  const auto cert = make_cert(PhiSpec(1.0, 0.5), 1.0, 1.0, 0.5, 0.5);
  const double m1 = m_one(cert);

  long double sum = 0.0L;
  long double term = 1.0L;
  for (std::int64_t j = 1; j <= 10000; ++j) {
    sum += term;
    term *= (1.0L - 0.5L) *
            (1.0L + static_cast<long double>(delta_k(cert.phi, 0.5, j)) * m1);
  }
  const auto res = c_star(cert, 1e-12);
  CHECK(res.value >= static_cast<double>(sum) * (1.0 - 1e-13));
  CHECK(res.value == doctest::Approx(static_cast<double>(sum)).epsilon(1e-9));
  CHECK(res.tail >= 0.0);
}

TEST_CASE("theorem_c worked constant-phi examples") {
  const auto tc = theorem_c(make_cert(PhiSpec(1.0, 0.0), 1.0, 1.0, 0.5, 0.5));
  CHECK(tc.bar_b == doctest::Approx(2.5));
  CHECK(tc.c_star == doctest::Approx(2.0));
  CHECK(tc.c == doctest::Approx(88.0));

  const auto tc1 = theorem_c(make_cert(PhiSpec(1.0, 0.0), 1.0, 1.0, 0.5, 1.0));
  CHECK(tc1.c_star == doctest::Approx(1.0));
  CHECK(tc1.c == doctest::Approx(48.0));
  CHECK(std::isnan(tc1.m_one));

  for (double eps_nu : {0.2, 0.6, 1.0}) {
    for (double alpha : {0.0, 0.5}) {
      CHECK(theorem_c(make_cert(PhiSpec(1.0, alpha), 1.0, 2.0, 0.5, eps_nu)).c >
            0.0);
    }
  }
}

TEST_CASE("theorem_c monotone in eps_nu and eps_b on a sampled grid") {
  for (double alpha : {0.0, 0.5}) {
    for (double eps_b : {0.1, 0.3, 0.5, 0.7, 0.9}) {
      double prev = std::numeric_limits<double>::infinity();
      for (double eps_nu : {0.3, 0.5, 0.7, 0.9, 1.0}) {
        const double c =
            theorem_c(make_cert(PhiSpec(1.0, alpha), 1.0, 2.0, eps_b, eps_nu))
                .c;
        CHECK(c <= prev * (1.0 + 1e-12));
        prev = c;
      }
    }
    for (double eps_nu : {0.3, 0.5, 0.9, 1.0}) {
      double prev = std::numeric_limits<double>::infinity();
      for (double eps_b : {0.1, 0.3, 0.5, 0.7, 0.9}) {
        const double c =
            theorem_c(make_cert(PhiSpec(1.0, alpha), 1.0, 2.0, eps_b, eps_nu))
                .c;
        CHECK(c <= prev * (1.0 + 1e-12));
        prev = c;
      }
    }
  }
}

TEST_CASE("poly_min_const") {
  CHECK(poly_min_const(0.5, 10.0, 0.5) == doctest::Approx(1.0));
  CHECK(poly_min_const(0.5, 1.0, 0.5) == doctest::Approx(0.25));
  CHECK(poly_min_const(0.0, 3.7, 0.2) == doctest::Approx(1.0));
  // Guaranteed lower bound r(n) >= c (n+1)^(alpha/(1-alpha)).
  for (double alpha : {0.3, 0.5, 0.8}) {
    const PhiSpec phi(1.0, alpha);
    const double cmin = poly_min_const(alpha, 1.0, 0.5);
    for (std::int64_t nn = 0; nn <= 10000; nn += 97) {
      CHECK(rate_r(phi, 0.5, nn) + 1e-12 >=
            cmin * std::pow(static_cast<double>(nn) + 1.0,
                            alpha / (1.0 - alpha)));
    }
  }
}

TEST_CASE("poly_corollary_const") {
  CHECK(poly_corollary_const(0.5, 2.0, 0.9, 0.0) == doctest::Approx(0.5));
  CHECK(poly_corollary_const(0.0, 1.0, 0.5, 1.0) == doctest::Approx(1.0));
  CHECK(poly_corollary_const(0.5, 1.0, 0.5, 0.5) == doctest::Approx(1.0));
}

TEST_CASE("rescale_condition2") {
  const auto id = rescale_condition2(0.5, 1.0, 2.0, 3.0, 0.0, 0.5);
  CHECK(id.eta == doctest::Approx(1.0));
  CHECK(id.alpha_lambda == doctest::Approx(0.5));
  CHECK(id.phi_new.beta == doctest::Approx(1.0));

  const auto rs = rescale_condition2(0.5, 1.0, 2.0, 3.0, 0.5, 0.5);
  CHECK(rs.eta == doctest::Approx(0.75));
  CHECK(rs.alpha_lambda == doctest::Approx(1.0 / 3.0));
  CHECK(rs.b_v ==
        doctest::Approx(std::pow(2.0, 0.75) + 0.75 * std::pow(3.0, 1.0 / 3.0)));
  // Minimal c_V saturates phi_new(c_V) >= b_V/(1-eps_b).
  CHECK(eval_phi(rs.phi_new, rs.c_v_min) >= rs.b_v / 0.5 - 1e-12);
  CHECK(eval_phi(rs.phi_new, rs.c_v_min) ==
        doctest::Approx(rs.b_v / 0.5).epsilon(1e-12));

  // Exponent collapses toward the constant-drift limit as lambda -> 1.
  const auto lim = rescale_condition2(0.5, 1.0, 2.0, 3.0, 0.999, 0.5);
  CHECK(lim.alpha_lambda < 1e-3);

  CHECK_THROWS_AS(rescale_condition2(0.5, 1.0, 2.0, 3.0, 1.0, 0.5),
                  std::domain_error);
}
