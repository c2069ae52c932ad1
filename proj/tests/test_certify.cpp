#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "fixture_util.h"
#include "subgeom/certify.hpp"
#include "subgeom/constants.hpp"

using namespace subgeom;

TEST_CASE("minorisation on the worked 2-state chain") {
  const KernelSequence seq(SeqMode::Homogeneous,
                           {FiniteKernel({{0.7, 0.3}, {0.4, 0.6}})});
  const auto m = minorisation(seq, {0, 1});
  CHECK(m.eps_nu == doctest::Approx(0.7));
  REQUIRE(m.nus.size() == 1);
  CHECK(m.nus[0][0] == doctest::Approx(4.0 / 7.0));
  CHECK(m.nus[0][1] == doctest::Approx(3.0 / 7.0));
}

TEST_CASE("minorisation edge cases") {
  const KernelSequence same(SeqMode::Homogeneous,
                            {FiniteKernel({{0.6, 0.4}, {0.6, 0.4}})});
  CHECK(minorisation(same, {0, 1}).eps_nu == doctest::Approx(1.0));

  const KernelSequence disjoint(SeqMode::Homogeneous,
                                {FiniteKernel({{1.0, 0.0}, {0.0, 1.0}})});
  const auto m = minorisation(disjoint, {0, 1});
  CHECK(m.eps_nu == 0.0);
  CHECK(m.bad_x != m.bad_x2);
}

TEST_CASE("minorisation eps_nu is maximal for the canonical nu") {
  const auto spec = load_fixture("birth_death.json");
  const KernelSequence seq = spec.sequence();
  const auto m = minorisation(seq, spec.set_c);
  const double eps_prime = m.eps_nu + 1e-6;
  bool violated = false;
  for (std::size_t k = 0; k < seq.n_kernels() && !violated; ++k) {
    for (int x : spec.set_c) {
      for (std::size_t y = 0; y < seq.n_states(); ++y) {
        if (seq.kernels()[k](static_cast<std::size_t>(x), y) <
            eps_prime * m.nus[k][y] - 1e-15) {
          violated = true;
        }
      }
    }
  }
  CHECK(violated);
}

TEST_CASE("drift_constants on the worked 2-state chain") {
  const auto spec = load_fixture("two_state.json");
  const auto cert = certify_spec(spec);
  CHECK(cert.b_v == doctest::Approx(0.8));
  CHECK(cert.c_v == doctest::Approx(2.0));
  CHECK(cert.eps_b == doctest::Approx(0.5));  // C = X default
  CHECK(cert.eps_nu == doctest::Approx(0.7));
}

TEST_CASE("drift_constants on the birth-death chain") {
  const auto spec = load_fixture("birth_death.json");
  const KernelSequence seq = spec.sequence();

  // Independent recomputation of the fitted scale and the constants.
  double beta = 1e300;
  for (std::size_t x = 4; x <= 7; ++x) {
    const auto pv = seq.kernels()[0].apply(spec.v);
    beta = std::min(beta, (spec.v[x] - pv[x]) / std::pow(spec.v[x], 0.3));
  }
  CHECK(fit_beta(seq, spec.v, spec.alpha, spec.set_c) ==
        doctest::Approx(beta).epsilon(1e-14));

  const auto cert = certify_spec(spec);
  CHECK(cert.phi.beta == doctest::Approx(beta));
  const auto pv = seq.kernels()[0].apply(spec.v);
  double b_v = 0.0;
  for (int x : spec.set_c) {
    const auto xs = static_cast<std::size_t>(x);
    b_v = std::max(b_v, pv[xs] - spec.v[xs] +
                            beta * std::pow(spec.v[xs], 0.3));
  }
  CHECK(cert.b_v == doctest::Approx(b_v));
  CHECK(cert.c_v == doctest::Approx(4.0));
  const double inf_phi_off = beta * std::pow(5.0, 0.3);
  CHECK(cert.eps_b == doctest::Approx((1.0 - b_v / inf_phi_off)).epsilon(1e-6));
  CHECK(cert.eps_b < 1.0 - b_v / inf_phi_off);  // safety margin applied
  CHECK(cert.eps_nu == doctest::Approx(0.7));
}

TEST_CASE("flat V cannot satisfy the drift") {
  const KernelSequence seq(SeqMode::Homogeneous,
                           {FiniteKernel({{0.7, 0.3}, {0.4, 0.6}})});
  CHECK_THROWS_AS(
      drift_constants(seq, {1.0, 1.0}, PhiSpec(0.5, 0.0), {0}),
      CertifyFailure);
  try {
    drift_constants(seq, {1.0, 1.0}, PhiSpec(0.5, 0.0), {0});
  } catch (const CertifyFailure& e) {
    CHECK(!e.violations.empty());
    CHECK(e.violations.front().state == 1);
  }
}

TEST_CASE("certificates pass an independent pointwise re-check") {
  for (const char* name :
       {"two_state.json", "birth_death.json", "alternating.json"}) {
    CAPTURE(name);
    const auto spec = load_fixture(name);
    const KernelSequence seq = spec.sequence();
    const auto cert = certify_spec(spec);
    for (std::size_t k = 0; k < seq.n_kernels(); ++k) {
      const auto pv = seq.kernels()[k].apply(cert.v);
      for (std::size_t x = 0; x < seq.n_states(); ++x) {
        const double bound = cert.v[x] - eval_phi(cert.phi, cert.v[x]) +
                             (cert.in_c[x] ? cert.b_v : 0.0);
        CHECK(pv[x] <= bound + 1e-10);
        if (cert.in_c[x]) CHECK(cert.v[x] <= cert.c_v + 1e-12);
        if (!cert.in_c[x]) {
          CHECK(eval_phi(cert.phi, cert.v[x]) >=
                cert.b_v / (1.0 - cert.eps_b) - 1e-10);
        }
      }
      // Minorisation on C.
      for (int x : cert.small_set) {
        for (std::size_t y = 0; y < seq.n_states(); ++y) {
          CHECK(seq.kernels()[k](static_cast<std::size_t>(x), y) >=
                cert.eps_nu * cert.nus[k][y] - 1e-12);
        }
      }
    }
  }
}

TEST_CASE("certify_condition2 singleton reduces to drift semantics") {
  const auto spec = load_fixture("birth_death.json");
  const KernelSequence seq = spec.sequence();
  const double beta = fit_beta(seq, spec.v, spec.alpha, spec.set_c);
  const auto report =
      certify_condition2(seq, spec.v, spec.alpha, beta, spec.set_c, 4.0);
  CHECK(report.ok);
  CHECK(report.b_hat > 0.0);
  CHECK(report.eps_v == doctest::Approx(0.7));
}

TEST_CASE("certify_condition2 names the failing kernel and state") {
  const FiniteKernel good({{0.9, 0.1}, {0.9, 0.1}});
  const FiniteKernel bad({{0.1, 0.9}, {0.1, 0.9}});
  const KernelSequence seq(SeqMode::Cycle, {good, bad});
  const auto report =
      certify_condition2(seq, {1.0, 4.0}, 0.5, 1.0, {0}, 1.0);
  CHECK(!report.ok);
  REQUIRE(!report.violations.empty());
  CHECK(report.violations.front().kernel == 1);
}

TEST_CASE("lambda sweep re-certifies the transformed drift") {
  const auto spec = load_fixture("birth_death.json");
  const KernelSequence seq = spec.sequence();
  const double beta_hat = fit_beta(seq, spec.v, spec.alpha, spec.set_c);
  const auto cond2 =
      certify_condition2(seq, spec.v, spec.alpha, beta_hat, spec.set_c, 4.0);
  REQUIRE(cond2.ok);
  for (double lambda : {0.0, 0.25, 0.5}) {
    CAPTURE(lambda);
    const auto rs = rescale_condition2(spec.alpha, beta_hat, cond2.b_hat,
                                       cond2.c_hat, lambda, 0.5);
    std::vector<double> v(spec.v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
      v[i] = std::pow(spec.v[i], rs.eta);
    }
    const double beta_new = fit_beta(seq, v, rs.alpha_lambda, spec.set_c);
    CHECK(beta_new > 0.0);
    CHECK_NOTHROW(
        drift_constants(seq, v, PhiSpec(beta_new, rs.alpha_lambda), spec.set_c));
  }
}
