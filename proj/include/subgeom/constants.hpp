#pragma once

#include <cstdint>

#include "subgeom/certify.hpp"
#include "subgeom/ratefn.hpp"

namespace subgeom {

// bar_b = 2 b_V + eps_b phi(1).
double bar_b(const DriftCertificate& cert);

// M_1 = r(1) [1 + (2 r(1) / (eps_b phi(1))) ((b_V + c_V)/(1-eps_nu) - 1)].
// Throws if eps_nu == 1 (M_1 is unused then: coupling is certain).
double m_one(const DriftCertificate& cert);

struct SeriesResult {
  double value;        // partial sum plus rigorous geometric tail
  std::int64_t terms;  // terms summed
  double tail;         // geometric tail bound added to value
};

// Upper bound on c_* = sum_j (1-eps_nu)^{j-1} prod_{k<j} (1 + delta_k M_1).
// Truncation uses the monotone term ratio rho_j = (1-eps_nu)(1+delta_j M_1);
// summation stops at the first J with rho_J < 1 and geometric tail below
// tol * partial sum.
SeriesResult c_star(const DriftCertificate& cert, double tol = 1e-10,
                    std::int64_t j_max = 1000000);

struct TheoremConstants {
  double bar_b;
  double m_one;  // NaN when eps_nu == 1 (bypassed)
  double c_star;
  double c;
  std::int64_t series_terms_used;
  double series_tail_bound;
};

// Full explicit constant ledger; c is assembled from the c_star upper
// bound and is therefore itself a valid (conservative) constant.
TheoremConstants theorem_c(const DriftCertificate& cert, double tol = 1e-10);

// c_{alpha,beta,eps_b} = min{1, (eps_b beta (1-alpha))^{alpha/(1-alpha)}},
// guaranteeing r(n) >= c_{alpha,beta,eps_b} (n+1)^{alpha/(1-alpha)}.
double poly_min_const(double alpha, double beta, double eps_b);

// Multiplicative constant K so that the polynomial-rate inequality holds
// with K * c on the right, derived from the canonical Young pair:
// K = c_{alpha,beta,eps_b}^{-xi} xi^xi (1-xi)^(1-xi) beta^-(1-xi), 0^0 := 1.
double poly_corollary_const(double alpha, double beta, double eps_b, double xi);

struct RescaleResult {
  double eta;           // 1 - lambda * alpha
  double alpha_lambda;  // alpha (1-lambda) / (1 - lambda alpha)
  PhiSpec phi_new;      // scale eta * beta, exponent alpha_lambda
  double b_v;           // b_hat^eta + phi_new(c_hat)
  double c_v_min;       // minimal c_V >= c_hat with phi_new(c_V) >= b_v/(1-eps_b)
};

// Transform uniform polynomial drift constants (V = V_hat^eta route).
RescaleResult rescale_condition2(double alpha, double beta, double b_hat,
                                 double c_hat, double lambda,
                                 double eps_b_target);

}  // namespace subgeom
