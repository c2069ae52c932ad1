#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace subgeom {

// Drift-shape function phi(v) = beta * v^alpha on [1, inf).
// alpha = 0 encodes the constant case phi == beta.
struct PhiSpec {
  double beta;
  double alpha;

  PhiSpec(double beta_, double alpha_);

  bool is_constant() const { return alpha == 0.0; }
};

// phi(v) = beta * v^alpha, v >= 1.
double eval_phi(const PhiSpec& spec, double v);

// phi'(v) = alpha * beta * v^(alpha-1), v >= 1.
double phi_prime(const PhiSpec& spec, double v);

// H_phi(t) = int_1^t ds / phi(s), closed form.
double big_h(const PhiSpec& spec, double t);

// H_phi(t) by adaptive Simpson quadrature; self-check path for big_h.
double big_h_quad(const PhiSpec& spec, double t, double abs_tol = 1e-12);

// Inverse of H_phi: the unique t >= 1 with H_phi(t) = u, closed form.
double big_h_inv(const PhiSpec& spec, double u);

// Generic inverse by monotone bisection on big_h (residual tol on u).
double big_h_inv_bisect(const PhiSpec& spec, double u, double u_tol = 1e-12);

// Rate at a real argument t >= 0: phi(H_phi^{-1}(eps_b t)) / phi(1).
// eps_b in (0, 1]; eps_b = 1 gives the un-scaled rate of phi itself.
double rate_r_real(const PhiSpec& spec, double eps_b, double t);

// r(n) = phi(H_phi^{-1}(eps_b n)) / phi(1).
double rate_r(const PhiSpec& spec, double eps_b, std::int64_t n);

// delta_k = eps_b * phi'(H_phi^{-1}(eps_b k)); non-increasing, -> 0.
double delta_k(const PhiSpec& spec, double eps_b, std::int64_t k);

// H_k(v) = H_phi^{-1}(H_phi(v) + k) - H_phi^{-1}(k).
double h_k(const PhiSpec& spec, double v, std::int64_t k);

// Finite prefix r(0..n_max) of the rate sequence.
struct RateTable {
  double eps_b;
  std::vector<double> values;
};

RateTable make_rate_table(const PhiSpec& spec, double eps_b, std::size_t n_max);

}  // namespace subgeom
