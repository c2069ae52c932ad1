#include "subgeom/constants.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace subgeom {

double bar_b(const DriftCertificate& cert) {
  return 2.0 * cert.b_v + cert.eps_b * eval_phi(cert.phi, 1.0);
}

double m_one(const DriftCertificate& cert) {
  if (cert.eps_nu >= 1.0) {
    throw std::domain_error(
        "m_one: eps_nu = 1 is degenerate (coupling certain, M_1 unused)");
  }
  const double r1 = rate_r(cert.phi, cert.eps_b, 1);
  const double phi1 = eval_phi(cert.phi, 1.0);
  return r1 * (1.0 + (2.0 * r1 / (cert.eps_b * phi1)) *
                         ((cert.b_v + cert.c_v) / (1.0 - cert.eps_nu) - 1.0));
}

SeriesResult c_star(const DriftCertificate& cert, double tol,
                    std::int64_t j_max) {
  if (cert.eps_nu >= 1.0) return {1.0, 1, 0.0};
  if (cert.phi.is_constant()) {
    // delta_k == 0: exact geometric series, sum = 1/eps_nu.
    return {1.0 / cert.eps_nu, 1, 0.0};
  }
  const double m1 = m_one(cert);
  const double one_m_nu = 1.0 - cert.eps_nu;

  long double partial = 0.0L;
  double term = 1.0;  // t_1
  for (std::int64_t j = 1; j <= j_max; ++j) {
    partial += term;
    // rho_j = (1-eps_nu)(1 + delta_j M_1), non-increasing in j.
    const double rho = one_m_nu * (1.0 + delta_k(cert.phi, cert.eps_b, j) * m1);
    if (rho < 1.0) {
      const double tail = term * rho / (1.0 - rho);
      if (tail < tol * static_cast<double>(partial)) {
        return {static_cast<double>(partial) + tail, j, tail};
      }
    }
    term *= rho;
    if (!std::isfinite(term) || !std::isfinite(static_cast<double>(partial))) {
      throw std::overflow_error("c_star: series overflows double range");
    }
  }
  throw std::runtime_error(
      "c_star: no convergence within j_max terms (certificate inconsistent "
      "with delta_k -> 0)");
}

TheoremConstants theorem_c(const DriftCertificate& cert, double tol) {
  TheoremConstants out{};
  out.bar_b = bar_b(cert);
  const auto series = c_star(cert, tol);
  out.c_star = series.value;
  out.series_terms_used = series.terms;
  out.series_tail_bound = series.tail;
  out.m_one = (cert.eps_nu >= 1.0) ? std::numeric_limits<double>::quiet_NaN()
                                   : m_one(cert);
  const double phi1 = eval_phi(cert.phi, 1.0);
  const double r1 = rate_r(cert.phi, cert.eps_b, 1);
  const double denom = cert.eps_b * phi1;
  out.c = (2.0 / denom) * (2.0 + out.bar_b / cert.eps_nu +
                           out.c_star * out.bar_b * r1 * (1.0 + r1 / denom));
  return out;
}

double poly_min_const(double alpha, double beta, double eps_b) {
  if (!(alpha >= 0.0 && alpha < 1.0) || !(beta > 0.0) ||
      !(eps_b > 0.0 && eps_b < 1.0)) {
    throw std::domain_error("poly_min_const: parameters out of domain");
  }
  if (alpha == 0.0) return 1.0;
  return std::min(1.0, std::pow(eps_b * beta * (1.0 - alpha),
                                alpha / (1.0 - alpha)));
}

double poly_corollary_const(double alpha, double beta, double eps_b,
                            double xi) {
  if (!(xi >= 0.0 && xi <= 1.0)) {
    throw std::domain_error("poly_corollary_const: xi out of [0, 1]");
  }
  const double c_abe = poly_min_const(alpha, beta, eps_b);
  const double xi_pow = (xi == 0.0) ? 1.0 : std::pow(xi, xi);
  const double omxi_pow =
      (xi == 1.0) ? 1.0 : std::pow(1.0 - xi, 1.0 - xi);
  const double beta_pow = (xi == 1.0) ? 1.0 : std::pow(beta, -(1.0 - xi));
  return std::pow(c_abe, -xi) * xi_pow * omxi_pow * beta_pow;
}

RescaleResult rescale_condition2(double alpha, double beta, double b_hat,
                                 double c_hat, double lambda,
                                 double eps_b_target) {
  if (!(lambda >= 0.0 && lambda < 1.0)) {
    throw std::domain_error("rescale_condition2: lambda out of [0, 1)");
  }
  if (!(eps_b_target > 0.0 && eps_b_target < 1.0)) {
    throw std::domain_error("rescale_condition2: eps_b out of (0, 1)");
  }
  if (!(b_hat >= 0.0) || !(c_hat >= 1.0)) {
    throw std::domain_error("rescale_condition2: bad b_hat / c_hat");
  }
  const double eta = 1.0 - lambda * alpha;
  const double alpha_lambda = alpha * (1.0 - lambda) / eta;
  PhiSpec phi_new(eta * beta, alpha_lambda);
  const double b_v = std::pow(b_hat, eta) + eval_phi(phi_new, c_hat);

  const double needed = b_v / (1.0 - eps_b_target);
  double c_v_min;
  if (alpha_lambda == 0.0) {
    if (phi_new.beta < needed) {
      throw std::domain_error(
          "rescale_condition2: constant phi cannot reach b_V/(1-eps_b)");
    }
    c_v_min = c_hat;
  } else {
    c_v_min = std::max(
        c_hat, std::pow(needed / phi_new.beta, 1.0 / alpha_lambda));
  }
  return {eta, alpha_lambda, phi_new, b_v, c_v_min};
}

}  // namespace subgeom
