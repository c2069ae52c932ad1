#include "subgeom/ratefn.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace subgeom {

PhiSpec::PhiSpec(double beta_, double alpha_) : beta(beta_), alpha(alpha_) {
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw std::invalid_argument("PhiSpec: beta must be positive and finite");
  }
  if (!(alpha >= 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("PhiSpec: alpha must lie in [0, 1)");
  }
}

double eval_phi(const PhiSpec& spec, double v) {
  if (!(v >= 1.0)) {
    throw std::domain_error("eval_phi: v must be >= 1");
  }
  if (spec.alpha == 0.0) return spec.beta;
  return spec.beta * std::pow(v, spec.alpha);
}

double phi_prime(const PhiSpec& spec, double v) {
  if (!(v >= 1.0)) {
    throw std::domain_error("phi_prime: v must be >= 1");
  }
  if (spec.alpha == 0.0) return 0.0;
  return spec.alpha * spec.beta * std::pow(v, spec.alpha - 1.0);
}

double big_h(const PhiSpec& spec, double t) {
  if (!(t >= 1.0)) {
    throw std::domain_error("big_h: t must be >= 1");
  }
  if (spec.alpha == 0.0) return (t - 1.0) / spec.beta;
  const double one_m_a = 1.0 - spec.alpha;
  return (std::pow(t, one_m_a) - 1.0) / (spec.beta * one_m_a);
}

namespace {

double simpson(const PhiSpec& spec, double a, double b) {
  const double fa = 1.0 / eval_phi(spec, a);
  const double fm = 1.0 / eval_phi(spec, 0.5 * (a + b));
  const double fb = 1.0 / eval_phi(spec, b);
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_simpson(const PhiSpec& spec, double a, double b, double whole,
                        double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double left = simpson(spec, a, m);
  const double right = simpson(spec, m, b);
  const double err = left + right - whole;
  if (depth <= 0 || std::abs(err) <= 15.0 * tol) {
    return left + right + err / 15.0;
  }
  return adaptive_simpson(spec, a, m, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(spec, m, b, right, 0.5 * tol, depth - 1);
}

}  // namespace

double big_h_quad(const PhiSpec& spec, double t, double abs_tol) {
  if (!(t >= 1.0)) {
    throw std::domain_error("big_h_quad: t must be >= 1");
  }
  if (t == 1.0) return 0.0;
  return adaptive_simpson(spec, 1.0, t, simpson(spec, 1.0, t), abs_tol, 52);
}

double big_h_inv(const PhiSpec& spec, double u) {
  if (!(u >= 0.0)) {
    throw std::domain_error("big_h_inv: u must be >= 0");
  }
  if (spec.alpha == 0.0) return 1.0 + spec.beta * u;
  const double one_m_a = 1.0 - spec.alpha;
  return std::pow(u * spec.beta * one_m_a + 1.0, 1.0 / one_m_a);
}

double big_h_inv_bisect(const PhiSpec& spec, double u, double u_tol) {
  if (!(u >= 0.0)) {
    throw std::domain_error("big_h_inv_bisect: u must be >= 0");
  }
  if (u == 0.0) return 1.0;
  // The closed form seeds the bracket, guaranteeing enclosure.
  double lo = 1.0;
  double hi = std::max(2.0, 2.0 * big_h_inv(spec, u));
  while (big_h(spec, hi) < u) hi *= 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double res = big_h(spec, mid) - u;
    if (std::abs(res) <= u_tol) return mid;
    (res < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double rate_r_real(const PhiSpec& spec, double eps_b, double t) {
  if (!(eps_b > 0.0 && eps_b <= 1.0)) {
    throw std::invalid_argument("rate_r: eps_b must lie in (0, 1]");
  }
  if (!(t >= 0.0)) {
    throw std::domain_error("rate_r: argument must be >= 0");
  }
  if (spec.alpha == 0.0) return 1.0;
  const double one_m_a = 1.0 - spec.alpha;
  return std::pow(eps_b * t * spec.beta * one_m_a + 1.0,
                  spec.alpha / one_m_a);
}

double rate_r(const PhiSpec& spec, double eps_b, std::int64_t n) {
  if (n < 0) throw std::domain_error("rate_r: n must be >= 0");
  return rate_r_real(spec, eps_b, static_cast<double>(n));
}

double delta_k(const PhiSpec& spec, double eps_b, std::int64_t k) {
  if (k < 1) throw std::domain_error("delta_k: k must be >= 1");
  if (spec.alpha == 0.0) return 0.0;
  return eps_b * phi_prime(spec, big_h_inv(spec, eps_b * static_cast<double>(k)));
}

double h_k(const PhiSpec& spec, double v, std::int64_t k) {
  if (!(v >= 1.0)) throw std::domain_error("h_k: v must be >= 1");
  if (k < 0) throw std::domain_error("h_k: k must be >= 0");
  const double kd = static_cast<double>(k);
  return big_h_inv(spec, big_h(spec, v) + kd) - big_h_inv(spec, kd);
}

RateTable make_rate_table(const PhiSpec& spec, double eps_b,
                          std::size_t n_max) {
  RateTable table;
  table.eps_b = eps_b;
  table.values.reserve(n_max + 1);
  for (std::size_t n = 0; n <= n_max; ++n) {
    table.values.push_back(rate_r(spec, eps_b, static_cast<std::int64_t>(n)));
  }
  return table;
}

}  // namespace subgeom
