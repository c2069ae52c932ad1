#include "subgeom/certify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace subgeom {

namespace {

constexpr double kEpsBMargin = 1e-9;  // relative safety on the maximal eps_b

std::vector<bool> make_mask(std::size_t n, const std::vector<int>& set_c) {
  std::vector<bool> mask(n, false);
  for (int s : set_c) {
    if (s < 0 || static_cast<std::size_t>(s) >= n) {
      throw std::invalid_argument("small set contains an out-of-range state");
    }
    mask[static_cast<std::size_t>(s)] = true;
  }
  return mask;
}

}  // namespace

MinorisationResult minorisation(const KernelSequence& seq,
                                const std::vector<int>& set_c) {
  if (set_c.empty()) {
    throw std::invalid_argument("minorisation: small set is empty");
  }
  const std::size_t n = seq.n_states();
  make_mask(n, set_c);  // range check

  MinorisationResult res;
  res.eps_nu = 1.0;
  for (std::size_t ki = 0; ki < seq.n_kernels(); ++ki) {
    const FiniteKernel& p = seq.kernels()[ki];
    std::vector<double> m(n, std::numeric_limits<double>::infinity());
    for (int x : set_c) {
      for (std::size_t y = 0; y < n; ++y) {
        m[y] = std::min(m[y], p(static_cast<std::size_t>(x), y));
      }
    }
    const double mass = std::accumulate(m.begin(), m.end(), 0.0);
    if (mass <= 0.0) {
      // Locate a pair of C-rows with disjoint support.
      res.eps_nu = 0.0;
      res.bad_kernel = ki;
      for (std::size_t i = 0; i < set_c.size() && res.eps_nu == 0.0; ++i) {
        for (std::size_t j = i + 1; j < set_c.size(); ++j) {
          double overlap = 0.0;
          for (std::size_t y = 0; y < n; ++y) {
            overlap += std::min(p(set_c[i], y), p(set_c[j], y));
          }
          if (overlap <= 0.0) {
            res.bad_x = static_cast<std::size_t>(set_c[i]);
            res.bad_x2 = static_cast<std::size_t>(set_c[j]);
            break;
          }
        }
      }
      res.nus.clear();
      return res;
    }
    res.eps_nu = std::min(res.eps_nu, mass);
    for (double& y : m) y /= mass;
    res.nus.push_back(std::move(m));
  }
  return res;
}

double fit_beta(const KernelSequence& seq, const std::vector<double>& v,
                double alpha, const std::vector<int>& set_c) {
  const std::size_t n = seq.n_states();
  const auto mask = make_mask(n, set_c);
  double beta = std::numeric_limits<double>::infinity();
  for (const FiniteKernel& p : seq.kernels()) {
    const auto pv = p.apply(v);
    for (std::size_t x = 0; x < n; ++x) {
      if (mask[x]) continue;
      beta = std::min(beta, (v[x] - pv[x]) / std::pow(v[x], alpha));
    }
  }
  if (!std::isfinite(beta) || beta <= 0.0) {
    throw CertifyFailure("fit_beta: no positive drift scale off C", {});
  }
  return beta;
}

DriftCertificate drift_constants(const KernelSequence& seq,
                                 const std::vector<double>& v,
                                 const PhiSpec& phi,
                                 const std::vector<int>& set_c,
                                 std::optional<double> eps_b_override) {
  const std::size_t n = seq.n_states();
  if (v.size() != n) {
    throw std::invalid_argument("drift_constants: V dimension mismatch");
  }
  for (double vx : v) {
    if (!(vx >= 1.0)) {
      throw std::invalid_argument("drift_constants: V must be >= 1 everywhere");
    }
  }
  const auto mask = make_mask(n, set_c);

  std::vector<DriftViolation> violations;
  double b_v = 0.0;
  double c_v = 1.0;
  double inf_phi_off_c = std::numeric_limits<double>::infinity();
  bool c_is_everything = true;
  for (std::size_t x = 0; x < n; ++x) {
    if (mask[x]) {
      c_v = std::max(c_v, v[x]);
    } else {
      c_is_everything = false;
      inf_phi_off_c = std::min(inf_phi_off_c, eval_phi(phi, v[x]));
    }
  }

  for (std::size_t ki = 0; ki < seq.n_kernels(); ++ki) {
    const auto pv = seq.kernels()[ki].apply(v);
    for (std::size_t x = 0; x < n; ++x) {
      const double g = pv[x] - v[x] + eval_phi(phi, v[x]);
      if (mask[x]) {
        b_v = std::max(b_v, g);
      } else if (g > 1e-12) {
        violations.push_back({ki, x, g, "drift fails off C"});
      }
    }
  }
  if (!violations.empty()) {
    throw CertifyFailure("drift inequality fails off the small set",
                         std::move(violations));
  }

  double eps_b;
  if (c_is_everything) {
    eps_b = eps_b_override.value_or(0.5);
  } else if (eps_b_override) {
    eps_b = *eps_b_override;
    if (b_v > 0.0 && inf_phi_off_c < b_v / (1.0 - eps_b)) {
      throw CertifyFailure(
          "requested eps_b violates inf phi(V) >= b_V/(1-eps_b)", {});
    }
  } else {
    const double raw = 1.0 - b_v / inf_phi_off_c;
    if (raw <= 0.0) {
      throw CertifyFailure(
          "no admissible eps_b: inf_{x not in C} phi(V(x)) <= b_V",
          {{0, 0, raw, "eps_b <= 0"}});
    }
    eps_b = raw * (1.0 - kEpsBMargin);
  }
  if (!(eps_b > 0.0 && eps_b < 1.0)) {
    throw CertifyFailure("eps_b outside (0, 1)", {});
  }

  auto mino = minorisation(seq, set_c);
  if (mino.eps_nu <= 0.0) {
    throw CertifyFailure(
        "minorisation fails: C-rows " + std::to_string(mino.bad_x) + " and " +
            std::to_string(mino.bad_x2) + " of kernel " +
            std::to_string(mino.bad_kernel) + " have disjoint support",
        {{mino.bad_kernel, mino.bad_x, 0.0, "eps_nu = 0"}});
  }

  DriftCertificate cert{phi, v, set_c, mask, b_v, c_v, eps_b, mino.eps_nu,
                        std::move(mino.nus)};
  std::sort(cert.small_set.begin(), cert.small_set.end());
  return cert;
}

Condition2Report certify_condition2(const KernelSequence& seq,
                                    const std::vector<double>& v_hat,
                                    double alpha, double beta,
                                    const std::vector<int>& set_c,
                                    double level) {
  const std::size_t n = seq.n_states();
  if (v_hat.size() != n) {
    throw std::invalid_argument("certify_condition2: V_hat dimension mismatch");
  }
  const auto mask = make_mask(n, set_c);

  Condition2Report report;
  report.c_hat = 1.0;
  for (std::size_t x = 0; x < n; ++x) {
    if (mask[x]) report.c_hat = std::max(report.c_hat, v_hat[x]);
  }

  for (std::size_t ki = 0; ki < seq.n_kernels(); ++ki) {
    const auto pv = seq.kernels()[ki].apply(v_hat);
    for (std::size_t x = 0; x < n; ++x) {
      if (mask[x]) {
        report.b_hat = std::max(report.b_hat, pv[x]);
      } else {
        const double g =
            pv[x] - v_hat[x] + beta * std::pow(v_hat[x], alpha);
        if (g > 1e-12) {
          report.violations.push_back({ki, x, g, "uniform drift fails off C"});
        }
      }
    }
  }

  // Uniform minorisation on the level set A(level).
  std::vector<int> level_set;
  for (std::size_t x = 0; x < n; ++x) {
    if (v_hat[x] <= level) level_set.push_back(static_cast<int>(x));
  }
  if (level_set.empty()) {
    throw std::invalid_argument("certify_condition2: empty level set");
  }
  const auto mino = minorisation(seq, level_set);
  report.eps_v = mino.eps_nu;
  if (mino.eps_nu <= 0.0) {
    report.violations.push_back(
        {mino.bad_kernel, mino.bad_x, 0.0, "level set is not 1-small"});
  }
  report.ok = report.violations.empty();
  return report;
}

}  // namespace subgeom
