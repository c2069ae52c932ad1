#include "subgeom/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

#include "subgeom/young.hpp"

namespace subgeom {

namespace {

CheckRow make_row(std::string check_id, std::string chain_id, std::string pair,
                  double lhs, double tail, double rhs) {
  CheckRow row;
  row.check_id = std::move(check_id);
  row.chain_id = std::move(chain_id);
  row.pair = std::move(pair);
  row.lhs = lhs;
  row.tail = tail;
  row.rhs = rhs;
  row.slack = rhs - lhs - tail;
  row.pass = lhs + tail <= rhs + 1e-9 * std::max(1.0, std::abs(rhs));
  return row;
}

std::string pair_label(std::size_t x, std::size_t x2) {
  return "(" + std::to_string(x) + ";" + std::to_string(x2) + ")";
}

// Lemma 6.2 right-hand side as a per-pair function.
std::function<double(std::size_t, std::size_t)> lemma62_rhs(
    const DriftCertificate& cert) {
  const double bb = bar_b(cert);
  return [&cert, bb](std::size_t x, std::size_t x2) {
    return cert.vbar(x, x2) / cert.eps_b + bb / (cert.eps_b * cert.eps_nu);
  };
}

// Lemma 6.4 right-hand side as a per-pair function.
std::function<double(std::size_t, std::size_t)> lemma64_rhs(
    const DriftCertificate& cert) {
  const auto tc = theorem_c(cert);
  const double phi1 = eval_phi(cert.phi, 1.0);
  const double r1 = rate_r(cert.phi, cert.eps_b, 1);
  const double denom = cert.eps_b * phi1;
  const double a = 1.0 + tc.c_star * tc.bar_b * r1 * r1 / denom;
  const double b = tc.c_star * tc.bar_b * r1 - 1.0 -
                   tc.c_star * tc.bar_b * r1 * r1 / denom;
  return [&cert, a, b, denom](std::size_t x, std::size_t x2) {
    return (a * cert.vbar(x, x2) + b) / denom;
  };
}

struct SummedDiff {
  double lhs = 0.0;
  double tail = 0.0;
  std::size_t steps = 0;
};

// Exact truncated evaluation of sum_n weight(n) |mu1 P^(n) f - mu2 P^(n) f|
// with a rigorous tail from the coupling representation: the remaining terms
// are dominated by tail_factor * <mu_n, 2 r(n) + 2 phi(Vbar)/phi(1)> summed
// via the lemma bounds.
SummedDiff summed_weighted_diff(const KernelSequence& seq,
                                const DriftCertificate& cert,
                                const std::vector<double>& f,
                                const std::function<double(std::size_t)>& weight,
                                std::vector<double> mu1, std::vector<double> mu2,
                                CoupledDistribution init, double tail_factor,
                                double rhs_hint, const VerifyOptions& opts) {
  const double phi1 = eval_phi(cert.phi, 1.0);
  const auto l62 = lemma62_rhs(cert);
  const auto l64 = lemma64_rhs(cert);
  CoupledRun run(seq, cert, std::move(init), StopRule::Tau);

  SummedDiff out;
  for (std::size_t n = 0;; ++n) {
    double diff = 0.0;
    for (std::size_t y = 0; y < mu1.size(); ++y) {
      diff += (mu1[y] - mu2[y]) * f[y];
    }
    out.lhs += weight(n) * std::abs(diff);

    const double r_n = rate_r(cert.phi, cert.eps_b,
                              static_cast<std::int64_t>(n));
    out.tail = tail_factor * 2.0 *
               (r_n * run.mass().inner(l64) + run.mass().inner(l62) / phi1);
    out.steps = n;
    if (run.total_mass() <= 0.0 ||
        out.tail <= opts.tol * std::max(rhs_hint, 1e-300)) {
      return out;
    }
    if (n >= opts.n_max) {
      throw std::runtime_error("summed_weighted_diff: no convergence by n_max");
    }
    run.step();
    mu1 = seq.at(n + 1).apply_left(mu1);
    mu2 = seq.at(n + 1).apply_left(mu2);
  }
}

CoupledDistribution product_init(std::size_t n, const std::vector<double>& mu1,
                                 const std::vector<double>& mu2) {
  CoupledDistribution init{n, std::vector<double>(n * n, 0.0)};
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t x2 = 0; x2 < n; ++x2) {
      init.at(x, x2) = mu1[x] * mu2[x2];
    }
  }
  return init;
}

// Common invariant probability measure of every kernel in the sequence, if
// one exists (within 1e-10 in TV).
std::optional<std::vector<double>> common_stationary(
    const KernelSequence& seq) {
  try {
    auto pi = stationary(seq.kernels().front());
    for (const auto& k : seq.kernels()) {
      if (tv_distance(pi, k.apply_left(pi)) > 1e-10) return std::nullopt;
    }
    return pi;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

}  // namespace

Report check_bivariate_drift(const KernelSequence& seq,
                             const DriftCertificate& cert,
                             const VerifyOptions& opts) {
  const std::size_t n = seq.n_states();
  const double bb = bar_b(cert);
  const double two_bc = 2.0 * (cert.b_v + cert.c_v) - 1.0;
  Report report;
  for (std::size_t ki = 0; ki < seq.n_kernels(); ++ki) {
    const FiniteKernel& p = seq.kernels()[ki];
    const auto pv = p.apply(cert.v);
    const AugmentedKernel aug(p, cert, ki);
    const std::string kid = opts.chain_id + "/k" + std::to_string(ki);
    for (std::size_t x = 0; x < n; ++x) {
      for (std::size_t x2 = 0; x2 < n; ++x2) {
        const double vb = cert.vbar(x, x2);
        const double phivb = eval_phi(cert.phi, vb);
        const double pbar = pv[x] + pv[x2] - 1.0;
        const bool on_cbar = cert.pair_in_cbar(x, x2);
        if (!on_cbar) {
          report.rows.push_back(make_row("joint_drift_i", kid,
                                         pair_label(x, x2), pbar, 0.0,
                                         vb - cert.eps_b * phivb));
        } else {
          report.rows.push_back(make_row("joint_drift_ii", kid,
                                         pair_label(x, x2), pbar, 0.0,
                                         two_bc));
          if (cert.eps_nu < 1.0) {
            const double qbar =
                aug.q_apply_v(x, cert.v) + aug.q_apply_v(x2, cert.v) - 1.0;
            report.rows.push_back(make_row(
                "joint_drift_iv", kid, pair_label(x, x2), qbar, 0.0,
                2.0 * (cert.b_v + cert.c_v) / (1.0 - cert.eps_nu) - 1.0));
          }
        }
        report.rows.push_back(make_row(
            "joint_drift_iii", kid, pair_label(x, x2), pbar, 0.0,
            vb - cert.eps_b * phivb + (on_cbar ? bb : 0.0)));
      }
    }
  }
  return report;
}

double check_rate_props(const PhiSpec& spec, double eps_b,
                        std::size_t n_grid) {
  std::vector<double> r(2 * n_grid + 1);
  for (std::size_t n = 0; n <= 2 * n_grid; ++n) {
    r[n] = rate_r(spec, eps_b, static_cast<std::int64_t>(n));
  }
  std::vector<double> prefix(n_grid + 1, 0.0);  // sum_{k=1}^{m} r(k)
  for (std::size_t m = 1; m <= n_grid; ++m) prefix[m] = prefix[m - 1] + r[m];

  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t n = 0; n <= n_grid; ++n) {
    const double slope =
        eps_b * phi_prime(spec, big_h_inv(spec, eps_b * static_cast<double>(n)));
    for (std::size_t m = 0; m <= n_grid; ++m) {
      // (i) r(n+m) <= r(n) r(m)
      worst = std::max(worst, (r[n + m] - r[n] * r[m]) / r[n + m]);
      // (ii) r(n+m) - r(n) <= eps_b phi'(H^-1(eps_b n)) r(n) sum_{k<=m} r(k)
      const double bound = slope * r[n] * prefix[m];
      worst = std::max(worst,
                       (r[n + m] - r[n] - bound) / std::max(1.0, bound));
    }
  }
  return worst;
}

Report check_lemma_bounds(const KernelSequence& seq,
                          const DriftCertificate& cert,
                          const VerifyOptions& opts) {
  const std::size_t n = seq.n_states();
  const double phi1 = eval_phi(cert.phi, 1.0);
  const double r1 = rate_r(cert.phi, cert.eps_b, 1);
  const auto l62 = lemma62_rhs(cert);
  const auto l64 = lemma64_rhs(cert);
  const auto g_one = [](std::size_t, std::size_t) { return 1.0; };
  const auto g_phi = [&cert](std::size_t x, std::size_t x2) {
    return eval_phi(cert.phi, cert.vbar(x, x2));
  };
  const auto rate = [&cert](std::size_t t) {
    return rate_r(cert.phi, cert.eps_b, static_cast<std::int64_t>(t));
  };
  DpOptions dp_opts;
  dp_opts.tol = opts.tol;
  dp_opts.n_max = opts.n_max;

  Report report;
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t x2 = x; x2 < n; ++x2) {
      const std::string pl = pair_label(x, x2);
      const auto e2 =
          dp_expected_sum(seq, cert, x, x2, g_phi, nullptr, StopRule::Tau,
                          dp_opts);
      report.rows.push_back(make_row("lemma_phi_vbar_sum", opts.chain_id, pl,
                                     e2.value, e2.tail, l62(x, x2)));

      const auto t1 = dp_expected_sum(seq, cert, x, x2, g_one, rate,
                                      StopRule::HitSmallSet, dp_opts);
      const double rhs_t1 =
          cert.pair_in_cbar(x, x2)
              ? 1.0
              : 1.0 + r1 / (cert.eps_b * phi1) * (cert.vbar(x, x2) - 1.0);
      report.rows.push_back(make_row("lemma_first_tour_rate_sum",
                                     opts.chain_id, pl, t1.value, t1.tail,
                                     rhs_t1));

      const auto e1 =
          dp_expected_sum(seq, cert, x, x2, g_one, rate, StopRule::Tau,
                          dp_opts);
      report.rows.push_back(make_row("lemma_rate_sum", opts.chain_id, pl,
                                     e1.value, e1.tail, l64(x, x2)));
    }
  }
  return report;
}

Report check_theorem(const KernelSequence& seq, const DriftCertificate& cert,
                     const std::vector<double>& f, double xi,
                     const VerifyOptions& opts) {
  const std::size_t n = seq.n_states();
  const YoungPair pair = make_pair(xi);
  const WeightW w = make_weight(cert.phi, pair, cert.v);
  const double norm = weighted_norm(f, w);
  const double c = theorem_c(cert).c;
  const auto weight = [&](std::size_t t) {
    return pair.psi1(rate_r(cert.phi, cert.eps_b, static_cast<std::int64_t>(t)));
  };
  const std::string id_base = "theorem_xi" + format_double(xi);

  Report report;
  auto run_pair = [&](std::size_t x, std::size_t x2) {
    std::vector<double> mu1(n, 0.0), mu2(n, 0.0);
    mu1[x] = 1.0;
    mu2[x2] = 1.0;
    const double rhs = c * cert.vbar(x, x2) * norm;
    const auto sd = summed_weighted_diff(seq, cert, f, weight, mu1, mu2,
                                         product_init(n, mu1, mu2), norm, rhs,
                                         opts);
    report.rows.push_back(make_row(id_base, opts.chain_id, pair_label(x, x2),
                                   sd.lhs, sd.tail, rhs));
  };
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t x2 = x + 1; x2 < n; ++x2) run_pair(x, x2);
  }

  // Initial-measure variant: uniform law against the worst point mass.
  {
    std::vector<double> mu1(n, 1.0 / static_cast<double>(n));
    std::vector<double> mu2(n, 0.0);
    const std::size_t worst_state = static_cast<std::size_t>(
        std::max_element(cert.v.begin(), cert.v.end()) - cert.v.begin());
    mu2[worst_state] = 1.0;
    report.append(check_theorem_measures(seq, cert, f, xi, mu1, mu2, opts));
  }

  // Invariant-measure variant when the kernels share a stationary law.
  if (auto pi = common_stationary(seq)) {
    double pi_v = 0.0;
    for (std::size_t y = 0; y < n; ++y) pi_v += (*pi)[y] * cert.v[y];
    for (std::size_t x = 0; x < n; ++x) {
      std::vector<double> mu1(n, 0.0);
      mu1[x] = 1.0;
      const double rhs = c * (cert.v[x] + pi_v - 1.0) * norm;
      const auto sd = summed_weighted_diff(seq, cert, f, weight, mu1, *pi,
                                           product_init(n, mu1, *pi), norm,
                                           rhs, opts);
      report.rows.push_back(make_row(id_base + "_stationary", opts.chain_id,
                                     pair_label(x, x), sd.lhs, sd.tail, rhs));
    }
  }
  return report;
}

Report check_theorem_measures(const KernelSequence& seq,
                              const DriftCertificate& cert,
                              const std::vector<double>& f, double xi,
                              const std::vector<double>& mu1,
                              const std::vector<double>& mu2,
                              const VerifyOptions& opts) {
  const std::size_t n = seq.n_states();
  const YoungPair pair = make_pair(xi);
  const WeightW w = make_weight(cert.phi, pair, cert.v);
  const double norm = weighted_norm(f, w);
  const double c = theorem_c(cert).c;
  const auto weight = [&](std::size_t t) {
    return pair.psi1(rate_r(cert.phi, cert.eps_b, static_cast<std::int64_t>(t)));
  };
  double m1v = 0.0, m2v = 0.0;
  for (std::size_t y = 0; y < n; ++y) {
    m1v += mu1[y] * cert.v[y];
    m2v += mu2[y] * cert.v[y];
  }
  const double rhs = c * (m1v + m2v - 1.0) * norm;
  const auto sd = summed_weighted_diff(seq, cert, f, weight, mu1, mu2,
                                       product_init(n, mu1, mu2), norm, rhs,
                                       opts);
  Report report;
  report.rows.push_back(make_row("theorem_xi" + format_double(xi) + "_measures",
                                 opts.chain_id, "(mu1;mu2)", sd.lhs, sd.tail,
                                 rhs));
  return report;
}

Report check_corollary(const KernelSequence& seq, const DriftCertificate& cert,
                       const std::vector<double>& f, double xi,
                       const VerifyOptions& opts) {
  const std::size_t n = seq.n_states();
  const double alpha = cert.phi.alpha;
  const double beta = cert.phi.beta;
  const double exponent = (alpha == 0.0) ? 0.0 : xi * alpha / (1.0 - alpha);

  // ||f|| in the V^(alpha (1-xi)) class.
  double norm_f = 0.0;
  for (std::size_t y = 0; y < n; ++y) {
    norm_f = std::max(norm_f,
                      std::abs(f[y]) / std::pow(cert.v[y], alpha * (1.0 - xi)));
  }
  const double k_const = poly_corollary_const(alpha, beta, cert.eps_b, xi);
  const double c = theorem_c(cert).c;

  // Tail via the rate comparison (n+1)^(xi a/(1-a)) <= c_abe^-xi xi^xi
  // Psi1(r(n)) and the theorem tail machinery.
  const YoungPair pair = make_pair(xi);
  const double norm_w = weighted_norm(f, make_weight(cert.phi, pair, cert.v));
  const double tail_factor =
      std::pow(poly_min_const(alpha, beta, cert.eps_b), -xi) / pair.a1 * norm_w;
  const auto weight = [exponent](std::size_t t) {
    return std::pow(static_cast<double>(t) + 1.0, exponent);
  };
  const std::string id = "corollary_xi" + format_double(xi);

  Report report;
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t x2 = x + 1; x2 < n; ++x2) {
      std::vector<double> mu1(n, 0.0), mu2(n, 0.0);
      mu1[x] = 1.0;
      mu2[x2] = 1.0;
      const double rhs = k_const * c * norm_f * cert.vbar(x, x2);
      const auto sd = summed_weighted_diff(seq, cert, f, weight, mu1, mu2,
                                           product_init(n, mu1, mu2),
                                           tail_factor, rhs, opts);
      report.rows.push_back(
          make_row(id, opts.chain_id, pair_label(x, x2), sd.lhs, sd.tail, rhs));
    }
  }
  return report;
}

Report check_corollary_lambda(const KernelSequence& seq,
                              const std::vector<double>& v_hat, double alpha,
                              const std::vector<int>& set_c,
                              const std::vector<double>& f, double xi,
                              double lambda, const VerifyOptions& opts) {
  if (lambda == 0.0) {
    const double beta = fit_beta(seq, v_hat, alpha, set_c);
    const auto cert =
        drift_constants(seq, v_hat, PhiSpec(beta, alpha), set_c);
    return check_corollary(seq, cert, f, xi, opts);
  }

  // Uniform polynomial drift data for the rescaling route.
  const double beta_hat = fit_beta(seq, v_hat, alpha, set_c);
  double c_hat = 1.0;
  for (int s : set_c) c_hat = std::max(c_hat, v_hat[static_cast<std::size_t>(s)]);
  const auto cond2 =
      certify_condition2(seq, v_hat, alpha, beta_hat, set_c, c_hat);
  if (!cond2.ok) {
    throw CertifyFailure("check_corollary_lambda: uniform drift fails",
                         cond2.violations);
  }
  const auto rescale = rescale_condition2(alpha, beta_hat, cond2.b_hat,
                                          cond2.c_hat, lambda, 0.5);

  // Re-certify the transformed drift on the concrete chain.
  std::vector<double> v(v_hat.size());
  for (std::size_t y = 0; y < v.size(); ++y) {
    v[y] = std::pow(v_hat[y], rescale.eta);
  }
  const double beta_new = fit_beta(seq, v, rescale.alpha_lambda, set_c);
  const auto cert = drift_constants(
      seq, v, PhiSpec(beta_new, rescale.alpha_lambda), set_c);

  VerifyOptions sub = opts;
  sub.chain_id = opts.chain_id + "/lambda" + format_double(lambda);
  return check_corollary(seq, cert, f, xi, sub);
}

Report check_transformed_drift(const KernelSequence& seq,
                               const DriftCertificate& cert,
                               std::size_t k_max, const VerifyOptions& opts) {
  const std::size_t n = seq.n_states();
  const double phi1 = eval_phi(cert.phi, 1.0);
  Report report;
  for (std::size_t ki = 0; ki < seq.n_kernels(); ++ki) {
    const FiniteKernel& p = seq.kernels()[ki];
    for (std::size_t j = 0; j < k_max; ++j) {
      // V_j = H_j o V; rate here is the un-scaled r_phi (eps_b = 1).
      const double r_j = rate_r_real(cert.phi, 1.0, static_cast<double>(j));
      const double r_j1 = rate_r_real(cert.phi, 1.0, static_cast<double>(j + 1));
      std::vector<double> v_next(n);
      for (std::size_t y = 0; y < n; ++y) {
        v_next[y] = h_k(cert.phi, cert.v[y], static_cast<std::int64_t>(j + 1));
      }
      const auto pv_next = p.apply(v_next);
      CheckRow worst;
      worst.slack = std::numeric_limits<double>::infinity();
      for (std::size_t x = 0; x < n; ++x) {
        const double v_j = h_k(cert.phi, cert.v[x], static_cast<std::int64_t>(j));
        const double rhs = v_j - phi1 * r_j +
                           (cert.in_c[x] ? cert.b_v * r_j1 : 0.0);
        auto row = make_row("transformed_drift",
                            opts.chain_id + "/k" + std::to_string(ki),
                            "x" + std::to_string(x) + ";j" + std::to_string(j),
                            pv_next[x], 0.0, rhs);
        if (row.slack < worst.slack) worst = row;
      }
      report.rows.push_back(worst);
    }
  }
  return report;
}

}  // namespace subgeom
