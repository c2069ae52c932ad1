#pragma once

#include <cstddef>
#include <vector>

#include "subgeom/certify.hpp"
#include "subgeom/chain.hpp"
#include "subgeom/constants.hpp"
#include "subgeom/coupling.hpp"
#include "subgeom/report.hpp"

namespace subgeom {

struct VerifyOptions {
  double tol = 1e-10;
  std::size_t n_max = 1000000;
  std::string chain_id = "chain";
};

// Lemma joint-drift items (i)-(iv): one-step expectations of Vbar under the
// augmented/residual kernels versus the drift bounds, for every pair and
// every kernel.
Report check_bivariate_drift(const KernelSequence& seq,
                             const DriftCertificate& cert,
                             const VerifyOptions& opts = {});

// Worst signed relative violation of the rate properties
// r(n+m) <= r(n) r(m) and the difference estimate, over n, m <= N.
double check_rate_props(const PhiSpec& spec, double eps_b, std::size_t n_grid);

// DP value + tail versus the three lemma bounds (tours of phi(Vbar), the
// first-hitting rate sum, and the full pre-coupling rate sum) for every
// start pair.
Report check_lemma_bounds(const KernelSequence& seq,
                          const DriftCertificate& cert,
                          const VerifyOptions& opts = {});

// End-to-end bound: sum_n Psi1(r(n)) |P^(n) f(x) - P^(n) f(x')| plus a
// rigorous tail against c (V(x) + V(x') - 1) ||f||_W, for all pairs.
// Includes the initial-measure and invariant-measure variants when the
// sequence admits a common invariant measure.
Report check_theorem(const KernelSequence& seq, const DriftCertificate& cert,
                     const std::vector<double>& f, double xi,
                     const VerifyOptions& opts = {});

// Measure-pair variant of the bound for given initial laws.
Report check_theorem_measures(const KernelSequence& seq,
                              const DriftCertificate& cert,
                              const std::vector<double>& f, double xi,
                              const std::vector<double>& mu1,
                              const std::vector<double>& mu2,
                              const VerifyOptions& opts = {});

// Polynomial-rate inequality with constant poly_corollary_const * c, for a
// certificate with polynomial phi.
Report check_corollary(const KernelSequence& seq, const DriftCertificate& cert,
                       const std::vector<double>& f, double xi,
                       const VerifyOptions& opts = {});

// Lambda-variant: rescale the drift data (V = V_hat^(1 - lambda alpha)),
// re-certify on the concrete chain and run the corollary check against the
// transformed function class.
Report check_corollary_lambda(const KernelSequence& seq,
                              const std::vector<double>& v_hat, double alpha,
                              const std::vector<int>& set_c,
                              const std::vector<double>& f, double xi,
                              double lambda, const VerifyOptions& opts = {});

// Transformed-drift sequence check: P_k V_{j+1} <= V_j - phi(1) r(j)
// + b_V r(j+1) 1_C pointwise for j <= k_max, with V_j = H_j o V.
Report check_transformed_drift(const KernelSequence& seq,
                               const DriftCertificate& cert,
                               std::size_t k_max,
                               const VerifyOptions& opts = {});

}  // namespace subgeom
