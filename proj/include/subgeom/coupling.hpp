#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "subgeom/certify.hpp"
#include "subgeom/chain.hpp"

namespace subgeom {

// Augmented coupling transition structure for one step: product moves off
// C-bar, residual Q_k (x) Q_k with coupling probability eps_nu on C-bar,
// absorbing diagonal once coupled.
class AugmentedKernel {
 public:
  AugmentedKernel(const FiniteKernel& base, const DriftCertificate& cert,
                  std::size_t k);

  const FiniteKernel& base() const { return *base_; }
  // Residual kernel row, defined for x in C when eps_nu < 1.
  const std::vector<double>& q_row(std::size_t x) const;
  double q(std::size_t x, std::size_t y) const { return q_row(x)[y]; }
  const std::vector<double>& nu() const { return nu_; }
  double eps_nu() const { return eps_nu_; }
  // Q V(x) for x in C.
  double q_apply_v(std::size_t x, const std::vector<double>& v) const;

 private:
  const FiniteKernel* base_;
  std::vector<std::vector<double>> q_rows_;  // indexed by state; empty off C
  std::vector<double> nu_;
  double eps_nu_;
};

// Sub-probability mass over X x X at one time step, restricted to the
// un-coupled flag d = 0. Coupled mass is tracked separately as a measure
// on the diagonal.
struct CoupledDistribution {
  std::size_t n;
  std::vector<double> mass;  // row-major n x n

  double& at(std::size_t x, std::size_t x2) { return mass[x * n + x2]; }
  double at(std::size_t x, std::size_t x2) const { return mass[x * n + x2]; }
  double total_mass() const;
  double inner(const std::function<double(std::size_t, std::size_t)>& g) const;
};

enum class StopRule { Tau, HitSmallSet };

// Forward propagation of the coupled law restricted to the live region:
// StopRule::Tau removes the coupled (d = 1) mass, StopRule::HitSmallSet
// absorbs mass on its first visit to C-bar (the T_1 stopping time).
class CoupledRun {
 public:
  CoupledRun(const KernelSequence& seq, const DriftCertificate& cert,
             std::size_t x, std::size_t x2, StopRule rule = StopRule::Tau);
  CoupledRun(const KernelSequence& seq, const DriftCertificate& cert,
             CoupledDistribution initial, StopRule rule = StopRule::Tau);

  void step();

  std::size_t time() const { return time_; }
  const CoupledDistribution& mass() const { return mu_; }
  double total_mass() const { return mu_.total_mass(); }
  // Coupled (d = 1) diagonal measure; maintained for StopRule::Tau.
  const std::vector<double>& coupled() const { return coupled_; }
  // Live mass currently sitting on C-bar.
  double mass_on_cbar() const;

 private:
  const KernelSequence* seq_;
  const DriftCertificate* cert_;
  StopRule rule_;
  CoupledDistribution mu_;
  std::vector<double> coupled_;
  std::size_t time_ = 0;
};

// Max absolute discrepancy between the two augmented-chain marginals at
// times 0..n (coupled mass included) and the base-chain evolution.
double marginal_check(const KernelSequence& seq, const DriftCertificate& cert,
                      std::size_t x, std::size_t x2, std::size_t n);

enum class IndexConvention { UpToStop, BeforeStop };

struct DpOptions {
  double tol = 1e-10;
  std::size_t n_max = 1000000;
  // n=0 term included up to the stop index (Lemma-6.3 style sums use both
  // conventions); only meaningful for StopRule::HitSmallSet.
  IndexConvention convention = IndexConvention::UpToStop;
};

struct DpResult {
  double value;
  double tail;
  std::size_t steps;
};

// Exact truncated evaluation of E[sum rate(n) g(X_n, X_n')] over the live
// pre-stop mass, plus a rigorous tail bound from the Lemma-6.2/6.4 style
// dominating functions (valid thanks to r(n+k) <= r(n) r(k)).
DpResult dp_expected_sum(
    const KernelSequence& seq, const DriftCertificate& cert, std::size_t x,
    std::size_t x2, const std::function<double(std::size_t, std::size_t)>& g,
    const std::function<double(std::size_t)>& rate,  // nullptr => rate == 1
    StopRule rule, const DpOptions& opts = {});

struct SimStat {
  double mean = 0.0;
  double variance = 0.0;
  double std_error = 0.0;
};

struct SimulateResult {
  std::size_t replicates = 0;
  SimStat tau;
  SimStat sum_rate;      // sum_{n < tau} r(n)
  SimStat sum_phi_vbar;  // sum_{n < tau} phi(Vbar(X_n, X_n'))
  SimStat t1;
};

// Seeded Monte Carlo over the coupling construction. Per-replicate
// substreams are derived deterministically from (master_seed, index), so
// results are bit-reproducible and independent of thread count; the final
// reduction is fixed-order.
SimulateResult simulate(const KernelSequence& seq, const DriftCertificate& cert,
                        std::size_t x, std::size_t x2, std::size_t replicates,
                        std::uint64_t master_seed, std::size_t n_threads = 1);

}  // namespace subgeom
