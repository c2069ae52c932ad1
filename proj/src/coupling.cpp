#include "subgeom/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "subgeom/constants.hpp"

namespace subgeom {

AugmentedKernel::AugmentedKernel(const FiniteKernel& base,
                                 const DriftCertificate& cert, std::size_t k)
    : base_(&base), eps_nu_(cert.eps_nu) {
  if (!(eps_nu_ > 0.0 && eps_nu_ <= 1.0)) {
    throw std::invalid_argument("AugmentedKernel: eps_nu must lie in (0, 1]");
  }
  const std::size_t n = base.size();
  nu_ = cert.nus.at(k);
  q_rows_.resize(n);
  if (eps_nu_ < 1.0) {
    for (int x : cert.small_set) {
      std::vector<double> q(n);
      for (std::size_t y = 0; y < n; ++y) {
        const double residual = base(x, y) - eps_nu_ * nu_[y];
        if (residual < -1e-12) {
          throw std::invalid_argument(
              "AugmentedKernel: negative residual kernel (certificate "
              "inconsistent)");
        }
        q[y] = std::max(residual, 0.0) / (1.0 - eps_nu_);
      }
      q_rows_[static_cast<std::size_t>(x)] = std::move(q);
    }
  }
}

const std::vector<double>& AugmentedKernel::q_row(std::size_t x) const {
  if (q_rows_[x].empty()) {
    throw std::logic_error("AugmentedKernel: Q row requested off C or eps_nu=1");
  }
  return q_rows_[x];
}

double AugmentedKernel::q_apply_v(std::size_t x,
                                  const std::vector<double>& v) const {
  const auto& q = q_row(x);
  double acc = 0.0;
  for (std::size_t y = 0; y < v.size(); ++y) acc += q[y] * v[y];
  return acc;
}

double CoupledDistribution::total_mass() const {
  double acc = 0.0;
  for (double m : mass) acc += m;
  return acc;
}

double CoupledDistribution::inner(
    const std::function<double(std::size_t, std::size_t)>& g) const {
  double acc = 0.0;
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t x2 = 0; x2 < n; ++x2) {
      const double m = mass[x * n + x2];
      if (m != 0.0) acc += m * g(x, x2);
    }
  }
  return acc;
}

CoupledRun::CoupledRun(const KernelSequence& seq, const DriftCertificate& cert,
                       std::size_t x, std::size_t x2, StopRule rule)
    : seq_(&seq),
      cert_(&cert),
      rule_(rule),
      mu_{seq.n_states(),
          std::vector<double>(seq.n_states() * seq.n_states(), 0.0)},
      coupled_(seq.n_states(), 0.0) {
  mu_.at(x, x2) = 1.0;
}

CoupledRun::CoupledRun(const KernelSequence& seq, const DriftCertificate& cert,
                       CoupledDistribution initial, StopRule rule)
    : seq_(&seq),
      cert_(&cert),
      rule_(rule),
      mu_(std::move(initial)),
      coupled_(seq.n_states(), 0.0) {
  if (mu_.n != seq.n_states()) {
    throw std::invalid_argument("CoupledRun: dimension mismatch");
  }
}

double CoupledRun::mass_on_cbar() const {
  double acc = 0.0;
  const std::size_t n = mu_.n;
  for (std::size_t x = 0; x < n; ++x) {
    if (!cert_->in_c[x]) continue;
    for (std::size_t x2 = 0; x2 < n; ++x2) {
      if (cert_->in_c[x2]) acc += mu_.at(x, x2);
    }
  }
  return acc;
}

void CoupledRun::step() {
  const std::size_t n = mu_.n;
  const std::size_t k = time_ + 1;
  const FiniteKernel& p = seq_->at(k);
  const AugmentedKernel aug(p, *cert_, seq_->kernel_index(k));
  const double eps_nu = cert_->eps_nu;

  CoupledDistribution next{n, std::vector<double>(n * n, 0.0)};
  double coupling_inflow = 0.0;

  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t x2 = 0; x2 < n; ++x2) {
      const double m = mu_.at(x, x2);
      if (m == 0.0) continue;
      const bool on_cbar = cert_->in_c[x] && cert_->in_c[x2];
      if (!on_cbar) {
        // Independent product move.
        const auto& r1 = p.row(x);
        const auto& r2 = p.row(x2);
        for (std::size_t y = 0; y < n; ++y) {
          if (r1[y] == 0.0) continue;
          const double my = m * r1[y];
          for (std::size_t y2 = 0; y2 < n; ++y2) {
            next.at(y, y2) += my * r2[y2];
          }
        }
      } else if (rule_ == StopRule::HitSmallSet) {
        // Absorbed on the first C-bar visit; drop.
      } else {
        coupling_inflow += eps_nu * m;
        if (eps_nu < 1.0) {
          const auto& r1 = aug.q_row(x);
          const auto& r2 = aug.q_row(x2);
          const double mq = m * (1.0 - eps_nu);
          for (std::size_t y = 0; y < n; ++y) {
            if (r1[y] == 0.0) continue;
            const double my = mq * r1[y];
            for (std::size_t y2 = 0; y2 < n; ++y2) {
              next.at(y, y2) += my * r2[y2];
            }
          }
        }
      }
    }
  }

  if (rule_ == StopRule::Tau) {
    // Previously coupled mass moves along the diagonal; new coupled mass
    // arrives distributed per nu_k.
    coupled_ = p.apply_left(coupled_);
    if (coupling_inflow > 0.0) {
      const auto& nu = aug.nu();
      for (std::size_t y = 0; y < n; ++y) {
        coupled_[y] += coupling_inflow * nu[y];
      }
    }
  }
  mu_ = std::move(next);
  ++time_;
}

double marginal_check(const KernelSequence& seq, const DriftCertificate& cert,
                      std::size_t x, std::size_t x2, std::size_t n) {
  const std::size_t ns = seq.n_states();
  CoupledRun run(seq, cert, x, x2, StopRule::Tau);
  std::vector<double> mu1(ns, 0.0), mu2(ns, 0.0);
  mu1[x] = 1.0;
  mu2[x2] = 1.0;

  double worst = 0.0;
  for (std::size_t t = 0;; ++t) {
    const auto& m = run.mass();
    const auto& coupled = run.coupled();
    for (std::size_t y = 0; y < ns; ++y) {
      double marg1 = coupled[y];
      double marg2 = coupled[y];
      for (std::size_t z = 0; z < ns; ++z) {
        marg1 += m.at(y, z);
        marg2 += m.at(z, y);
      }
      worst = std::max(worst, std::abs(marg1 - mu1[y]));
      worst = std::max(worst, std::abs(marg2 - mu2[y]));
    }
    if (t == n) break;
    run.step();
    mu1 = seq.at(t + 1).apply_left(mu1);
    mu2 = seq.at(t + 1).apply_left(mu2);
  }
  return worst;
}

namespace {

// Lemma-6.4 style dominating function for the remaining rate-weighted sum.
std::function<double(std::size_t, std::size_t)> tau_tail_bound(
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

// Lemma-6.3 style dominating function for sums stopped at the first
// C-bar visit.
std::function<double(std::size_t, std::size_t)> t1_tail_bound(
    const DriftCertificate& cert) {
  const double phi1 = eval_phi(cert.phi, 1.0);
  const double r1 = rate_r(cert.phi, cert.eps_b, 1);
  const double coef = r1 / (cert.eps_b * phi1);
  return [&cert, coef](std::size_t x, std::size_t x2) {
    if (cert.pair_in_cbar(x, x2)) return 1.0;
    return 1.0 + coef * (cert.vbar(x, x2) - 1.0);
  };
}

}  // namespace

DpResult dp_expected_sum(
    const KernelSequence& seq, const DriftCertificate& cert, std::size_t x,
    std::size_t x2, const std::function<double(std::size_t, std::size_t)>& g,
    const std::function<double(std::size_t)>& rate, StopRule rule,
    const DpOptions& opts) {
  const std::size_t n = seq.n_states();

  // Finite-space sup of the weight, used to make the generic tail rigorous.
  double g_max = 0.0;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) g_max = std::max(g_max, g(a, b));
  }
  const auto dominating =
      (rule == StopRule::Tau) ? tau_tail_bound(cert) : t1_tail_bound(cert);

  CoupledRun run(seq, cert, x, x2, rule);
  double value = 0.0;
  double tail = 0.0;
  for (std::size_t t = 0;; ++t) {
    const double r_t = rate ? rate(t) : 1.0;
    if (rule == StopRule::HitSmallSet &&
        opts.convention == IndexConvention::BeforeStop) {
      // Count only mass that has not yet reached C-bar at time t.
      value += r_t * run.mass().inner([&](std::size_t a, std::size_t b) {
        return cert.pair_in_cbar(a, b) ? 0.0 : g(a, b);
      });
    } else {
      value += r_t * run.mass().inner(g);
    }

    // Remaining sum <= rate(t) * g_max * <mu_t, L> by r(t+m) <= r(t) r(m).
    tail = r_t * g_max * run.mass().inner(dominating);
    const double mass = run.total_mass();
    if (mass <= 0.0 || tail <= opts.tol * std::max(value, 1e-300)) {
      return {value, tail, t};
    }
    if (t >= opts.n_max) {
      throw std::runtime_error(
          "dp_expected_sum: mass has not decayed below threshold by n_max");
    }
    run.step();
  }
}

namespace {

inline std::uint64_t splitmix64(std::uint64_t& s) {
  s += 0x9E3779B97f4A7C15ULL;
  std::uint64_t z = s;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline double uniform01(std::uint64_t& s) {
  return static_cast<double>(splitmix64(s) >> 11) * 0x1.0p-53;
}

std::size_t sample_row(const std::vector<double>& row, double u) {
  double acc = 0.0;
  for (std::size_t y = 0; y < row.size(); ++y) {
    acc += row[y];
    if (u < acc) return y;
  }
  return row.size() - 1;
}

struct ReplicateOutcome {
  double tau;
  double sum_rate;
  double sum_phi_vbar;
  double t1;
};

SimStat reduce(const std::vector<ReplicateOutcome>& outcomes,
               double ReplicateOutcome::*field) {
  // Fixed-order pairwise-free reduction: plain left-to-right sums keep the
  // result independent of thread count.
  const std::size_t n = outcomes.size();
  double sum = 0.0;
  for (const auto& o : outcomes) sum += o.*field;
  const double mean = sum / static_cast<double>(n);
  double ss = 0.0;
  for (const auto& o : outcomes) {
    const double d = o.*field - mean;
    ss += d * d;
  }
  const double var = (n > 1) ? ss / static_cast<double>(n - 1) : 0.0;
  return {mean, var, std::sqrt(var / static_cast<double>(n))};
}

}  // namespace

SimulateResult simulate(const KernelSequence& seq, const DriftCertificate& cert,
                        std::size_t x0, std::size_t x20,
                        std::size_t replicates, std::uint64_t master_seed,
                        std::size_t n_threads) {
  if (replicates < 1) {
    throw std::invalid_argument("simulate: replicates must be >= 1");
  }
  constexpr std::size_t kStepGuard = 10000000;

  // Pre-build the per-kernel residual structures once.
  std::vector<AugmentedKernel> augs;
  augs.reserve(cert.nus.size());
  for (std::size_t ki = 0; ki < cert.nus.size(); ++ki) {
    augs.emplace_back(seq.kernels()[ki], cert, ki);
  }

  std::vector<ReplicateOutcome> outcomes(replicates);
  auto worker = [&](std::size_t lo, std::size_t hi) {
    for (std::size_t rep = lo; rep < hi; ++rep) {
      // Substream derived from (master_seed, replicate index) only.
      std::uint64_t state = master_seed;
      splitmix64(state);
      state ^= 0xD1B54A32D192ED03ULL * (static_cast<std::uint64_t>(rep) + 1);
      splitmix64(state);

      std::size_t x = x0;
      std::size_t x2 = x20;
      double sum_rate = 0.0;
      double sum_phi = 0.0;
      double t1 = -1.0;
      std::size_t n = 0;
      for (;; ++n) {
        if (n >= kStepGuard) {
          throw std::runtime_error("simulate: runaway trajectory");
        }
        const bool on_cbar = cert.pair_in_cbar(x, x2);
        sum_rate += rate_r(cert.phi, cert.eps_b,
                           static_cast<std::int64_t>(n));
        sum_phi += eval_phi(cert.phi, cert.vbar(x, x2));
        if (on_cbar && t1 < 0.0) t1 = static_cast<double>(n);

        const std::size_t k = n + 1;
        const AugmentedKernel& aug = augs[seq.kernel_index(k)];
        if (on_cbar) {
          if (uniform01(state) < cert.eps_nu) {
            // Coupled at time n + 1.
            outcomes[rep] = {static_cast<double>(n + 1), sum_rate, sum_phi,
                             t1};
            break;
          }
          x = sample_row(aug.q_row(x), uniform01(state));
          x2 = sample_row(aug.q_row(x2), uniform01(state));
        } else {
          const FiniteKernel& p = seq.at(k);
          x = sample_row(p.row(x), uniform01(state));
          x2 = sample_row(p.row(x2), uniform01(state));
        }
      }
    }
  };

  if (n_threads <= 1 || replicates < 2 * n_threads) {
    worker(0, replicates);
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (replicates + n_threads - 1) / n_threads;
    for (std::size_t t = 0; t < n_threads; ++t) {
      const std::size_t lo = t * chunk;
      const std::size_t hi = std::min(replicates, lo + chunk);
      if (lo >= hi) break;
      pool.emplace_back(worker, lo, hi);
    }
    for (auto& th : pool) th.join();
  }

  SimulateResult res;
  res.replicates = replicates;
  res.tau = reduce(outcomes, &ReplicateOutcome::tau);
  res.sum_rate = reduce(outcomes, &ReplicateOutcome::sum_rate);
  res.sum_phi_vbar = reduce(outcomes, &ReplicateOutcome::sum_phi_vbar);
  res.t1 = reduce(outcomes, &ReplicateOutcome::t1);
  return res;
}

}  // namespace subgeom
