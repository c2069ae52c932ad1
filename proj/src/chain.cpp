#include "subgeom/chain.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <stdexcept>

namespace subgeom {

namespace {
constexpr double kRowSumTol = 1e-12;
}

FiniteKernel::FiniteKernel(std::vector<std::vector<double>> rows)
    : n_(rows.size()), rows_(std::move(rows)) {
  if (n_ == 0) throw std::invalid_argument("FiniteKernel: empty kernel");
  for (std::size_t x = 0; x < n_; ++x) {
    if (rows_[x].size() != n_) {
      throw std::invalid_argument("FiniteKernel: non-square rows");
    }
    double sum = 0.0;
    for (double p : rows_[x]) {
      if (!(p >= 0.0) || !std::isfinite(p)) {
        throw std::invalid_argument("FiniteKernel: negative or non-finite entry");
      }
      sum += p;
    }
    if (std::abs(sum - 1.0) > kRowSumTol) {
      throw std::invalid_argument("FiniteKernel: row sum deviates from 1 by " +
                                  std::to_string(sum - 1.0) + " at row " +
                                  std::to_string(x));
    }
    for (double& p : rows_[x]) p /= sum;
  }
}

std::vector<double> FiniteKernel::apply(const std::vector<double>& f) const {
  if (f.size() != n_) throw std::invalid_argument("apply: dimension mismatch");
  std::vector<double> out(n_, 0.0);
  for (std::size_t x = 0; x < n_; ++x) {
    double acc = 0.0;
    for (std::size_t y = 0; y < n_; ++y) acc += rows_[x][y] * f[y];
    out[x] = acc;
  }
  return out;
}

std::vector<double> FiniteKernel::apply_left(
    const std::vector<double>& mu) const {
  if (mu.size() != n_) {
    throw std::invalid_argument("apply_left: dimension mismatch");
  }
  std::vector<double> out(n_, 0.0);
  for (std::size_t x = 0; x < n_; ++x) {
    const double m = mu[x];
    if (m == 0.0) continue;
    for (std::size_t y = 0; y < n_; ++y) out[y] += m * rows_[x][y];
  }
  return out;
}

KernelSequence::KernelSequence(SeqMode mode, std::vector<FiniteKernel> kernels)
    : mode_(mode), kernels_(std::move(kernels)) {
  if (kernels_.empty()) {
    throw std::invalid_argument("KernelSequence: no kernels");
  }
  const std::size_t n = kernels_.front().size();
  for (const auto& k : kernels_) {
    if (k.size() != n) {
      throw std::invalid_argument("KernelSequence: state-count mismatch");
    }
  }
}

std::size_t KernelSequence::kernel_index(std::size_t k) const {
  if (k == 0) throw std::invalid_argument("KernelSequence: steps are 1-based");
  switch (mode_) {
    case SeqMode::Homogeneous:
      return 0;
    case SeqMode::Cycle:
      return (k - 1) % kernels_.size();
    case SeqMode::ExplicitList:
      return std::min(k - 1, kernels_.size() - 1);
  }
  throw std::logic_error("KernelSequence: bad mode");
}

const FiniteKernel& KernelSequence::at(std::size_t k) const {
  return kernels_[kernel_index(k)];
}

std::vector<double> evolve_function(const KernelSequence& seq,
                                    std::vector<double> f, std::size_t n) {
  if (f.size() != seq.n_states()) {
    throw std::invalid_argument("evolve_function: dimension mismatch");
  }
  // P^(n) f = P_1 (P_2 (... P_n f)): apply kernels right-to-left.
  for (std::size_t k = n; k >= 1; --k) f = seq.at(k).apply(f);
  return f;
}

std::vector<double> evolve_measure(const KernelSequence& seq,
                                   std::vector<double> mu, std::size_t n) {
  if (mu.size() != seq.n_states()) {
    throw std::invalid_argument("evolve_measure: dimension mismatch");
  }
  for (std::size_t k = 1; k <= n; ++k) mu = seq.at(k).apply_left(mu);
  return mu;
}

double tv_distance(const std::vector<double>& mu1,
                   const std::vector<double>& mu2) {
  if (mu1.size() != mu2.size()) {
    throw std::invalid_argument("tv_distance: dimension mismatch");
  }
  const double m1 = std::accumulate(mu1.begin(), mu1.end(), 0.0);
  const double m2 = std::accumulate(mu2.begin(), mu2.end(), 0.0);
  if (std::abs(m1 - m2) > 1e-9) {
    throw std::invalid_argument("tv_distance: total-mass mismatch");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < mu1.size(); ++i) acc += std::abs(mu1[i] - mu2[i]);
  return 0.5 * acc;
}

namespace {

// Reachability set of state s in the support graph.
std::vector<bool> reachable(const FiniteKernel& p, std::size_t s,
                            bool transpose) {
  const std::size_t n = p.size();
  std::vector<bool> seen(n, false);
  std::queue<std::size_t> q;
  seen[s] = true;
  q.push(s);
  while (!q.empty()) {
    const std::size_t x = q.front();
    q.pop();
    for (std::size_t y = 0; y < n; ++y) {
      const double w = transpose ? p(y, x) : p(x, y);
      if (w > 0.0 && !seen[y]) {
        seen[y] = true;
        q.push(y);
      }
    }
  }
  return seen;
}

std::size_t gcd_period(const FiniteKernel& p) {
  // BFS levels from state 0; period = gcd over edges of level differences.
  const std::size_t n = p.size();
  std::vector<long> level(n, -1);
  std::queue<std::size_t> q;
  level[0] = 0;
  q.push(0);
  long g = 0;
  while (!q.empty()) {
    const std::size_t x = q.front();
    q.pop();
    for (std::size_t y = 0; y < n; ++y) {
      if (p(x, y) <= 0.0) continue;
      if (level[y] < 0) {
        level[y] = level[x] + 1;
        q.push(y);
      } else {
        g = std::gcd(g, std::abs(level[x] + 1 - level[y]));
      }
    }
  }
  return g == 0 ? 0 : static_cast<std::size_t>(g);
}

}  // namespace

std::vector<double> stationary(const FiniteKernel& kernel) {
  const std::size_t n = kernel.size();
  const auto fwd = reachable(kernel, 0, false);
  const auto bwd = reachable(kernel, 0, true);
  for (std::size_t x = 0; x < n; ++x) {
    if (!fwd[x] || !bwd[x]) {
      throw std::invalid_argument("stationary: kernel is reducible");
    }
  }
  if (n > 1 && gcd_period(kernel) != 1) {
    throw std::invalid_argument("stationary: kernel is periodic");
  }

  // Solve pi (P - I) = 0 with the last equation replaced by sum pi = 1.
  std::vector<std::vector<double>> a(n, std::vector<double>(n + 1, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      a[i][j] = kernel(j, i) - (i == j ? 1.0 : 0.0);
    }
  }
  for (std::size_t j = 0; j < n; ++j) a[n - 1][j] = 1.0;
  a[n - 1][n] = 1.0;

  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    }
    std::swap(a[col], a[piv]);
    if (std::abs(a[col][col]) < 1e-14) {
      throw std::runtime_error("stationary: singular system");
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const double factor = a[r][col] / a[col][col];
      for (std::size_t j = col; j <= n; ++j) a[r][j] -= factor * a[col][j];
    }
  }
  std::vector<double> pi(n);
  for (std::size_t i = 0; i < n; ++i) pi[i] = a[i][n] / a[i][i];
  double sum = std::accumulate(pi.begin(), pi.end(), 0.0);
  for (double& x : pi) x /= sum;
  return pi;
}

}  // namespace subgeom
