#pragma once

#include <cstddef>
#include <vector>

namespace subgeom {

// Row-stochastic kernel on a finite state space, dense storage.
// Rows within 1e-12 of unit sum are renormalized at construction;
// larger deviations are hard errors.
class FiniteKernel {
 public:
  explicit FiniteKernel(std::vector<std::vector<double>> rows);

  std::size_t size() const { return n_; }
  double operator()(std::size_t x, std::size_t y) const { return rows_[x][y]; }
  const std::vector<double>& row(std::size_t x) const { return rows_[x]; }

  // P f
  std::vector<double> apply(const std::vector<double>& f) const;
  // mu P
  std::vector<double> apply_left(const std::vector<double>& mu) const;

 private:
  std::size_t n_;
  std::vector<std::vector<double>> rows_;
};

enum class SeqMode { Homogeneous, Cycle, ExplicitList };

// Inhomogeneous kernel sequence (P_k)_{k>=1}. Cycle mode alternates the
// kernels in order; an explicit list holds its last kernel forever once
// exhausted.
class KernelSequence {
 public:
  KernelSequence(SeqMode mode, std::vector<FiniteKernel> kernels);

  // Kernel applied at step k (1-based).
  const FiniteKernel& at(std::size_t k) const;
  // Index into kernels() of the kernel applied at step k.
  std::size_t kernel_index(std::size_t k) const;

  std::size_t n_states() const { return kernels_.front().size(); }
  std::size_t n_kernels() const { return kernels_.size(); }
  const std::vector<FiniteKernel>& kernels() const { return kernels_; }
  SeqMode mode() const { return mode_; }

 private:
  SeqMode mode_;
  std::vector<FiniteKernel> kernels_;
};

// P^(n) f = P_1 ... P_n f; n = 0 returns f unchanged.
std::vector<double> evolve_function(const KernelSequence& seq,
                                    std::vector<double> f, std::size_t n);

// mu P^(n); mass preserved.
std::vector<double> evolve_measure(const KernelSequence& seq,
                                   std::vector<double> mu, std::size_t n);

// Total variation distance between probability measures: 0.5 * sum |mu1-mu2|.
double tv_distance(const std::vector<double>& mu1,
                   const std::vector<double>& mu2);

// Invariant probability measure of an irreducible aperiodic kernel,
// by solving the fixed-point linear system. Throws on reducible or
// periodic input.
std::vector<double> stationary(const FiniteKernel& kernel);

}  // namespace subgeom
