#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "subgeom/chain.hpp"
#include "subgeom/ratefn.hpp"

namespace subgeom {

// One-step minorisation over the small set C. nus holds the canonical
// nu_k (componentwise minimum over C rows, normalized) per kernel.
// eps_nu == 0 signals failure; bad_* then name a disjoint-support row pair.
struct MinorisationResult {
  double eps_nu = 0.0;
  std::vector<std::vector<double>> nus;
  std::size_t bad_kernel = 0;
  std::size_t bad_x = 0;
  std::size_t bad_x2 = 0;
};

MinorisationResult minorisation(const KernelSequence& seq,
                                const std::vector<int>& set_c);

// All drift/minorisation constants bound to a kernel sequence.
struct DriftCertificate {
  PhiSpec phi;
  std::vector<double> v;
  std::vector<int> small_set;   // sorted state indices
  std::vector<bool> in_c;       // membership mask
  double b_v = 0.0;
  double c_v = 1.0;
  double eps_b = 0.5;
  double eps_nu = 1.0;
  std::vector<std::vector<double>> nus;  // one per kernel in the sequence

  bool state_in_c(std::size_t x) const { return in_c[x]; }
  double vbar(std::size_t x, std::size_t x2) const {
    return v[x] + v[x2] - 1.0;
  }
  bool pair_in_cbar(std::size_t x, std::size_t x2) const {
    return in_c[x] && in_c[x2];
  }
};

struct DriftViolation {
  std::size_t kernel;
  std::size_t state;
  double margin;
  std::string what;
};

class CertifyFailure : public std::runtime_error {
 public:
  CertifyFailure(const std::string& msg, std::vector<DriftViolation> v)
      : std::runtime_error(msg), violations(std::move(v)) {}
  std::vector<DriftViolation> violations;
};

// Largest scale beta with P_k V <= V - beta V^alpha off C for every kernel.
double fit_beta(const KernelSequence& seq, const std::vector<double>& v,
                double alpha, const std::vector<int>& set_c);

// Verify the drift inequalities for concrete kernels and extract the
// maximal-admissible constants; throws CertifyFailure with the violating
// (kernel, state) list otherwise. When C covers all states eps_b is free
// and defaults to 0.5 unless overridden.
DriftCertificate drift_constants(const KernelSequence& seq,
                                 const std::vector<double>& v,
                                 const PhiSpec& phi,
                                 const std::vector<int>& set_c,
                                 std::optional<double> eps_b_override = {});

// Itemized report of the two-branch uniform drift plus level-set
// minorisation of the uniform polynomial condition.
struct Condition2Report {
  bool ok = false;
  double b_hat = 0.0;
  double c_hat = 1.0;
  double eps_v = 0.0;  // largest admissible minorisation constant on A(level)
  std::vector<DriftViolation> violations;
};

Condition2Report certify_condition2(const KernelSequence& seq,
                                    const std::vector<double>& v_hat,
                                    double alpha, double beta,
                                    const std::vector<int>& set_c,
                                    double level);

}  // namespace subgeom
