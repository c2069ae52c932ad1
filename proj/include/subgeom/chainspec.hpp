#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "subgeom/certify.hpp"
#include "subgeom/chain.hpp"

namespace subgeom {

// Parsed chain specification file (JSON, schema_version 1): kernels plus
// the drift/minorisation candidates and check parameters.
struct ChainSpec {
  int schema_version = 1;
  std::string name = "chain";
  SeqMode mode = SeqMode::Homogeneous;
  std::vector<FiniteKernel> kernels;
  std::vector<double> v;
  std::vector<int> set_c;
  double alpha = 0.0;
  std::optional<double> beta;  // absent => fit the scale from the drift
  std::optional<double> eps_b;
  std::vector<double> f;
  double xi = 1.0;
  double lambda = 0.0;
  std::uint64_t seed = 1;
  double tol = 1e-10;

  KernelSequence sequence() const { return KernelSequence(mode, kernels); }
};

ChainSpec load_chain_spec(const std::string& path);
ChainSpec parse_chain_spec(const std::string& json_text);

// Certify the spec's candidates (fitting beta when absent).
DriftCertificate certify_spec(const ChainSpec& spec);

}  // namespace subgeom
