#include "subgeom/chainspec.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace subgeom {

namespace {

SeqMode parse_mode(const std::string& s) {
  if (s == "homogeneous") return SeqMode::Homogeneous;
  if (s == "cycle") return SeqMode::Cycle;
  if (s == "explicit") return SeqMode::ExplicitList;
  throw std::invalid_argument("chain spec: unknown mode '" + s + "'");
}

}  // namespace

ChainSpec parse_chain_spec(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("chain spec: bad JSON: ") +
                                e.what());
  }

  ChainSpec spec;
  spec.schema_version = j.value("schema_version", 1);
  if (spec.schema_version != 1) {
    throw std::invalid_argument("chain spec: unsupported schema_version " +
                                std::to_string(spec.schema_version));
  }
  spec.name = j.value("name", std::string("chain"));
  spec.mode = parse_mode(j.value("mode", std::string("homogeneous")));

  if (!j.contains("kernels") || !j["kernels"].is_array() ||
      j["kernels"].empty()) {
    throw std::invalid_argument("chain spec: 'kernels' must be a non-empty array");
  }
  for (const auto& jk : j["kernels"]) {
    spec.kernels.emplace_back(jk.get<std::vector<std::vector<double>>>());
  }
  const std::size_t n = spec.kernels.front().size();

  spec.v = j.at("v").get<std::vector<double>>();
  if (spec.v.size() != n) {
    throw std::invalid_argument("chain spec: 'v' length mismatch");
  }
  for (double vx : spec.v) {
    if (!(vx >= 1.0)) {
      throw std::invalid_argument("chain spec: 'v' entries must be >= 1");
    }
  }

  spec.set_c = j.at("set_c").get<std::vector<int>>();
  if (spec.set_c.empty()) {
    throw std::invalid_argument("chain spec: 'set_c' must be non-empty");
  }
  for (int s : spec.set_c) {
    if (s < 0 || static_cast<std::size_t>(s) >= n) {
      throw std::invalid_argument("chain spec: 'set_c' index out of range");
    }
  }

  spec.alpha = j.at("alpha").get<double>();
  if (j.contains("beta")) spec.beta = j["beta"].get<double>();
  if (j.contains("eps_b")) spec.eps_b = j["eps_b"].get<double>();

  if (j.contains("f")) {
    spec.f = j["f"].get<std::vector<double>>();
    if (spec.f.size() != n) {
      throw std::invalid_argument("chain spec: 'f' length mismatch");
    }
  } else {
    spec.f.assign(n, 0.0);
    for (std::size_t x = 0; x < n; ++x) spec.f[x] = (x % 2 == 0) ? 1.0 : -1.0;
  }

  spec.xi = j.value("xi", 1.0);
  if (spec.xi < 0.0 || spec.xi > 1.0) {
    throw std::invalid_argument("chain spec: 'xi' must lie in [0, 1]");
  }
  spec.lambda = j.value("lambda", 0.0);
  spec.seed = j.value("seed", std::uint64_t{1});
  spec.tol = j.value("tol", 1e-10);
  return spec;
}

ChainSpec load_chain_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument("chain spec: cannot open '" + path + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_chain_spec(buf.str());
}

DriftCertificate certify_spec(const ChainSpec& spec) {
  const KernelSequence seq = spec.sequence();
  const double beta = spec.beta ? *spec.beta
                                : fit_beta(seq, spec.v, spec.alpha, spec.set_c);
  return drift_constants(seq, spec.v, PhiSpec(beta, spec.alpha), spec.set_c,
                         spec.eps_b);
}

}  // namespace subgeom
