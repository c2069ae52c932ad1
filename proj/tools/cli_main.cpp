#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "subgeom/chainspec.hpp"
#include "subgeom/constants.hpp"
#include "subgeom/coupling.hpp"
#include "subgeom/ratefn.hpp"
#include "subgeom/report.hpp"
#include "subgeom/verify.hpp"

namespace {

using namespace subgeom;

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file '" + out_path + "'");
  out << text;
}

std::size_t thread_count() {
  if (const char* env = std::getenv("SUBGEOM_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<std::size_t>(v);
  }
  return 1;
}

int run_rates(double alpha, double beta, double eps_b, std::size_t n,
              const std::string& out_path) {
  const PhiSpec phi(beta, alpha);
  std::string csv = "n,r,delta,h,h_inv\n";
  for (std::size_t k = 0; k <= n; ++k) {
    const auto kk = static_cast<std::int64_t>(k);
    const double hinv = big_h_inv(phi, eps_b * static_cast<double>(k));
    // delta_k is only defined for k >= 1.
    const std::string delta = k == 0 ? "" : format_double(delta_k(phi, eps_b, kk));
    csv += std::to_string(k) + ',' + format_double(rate_r(phi, eps_b, kk)) +
           ',' + delta + ',' + format_double(big_h(phi, hinv)) + ',' +
           format_double(hinv) + '\n';
  }
  emit(csv, out_path);
  return 0;
}

int run_certify(const std::string& spec_path, const std::string& out_path) {
  const ChainSpec spec = load_chain_spec(spec_path);
  try {
    const DriftCertificate cert = certify_spec(spec);
    std::string csv = "field,value\n";
    csv += "name," + spec.name + '\n';
    csv += "n_states," + std::to_string(cert.v.size()) + '\n';
    csv += "alpha," + format_double(cert.phi.alpha) + '\n';
    csv += "beta," + format_double(cert.phi.beta) + '\n';
    csv += "b_v," + format_double(cert.b_v) + '\n';
    csv += "c_v," + format_double(cert.c_v) + '\n';
    csv += "eps_b," + format_double(cert.eps_b) + '\n';
    csv += "eps_nu," + format_double(cert.eps_nu) + '\n';
    csv += "small_set_size," + std::to_string(cert.small_set.size()) + '\n';
    emit(csv, out_path);
    return 0;
  } catch (const CertifyFailure& e) {
    std::string csv = "kernel,state,margin,what\n";
    for (const auto& v : e.violations) {
      csv += std::to_string(v.kernel) + ',' + std::to_string(v.state) + ',' +
             format_double(v.margin) + ',' + v.what + '\n';
    }
    emit(csv, out_path);
    std::cerr << "certify failed: " << e.what() << '\n';
    return 1;
  }
}

int run_constants(const std::string& spec_path, const std::string& out_path) {
  const ChainSpec spec = load_chain_spec(spec_path);
  const DriftCertificate cert = certify_spec(spec);
  const TheoremConstants tc = theorem_c(cert, spec.tol);
  std::string csv = "field,value\n";
  csv += "bar_b," + format_double(tc.bar_b) + '\n';
  csv += "m_one," + format_double(tc.m_one) + '\n';
  csv += "c_star," + format_double(tc.c_star) + '\n';
  csv += "c," + format_double(tc.c) + '\n';
  csv += "series_terms_used," + std::to_string(tc.series_terms_used) + '\n';
  csv += "series_tail_bound," + format_double(tc.series_tail_bound) + '\n';
  emit(csv, out_path);
  return 0;
}

int run_verify(const std::string& spec_path, const std::string& suite,
               double tol_override, const std::string& out_path) {
  const ChainSpec spec = load_chain_spec(spec_path);
  const KernelSequence seq = spec.sequence();
  const DriftCertificate cert = certify_spec(spec);
  VerifyOptions opts;
  opts.tol = tol_override > 0.0 ? tol_override : spec.tol;
  opts.chain_id = spec.name;

  Report report;
  const bool all = suite == "all";
  if (all || suite == "drift") {
    report.append(check_bivariate_drift(seq, cert, opts));
    report.append(check_transformed_drift(seq, cert, 16, opts));
  }
  if (all || suite == "lemmas") {
    report.append(check_lemma_bounds(seq, cert, opts));
  }
  if (all || suite == "theorem") {
    report.append(check_theorem(seq, cert, spec.f, spec.xi, opts));
  }
  if (all || suite == "corollary") {
    report.append(check_corollary(seq, cert, spec.f, spec.xi, opts));
    if (spec.lambda > 0.0) {
      report.append(check_corollary_lambda(seq, spec.v, spec.alpha, spec.set_c,
                                           spec.f, spec.xi, spec.lambda, opts));
    }
  }
  if (report.rows.empty()) {
    std::cerr << "unknown suite '" << suite << "'\n";
    return 2;
  }
  emit(report_to_csv(report), out_path);
  return report.all_pass() ? 0 : 1;
}

int run_simulate(const std::string& spec_path, std::size_t replicates,
                 std::uint64_t seed_override, bool seed_given, long x, long x2,
                 const std::string& out_path) {
  const ChainSpec spec = load_chain_spec(spec_path);
  const KernelSequence seq = spec.sequence();
  const DriftCertificate cert = certify_spec(spec);
  const std::uint64_t seed = seed_given ? seed_override : spec.seed;
  const auto n = static_cast<long>(seq.n_states());
  if (x < 0 || x >= n || x2 < 0 || x2 >= n) {
    std::cerr << "start states out of range\n";
    return 2;
  }
  const SimulateResult res =
      simulate(seq, cert, static_cast<std::size_t>(x),
               static_cast<std::size_t>(x2), replicates, seed, thread_count());
  std::string csv = "stat,mean,variance,std_error\n";
  const auto row = [&csv](const char* name, const SimStat& s) {
    csv += std::string(name) + ',' + format_double(s.mean) + ',' +
           format_double(s.variance) + ',' + format_double(s.std_error) + '\n';
  };
  row("tau", res.tau);
  row("sum_rate", res.sum_rate);
  row("sum_phi_vbar", res.sum_phi_vbar);
  row("t1", res.t1);
  emit(csv, out_path);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sub-geometric convergence-rate constants and verification"};
  app.require_subcommand(1);

  std::string spec_path, out_path, suite = "all";
  double alpha = 0.0, beta = 1.0, eps_b = 0.5, tol = -1.0;
  std::size_t n = 32, replicates = 10000;
  std::uint64_t seed = 1;
  long x = 0, x2 = -1;

  auto* rates = app.add_subcommand("rates", "rate table r(n), delta_n, H, H^-1");
  rates->add_option("--alpha", alpha, "phi exponent in [0,1)");
  rates->add_option("--beta", beta, "phi scale > 0");
  rates->add_option("--eps-b", eps_b, "drift fraction in (0,1]");
  rates->add_option("--n", n, "largest n in the table");
  rates->add_option("--out", out_path, "output CSV path (default stdout)");

  auto* certify = app.add_subcommand("certify", "check drift/minorisation data");
  certify->add_option("--spec", spec_path, "chain spec JSON")->required();
  certify->add_option("--out", out_path, "output CSV path (default stdout)");

  auto* constants = app.add_subcommand("constants", "theorem constant ledger");
  constants->add_option("--spec", spec_path, "chain spec JSON")->required();
  constants->add_option("--out", out_path, "output CSV path (default stdout)");

  auto* verify = app.add_subcommand("verify", "run a verification suite");
  verify->add_option("--spec", spec_path, "chain spec JSON")->required();
  verify->add_option("--suite", suite, "drift|lemmas|theorem|corollary|all");
  verify->add_option("--tol", tol, "truncation tolerance override");
  verify->add_option("--out", out_path, "output CSV path (default stdout)");

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo coupling stats");
  simulate->add_option("--spec", spec_path, "chain spec JSON")->required();
  simulate->add_option("--replicates", replicates, "number of replicates");
  auto* seed_opt = simulate->add_option("--seed", seed, "master seed");
  simulate->add_option("--x", x, "first start state");
  simulate->add_option("--x2", x2, "second start state (default last state)");
  simulate->add_option("--out", out_path, "output CSV path (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (rates->parsed()) return run_rates(alpha, beta, eps_b, n, out_path);
    if (certify->parsed()) return run_certify(spec_path, out_path);
    if (constants->parsed()) return run_constants(spec_path, out_path);
    if (verify->parsed()) return run_verify(spec_path, suite, tol, out_path);
    if (simulate->parsed()) {
      const ChainSpec spec = load_chain_spec(spec_path);
      if (x2 < 0) x2 = static_cast<long>(spec.kernels.front().size()) - 1;
      return run_simulate(spec_path, replicates, seed, seed_opt->count() > 0, x,
                          x2, out_path);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
