#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "subgeom/chainspec.hpp"
#include "subgeom/constants.hpp"
#include "subgeom/coupling.hpp"
#include "subgeom/ratefn.hpp"
#include "subgeom/report.hpp"
#include "subgeom/verify.hpp"
#include "subgeom/young.hpp"

namespace py = pybind11;
using namespace subgeom;

namespace {

py::dict cert_to_dict(const DriftCertificate& cert) {
  py::dict d;
  d["alpha"] = cert.phi.alpha;
  d["beta"] = cert.phi.beta;
  d["b_v"] = cert.b_v;
  d["c_v"] = cert.c_v;
  d["eps_b"] = cert.eps_b;
  d["eps_nu"] = cert.eps_nu;
  d["small_set"] = cert.small_set;
  d["v"] = cert.v;
  return d;
}

py::dict constants_to_dict(const TheoremConstants& tc) {
  py::dict d;
  d["bar_b"] = tc.bar_b;
  d["m_one"] = tc.m_one;
  d["c_star"] = tc.c_star;
  d["c"] = tc.c;
  d["series_terms_used"] = tc.series_terms_used;
  d["series_tail_bound"] = tc.series_tail_bound;
  return d;
}

py::dict stat_to_dict(const SimStat& s) {
  py::dict d;
  d["mean"] = s.mean;
  d["variance"] = s.variance;
  d["std_error"] = s.std_error;
  return d;
}

Report run_suite(const ChainSpec& spec, const std::string& suite, double tol) {
  const KernelSequence seq = spec.sequence();
  const DriftCertificate cert = certify_spec(spec);
  VerifyOptions opts;
  opts.tol = tol > 0.0 ? tol : spec.tol;
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
    throw std::invalid_argument("unknown suite '" + suite + "'");
  }
  return report;
}

}  // namespace

PYBIND11_MODULE(_subgeom, m) {
  m.doc() = "explicit sub-geometric convergence-rate constants and checks";

  py::class_<PhiSpec>(m, "PhiSpec")
      .def(py::init<double, double>(), py::arg("beta"), py::arg("alpha"))
      .def_readonly("beta", &PhiSpec::beta)
      .def_readonly("alpha", &PhiSpec::alpha)
      .def("is_constant", &PhiSpec::is_constant);

  m.def("eval_phi", &eval_phi, py::arg("spec"), py::arg("v"));
  m.def("phi_prime", &phi_prime, py::arg("spec"), py::arg("v"));
  m.def("big_h", &big_h, py::arg("spec"), py::arg("t"));
  m.def("big_h_inv", &big_h_inv, py::arg("spec"), py::arg("u"));
  m.def("rate_r", &rate_r, py::arg("spec"), py::arg("eps_b"), py::arg("n"));
  m.def("delta_k", &delta_k, py::arg("spec"), py::arg("eps_b"), py::arg("k"));
  m.def("h_k", &h_k, py::arg("spec"), py::arg("v"), py::arg("k"));

  py::class_<YoungPair>(m, "YoungPair")
      .def_readonly("xi", &YoungPair::xi)
      .def_readonly("a1", &YoungPair::a1)
      .def_readonly("a2", &YoungPair::a2)
      .def("psi1", &YoungPair::psi1)
      .def("psi2", &YoungPair::psi2);
  m.def("make_pair", &make_pair, py::arg("xi"));
  m.def("check_young", &check_young, py::arg("pair"), py::arg("grid"));
  m.def("poly_min_const", &poly_min_const, py::arg("alpha"), py::arg("beta"),
        py::arg("eps_b"));
  m.def("poly_corollary_const", &poly_corollary_const, py::arg("alpha"),
        py::arg("beta"), py::arg("eps_b"), py::arg("xi"));

  py::class_<ChainSpec>(m, "ChainSpec")
      .def_readonly("name", &ChainSpec::name)
      .def_readonly("v", &ChainSpec::v)
      .def_readonly("set_c", &ChainSpec::set_c)
      .def_readonly("alpha", &ChainSpec::alpha)
      .def_readonly("f", &ChainSpec::f)
      .def_readonly("xi", &ChainSpec::xi)
      .def_readonly("seed", &ChainSpec::seed);
  m.def("load_chain_spec", &load_chain_spec, py::arg("path"));
  m.def("parse_chain_spec", &parse_chain_spec, py::arg("json_text"));

  m.def(
      "certify",
      [](const ChainSpec& spec) { return cert_to_dict(certify_spec(spec)); },
      py::arg("spec"));
  m.def(
      "theorem_constants",
      [](const ChainSpec& spec) {
        return constants_to_dict(theorem_c(certify_spec(spec), spec.tol));
      },
      py::arg("spec"));
  m.def(
      "verify",
      [](const ChainSpec& spec, const std::string& suite, double tol) {
        const Report report = run_suite(spec, suite, tol);
        py::dict d;
        d["all_pass"] = report.all_pass();
        d["min_slack"] = report.min_slack();
        d["csv"] = report_to_csv(report);
        return d;
      },
      py::arg("spec"), py::arg("suite") = "all", py::arg("tol") = -1.0);
  m.def(
      "simulate",
      [](const ChainSpec& spec, std::size_t x, std::size_t x2,
         std::size_t replicates, std::uint64_t seed, std::size_t threads) {
        const KernelSequence seq = spec.sequence();
        const auto cert = certify_spec(spec);
        const auto res =
            simulate(seq, cert, x, x2, replicates,
                     seed == 0 ? spec.seed : seed, threads);
        py::dict d;
        d["replicates"] = res.replicates;
        d["tau"] = stat_to_dict(res.tau);
        d["sum_rate"] = stat_to_dict(res.sum_rate);
        d["sum_phi_vbar"] = stat_to_dict(res.sum_phi_vbar);
        d["t1"] = stat_to_dict(res.t1);
        return d;
      },
      py::arg("spec"), py::arg("x"), py::arg("x2"), py::arg("replicates"),
      py::arg("seed") = 0, py::arg("threads") = 1);

  py::register_exception<CertifyFailure>(m, "CertifyError");
}
