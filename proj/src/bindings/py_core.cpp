#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "extwm/harmonic.hpp"
#include "extwm/harness.hpp"
#include "extwm/phase_plane.hpp"
#include "extwm/rational.hpp"
#include "extwm/renorm.hpp"
#include "extwm/spectral.hpp"
#include "extwm/virial.hpp"

namespace py = pybind11;
using namespace extwm;

namespace {

std::function<double(double)> named_potential(const std::string& name) {
  if (name == "free") return [](double) { return 0.0; };
  if (name == "q1") {
    auto q = std::make_shared<harmonic::HarmonicMap>(harmonic::find_harmonic(1));
    return [q](double r) { return q->potential(r); };
  }
  throw py::value_error("potential must be 'free' or 'q1'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "numerical laboratory for equivariant wave maps exterior to a ball";

  m.def("zeros_of_f", &phase::zeros_of_f, py::arg("a") = 0.5,
        py::arg("b") = 6.0,
        "zeros of the phase-plane vector-field density on (a, b)");

  m.def("budget_constants", []() {
    auto z = phase::zeros_of_f(0.5, 6.0);
    return py::make_tuple(phase::F(z[1]) - phase::F(0.0),
                          phase::F(z[1]) - phase::F(z[3]));
  });

  m.def("exact_areas", []() {
    Rational a1 = phase::exact_area(phase::omega_minus1_region());
    Rational a2 = phase::exact_area(phase::omega2_region());
    py::dict d;
    d["first_strip"] = decimal_string(a1, 15);
    d["first_strip_fraction"] =
        numerator(a1).str() + "/" + denominator(a1).str();
    d["second_strip"] = decimal_string(a2, 15);
    d["second_strip_fraction"] =
        numerator(a2).str() + "/" + denominator(a2).str();
    return d;
  });

  m.def(
      "find_harmonic",
      [](int n) {
        auto q = harmonic::find_harmonic(n);
        py::dict d;
        d["degree"] = q.n;
        d["slope"] = q.slope;
        d["tail_c"] = q.tail_c;
        d["energy"] = harmonic::energy(q);
        return d;
      },
      py::arg("n") = 1, "stationary profile of the given degree by shooting");

  m.def(
      "coercivity_sample",
      [](int n, std::uint32_t seed) {
        auto r = virial::coercivity_sample(n, seed);
        py::dict d;
        d["samples"] = r.n;
        d["seed"] = r.seed;
        d["max_lambda"] = r.max_lambda;
        d["max_ell_slack"] = r.max_ell_slack;
        d["violations"] = r.violations;
        return d;
      },
      py::arg("n") = 1000, py::arg("seed") = 2718281u);

  m.def("eps_for", &renorm::eps_for, py::arg("j"),
        "renormalization scale for the j-th strip (j even, >= 4)");
  m.def("budget_rhs", &renorm::budget_rhs, py::arg("eps"));

  m.def(
      "weyl_m",
      [](double lam, const std::string& potential) {
        auto pb = spectral::perturbed_basis(named_potential(potential), lam);
        py::dict d;
        d["re_m"] = pb.m.real();
        d["im_m"] = pb.im_m;
        d["wronskian_dev"] = pb.wronskian_dev;
        d["iterations"] = pb.iterations;
        return d;
      },
      py::arg("lam"), py::arg("potential") = "free",
      "Weyl function of the half-line operator at energy lam^2");

  m.def(
      "plancherel",
      [](double lambda_max, double dlambda) {
        auto bump4 = [](double r) {
          if (r <= 2.0 || r >= 3.0) return 0.0;
          double t = (r - 2.0) * (3.0 - r);
          return t * t * t * t;
        };
        auto pr = spectral::plancherel_roundtrip(bump4, 2.0, 3.0, lambda_max,
                                                 dlambda);
        py::dict d;
        d["roundtrip_l2"] = pr.roundtrip_l2;
        d["parseval_defect"] = pr.parseval_defect;
        d["lambda_max"] = pr.lambda_max;
        return d;
      },
      py::arg("lambda_max") = 100.0, py::arg("dlambda") = 0.04,
      "free-transform completeness check on a reference bump");

  m.def(
      "run_config",
      [](const std::string& config_json) {
        harness::json raw;
        try {
          raw = harness::json::parse(config_json);
        } catch (const harness::json::parse_error& e) {
          throw py::value_error(std::string("invalid JSON: ") + e.what());
        }
        harness::Config c;
        harness::Bundle b;
        try {
          c = harness::Config::from_json(raw);
          b = harness::run_experiment(c);
        } catch (const harness::ConfigError& e) {
          throw py::value_error(e.what());
        }
        return py::make_tuple(b.all_pass() ? 0 : 1, b.summary.dump(2));
      },
      py::arg("config_json"),
      "run an experiment from a JSON config string; returns (exit_code, "
      "summary_json)");
}
