// Python bindings. Exact rationals cross the boundary as "num/den" strings and
// are turned into fractions.Fraction by the pure-Python wrapper.
#include "dmoments/exact_arith.hpp"
#include "dmoments/haar_mc.hpp"
#include "dmoments/moment_constants.hpp"
#include "dmoments/special_functions.hpp"
#include "dmoments/tau.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace dmoments;

namespace {

std::vector<std::string> coeff_strings(const TruncSeries& s) {
  std::vector<std::string> out;
  out.reserve(s.degree() + 1);
  for (const auto& c : s.coeffs()) out.push_back(to_string(c));
  return out;
}

py::dict factored_dict(const FactoredRational& f) {
  auto pairs = [](const FactoredInteger& n) {
    std::vector<std::pair<std::string, unsigned long>> out;
    for (const auto& pp : n.factors) out.emplace_back(to_string(pp.prime), pp.exponent);
    return out;
  };
  py::dict d;
  d["sign"] = f.sign;
  d["numerator"] = pairs(f.numerator);
  d["denominator"] = pairs(f.denominator);
  d["numerator_cofactor"] = to_string(f.numerator.cofactor);
  d["denominator_cofactor"] = to_string(f.denominator.cofactor);
  d["complete"] = f.complete();
  d["display"] = format_factored(f);
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exact moment constants for derivatives of orthogonal and symplectic characteristic polynomials";

  py::register_exception<PrecisionError>(m, "PrecisionError", PyExc_ArithmeticError);
  py::register_exception<NonUnitDivisor>(m, "NonUnitDivisor", PyExc_ZeroDivisionError);

  m.def("g_series", [](int mm, std::size_t degree) { return coeff_strings(g_series(mm, degree)); }, py::arg("m"),
        py::arg("degree"));

  m.def(
      "tau",
      [](std::size_t k, int ell, std::size_t degree, const std::string& method) {
        if (tau_method_from_string(method) == TauMethod::determinant) return coeff_strings(tau_det(k, ell, degree));
        const std::size_t base = degree + recurrence_base_degree(std::max<std::size_t>(k, 1), ell);
        const TauTable t = tau_recurrence_table(std::max<std::size_t>(k, 1), ell, base);
        if (t.certified_degrees[k] < degree) throw PrecisionError("insufficient precision");
        return coeff_strings(t.entries[k].truncated(degree));
      },
      py::arg("k"), py::arg("ell"), py::arg("degree"), py::arg("method") = "recurrence");

  m.def(
      "bk_table",
      [](const std::string& group, unsigned long k_max, const std::string& method, bool factor) {
        BkTableOptions options;
        options.factor = factor;
        options.cache = TauCache::from_environment();
        std::vector<BkRecord> rows;
        {
          py::gil_scoped_release release;
          rows = bk_table(symmetry_class_from_string(group), k_max, tau_method_from_string(method), options);
        }
        py::list out;
        for (const auto& r : rows) {
          py::dict d;
          d["group"] = to_string(r.group);
          d["k"] = r.k;
          d["exact"] = to_string(r.value);
          if (factor) d["factored"] = format_factored(r.factored);
          out.append(d);
        }
        return out;
      },
      py::arg("group"), py::arg("k_max"), py::arg("method") = "recurrence", py::arg("factor") = true);

  m.def(
      "moment_asymptotic",
      [](const std::string& group, unsigned long k, unsigned long N) {
        return to_string(moment_asymptotic(symmetry_class_from_string(group), k, N));
      },
      py::arg("group"), py::arg("k"), py::arg("N"));

  m.def("factor_rational", [](const std::string& q) { return factored_dict(factor_rational(parse_rational(q))); },
        py::arg("q"));

  m.def("to_decimal", [](const std::string& q, int digits) { return to_decimal(parse_rational(q), digits); },
        py::arg("q"), py::arg("digits") = 30);

  m.def(
      "estimate_moment",
      [](const std::string& group, unsigned N, unsigned k, int mm, std::uint64_t samples, std::uint64_t seed,
         unsigned workers) {
        const SymmetryClass g = symmetry_class_from_string(group);
        MCOptions options;
        options.workers = workers;
        const unsigned order = mm < 0 ? static_cast<unsigned>(derivative_order(g)) : static_cast<unsigned>(mm);
        MCEstimate e;
        {
          py::gil_scoped_release release;
          e = estimate_moment(g, N, k, order, samples, seed, options);
        }
        py::dict d;
        d["group"] = to_string(e.group);
        d["N"] = e.N;
        d["k"] = e.k;
        d["m"] = e.m;
        d["num_samples"] = e.num_samples;
        d["seed"] = e.seed;
        d["mean"] = e.mean;
        d["std_error"] = e.std_error;
        d["prediction"] = e.prediction ? py::cast(*e.prediction) : py::none();
        d["ratio"] = e.ratio ? py::cast(*e.ratio) : py::none();
        d["prediction_flagged"] = e.prediction_flagged;
        d["resamples"] = e.resamples;
        d["identity_max_rel_error"] = e.identity_max_rel_error;
        d["wall_seconds"] = e.wall_seconds;
        return d;
      },
      py::arg("group"), py::arg("N"), py::arg("k"), py::arg("m") = -1, py::arg("samples") = 1000,
      py::arg("seed") = 1, py::arg("workers") = 1);

  m.def(
      "sample_angles",
      [](const std::string& group, unsigned N, std::uint64_t seed) {
        const SymmetryClass g = symmetry_class_from_string(group);
        Rng rng(seed);
        const auto s = g == SymmetryClass::USp  ? sample_symplectic(N, rng)
                       : g == SymmetryClass::SO ? sample_orthogonal(N, OrthogonalComponent::plus, rng)
                                                : sample_orthogonal(N, OrthogonalComponent::minus, rng);
        return py::make_tuple(s.angles, charpoly_coeffs(s));
      },
      py::arg("group"), py::arg("N"), py::arg("seed"));

  m.def(
      "a_k_euler",
      [](unsigned long k, unsigned long cutoff, unsigned workers) {
        EulerProduct e;
        {
          py::gil_scoped_release release;
          e = a_k_euler(k, cutoff, workers);
        }
        py::dict d;
        d["k"] = e.k;
        d["prime_cutoff"] = e.prime_cutoff;
        d["primes_used"] = e.primes_used;
        d["value"] = e.value;
        d["tail_error"] = e.tail_error;
        return d;
      },
      py::arg("k"), py::arg("prime_cutoff"), py::arg("workers") = 1);

  m.def("euler_factor", &euler_factor, py::arg("k"), py::arg("p"));
}
