#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstring>
#include <vector>

#include "deltabound/bounds_certificates.hpp"
#include "deltabound/config_io.hpp"
#include "deltabound/geometry.hpp"
#include "deltabound/heat_kernels.hpp"
#include "deltabound/principal_operator.hpp"
#include "deltabound/special_functions.hpp"
#include "deltabound/spectral_solver.hpp"

namespace py = pybind11;
using namespace deltabound;

namespace {

std::vector<double> matrix_from_numpy(const py::array_t<double>& a, std::size_t& n) {
    if (a.ndim() != 2 || a.shape(0) != a.shape(1))
        throw DomainError("expected a square 2-d array");
    n = static_cast<std::size_t>(a.shape(0));
    auto r = a.unchecked<2>();
    std::vector<double> m(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m[i * n + j] = r(i, j);
    return m;
}

py::array_t<double> numpy_from_matrix(const std::vector<double>& m, std::size_t n) {
    py::array_t<double> a({n, n});
    std::memcpy(a.mutable_data(), m.data(), n * n * sizeof(double));
    return a;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "bound states and certified energy bounds for point interactions on 2D manifolds";

    py::register_exception<Error>(m, "DeltaboundError", PyExc_RuntimeError);

    py::class_<PhysicalConstants>(m, "PhysicalConstants")
        .def(py::init<double, double>(), py::arg("hbar") = 1.0, py::arg("mass") = 0.5)
        .def_readwrite("hbar", &PhysicalConstants::hbar)
        .def_readwrite("mass", &PhysicalConstants::mass)
        .def_static("natural", &PhysicalConstants::natural)
        .def("__repr__", [](const PhysicalConstants& pc) {
            return "PhysicalConstants(hbar=" + std::to_string(pc.hbar) +
                   ", mass=" + std::to_string(pc.mass) + ")";
        });

    py::class_<Flat>(m, "Flat").def(py::init<>()).def("__repr__", [](const Flat&) {
        return std::string("Flat()");
    });
    py::class_<Hyperbolic>(m, "Hyperbolic")
        .def(py::init<double>(), py::arg("kappa"))
        .def_readonly("kappa", &Hyperbolic::kappa)
        .def("__repr__", [](const Hyperbolic& h) {
            return "Hyperbolic(kappa=" + std::to_string(h.kappa) + ")";
        });
    py::class_<GenericBounds>(m, "GenericBounds")
        .def(py::init<double, double, double, double, double, int, double, double>(),
             py::arg("kappa") = 0.0, py::arg("C") = 1.0, py::arg("D") = 1.0, py::arg("rho") = 1.0,
             py::arg("lambda_gap") = 0.0, py::arg("n_star") = 2, py::arg("A") = 2.0,
             py::arg("B") = 5.0)
        .def_readonly("kappa", &GenericBounds::kappa)
        .def_readonly("C", &GenericBounds::const_C)
        .def_readonly("D", &GenericBounds::const_D)
        .def_readonly("rho", &GenericBounds::rho)
        .def_readonly("lambda_gap", &GenericBounds::lambda_gap)
        .def_readonly("n_star", &GenericBounds::n_star)
        .def_readonly("A", &GenericBounds::const_A)
        .def_readonly("B", &GenericBounds::const_B);

    py::class_<Point>(m, "Point")
        .def(py::init([](double x, double y) { return Point{x, y}; }), py::arg("x"), py::arg("y"))
        .def_readwrite("x", &Point::x)
        .def_readwrite("y", &Point::y)
        .def("__repr__", [](const Point& p) {
            return "Point(" + std::to_string(p.x) + ", " + std::to_string(p.y) + ")";
        });
    py::class_<Center>(m, "Center")
        .def(py::init([](double x, double y, double mu) { return Center{{x, y}, mu}; }),
             py::arg("x"), py::arg("y"), py::arg("mu") = 1.0)
        .def_readwrite("point", &Center::point)
        .def_readwrite("mu", &Center::mu);

    py::class_<Configuration>(m, "Configuration")
        .def(py::init<std::vector<Center>, double, ManifoldModel, PhysicalConstants>(),
             py::arg("centers"), py::arg("d_min"), py::arg("model"),
             py::arg("constants") = PhysicalConstants::natural())
        .def_property_readonly("centers", &Configuration::centers)
        .def_property_readonly("d_min", &Configuration::d_min)
        .def_property_readonly("model", &Configuration::model)
        .def_property_readonly("constants", &Configuration::constants)
        .def_property_readonly("mu_star", &Configuration::mu_star)
        .def("__len__", &Configuration::size);

    m.def("distance", &distance, py::arg("model"), py::arg("p"), py::arg("q"));
    m.def("poincare_from_polar", &poincare_from_polar, py::arg("kappa"), py::arg("r"),
          py::arg("theta"));
    m.def("comparison_angle", &comparison_angle, py::arg("kappa"), py::arg("side_a"),
          py::arg("side_b"), py::arg("side_c"));
    m.def("min_pairwise_distance", &min_pairwise_distance);

    m.def("hex_lattice", &hex_lattice, py::arg("d_min"), py::arg("levels"),
          py::arg("constants") = PhysicalConstants::natural(), py::arg("mu") = 1.0);
    m.def("hyperbolic_level_packing", &hyperbolic_level_packing, py::arg("kappa"),
          py::arg("d_min"), py::arg("levels"), py::arg("constants") = PhysicalConstants::natural(),
          py::arg("mu") = 1.0);
    m.def("poisson_disk_sample", &poisson_disk_sample, py::arg("model"), py::arg("region_radius"),
          py::arg("d_min"), py::arg("seed"), py::arg("constants") = PhysicalConstants::natural(),
          py::arg("mu") = 1.0);

    m.def("packing_count_bound_exact", &packing_count_bound_exact, py::arg("kappa"),
          py::arg("d_min"), py::arg("l"));
    m.def("packing_count_bound_relaxed", &packing_count_bound_relaxed, py::arg("kappa"),
          py::arg("d_min"), py::arg("l"));
    m.def("packing_count_bound_generic", &packing_count_bound_generic, py::arg("n_star"),
          py::arg("l"));

    m.def("bessel_k0", [](double x) { return bessel_k0(x); }, py::arg("x"));
    m.def("bessel_k1", [](double x) { return bessel_k1(x); }, py::arg("x"));
    m.def("digamma", &digamma, py::arg("x"));
    m.def("frullani_sinh_integral",
          [](double a, double b) { return frullani_sinh_integral(a, b); }, py::arg("a"),
          py::arg("b"));

    m.def("heat_kernel",
          [](double t, double dist, const ManifoldModel& model, PhysicalConstants pc) {
              KernelQuery q(t, dist, model, pc);
              if (is_flat(model)) return flat_heat_kernel(q);
              if (is_hyperbolic(model)) return hyperbolic_heat_kernel(q);
              throw DomainError("heat_kernel: generic backend has bounds only");
          },
          py::arg("t"), py::arg("dist"), py::arg("model"),
          py::arg("constants") = PhysicalConstants::natural());
    m.def("heat_kernel_upper_gaussian",
          [](double t, double dist, const ManifoldModel& model, double A, double B,
             PhysicalConstants pc) {
              return heat_kernel_upper_gaussian(KernelQuery(t, dist, model, pc), A, B);
          },
          py::arg("t"), py::arg("dist"), py::arg("model"), py::arg("A"), py::arg("B"),
          py::arg("constants") = PhysicalConstants::natural());
    m.def("free_resolvent_kernel",
          [](double nu, double dist, const ManifoldModel& model, PhysicalConstants pc) {
              return free_resolvent_kernel(ResolventQuery(nu, dist, model, pc));
          },
          py::arg("nu"), py::arg("dist"), py::arg("model"),
          py::arg("constants") = PhysicalConstants::natural());

    m.def("phi_diagonal", &phi_diagonal, py::arg("model"), py::arg("nu"), py::arg("mu"),
          py::arg("constants") = PhysicalConstants::natural());
    m.def("phi_offdiagonal", &phi_offdiagonal, py::arg("model"), py::arg("nu"), py::arg("dist"),
          py::arg("constants") = PhysicalConstants::natural());
    m.def("regularized_coupling", &regularized_coupling, py::arg("model"), py::arg("epsilon"),
          py::arg("mu"), py::arg("constants") = PhysicalConstants::natural());
    m.def("regularized_phi_diagonal", &regularized_phi_diagonal, py::arg("model"),
          py::arg("epsilon"), py::arg("nu"), py::arg("mu"),
          py::arg("constants") = PhysicalConstants::natural());

    m.def("assemble",
          [](const Configuration& config, double nu) {
              PrincipalMatrix pm = assemble(config, nu);
              return numpy_from_matrix(pm.entries, pm.n);
          },
          py::arg("config"), py::arg("nu"), "dense principal matrix at energy -nu^2");

    m.def("smallest_eigenvalue",
          [](const py::array_t<double>& a) {
              std::size_t n = 0;
              auto mat = matrix_from_numpy(a, n);
              return smallest_eigenvalue(mat, n);
          },
          py::arg("matrix"));
    m.def("negative_eigenvalue_count",
          [](const py::array_t<double>& a) {
              std::size_t n = 0;
              auto mat = matrix_from_numpy(a, n);
              return negative_eigenvalue_count(mat, n);
          },
          py::arg("matrix"));
    m.def("holmgren_norm",
          [](const py::array_t<double>& a) {
              std::size_t n = 0;
              auto mat = matrix_from_numpy(a, n);
              return holmgren_norm(mat, n);
          },
          py::arg("matrix"));

    py::class_<GroundStateResult>(m, "GroundStateResult")
        .def_readonly("nu_gr", &GroundStateResult::nu_gr)
        .def_readonly("energy", &GroundStateResult::energy)
        .def_readonly("iterations", &GroundStateResult::iterations)
        .def_readonly("nu_lo", &GroundStateResult::nu_lo)
        .def_readonly("nu_hi", &GroundStateResult::nu_hi)
        .def_readonly("residual", &GroundStateResult::residual)
        .def("__repr__", [](const GroundStateResult& r) {
            return "GroundStateResult(nu_gr=" + std::to_string(r.nu_gr) +
                   ", energy=" + std::to_string(r.energy) + ")";
        });
    m.def("ground_state", &ground_state, py::arg("config"), py::arg("nu_lo"), py::arg("nu_hi"),
          py::arg("tol") = 1e-10);
    m.def("count_bound_states_below", &count_bound_states_below, py::arg("config"), py::arg("nu"));

    py::class_<EigenFlow>(m, "EigenFlow")
        .def_readonly("nu_grid", &EigenFlow::nu_grid)
        .def_readonly("lambda_min", &EigenFlow::lambda_min)
        .def_readonly("neg_counts", &EigenFlow::neg_counts);
    m.def("eigenflow", &eigenflow, py::arg("config"), py::arg("nu_grid"));

    py::enum_<CertificateRegime>(m, "CertificateRegime")
        .value("cartan_hadamard", CertificateRegime::cartan_hadamard)
        .value("flat_limit", CertificateRegime::flat_limit)
        .value("generic", CertificateRegime::generic);
    py::class_<Certificate>(m, "Certificate")
        .def_readonly("nu_star", &Certificate::nu_star)
        .def_readonly("energy_lower_bound", &Certificate::energy_lower_bound)
        .def_readonly("regime", &Certificate::regime)
        .def_readonly("d_min", &Certificate::d_min)
        .def_readonly("mu_star", &Certificate::mu_star)
        .def_readonly("kappa", &Certificate::kappa)
        .def_readonly("logn_valid", &Certificate::logn_valid)
        .def("__repr__", [](const Certificate& c) {
            return "Certificate(nu_star=" + std::to_string(c.nu_star) +
                   ", energy_lower_bound=" + std::to_string(c.energy_lower_bound) + ")";
        });
    m.def("certificate_ch", &certificate_ch, py::arg("kappa"), py::arg("d_min"),
          py::arg("mu_star"), py::arg("A") = 2.0, py::arg("B") = 5.0,
          py::arg("constants") = PhysicalConstants::natural());
    m.def("certificate_generic", &certificate_generic, py::arg("bounds"), py::arg("d_min"),
          py::arg("mu_star"), py::arg("constants") = PhysicalConstants::natural());
    m.def("certificate_margin", &certificate_margin, py::arg("certificate"));
    m.def("neumann_gate",
          [](const Configuration& config, double nu) {
              return neumann_gate(split(assemble(config, nu)));
          },
          py::arg("config"), py::arg("nu"));

    py::class_<VerificationReport>(m, "VerificationReport")
        .def_readonly("nu_star", &VerificationReport::nu_star)
        .def_readonly("energy_lower_bound", &VerificationReport::energy_lower_bound)
        .def_readonly("nu_gr", &VerificationReport::nu_gr)
        .def_readonly("e_gr", &VerificationReport::e_gr)
        .def_readonly("margin", &VerificationReport::margin)
        .def_readonly("gate", &VerificationReport::gate)
        .def_readonly("ok", &VerificationReport::ok);
    m.def("verify_certificate", &verify_certificate, py::arg("config"), py::arg("certificate"));

    m.def("parse_config_text", &parse_config_text, py::arg("text"));
    m.def("parse_config_file", &parse_config_file, py::arg("path"));
    m.def("configuration_to_json", &configuration_to_json, py::arg("config"));
}
