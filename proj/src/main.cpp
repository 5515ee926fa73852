#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "deltabound/bounds_certificates.hpp"
#include "deltabound/config_io.hpp"
#include "deltabound/errors.hpp"
#include "deltabound/geometry.hpp"
#include "deltabound/heat_kernels.hpp"
#include "deltabound/principal_operator.hpp"
#include "deltabound/spectral_solver.hpp"

namespace {

using namespace deltabound;
using nlohmann::json;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// every emitter goes through this so the unit convention is never silent
void emit_units(std::ostream& out, const PhysicalConstants& pc) {
    out << "# units: hbar=" << fmt(pc.hbar) << " mass=" << fmt(pc.mass) << "\n";
}

std::string model_name(const ManifoldModel& m) {
    if (is_flat(m)) return "flat";
    if (is_hyperbolic(m)) return "hyperbolic";
    return "generic";
}

struct OutputTarget {
    std::string path = "-";
    std::ofstream file;
    std::ostream& open() {
        if (path == "-") return std::cout;
        file.open(path);
        if (!file) throw DomainError("cannot write '" + path + "'");
        return file;
    }
};

json certificate_to_json(const Certificate& cert) {
    json j;
    j["regime"] = to_string(cert.regime);
    j["nu_star"] = cert.nu_star;
    j["energy_lower_bound"] = cert.energy_lower_bound;
    j["d_min"] = cert.d_min;
    j["mu_star"] = cert.mu_star;
    j["kappa"] = cert.kappa;
    j["constants"] = {{"hbar", cert.constants.hbar}, {"mass", cert.constants.mass}};
    if (cert.regime == CertificateRegime::generic) {
        j["C"] = cert.params.const_C;
        j["D"] = cert.params.const_D;
        j["rho"] = cert.params.rho;
        j["n_star"] = cert.params.n_star;
        j["lambda_gap"] = cert.params.lambda_gap;
        j["logn_valid"] = cert.logn_valid;
    } else {
        j["A"] = cert.gauss_A;
        j["B"] = cert.gauss_B;
    }
    return j;
}

Certificate certificate_from_json(const json& j) {
    Certificate cert;
    const std::string regime = j.at("regime").get<std::string>();
    cert.nu_star = j.at("nu_star").get<double>();
    cert.energy_lower_bound = -cert.nu_star * cert.nu_star;
    cert.d_min = j.at("d_min").get<double>();
    cert.mu_star = j.at("mu_star").get<double>();
    cert.kappa = j.at("kappa").get<double>();
    cert.constants.hbar = j.at("constants").at("hbar").get<double>();
    cert.constants.mass = j.at("constants").at("mass").get<double>();
    if (regime == "generic") {
        cert.regime = CertificateRegime::generic;
        cert.params.kappa = cert.kappa;
        cert.params.const_C = j.at("C").get<double>();
        cert.params.const_D = j.at("D").get<double>();
        cert.params.rho = j.at("rho").get<double>();
        cert.params.n_star = j.at("n_star").get<int>();
        cert.params.lambda_gap = j.at("lambda_gap").get<double>();
        cert.logn_valid = j.value("logn_valid", true);
    } else if (regime == "cartan_hadamard" || regime == "flat_limit") {
        cert.regime = regime == "flat_limit" ? CertificateRegime::flat_limit
                                             : CertificateRegime::cartan_hadamard;
        cert.gauss_A = j.at("A").get<double>();
        cert.gauss_B = j.at("B").get<double>();
    } else {
        throw DomainError("certificate: unknown regime '" + regime + "'");
    }
    return cert;
}

Certificate read_certificate(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open certificate '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw DomainError(std::string("certificate: malformed JSON: ") + e.what());
    }
    try {
        return certificate_from_json(j);
    } catch (const json::exception& e) {
        throw DomainError(std::string("certificate: ") + e.what());
    }
}

// ---- spectrum ----------------------------------------------------------

int run_spectrum(const std::string& config_path, double tol, int grid, OutputTarget& target) {
    Configuration config = parse_config_file(config_path);
    double mu_min = std::numeric_limits<double>::infinity();
    for (const auto& c : config.centers()) mu_min = std::min(mu_min, c.mu);
    const double lo = 0.5 * mu_min;
    GroundStateResult gs = ground_state(config, lo, 2.0 * config.mu_star(), tol);

    std::vector<double> nu_grid;
    const double hi = std::max(2.0 * gs.nu_gr, 1.5 * config.mu_star());
    for (int i = 0; i < grid; ++i) nu_grid.push_back(lo + (hi - lo) * i / (grid - 1));
    EigenFlow flow = eigenflow(config, nu_grid);

    std::ostream& out = target.open();
    emit_units(out, config.constants());
    out << "# config: n_centers=" << config.size() << " model=" << model_name(config.model())
        << " d_min=" << fmt(config.d_min()) << "\n";
    out << "# ground_state: nu_gr=" << fmt(gs.nu_gr) << " E_gr=" << fmt(gs.energy)
        << " residual=" << fmt(gs.residual) << " iterations=" << gs.iterations << "\n";
    out << "nu,lambda_min,negative_count\n";
    for (std::size_t i = 0; i < flow.nu_grid.size(); ++i)
        out << fmt(flow.nu_grid[i]) << "," << fmt(flow.lambda_min[i]) << ","
            << flow.neg_counts[i] << "\n";
    return 0;
}

// ---- certificate -------------------------------------------------------

int run_certificate(const Certificate& cert, OutputTarget& target, const std::string& save_path) {
    std::ostream& out = target.open();
    emit_units(out, cert.constants);
    out << "# certificate: regime=" << to_string(cert.regime) << " d_min=" << fmt(cert.d_min)
        << " mu_star=" << fmt(cert.mu_star) << " kappa=" << fmt(cert.kappa);
    if (cert.regime == CertificateRegime::generic) {
        out << " C=" << fmt(cert.params.const_C) << " D=" << fmt(cert.params.const_D)
            << " rho=" << fmt(cert.params.rho) << " n_star=" << cert.params.n_star
            << " lambda_gap=" << fmt(cert.params.lambda_gap)
            << " logn_valid=" << (cert.logn_valid ? 1 : 0);
    } else {
        out << " A=" << fmt(cert.gauss_A) << " B=" << fmt(cert.gauss_B);
    }
    out << "\n";
    out << "nu_star,energy_lower_bound,margin\n";
    out << fmt(cert.nu_star) << "," << fmt(cert.energy_lower_bound) << ","
        << fmt(certificate_margin(cert)) << "\n";
    if (!save_path.empty()) {
        std::ofstream f(save_path);
        if (!f) throw DomainError("cannot write '" + save_path + "'");
        f << certificate_to_json(cert).dump(2) << "\n";
    }
    return 0;
}

// ---- verify ------------------------------------------------------------

int run_verify(const std::string& config_path, const std::string& cert_path, OutputTarget& target) {
    Configuration config = parse_config_file(config_path);
    Certificate cert = read_certificate(cert_path);
    VerificationReport report = verify_certificate(config, cert);

    std::ostream& out = target.open();
    emit_units(out, config.constants());
    out << "# config: n_centers=" << config.size() << " model=" << model_name(config.model())
        << "\n";
    out << "# certificate: regime=" << to_string(cert.regime) << " nu_star=" << fmt(cert.nu_star)
        << "\n";
    out << "nu_gr,e_gr,energy_lower_bound,margin,gate,ok\n";
    out << fmt(report.nu_gr) << "," << fmt(report.e_gr) << "," << fmt(report.energy_lower_bound)
        << "," << fmt(report.margin) << "," << fmt(report.gate) << "," << (report.ok ? 1 : 0)
        << "\n";
    return report.ok ? 0 : 1;
}

// ---- kernels -----------------------------------------------------------

int run_kernels(const std::string& config_path, double t_lo, double t_hi, int t_steps, double d_lo,
                double d_hi, int d_steps, double A, double B, OutputTarget& target) {
    Configuration config = parse_config_file(config_path);
    if (!(t_lo > 0.0) || !(t_hi >= t_lo)) throw DomainError("kernels: need 0 < t-lo <= t-hi");
    if (!(d_lo >= 0.0) || !(d_hi >= d_lo)) throw DomainError("kernels: need 0 <= d-lo <= d-hi");
    const ManifoldModel& model = config.model();
    const bool exact = !is_generic(model);

    std::ostream& out = target.open();
    emit_units(out, config.constants());
    out << "# model=" << model_name(model);
    if (is_hyperbolic(model)) out << " kappa=" << fmt(std::get<Hyperbolic>(model).kappa);
    out << "\n";
    out << (exact ? "t,d,heat_kernel,upper_gaussian\n" : "t,d,upper_generic\n");
    for (int i = 0; i < t_steps; ++i) {
        const double t = t_steps == 1 ? t_lo : t_lo * std::pow(t_hi / t_lo, double(i) / (t_steps - 1));
        for (int j = 0; j < d_steps; ++j) {
            const double d = d_steps == 1 ? d_lo : d_lo + (d_hi - d_lo) * j / (d_steps - 1);
            KernelQuery q(t, d, model, config.constants());
            if (exact) {
                const double k = is_flat(model) ? flat_heat_kernel(q) : hyperbolic_heat_kernel(q);
                out << fmt(t) << "," << fmt(d) << "," << fmt(k) << ","
                    << fmt(heat_kernel_upper_gaussian(q, A, B)) << "\n";
            } else {
                out << fmt(t) << "," << fmt(d) << ","
                    << fmt(heat_kernel_upper_generic(q, std::get<GenericBounds>(model))) << "\n";
            }
        }
    }
    return 0;
}

// ---- lattice -----------------------------------------------------------

int run_lattice(int hex_levels, int pack_levels, double poisson_radius, double d_min, double kappa,
                double mu, std::uint64_t seed, PhysicalConstants pc, OutputTarget& target) {
    const int sources = (hex_levels >= 0) + (pack_levels >= 0) + (poisson_radius > 0.0);
    if (sources != 1)
        throw DomainError("lattice: pick exactly one of --hex, --pack, --poisson");
    Configuration config = [&] {
        if (hex_levels >= 0) {
            if (kappa != 0.0) throw DomainError("lattice: --hex is the flat generator; drop --kappa");
            return hex_lattice(d_min, hex_levels, pc, mu);
        }
        if (pack_levels >= 0) {
            if (!(kappa > 0.0)) throw DomainError("lattice: --pack needs --kappa > 0");
            return hyperbolic_level_packing(kappa, d_min, pack_levels, pc, mu);
        }
        ManifoldModel model = kappa > 0.0 ? ManifoldModel(Hyperbolic{kappa}) : ManifoldModel(Flat{});
        return poisson_disk_sample(model, poisson_radius, d_min, seed, pc, mu);
    }();
    target.open() << configuration_to_json(config);
    return 0;
}

// ---- flow --------------------------------------------------------------

int run_flow(const std::string& config_path, double eps_lo, double eps_hi, int steps,
             OutputTarget& target) {
    Configuration config = parse_config_file(config_path);
    if (!(eps_lo > 0.0) || !(eps_hi >= eps_lo)) throw DomainError("flow: need 0 < eps-lo <= eps-hi");
    std::ostream& out = target.open();
    emit_units(out, config.constants());
    out << "# config: n_centers=" << config.size() << " model=" << model_name(config.model())
        << "\n";
    out << "eps,center,lambda\n";
    for (int i = 0; i < steps; ++i) {
        const double eps =
            steps == 1 ? eps_lo : eps_lo * std::pow(eps_hi / eps_lo, double(i) / (steps - 1));
        for (std::size_t c = 0; c < config.size(); ++c) {
            const double lambda = regularized_coupling(config.model(), eps,
                                                       config.centers()[c].mu, config.constants());
            out << fmt(eps) << "," << c << "," << fmt(lambda) << "\n";
        }
    }
    return 0;
}

// ---- montecarlo --------------------------------------------------------

int run_montecarlo(double kappa, double region, double d_min, double mu, int count,
                   std::uint64_t seed, double A, double B, double tol, PhysicalConstants pc,
                   OutputTarget& target) {
    if (count < 1) throw DomainError("montecarlo: count must be >= 1");
    ManifoldModel model = kappa > 0.0 ? ManifoldModel(Hyperbolic{kappa}) : ManifoldModel(Flat{});
    Certificate cert = certificate_ch(kappa, d_min, mu, A, B, pc);

    std::ostream& out = target.open();
    emit_units(out, pc);
    out << "# montecarlo: kappa=" << fmt(kappa) << " region=" << fmt(region)
        << " d_min=" << fmt(d_min) << " mu=" << fmt(mu) << " count=" << count << " seed=" << seed
        << " nu_star=" << fmt(cert.nu_star) << "\n";
    out << "trial,seed,n_centers,nu_gr,e_gr,margin\n";
    double e_min = std::numeric_limits<double>::infinity(), e_max = -e_min, e_sum = 0.0;
    double margin_min = std::numeric_limits<double>::infinity();
    for (int trial = 0; trial < count; ++trial) {
        const std::uint64_t trial_seed = seed + static_cast<std::uint64_t>(trial);
        Configuration config = poisson_disk_sample(model, region, d_min, trial_seed, pc, mu);
        GroundStateResult gs = ground_state(config, 0.5 * mu, 2.0 * mu, tol);
        const double margin = gs.energy - cert.energy_lower_bound;
        out << trial << "," << trial_seed << "," << config.size() << "," << fmt(gs.nu_gr) << ","
            << fmt(gs.energy) << "," << fmt(margin) << "\n";
        e_min = std::min(e_min, gs.energy);
        e_max = std::max(e_max, gs.energy);
        e_sum += gs.energy;
        margin_min = std::min(margin_min, margin);
    }
    out << "# summary: e_gr_min=" << fmt(e_min) << " e_gr_mean=" << fmt(e_sum / count)
        << " e_gr_max=" << fmt(e_max) << " margin_min=" << fmt(margin_min) << "\n";
    return margin_min > 0.0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"bound states and certified energy bounds for point interactions on 2D manifolds"};
    app.require_subcommand(1);

    double hbar = 1.0, mass = 0.5, tol = 1e-10;
    app.add_option("--hbar", hbar, "Planck constant (default: natural units)");
    app.add_option("--mass", mass, "particle mass (default: natural units, hbar^2/2m = 1)");
    app.add_option("--tol", tol, "relative tolerance for root finding");

    OutputTarget target;

    auto* spectrum = app.add_subcommand("spectrum", "ground state and eigenvalue flow of a configuration");
    std::string spectrum_config;
    int spectrum_grid = 25;
    spectrum->add_option("--config", spectrum_config, "configuration JSON file")->required();
    spectrum->add_option("--grid", spectrum_grid, "points in the nu grid")->check(CLI::Range(2, 100000));
    spectrum->add_option("-o,--output", target.path, "output file (default stdout)");

    auto* certificate = app.add_subcommand("certificate", "compute a certified energy lower bound");
    bool cert_flat = false, cert_generic = false;
    double cert_kappa = 0.0, cert_dmin = 0.0, cert_mu = 0.0;
    double cert_A = 2.0, cert_B = 5.0;
    double cert_C = 1.0, cert_D = 1.0, cert_rho = 1.0, cert_lambda = 0.0;
    int cert_nstar = 2;
    std::string cert_save;
    certificate->add_flag("--flat", cert_flat, "flat (kappa = 0) regime");
    certificate->add_option("--kappa", cert_kappa, "curvature scale (-kappa)")->check(CLI::NonNegativeNumber);
    certificate->add_flag("--generic", cert_generic, "generic-bounds regime");
    certificate->add_option("--dmin", cert_dmin, "minimum separation")->required();
    certificate->add_option("--mu-star", cert_mu, "coupling ceiling sup mu_i")->required();
    certificate->add_option("--A", cert_A, "Gaussian kernel-bound constant A");
    certificate->add_option("--B", cert_B, "Gaussian kernel-bound constant B (> 4)");
    certificate->add_option("--C", cert_C, "generic small-time constant");
    certificate->add_option("--D", cert_D, "generic large-time constant");
    certificate->add_option("--rho", cert_rho, "generic crossover length");
    certificate->add_option("--n-star", cert_nstar, "generic replica base");
    certificate->add_option("--lambda-gap", cert_lambda, "generic spectral gap");
    certificate->add_option("--save", cert_save, "write the certificate as JSON here");
    certificate->add_option("-o,--output", target.path, "output file (default stdout)");

    auto* verify = app.add_subcommand("verify", "check a configuration against a certificate");
    std::string verify_config, verify_cert;
    verify->add_option("--config", verify_config, "configuration JSON file")->required();
    verify->add_option("--cert", verify_cert, "certificate JSON file")->required();
    verify->add_option("-o,--output", target.path, "output file (default stdout)");

    auto* kernels = app.add_subcommand("kernels", "heat kernel and bound table over a (t, d) grid");
    std::string kernels_config;
    double k_tlo = 0.01, k_thi = 10.0, k_dlo = 0.0, k_dhi = 5.0, k_A = 2.0, k_B = 5.0;
    int k_tsteps = 9, k_dsteps = 11;
    kernels->add_option("--config", kernels_config, "configuration JSON file")->required();
    kernels->add_option("--t-lo", k_tlo, "smallest time");
    kernels->add_option("--t-hi", k_thi, "largest time");
    kernels->add_option("--t-steps", k_tsteps, "time grid points (log spaced)")->check(CLI::Range(1, 100000));
    kernels->add_option("--d-lo", k_dlo, "smallest distance");
    kernels->add_option("--d-hi", k_dhi, "largest distance");
    kernels->add_option("--d-steps", k_dsteps, "distance grid points")->check(CLI::Range(1, 100000));
    kernels->add_option("--A", k_A, "Gaussian bound constant A");
    kernels->add_option("--B", k_B, "Gaussian bound constant B");
    kernels->add_option("-o,--output", target.path, "output file (default stdout)");

    auto* lattice = app.add_subcommand("lattice", "generate a configuration file");
    int lat_hex = -1, lat_pack = -1;
    double lat_poisson = 0.0, lat_dmin = 0.0, lat_kappa = 0.0, lat_mu = 1.0;
    std::uint64_t lat_seed = 1;
    lattice->add_option("--hex", lat_hex, "triangular lattice with this many rings (flat)");
    lattice->add_option("--pack", lat_pack, "greedy circle packing with this many levels (hyperbolic)");
    lattice->add_option("--poisson", lat_poisson, "Poisson-disk sample in a ball of this radius");
    lattice->add_option("--dmin", lat_dmin, "minimum separation")->required();
    lattice->add_option("--kappa", lat_kappa, "curvature scale")->check(CLI::NonNegativeNumber);
    lattice->add_option("--mu", lat_mu, "coupling scale for every center");
    lattice->add_option("--seed", lat_seed, "sampler seed");
    lattice->add_option("-o,--output", target.path, "output file (default stdout)");

    auto* flow = app.add_subcommand("flow", "renormalization flow of the regularized couplings");
    std::string flow_config;
    double f_lo = 1e-4, f_hi = 1e-1;
    int f_steps = 7;
    flow->add_option("--config", flow_config, "configuration JSON file")->required();
    flow->add_option("--eps-lo", f_lo, "smallest cutoff");
    flow->add_option("--eps-hi", f_hi, "largest cutoff");
    flow->add_option("--steps", f_steps, "cutoff grid points (log spaced)")->check(CLI::Range(1, 100000));
    flow->add_option("-o,--output", target.path, "output file (default stdout)");

    auto* mc = app.add_subcommand("montecarlo", "ground-state statistics over seeded random configurations");
    double mc_kappa = 0.0, mc_region = 10.0, mc_dmin = 1.0, mc_mu = 1.0, mc_A = 2.0, mc_B = 5.0;
    int mc_count = 8;
    std::uint64_t mc_seed = 1;
    mc->add_option("--kappa", mc_kappa, "curvature scale (0 = flat)")->check(CLI::NonNegativeNumber);
    mc->add_option("--region", mc_region, "sampling ball radius");
    mc->add_option("--dmin", mc_dmin, "minimum separation")->required();
    mc->add_option("--mu", mc_mu, "coupling scale for every center");
    mc->add_option("--count", mc_count, "number of trials");
    mc->add_option("--seed", mc_seed, "base seed; trial k uses seed + k");
    mc->add_option("--A", mc_A, "Gaussian bound constant A");
    mc->add_option("--B", mc_B, "Gaussian bound constant B");
    mc->add_option("-o,--output", target.path, "output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 64;
    }

    try {
        PhysicalConstants pc{hbar, mass};
        if (!(pc.hbar > 0.0) || !(pc.mass > 0.0)) throw DomainError("hbar and mass must be > 0");
        if (!(tol > 0.0)) throw DomainError("tol must be > 0");

        if (app.got_subcommand(spectrum)) return run_spectrum(spectrum_config, tol, spectrum_grid, target);
        if (app.got_subcommand(certificate)) {
            if (cert_flat + cert_generic > 1)
                throw DomainError("certificate: --flat and --generic are mutually exclusive");
            if (cert_flat && cert_kappa != 0.0)
                throw DomainError("certificate: --flat contradicts --kappa");
            Certificate cert;
            if (cert_generic) {
                GenericBounds gb(cert_kappa, cert_C, cert_D, cert_rho, cert_lambda, cert_nstar,
                                 cert_A, cert_B);
                cert = certificate_generic(gb, cert_dmin, cert_mu, pc);
            } else {
                cert = certificate_ch(cert_kappa, cert_dmin, cert_mu, cert_A, cert_B, pc);
            }
            return run_certificate(cert, target, cert_save);
        }
        if (app.got_subcommand(verify)) return run_verify(verify_config, verify_cert, target);
        if (app.got_subcommand(kernels))
            return run_kernels(kernels_config, k_tlo, k_thi, k_tsteps, k_dlo, k_dhi, k_dsteps, k_A,
                               k_B, target);
        if (app.got_subcommand(lattice))
            return run_lattice(lat_hex, lat_pack, lat_poisson, lat_dmin, lat_kappa, lat_mu,
                               lat_seed, pc, target);
        if (app.got_subcommand(flow)) return run_flow(flow_config, f_lo, f_hi, f_steps, target);
        if (app.got_subcommand(mc))
            return run_montecarlo(mc_kappa, mc_region, mc_dmin, mc_mu, mc_count, mc_seed, mc_A,
                                  mc_B, tol, pc, target);
        return 64;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
