// qmcf: batch front end for discrepancy studies, QMC weights, quadrature
// checks, oscillation evaluation, certification and empirical frame bounds.
//
// Exit codes: 0 success, 1 error, 2 certification computed but invalid
// (epsilon >= 1).

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qmcf/certify.hpp"
#include "qmcf/csv.hpp"
#include "qmcf/discrepancy.hpp"
#include "qmcf/gabor.hpp"
#include "qmcf/lattice.hpp"
#include "qmcf/parallel.hpp"
#include "qmcf/quadrature.hpp"
#include "qmcf/surd.hpp"
#include "qmcf/svg.hpp"

namespace fs = std::filesystem;
using namespace qmcf;

namespace {

struct CommonOpts {
    std::string lattice = "golden";
    double scale = 1.0;
    double tau = 1.0;
    double sigma = 0.7071067811865476;
    int grid = 64;
    int refine = 3;
    std::string out_dir;
    int threads = 0;
    std::uint64_t seed = 20240;
};

Lattice resolve_lattice(const std::string& name, double a, double tau) {
    Lattice base;
    if (name == "golden")
        base = golden_lattice();
    else if (name == "zsq")
        base = integer_lattice();
    else
        base = load_lattice_config(name);
    // CLI --scale/--tau compose with the config values
    Lattice l = make_lattice(base.basis, a * base.a, tau * base.tau);
    l.basis_lo = base.basis_lo;
    return l;
}

std::string out_path(const CommonOpts& c, const std::string& file) {
    if (c.out_dir.empty()) return file;
    fs::create_directories(c.out_dir);
    return (fs::path(c.out_dir) / file).string();
}

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    std::string cur;
    for (char ch : s) {
        if (ch == ',') {
            if (!cur.empty()) out.push_back(std::stod(cur));
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    if (!cur.empty()) out.push_back(std::stod(cur));
    return out;
}

void emit_discrepancy_csv(CsvWriter& csv, double a, double tau, const DiscrepancyEstimate& e) {
    csv.row({a, tau, static_cast<double>(e.anchors_evaluated), e.lower_bound, e.estimate,
             e.argmax_anchor.x, e.argmax_anchor.y});
}

void add_common(CLI::App* cmd, CommonOpts& c, bool with_lattice = true) {
    if (with_lattice)
        cmd->add_option("--lattice", c.lattice, "golden | zsq | path to a lattice config file");
    cmd->add_option("--scale", c.scale, "lattice scale a")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--tau", c.tau, "lattice dilation tau")->check(CLI::PositiveNumber);
    cmd->add_option("--sigma", c.sigma, "Gaussian window width")->check(CLI::PositiveNumber);
    cmd->add_option("--grid", c.grid, "anchor grid per axis")->check(CLI::PositiveNumber);
    cmd->add_option("--refine", c.refine, "refinement rounds")->check(CLI::NonNegativeNumber);
    cmd->add_option("--out", c.out_dir, "output directory for CSV/SVG artifacts");
    cmd->add_option("--threads", c.threads, "worker threads (0 = all)");
    cmd->add_option("--seed", c.seed, "seed for randomized components");
}

ShiftOptions shift_opts(const CommonOpts& c) {
    ShiftOptions o;
    o.grid_n = c.grid;
    o.refine_rounds = c.refine;
    return o;
}

void provenance(CsvWriter& csv, const CommonOpts& c) {
    csv.note("lattice", c.lattice);
    csv.note("scale", c.scale);
    csv.note("tau", c.tau);
    csv.note("sigma", c.sigma);
    csv.note("grid", c.grid);
    csv.note("refine", c.refine);
    csv.note("threads", static_cast<double>(c.threads));
    csv.note("seed", static_cast<double>(c.seed));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"quasi-Monte Carlo discretization of Gabor frames"};
    app.require_subcommand(1);

    CommonOpts c;

    auto* cmd_disc = app.add_subcommand("discrepancy", "shift discrepancy of a lattice");
    add_common(cmd_disc, c);

    auto* cmd_decay = app.add_subcommand("decay", "discrepancy decay study over scales");
    std::string scales_str = "0.5,0.25,0.125,0.0625";
    add_common(cmd_decay, c);
    cmd_decay->add_option("--scales", scales_str, "comma-separated scales");

    auto* cmd_dil = app.add_subcommand("dilation", "dilation discrepancy over tau samples");
    std::string taus_str = "0.25,0.5,1,2,4";
    add_common(cmd_dil, c);
    cmd_dil->add_option("--taus", taus_str, "comma-separated tau samples");

    auto* cmd_weights = app.add_subcommand("weights", "QMC weights over a region");
    std::string box_str = "-3,3,-3,3";
    bool force_sweep = false;
    add_common(cmd_weights, c);
    cmd_weights->add_option("--box", box_str, "region x0,x1,y0,y1");
    cmd_weights->add_flag("--sweep", force_sweep, "run the exact sweep instead of the det rule");

    auto* cmd_quad = app.add_subcommand("quadrature", "weighted quadrature error over a lattice");
    std::string integrand_str = "gauss";
    add_common(cmd_quad, c);
    cmd_quad->add_option("--integrand", integrand_str, "gauss | gauss_aniso:sx,sy");

    auto* cmd_omega = app.add_subcommand("omega", "oscillation functional of the Gaussian frame");
    add_common(cmd_omega, c, false);

    auto* cmd_schur = app.add_subcommand("schur", "direct Schur-test epsilon estimate");
    int nu_grid = 16;
    add_common(cmd_schur, c);
    cmd_schur->add_option("--nu-grid", nu_grid, "nu samples per axis");

    auto* cmd_cert = app.add_subcommand("certify", "frame-bound certificate epsilon = D* x Omega");
    std::string cert_taus = "";
    add_common(cmd_cert, c);
    cmd_cert->add_option("--taus", cert_taus,
                         "tau samples; when given, emits the dilation-uniform certificate");

    auto* cmd_fb = app.add_subcommand("framebounds", "empirical frame bounds on a test subspace");
    FrameBoundModel model;
    double window_tau = 1.0;
    add_common(cmd_fb, c);
    cmd_fb->add_option("--signal-length", model.signal_length);
    cmd_fb->add_option("--time-span", model.time_span);
    cmd_fb->add_option("--box-halfwidth", model.box_halfwidth);
    cmd_fb->add_option("--subspace-dim", model.test_subspace_dim);
    cmd_fb->add_option("--iterations", model.iterations);
    cmd_fb->add_option("--window-tau", window_tau, "window dilation g_tau");

    auto* cmd_adm = app.add_subcommand("admissibility", "empirical admissibility margin");
    std::int64_t margin_M = 1000;
    std::string surd_str;
    int cf_terms = 40;
    add_common(cmd_adm, c);
    cmd_adm->add_option("--coeff-bound", margin_M, "coefficient box bound M");
    cmd_adm->add_option("--surd", surd_str, "p,q,r,d: continued fraction of (p+q sqrt(d))/r");
    cmd_adm->add_option("--cf-terms", cf_terms, "number of partial quotients");

    CLI11_PARSE(app, argc, argv);

    try {
        set_worker_threads(c.threads);

        if (cmd_disc->parsed()) {
            const Lattice lat = resolve_lattice(c.lattice, c.scale, c.tau);
            const DiscrepancyEstimate e = shift_discrepancy(lat, shift_opts(c));
            std::printf("lower_bound, %.17g\nestimate, %.17g\nanchors, %lld\n", e.lower_bound,
                        e.estimate, static_cast<long long>(e.anchors_evaluated));
            CsvWriter csv(out_path(c, "discrepancy.csv"));
            provenance(csv, c);
            csv.header({"a", "tau", "anchors", "lower_bound", "estimate", "argmax_rho_x",
                        "argmax_rho_y"});
            emit_discrepancy_csv(csv, c.scale, c.tau, e);
        } else if (cmd_decay->parsed()) {
            const Lattice base = resolve_lattice(c.lattice, 1.0, c.tau);
            const std::vector<double> scales = parse_list(scales_str);
            const DecayFit fit = decay_fit(base, scales, shift_opts(c));
            std::printf("slope, %.17g\nC_hat, %.17g\n", fit.slope, fit.C_hat);
            CsvWriter csv(out_path(c, "decay.csv"));
            provenance(csv, c);
            csv.note("scales", scales_str);
            csv.note("slope", fit.slope);
            csv.note("C_hat", fit.C_hat);
            csv.header({"a", "tau", "anchors", "lower_bound", "estimate", "argmax_rho_x",
                        "argmax_rho_y"});
            for (const DecayRow& r : fit.table) emit_discrepancy_csv(csv, r.a, c.tau, r.est);

            LinePlot plot;
            plot.title = "shift discrepancy decay (" + c.lattice + ")";
            plot.x_label = "a";
            plot.y_label = "D*_shift";
            plot.log_x = plot.log_y = true;
            PlotSeries data{"measured (slope " + CsvWriter::num(fit.slope) + ")", "#1f5fa8", false, {}};
            PlotSeries ref{"C a^2 ln(2+1/a)", "#b03030", true, {}};
            for (const DecayRow& r : fit.table) {
                data.points.emplace_back(r.a, r.est.estimate);
                ref.points.emplace_back(r.a, fit.C_hat * r.a * r.a * std::log(2.0 + 1.0 / r.a));
            }
            plot.series = {data, ref};
            plot.write_svg(out_path(c, "decay.svg"));
        } else if (cmd_dil->parsed()) {
            const Lattice base = resolve_lattice(c.lattice, 1.0, 1.0);
            const std::vector<double> taus = parse_list(taus_str);
            const DilationDiscrepancy dd = dilation_discrepancy(base, c.scale, taus, shift_opts(c));
            std::printf("estimate, %.17g\nargmax_tau, %.17g\n", dd.combined.estimate, dd.argmax_tau);
            CsvWriter csv(out_path(c, "dilation.csv"));
            provenance(csv, c);
            csv.note("taus", taus_str);
            csv.header({"a", "tau", "anchors", "lower_bound", "estimate", "argmax_rho_x",
                        "argmax_rho_y"});
            for (std::size_t i = 0; i < taus.size(); ++i)
                emit_discrepancy_csv(csv, c.scale, taus[i], dd.per_tau[i]);

            LinePlot plot;
            plot.title = "dilation discrepancy (" + c.lattice + ", a = " + CsvWriter::num(c.scale) + ")";
            plot.x_label = "tau";
            plot.y_label = "D*_shift(a Gamma_tau)";
            plot.log_x = true;
            PlotSeries data{"measured", "#1f5fa8", false, {}};
            for (std::size_t i = 0; i < taus.size(); ++i)
                data.points.emplace_back(taus[i], dd.per_tau[i].estimate);
            plot.series = {data};
            plot.write_svg(out_path(c, "dilation.svg"));
        } else if (cmd_weights->parsed()) {
            const Lattice lat = resolve_lattice(c.lattice, c.scale, c.tau);
            const std::vector<double> b = parse_list(box_str);
            if (b.size() != 4) throw std::invalid_argument("--box needs x0,x1,y0,y1");
            const Rect region{b[0], b[1], b[2], b[3]};
            PointSet ps;
            if (force_sweep) {
                PointSet ambient = enumerate_in_box(lat, region.inflated(1.0 + 1e-9));
                ambient.sort_by_xy();
                ps = qmc_weights_sweep(ambient, region);
            } else {
                ps = qmc_weights(lat, region);
            }
            std::printf("points, %zu\n", ps.size());
            write_pointset_csv(out_path(c, "weights.csv"), ps,
                               {"lattice = " + c.lattice, "a = " + CsvWriter::num(c.scale),
                                "tau = " + CsvWriter::num(c.tau),
                                std::string("mode = ") + (force_sweep ? "sweep" : "det")});
        } else if (cmd_quad->parsed()) {
            const Lattice lat = resolve_lattice(c.lattice, c.scale, c.tau);
            const SmoothFn2D h = integrand_by_name(integrand_str);
            const QuadratureResult qr = quadrature_error(h, lat);
            std::printf("e_re, %.17g\ne_im, %.17g\ne_abs, %.17g\ntail_budget, %.17g\n",
                        qr.value.real(), qr.value.imag(), std::abs(qr.value), qr.total_budget());
            CsvWriter csv(out_path(c, "quadrature.csv"));
            provenance(csv, c);
            csv.note("integrand", integrand_str);
            csv.header({"a", "tau", "e_re", "e_im", "e_abs", "tail_budget", "points"});
            csv.row({c.scale, c.tau, qr.value.real(), qr.value.imag(), std::abs(qr.value),
                     qr.total_budget(), static_cast<double>(qr.points_used)});
        } else if (cmd_omega->parsed()) {
            const GaussianWindow w(c.sigma);
            const double closed = omega_gaussian_closed(c.sigma);
            std::printf("omega_closed, %.17g\n", closed);
            const OmegaNumeric on = omega_numeric(w);
            std::printf("omega_numeric_bound, %.17g\n", on.bound);
            std::printf("norm_Vgg, %.17g\nnorm_VgDg, %.17g\nnorm_VgZg, %.17g\nnorm_VgZDg, %.17g\n",
                        on.norm_g, on.norm_dg, on.norm_zg, on.norm_zdg);
            std::printf("deviation_from_closed, %.17g\n", on.deviation_from_closed);
            if (on.large_deviation)
                std::printf("note, numeric bound deviates from the closed form by more than 2%% "
                            "(the closed form is the sharper certified value)\n");
            std::printf("argmin_sigma, %.17g\n", omega_minimizer());
            CsvWriter csv(out_path(c, "omega.csv"));
            provenance(csv, c);
            csv.header({"sigma", "omega_closed", "omega_numeric_bound", "norm_Vgg", "norm_VgDg",
                        "norm_VgZg", "norm_VgZDg", "deviation"});
            csv.row({c.sigma, closed, on.bound, on.norm_g, on.norm_dg, on.norm_zg, on.norm_zdg,
                     on.deviation_from_closed});
        } else if (cmd_schur->parsed()) {
            const Lattice lat = resolve_lattice(c.lattice, c.scale, c.tau);
            SchurOptions so;
            so.nu_grid = nu_grid;
            const SchurEpsilon se = schur_epsilon(lat, GaussianWindow(c.sigma), so);
            std::printf("epsilon, %.17g\nbudget, %.17g\n", se.epsilon, se.budget);
            CsvWriter csv(out_path(c, "schur.csv"));
            provenance(csv, c);
            csv.note("nu_grid", nu_grid);
            csv.header({"a", "tau", "sigma", "epsilon", "budget", "argmax_nu_x", "argmax_nu_y"});
            csv.row({c.scale, c.tau, c.sigma, se.epsilon, se.budget, se.argmax_nu.x, se.argmax_nu.y});
        } else if (cmd_cert->parsed()) {
            const auto cert_t0 = std::chrono::steady_clock::now();
            const Lattice base = resolve_lattice(c.lattice, 1.0, c.tau);
            const GaussianWindow w(c.sigma);
            Certificate cert;
            if (cert_taus.empty()) {
                cert = certificate(base, c.scale, w, shift_opts(c));
            } else {
                const std::vector<double> taus = parse_list(cert_taus);
                cert = dilation_uniform_certificate(base, c.scale, w, taus, shift_opts(c));
            }
            const OmegaNumeric on = omega_numeric(w);
            std::printf("epsilon, %.17g\nA, %.17g\nB, %.17g\nvalid, %d\n", cert.epsilon,
                        cert.lower_bound_A, cert.upper_bound_B, cert.valid ? 1 : 0);
            std::printf("runtime_seconds, %.3f\n",
                        std::chrono::duration<double>(std::chrono::steady_clock::now() - cert_t0)
                            .count());
            CsvWriter csv(out_path(c, "certificate.csv"));
            provenance(csv, c);
            csv.note("dilation_uniform", cert.dilation_uniform ? "true" : "false");
            csv.note("admissibility", "empirical");
            csv.header({"a", "tau", "sigma", "D_star_low", "D_star_est", "omega_closed",
                        "omega_numeric", "epsilon", "A", "B", "valid", "dilation_uniform", "delta"});
            csv.row({c.scale, c.tau, c.sigma, cert.discrepancy.lower_bound,
                     cert.discrepancy.estimate, omega_gaussian_closed(w.effective_sigma()), on.bound,
                     cert.epsilon, cert.lower_bound_A, cert.upper_bound_B, cert.valid ? 1.0 : 0.0,
                     cert.dilation_uniform ? 1.0 : 0.0, 0.05});
            if (!cert.valid) return 2;
        } else if (cmd_fb->parsed()) {
            const Lattice base = resolve_lattice(c.lattice, 1.0, c.tau);
            model.seed = c.seed;
            const GaussianWindow w(c.sigma, window_tau);
            const EmpiricalBounds eb = empirical_frame_bounds(base, c.scale, w, model);
            std::printf("A_emp, %.17g\nB_emp, %.17g\natoms, %lld\nboundary_energy, %.17g\n", eb.A_emp,
                        eb.B_emp, static_cast<long long>(eb.atoms), eb.boundary_energy);
            CsvWriter csv(out_path(c, "framebounds.csv"));
            provenance(csv, c);
            csv.note("note", "Rayleigh range over a concentrated test subspace of a sampled model");
            csv.header({"a", "sigma", "window_tau", "A_emp", "B_emp", "atoms", "boundary_energy"});
            csv.row({c.scale, c.sigma, window_tau, eb.A_emp, eb.B_emp, static_cast<double>(eb.atoms),
                     eb.boundary_energy});
        } else if (cmd_adm->parsed()) {
            const Lattice lat = resolve_lattice(c.lattice, c.scale, c.tau);
            const AdmissibilityMargin am = admissibility_margin(lat, margin_M);
            std::printf("margin, %.17g\nM, %lld\nlabel, empirical\n", am.margin,
                        static_cast<long long>(am.coeff_bound));
            CsvWriter csv(out_path(c, "admissibility.csv"));
            provenance(csv, c);
            csv.note("label", "empirical (finite coefficient box, not a proof)");
            csv.header({"margin", "M", "argmin_m", "argmin_n"});
            csv.row({am.margin, static_cast<double>(am.coeff_bound),
                     static_cast<double>(am.argmin_m), static_cast<double>(am.argmin_n)});
            if (!surd_str.empty()) {
                const std::vector<double> sv = parse_list(surd_str);
                if (sv.size() != 4) throw std::invalid_argument("--surd needs p,q,r,d");
                const QuadraticSurd x(static_cast<std::int64_t>(sv[0]), static_cast<std::int64_t>(sv[1]),
                                      static_cast<std::int64_t>(sv[2]), static_cast<std::int64_t>(sv[3]));
                const ContinuedFraction cf = cf_partial_quotients(x, cf_terms);
                std::printf("cf_rational, %d\ncf_period, %zu\ncf_quotients", cf.rational ? 1 : 0,
                            cf.period);
                for (std::size_t i = 0; i < cf.quotients.size() && i < 24; ++i)
                    std::printf(", %lld", static_cast<long long>(cf.quotients[i]));
                std::printf("\n");
            }
        }
        return 0;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error, \"%s\"\n", e.what());
        return 1;
    }
}
