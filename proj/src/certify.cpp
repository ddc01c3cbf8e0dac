#include "qmcf/certify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "qmcf/parallel.hpp"

namespace qmcf {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kEps = 2.220446049250313e-16;
}  // namespace

Certificate Certificate::from_components(const DiscrepancyEstimate& d, double omega,
                                         OmegaProvenance prov) {
    Certificate c;
    c.discrepancy = d;
    c.omega = omega;
    c.omega_provenance = prov;
    c.epsilon = d.estimate * omega;
    c.epsilon_optimistic = d.lower_bound * omega;
    c.lower_bound_A = 1.0 - c.epsilon;
    c.upper_bound_B = 1.0 + c.epsilon;
    c.valid = c.epsilon < 1.0;
    return c;
}

Certificate certificate(const Lattice& gamma, double a, const GaussianWindow& w,
                        const ShiftOptions& opt, bool omega_closed) {
    if (!(a > 0.0)) throw std::invalid_argument("certificate: a must be positive");
    const Lattice lam = gamma.with_scale(a);
    const DiscrepancyEstimate d = shift_discrepancy(lam, opt);
    double omega;
    OmegaProvenance prov;
    if (omega_closed) {
        omega = omega_gaussian_closed(w.effective_sigma());
        prov = OmegaProvenance::ClosedForm;
    } else {
        omega = omega_numeric(w).bound;
        prov = OmegaProvenance::NumericBound;
    }
    return Certificate::from_components(d, omega, prov);
}

Certificate dilation_uniform_certificate(const Lattice& gamma, double a, const GaussianWindow& w,
                                         std::span<const double> tau_samples,
                                         const ShiftOptions& opt, std::int64_t admissibility_M) {
    const AdmissibilityMargin adm = admissibility_margin(gamma.with_scale(1.0).with_tau(1.0), admissibility_M);
    if (!(adm.margin > 0.0))
        throw std::runtime_error(
            "dilation_uniform_certificate: admissibility margin is 0 at M = " +
            std::to_string(admissibility_M) + " (hypothesis of the dilation-uniform bound unmet)");
    const DilationDiscrepancy dd = dilation_discrepancy(gamma, a, tau_samples, opt);
    // Omega of the base window: the certificate covers every dilation g_tau.
    Certificate c = Certificate::from_components(dd.combined, omega_gaussian_closed(w.sigma),
                                                 OmegaProvenance::ClosedForm);
    c.dilation_uniform = true;
    c.dilation_argmax_tau = dd.argmax_tau;
    return c;
}

SchurEpsilon schur_epsilon(const Lattice& lat, const GaussianWindow& w, const SchurOptions& opt) {
    if (opt.nu_grid < 1) throw std::invalid_argument("schur_epsilon: nu_grid must be >= 1");
    const Mat2 B = lat.effective_basis();
    const Vec2 b0 = B.col0(), b1 = B.col1();
    const double cell = std::sqrt(lat.det_effective());
    const double s = w.effective_sigma();

    // |e| envelope: |e(K^{(eta,nu)})| <= 2 * int |K| = 2 exp(-pi |eta-nu|^2 /
    // (8 s'^2))-type; use the iterated-kernel envelope width.
    const double env_rate = kPi / (8.0 * s * s) * std::min(1.0, 4.0 * s * s * s * s);
    // rate in the flatter of the two phase-space directions

    struct NuTask {
        Vec2 nu;
    };
    std::vector<NuTask> nus;
    for (int i = 0; i < opt.nu_grid; ++i)
        for (int j = 0; j < opt.nu_grid; ++j)
            nus.push_back({((i + 0.5) / opt.nu_grid) * b0 + ((j + 0.5) / opt.nu_grid) * b1});

    struct NuResult {
        double integral = 0.0;
        double budget = 0.0;
    };

    auto inner_error = [&](const Vec2& eta, const Vec2& nu, double& budget) -> double {
        if (opt.error_override) {
            budget = 0.0;
            return opt.error_override(eta, nu);
        }
        const SmoothFn2D K = iterated_kernel(w, eta, nu);
        QuadratureOptions qo;
        qo.tol = opt.tail_tol;
        qo.center = 0.5 * (eta + nu);
        const QuadratureResult qr = quadrature_error(K, lat, qo);
        budget = qr.total_budget();
        return std::abs(qr.value);
    };

    auto results = parallel_map<NuResult>(nus.size(), [&](std::size_t ni) {
        const Vec2 nu = nus[ni].nu;
        NuResult res;
        // Probe at the center to decide the eta pitch: when |e| sits at the
        // rounding floor there is no lattice-scale signal left to resolve.
        double probe_budget = 0.0;
        const double probe = inner_error(nu, nu, probe_budget);
        const bool fine = probe > 50.0 * probe_budget;
        // Below the rounding floor there is no lattice-scale signal left, so
        // the pitch only needs to resolve the smooth envelope.
        const double h = fine ? 0.5 * cell : std::max(0.5 * s, cell);

        // Expanding square rings of midpoint cells around nu until the
        // envelope bound on the remainder is negligible.
        double acc = 0.0, budget_acc = 0.0;
        const int max_ring = static_cast<int>(std::ceil(12.0 / (env_rate * h * h) + 64.0));
        for (int ring = 0;; ++ring) {
            double ring_sum = 0.0, ring_budget = 0.0;
            const int lo = -ring, hi = ring;
            bool any = false;
            for (int i = lo; i <= hi; ++i) {
                for (int j = lo; j <= hi; ++j) {
                    if (std::max(std::abs(i), std::abs(j)) != ring) continue;
                    any = true;
                    const Vec2 eta{nu.x + i * h, nu.y + j * h};
                    double eb = 0.0;
                    ring_sum += inner_error(eta, nu, eb) * h * h;
                    ring_budget += eb * h * h;
                }
            }
            (void)any;
            acc += ring_sum;
            budget_acc += ring_budget;
            // envelope bound on everything beyond this ring
            const double r_in = (ring + 0.5) * h;
            const double tail_bound =
                2.0 * kPi / env_rate * std::exp(-env_rate * r_in * r_in) * (1.0 + 2.0 / (env_rate * r_in * r_in + 1e-30));
            if (ring > 2 && tail_bound < std::max(opt.ring_rel_stop * acc, opt.tail_tol)) {
                budget_acc += tail_bound;
                break;
            }
            if (ring >= max_ring) {
                budget_acc += tail_bound;
                break;
            }
        }
        res.integral = acc;
        res.budget = budget_acc;
        return res;
    });

    SchurEpsilon out;
    out.per_nu.resize(results.size());
    for (std::size_t i = 0; i < results.size(); ++i) {
        out.per_nu[i] = results[i].integral;
        if (results[i].integral > out.epsilon) {
            out.epsilon = results[i].integral;
            out.argmax_nu = nus[i].nu;
            out.budget = results[i].budget;
        }
        out.budget = std::max(out.budget, results[i].budget);
    }
    return out;
}

namespace {

// Grid-orthonormalized Hermite-type functions t^k exp(-pi t^2), k < dim.
std::vector<std::vector<Complex>> hermite_basis(const std::vector<double>& grid, double dt, int dim) {
    std::vector<std::vector<Complex>> basis(dim, std::vector<Complex>(grid.size()));
    for (std::size_t j = 0; j < grid.size(); ++j) {
        const double t = grid[j];
        const double g = std::exp(-kPi * t * t);
        double tk = 1.0;
        for (int k = 0; k < dim; ++k) {
            basis[k][j] = tk * g;
            tk *= t;
        }
    }
    auto dot = [&](const std::vector<Complex>& u, const std::vector<Complex>& v) {
        Complex s{0.0, 0.0};
        for (std::size_t j = 0; j < u.size(); ++j) s += std::conj(u[j]) * v[j];
        return s * dt;
    };
    // modified Gram-Schmidt, two passes
    for (int pass = 0; pass < 2; ++pass) {
        for (int k = 0; k < dim; ++k) {
            for (int l = 0; l < k; ++l) {
                const Complex c = dot(basis[l], basis[k]);
                for (std::size_t j = 0; j < grid.size(); ++j) basis[k][j] -= c * basis[l][j];
            }
            const double nrm = std::sqrt(std::abs(dot(basis[k], basis[k])));
            if (nrm < 1e-14) throw std::runtime_error("hermite_basis: degenerate test subspace");
            for (std::size_t j = 0; j < grid.size(); ++j) basis[k][j] /= nrm;
        }
    }
    return basis;
}

// Largest eigenvalue of a Hermitian matrix by seeded power iteration with
// relative Rayleigh stagnation stopping.
double power_iteration_max(const std::vector<std::vector<Complex>>& M, std::uint64_t seed,
                           int max_iters, double rel_tol = 1e-8) {
    const std::size_t d = M.size();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<Complex> v(d);
    for (Complex& x : v) x = {u(rng), u(rng)};
    double prev = 0.0;
    for (int it = 0; it < max_iters; ++it) {
        double nrm = 0.0;
        for (const Complex& x : v) nrm += std::norm(x);
        nrm = std::sqrt(nrm);
        for (Complex& x : v) x /= nrm;
        std::vector<Complex> mv(d, Complex{0.0, 0.0});
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) mv[i] += M[i][j] * v[j];
        Complex ray{0.0, 0.0};
        for (std::size_t i = 0; i < d; ++i) ray += std::conj(v[i]) * mv[i];
        const double lam = ray.real();
        if (it > 2 && std::abs(lam - prev) <= rel_tol * std::max(1.0, std::abs(lam))) return lam;
        prev = lam;
        v = std::move(mv);
    }
    return prev;
}

}  // namespace

std::vector<Complex> FrameOperatorModel::apply(const std::vector<Complex>& f) const {
    const std::size_t n = grid.size();
    if (f.size() != n) throw std::invalid_argument("FrameOperatorModel::apply: size mismatch");
    const double s = window.effective_sigma();
    const double supp = window.support_radius();
    const double t0 = grid.front();
    const std::size_t natoms = atoms.size();

    // Analysis: coefficients in parallel over atoms (independent slots).
    std::vector<Complex> coef = parallel_map<Complex>(natoms, [&](std::size_t k) {
        const Vec2 lam = atoms.points[k];
        const double x = lam.x, om = lam.y;
        const auto jlo = static_cast<std::ptrdiff_t>(std::ceil((x - supp - t0) / dt));
        const auto jhi = static_cast<std::ptrdiff_t>(std::floor((x + supp - t0) / dt));
        const std::size_t j0 = static_cast<std::size_t>(std::max<std::ptrdiff_t>(jlo, 0));
        const std::size_t j1 =
            static_cast<std::size_t>(std::min<std::ptrdiff_t>(jhi, static_cast<std::ptrdiff_t>(n) - 1));
        if (j1 < j0 || j0 >= n) return Complex{0.0, 0.0};
        // psi(t_j) = g(t_j - x) exp(2 pi i t_j om); Gaussian and phase both
        // advance by geometric recurrences along the uniform grid.
        const double tj0 = grid[j0];
        double wv = window(tj0 - x);
        double wratio = std::exp(-kPi * (2.0 * (tj0 - x) * dt + dt * dt) / (2.0 * s * s));
        const double wrr = std::exp(-kPi * dt * dt / (s * s));
        Complex phase = std::exp(Complex{0.0, 2.0 * kPi * tj0 * om});
        const Complex dphase = std::exp(Complex{0.0, 2.0 * kPi * dt * om});
        Complex acc{0.0, 0.0};
        for (std::size_t j = j0; j <= j1; ++j) {
            acc += f[j] * wv * std::conj(phase);
            wv *= wratio;
            wratio *= wrr;
            phase *= dphase;
        }
        return acc * dt * atoms.weights[k];
    });

    // Synthesis: fixed 64-chunk partition of the atoms; chunk buffers are
    // reduced in chunk order, so the result is thread-count independent.
    const std::size_t nchunks = 64;
    std::vector<std::vector<Complex>> buffers(nchunks);
    auto chunk_result = parallel_map<char>(nchunks, [&](std::size_t c) {
        std::vector<Complex>& out = buffers[c];
        out.assign(n, Complex{0.0, 0.0});
        const std::size_t k0 = c * natoms / nchunks;
        const std::size_t k1 = (c + 1) * natoms / nchunks;
        for (std::size_t k = k0; k < k1; ++k) {
            if (coef[k] == Complex{0.0, 0.0}) continue;
            const Vec2 lam = atoms.points[k];
            const double x = lam.x, om = lam.y;
            const auto jlo = static_cast<std::ptrdiff_t>(std::ceil((x - supp - t0) / dt));
            const auto jhi = static_cast<std::ptrdiff_t>(std::floor((x + supp - t0) / dt));
            const std::size_t j0 = static_cast<std::size_t>(std::max<std::ptrdiff_t>(jlo, 0));
            const std::size_t j1 = static_cast<std::size_t>(
                std::min<std::ptrdiff_t>(jhi, static_cast<std::ptrdiff_t>(n) - 1));
            if (j1 < j0 || j0 >= n) continue;
            const double tj0 = grid[j0];
            double wv = window(tj0 - x);
            double wratio = std::exp(-kPi * (2.0 * (tj0 - x) * dt + dt * dt) / (2.0 * s * s));
            const double wrr = std::exp(-kPi * dt * dt / (s * s));
            Complex phase = std::exp(Complex{0.0, 2.0 * kPi * tj0 * om});
            const Complex dphase = std::exp(Complex{0.0, 2.0 * kPi * dt * om});
            const Complex ck = coef[k];
            for (std::size_t j = j0; j <= j1; ++j) {
                out[j] += ck * wv * phase;
                wv *= wratio;
                wratio *= wrr;
                phase *= dphase;
            }
        }
        return char(0);
    });
    (void)chunk_result;

    std::vector<Complex> out(n, Complex{0.0, 0.0});
    for (std::size_t c = 0; c < nchunks; ++c)
        for (std::size_t j = 0; j < n; ++j) out[j] += buffers[c][j];
    return out;
}

Complex FrameOperatorModel::inner(const std::vector<Complex>& f, const std::vector<Complex>& g) const {
    Complex s{0.0, 0.0};
    for (std::size_t j = 0; j < f.size(); ++j) s += std::conj(g[j]) * f[j];
    return s * dt;
}

FrameOperatorModel build_frame_operator_model(const Lattice& gamma, double a,
                                              const GaussianWindow& w, const FrameBoundModel& model) {
    if (model.signal_length < 16) throw std::invalid_argument("frame model: signal_length too small");
    if (model.test_subspace_dim < 1) throw std::invalid_argument("frame model: empty test subspace");

    FrameOperatorModel fo;
    fo.window = w;
    fo.dt = model.time_span / model.signal_length;
    fo.grid.resize(model.signal_length);
    for (int j = 0; j < model.signal_length; ++j)
        fo.grid[j] = -0.5 * model.time_span + (j + 0.5) * fo.dt;

    // Concentration radius of the Hermite-type subspace plus a 5 sigma margin.
    const double conc = std::sqrt((2.0 * model.test_subspace_dim + 1.0) / (2.0 * kPi)) + 1.0;
    double B = model.box_halfwidth > 0.0 ? model.box_halfwidth : conc + 5.0 * w.effective_sigma();

    const double nyquist = 0.5 / fo.dt;
    if (B + w.band_radius() > nyquist)
        throw std::invalid_argument("frame model: phase-space box exceeds the grid Nyquist range");
    if (B + w.support_radius() > 0.5 * model.time_span)
        throw std::invalid_argument("frame model: phase-space box exceeds the time grid span");

    const Lattice lam = gamma.with_scale(a);
    fo.atoms = enumerate_in_box(lam, {-B, B, -B, B});
    fo.atoms.sort_by_xy();
    const double det = lam.det_effective();
    for (double& wt : fo.atoms.weights) wt = det;
    return fo;
}

EmpiricalBounds empirical_frame_bounds(const Lattice& gamma, double a, const GaussianWindow& w,
                                       const FrameBoundModel& model) {
    const FrameOperatorModel fo = build_frame_operator_model(gamma, a, w, model);
    const int d = model.test_subspace_dim;
    const auto basis = hermite_basis(fo.grid, fo.dt, d);

    EmpiricalBounds out;
    out.atoms = static_cast<std::int64_t>(fo.atoms.size());
    out.grid_dt = fo.dt;

    // Boundary influence: coefficient energy of the test functions carried by
    // atoms in the outer shell of the box. Large values mean the box is too
    // small for the subspace.
    {
        double bx = 0.0;
        for (const Vec2& p : fo.atoms.points)
            bx = std::max(bx, std::max(std::abs(p.x), std::abs(p.y)));
        const double shell = bx - 1.0;
        const double s = fo.window.effective_sigma();
        double shell_energy = 0.0, total_energy = 0.0;
        for (const Vec2& lam : fo.atoms.points) {
            // Gaussian proxy for |<h_k, psi_lambda>|^2 from the subspace
            // concentration and the ambiguity envelope.
            const double bound = std::exp(-kPi * lam.norm2() / (2.0 + 4.0 * s * s));
            total_energy += bound;
            if (std::max(std::abs(lam.x), std::abs(lam.y)) > shell) shell_energy += bound;
        }
        out.boundary_energy = shell_energy / std::max(total_energy, 1e-300);
        if (out.boundary_energy > 1e-4)
            throw std::runtime_error(
                "empirical_frame_bounds: phase-space box too small (boundary atoms influence the "
                "test subspace above tolerance)");
    }

    // Compress S to the test subspace: M[k][l] = <S phi_l, phi_k>.
    std::vector<std::vector<Complex>> M(d, std::vector<Complex>(d));
    for (int l = 0; l < d; ++l) {
        const std::vector<Complex> sv = fo.apply(basis[l]);
        for (int k = 0; k < d; ++k) M[k][l] = fo.inner(sv, basis[k]);
    }
    // Hermitian cleanup of rounding noise.
    for (int i = 0; i < d; ++i)
        for (int j = 0; j <= i; ++j) {
            const Complex avg = 0.5 * (M[i][j] + std::conj(M[j][i]));
            M[i][j] = avg;
            M[j][i] = std::conj(avg);
        }

    const double b_emp = power_iteration_max(M, model.seed, model.iterations);
    const double c = 2.0 * std::max(b_emp, 1.0);
    std::vector<std::vector<Complex>> shifted(d, std::vector<Complex>(d));
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) shifted[i][j] = (i == j ? Complex{c, 0.0} : Complex{0.0, 0.0}) - M[i][j];
    const double a_emp = c - power_iteration_max(shifted, model.seed + 1, model.iterations);

    out.A_emp = a_emp;
    out.B_emp = b_emp;
    return out;
}

}  // namespace qmcf
