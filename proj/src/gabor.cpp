#include "qmcf/gabor.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "qmcf/quad.hpp"

namespace qmcf {

namespace {
constexpr double kPi = std::numbers::pi;
const double kSupportLog = std::log(1e12);  // envelope < 1e-12 of peak beyond this
}  // namespace

GaussianWindow::GaussianWindow(double sigma_, double tau_) : sigma(sigma_), tau(tau_) {
    if (!(sigma > 0.0)) throw std::invalid_argument("GaussianWindow: sigma must be positive");
    if (!(tau > 0.0)) throw std::invalid_argument("GaussianWindow: tau must be positive");
}

double GaussianWindow::operator()(double t) const {
    const double s = effective_sigma();
    return std::exp(-kPi * t * t / (2.0 * s * s)) / std::sqrt(s);
}

double GaussianWindow::support_radius() const {
    const double s = effective_sigma();
    return s * std::sqrt(2.0 * kSupportLog / kPi);
}

double GaussianWindow::band_radius() const {
    const double s = effective_sigma();
    return std::sqrt(kSupportLog / (2.0 * kPi)) / s;
}

Complex ambiguity(const GaussianWindow& w, const Vec2& eta) {
    const double s = w.effective_sigma();
    const double mag = -kPi * eta.x * eta.x / (4.0 * s * s) - kPi * s * s * eta.y * eta.y;
    return std::exp(Complex{mag, -kPi * eta.x * eta.y});
}

Complex kernel_R(const GaussianWindow& w, const Vec2& eta, const Vec2& nu) {
    const Complex phase = std::exp(Complex{0.0, -2.0 * kPi * nu.x * (eta.y - nu.y)});
    return phase * ambiguity(w, eta - nu);
}

ExpQuadratic iterated_kernel_exponent(const GaussianWindow& w, const Vec2& eta, const Vec2& nu) {
    const double s = w.effective_sigma();
    const double beta = kPi / (4.0 * s * s);
    const double gamma = kPi * s * s;
    const Complex I{0.0, 1.0};

    ExpQuadratic q;
    // R(eta, rho) = exp(-2 pi i rho_x (eta_y - rho_y)) * V(eta - rho)
    q.cx += -2.0 * kPi * I * eta.y;
    q.cxy += 2.0 * kPi * I;
    q.cxx += -beta;
    q.cx += 2.0 * beta * eta.x;
    q.c0 += -beta * eta.x * eta.x;
    q.cyy += -gamma;
    q.cy += 2.0 * gamma * eta.y;
    q.c0 += -gamma * eta.y * eta.y;
    // -i pi (eta_x - rho_x)(eta_y - rho_y)
    q.c0 += -I * kPi * eta.x * eta.y;
    q.cy += I * kPi * eta.x;
    q.cx += I * kPi * eta.y;
    q.cxy += -I * kPi;
    // R(rho, nu) = exp(-2 pi i nu_x (rho_y - nu_y)) * V(rho - nu)
    q.cy += -2.0 * kPi * I * nu.x;
    q.c0 += 2.0 * kPi * I * nu.x * nu.y;
    q.cxx += -beta;
    q.cx += 2.0 * beta * nu.x;
    q.c0 += -beta * nu.x * nu.x;
    q.cyy += -gamma;
    q.cy += 2.0 * gamma * nu.y;
    q.c0 += -gamma * nu.y * nu.y;
    // -i pi (rho_x - nu_x)(rho_y - nu_y)
    q.c0 += -I * kPi * nu.x * nu.y;
    q.cy += I * kPi * nu.x;
    q.cx += I * kPi * nu.y;
    q.cxy += -I * kPi;
    return q;
}

SmoothFn2D iterated_kernel(const GaussianWindow& w, const Vec2& eta, const Vec2& nu) {
    SmoothFn2D f = make_exp_quadratic_fn(iterated_kernel_exponent(w, eta, nu));
    f.exact_integral = kernel_R(w, eta, nu);  // reproducing identity
    return f;
}

double omega_gaussian_closed(double sigma) {
    if (!(sigma > 0.0)) throw std::invalid_argument("omega_gaussian_closed: sigma must be positive");
    return 4.0 * kPi * (1.0 / (kSqrt2 * sigma) + kSqrt2 * sigma) + 4.0 * kPi * kPi;
}

double omega_minimizer(double lo, double hi, double tol) {
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - gr * (b - a);
    double d = a + gr * (b - a);
    double fc = omega_gaussian_closed(c), fd = omega_gaussian_closed(d);
    while (b - a > tol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = omega_gaussian_closed(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = omega_gaussian_closed(d);
        }
    }
    return 0.5 * (a + b);
}

OmegaNumeric omega_numeric(const GaussianWindow& w, double abs_tol) {
    const double s = w.effective_sigma();
    const double beta = kPi / (4.0 * s * s);      // x-decay of |V|
    const double gamma = kPi * s * s;             // w-decay of |V|
    const double alpha = kPi / (2.0 * s * s);
    const double Rx = std::sqrt((kSupportLog + 6.0) / beta);
    const double Rw = std::sqrt((kSupportLog + 6.0) / gamma);

    const auto E = [&](double x, double om) { return std::exp(-beta * x * x - gamma * om * om); };

    // |V_g g| = E
    const double ng = integrate_2d([&](double x, double om) { return E(x, om); }, -Rx, Rx, -Rw, Rw,
                                   abs_tol * 0.1);
    // |V_g Dg| = 2 alpha sqrt(x^2/4 + s^4 w^2) E
    const double ndg = integrate_2d(
        [&](double x, double om) {
            return 2.0 * alpha * std::sqrt(0.25 * x * x + s * s * s * s * om * om) * E(x, om);
        },
        -Rx, Rx, -Rw, Rw, abs_tol * 0.1);
    // |V_g Zg| = 2 pi sqrt(x^2/4 + s^4 w^2) E
    const double nzg = integrate_2d(
        [&](double x, double om) {
            return 2.0 * kPi * std::sqrt(0.25 * x * x + s * s * s * s * om * om) * E(x, om);
        },
        -Rx, Rx, -Rw, Rw, abs_tol * 0.1);
    // |V_g ZDg| = 4 pi alpha |1/(4 alpha) + (x/2 - i s^2 w)^2| E
    const double nzdg = integrate_2d(
        [&](double x, double om) {
            const Complex z{0.5 * x, -s * s * om};
            return 4.0 * kPi * alpha * std::abs(1.0 / (4.0 * alpha) + z * z) * E(x, om);
        },
        -Rx, Rx, -Rw, Rw, abs_tol * 0.1);

    OmegaNumeric out;
    out.norm_g = ng;
    out.norm_dg = ndg;
    out.norm_zg = nzg;
    out.norm_zdg = nzdg;
    out.bound = 2.0 * (ng * ndg + ng * nzg + ng * nzdg + ndg * nzg);
    out.closed = omega_gaussian_closed(s);
    out.deviation_from_closed = (out.bound - out.closed) / out.closed;
    out.large_deviation = std::abs(out.deviation_from_closed) > 0.02;
    return out;
}

double SampledSignal::norm2() const {
    double s = 0.0;
    for (const Complex& v : samples) s += std::norm(v);
    return dt * s;
}

double StftResult::parseval_ratio(double signal_norm2) const {
    if (times.size() < 2 || freqs.size() < 2) throw std::invalid_argument("parseval_ratio: grid too small");
    const double dx = times[1] - times[0];
    const double dw = freqs[1] - freqs[0];
    double s = 0.0;
    for (const auto& row : values)
        for (const Complex& v : row) s += std::norm(v);
    return s * dx * dw / signal_norm2;
}

StftResult stft_numeric(const SampledSignal& f, const GaussianWindow& w, double time_step,
                        double freq_step, double time_halfspan, double freq_halfspan) {
    if (f.samples.empty()) throw std::invalid_argument("stft_numeric: empty signal");
    if (!(time_step > 0.0) || !(freq_step > 0.0))
        throw std::invalid_argument("stft_numeric: steps must be positive");
    const double nyquist = 0.5 / f.dt;
    if (freq_halfspan + w.band_radius() > nyquist)
        throw std::invalid_argument(
            "stft_numeric: grid too coarse for the requested frequency range (Nyquist violation)");

    StftResult out;
    for (double x = -time_halfspan; x <= time_halfspan + 1e-12; x += time_step) out.times.push_back(x);
    for (double om = -freq_halfspan; om <= freq_halfspan + 1e-12; om += freq_step)
        out.freqs.push_back(om);

    const double supp = w.support_radius();
    const std::size_t n = f.samples.size();
    out.values.assign(out.times.size(), std::vector<Complex>(out.freqs.size()));
    std::vector<Complex> windowed;
    for (std::size_t ix = 0; ix < out.times.size(); ++ix) {
        const double x = out.times[ix];
        // window support -> sample range
        const auto jlo = static_cast<std::ptrdiff_t>(std::ceil((x - supp - f.t0) / f.dt));
        const auto jhi = static_cast<std::ptrdiff_t>(std::floor((x + supp - f.t0) / f.dt));
        const std::size_t j0 = static_cast<std::size_t>(std::max<std::ptrdiff_t>(jlo, 0));
        const std::size_t j1 =
            static_cast<std::size_t>(std::min<std::ptrdiff_t>(jhi, static_cast<std::ptrdiff_t>(n) - 1));
        if (j1 < j0 || j0 >= n) continue;
        windowed.resize(j1 - j0 + 1);
        for (std::size_t j = j0; j <= j1; ++j) windowed[j - j0] = f.samples[j] * w(f.t(j) - x);
        const double tj0 = f.t(j0);
        for (std::size_t iw = 0; iw < out.freqs.size(); ++iw) {
            const double om = out.freqs[iw];
            // geometric phase sequence over the uniform sample grid
            Complex acc{0.0, 0.0};
            Complex phase = std::exp(Complex{0.0, -2.0 * kPi * tj0 * om});
            const Complex dphase = std::exp(Complex{0.0, -2.0 * kPi * f.dt * om});
            for (const Complex& wv : windowed) {
                acc += wv * phase;
                phase *= dphase;
            }
            out.values[ix][iw] = acc * f.dt;
        }
    }
    return out;
}

Complex stft_integral_oracle(const GaussianWindow& w, const Vec2& eta, double abs_tol) {
    const double supp = w.support_radius() + std::abs(eta.x) + 2.0;
    return integrate_1d_complex(
        [&](double t) {
            return w(t) * w(t - eta.x) * std::exp(Complex{0.0, -2.0 * kPi * t * eta.y});
        },
        -supp, supp, abs_tol);
}

void write_signal_csv(const std::string& path, const SampledSignal& f) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_signal_csv: cannot open " + path);
    out << "t,re,im\n";
    char buf[128];
    for (std::size_t j = 0; j < f.samples.size(); ++j) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", f.t(j), f.samples[j].real(),
                      f.samples[j].imag());
        out << buf;
    }
}

SampledSignal read_signal_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_signal_csv: cannot open " + path);
    std::string line;
    std::vector<double> ts;
    std::vector<Complex> vs;
    bool header = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!header) {
            header = true;
            continue;
        }
        std::istringstream ss(line);
        std::string a, b, c;
        if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',') || !std::getline(ss, c, ','))
            throw std::runtime_error("read_signal_csv: malformed row: " + line);
        ts.push_back(std::stod(a));
        vs.emplace_back(std::stod(b), std::stod(c));
    }
    if (ts.size() < 2) throw std::runtime_error("read_signal_csv: need at least two samples");
    SampledSignal f;
    f.t0 = ts.front();
    f.dt = ts[1] - ts[0];
    f.samples = std::move(vs);
    return f;
}

void write_stft_csv(const std::string& path, const StftResult& m) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_stft_csv: cannot open " + path);
    char buf[64];
    // header row: blank corner then frequency coordinates; |V| grid below
    out << "t\\w";
    for (const double om : m.freqs) {
        std::snprintf(buf, sizeof(buf), ",%.17g", om);
        out << buf;
    }
    out << "\n";
    for (std::size_t ix = 0; ix < m.times.size(); ++ix) {
        std::snprintf(buf, sizeof(buf), "%.17g", m.times[ix]);
        out << buf;
        for (const Complex& v : m.values[ix]) {
            std::snprintf(buf, sizeof(buf), ",%.17g", std::abs(v));
            out << buf;
        }
        out << "\n";
    }
}

}  // namespace qmcf
