#pragma once

#include <complex>
#include <functional>

namespace qmcf {

using Complex = std::complex<double>;

// Adaptive Gauss(7)/Kronrod(15) on [a, b] to absolute tolerance.
double integrate_1d(const std::function<double(double)>& f, double a, double b,
                    double abs_tol = 1e-10, int max_depth = 40);
Complex integrate_1d_complex(const std::function<Complex(double)>& f, double a, double b,
                             double abs_tol = 1e-10, int max_depth = 40);

// Tensorized adaptive panels: outer adaptive in x of an inner adaptive
// integral in y, both to the given absolute tolerance.
double integrate_2d(const std::function<double(double, double)>& f, double x0, double x1, double y0,
                    double y1, double abs_tol = 1e-10);
Complex integrate_2d_complex(const std::function<Complex(double, double)>& f, double x0, double x1,
                             double y0, double y1, double abs_tol = 1e-10);

}  // namespace qmcf
