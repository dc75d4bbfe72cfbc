#pragma once

// Separation-of-variables solution for plane-wave scattering by a
// homogeneous disc of index n and radius a centred at the origin, incidence
// along +x. Inside: sum a_m J_m(kappa r) e^{im phi}; outside the scattered
// part is sum b_m H_m(kr) e^{im phi}.

#include <cmath>
#include <complex>
#include <vector>

namespace iscat::test {

class DiscSeries {
 public:
  DiscSeries(double k, double n, double a, int order) : k_(k), kappa_(k * std::sqrt(n)), order_(order) {
    for (int m = -order; m <= order; ++m) {
      const std::complex<double> im = std::pow(std::complex<double>(0.0, 1.0), m);
      const std::complex<double> a11 = J(m, kappa_ * a);
      const std::complex<double> a12 = -H(m, k * a);
      const std::complex<double> a21 = kappa_ * dJ(m, kappa_ * a);
      const std::complex<double> a22 = -k * dH(m, k * a);
      const std::complex<double> r1 = im * J(m, k * a);
      const std::complex<double> r2 = im * k * dJ(m, k * a);
      const std::complex<double> det = a11 * a22 - a12 * a21;
      inner_.push_back((r1 * a22 - a12 * r2) / det);
      outer_.push_back((a11 * r2 - a21 * r1) / det);
    }
  }

  // Total field at a point inside the disc.
  std::complex<double> inside(double x, double y) const {
    const double r = std::hypot(x, y);
    const double phi = std::atan2(y, x);
    std::complex<double> u = 0.0;
    for (int m = -order_; m <= order_; ++m) {
      u += inner_[m + order_] * J(m, kappa_ * r) * std::exp(std::complex<double>(0.0, m * phi));
    }
    return u;
  }

  // Far field with u_s ~ gamma e^{ikr} r^{-1/2} u_inf, gamma = e^{i pi/4}/sqrt(8 pi k).
  std::complex<double> far_field(double phi) const {
    std::complex<double> u = 0.0;
    for (int m = -order_; m <= order_; ++m) {
      u += outer_[m + order_] * std::pow(std::complex<double>(0.0, -1.0), m) *
           std::exp(std::complex<double>(0.0, m * phi));
    }
    return -4.0 * std::complex<double>(0.0, 1.0) * u;
  }

 private:
  static double J(int m, double x) {
    return m < 0 ? ((-m) % 2 ? -1.0 : 1.0) * std::cyl_bessel_j(-m, x) : std::cyl_bessel_j(m, x);
  }
  static std::complex<double> H(int m, double x) {
    const int am = std::abs(m);
    const double sign = (m < 0 && am % 2) ? -1.0 : 1.0;
    return sign * std::complex<double>(std::cyl_bessel_j(am, x), std::cyl_neumann(am, x));
  }
  static double dJ(int m, double x) { return 0.5 * (J(m - 1, x) - J(m + 1, x)); }
  static std::complex<double> dH(int m, double x) { return 0.5 * (H(m - 1, x) - H(m + 1, x)); }

  double k_;
  double kappa_;
  int order_;
  std::vector<std::complex<double>> inner_;
  std::vector<std::complex<double>> outer_;
};

}  // namespace iscat::test
