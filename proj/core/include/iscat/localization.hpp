#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "iscat/scattering.hpp"

namespace iscat {

// Quadrature matrix of the far-field operator: entry (m, e) = w_e u(theta_e, xhat_m).
CMatrix farfield_operator(const FarFieldData& u);

// W = (I + 2ik|gamma|^2 F_n)(F_truth - F_n). Requires square operators.
CMatrix build_W(const CMatrix& f_truth, const CMatrix& f_n, double k);

// W_# = |W + W*| + |W - W*| with |L| = (L* L)^{1/2}.
CMatrix w_sharp(const CMatrix& w);

enum class SpectralVariant { Eigensystem, RightSingular };
const char* to_string(SpectralVariant v);

// sigma descending; psi_j = vectors.col(j), orthonormal for
// <f, g> = sum_e w_e f_e conj(g_e) over the incidence grid.
struct SpectralSystem {
  RVector values;
  CMatrix vectors;
  RVector weights;
  SpectralVariant variant = SpectralVariant::Eigensystem;
};

// `op` is an operator matrix from the incidence space (weights w_in) to the
// measurement space (weights w_out). The eigensystem variant needs a square
// Hermitian PSD operator on one grid.
SpectralSystem spectral_system(const CMatrix& op, SpectralVariant variant, const RVector& w_in, const RVector& w_out);
// Unit weights.
SpectralSystem spectral_system(const CMatrix& op, SpectralVariant variant);

struct LocalizationMap {
  std::vector<Vec2> points;
  std::vector<int> elements;
  RVector raw;
  RVector normalized;
  int terms = 0;  // number of sigma_j kept by the truncation
  RVector sigma;
  SpectralVariant variant = SpectralVariant::Eigensystem;
};

// Rescales so that the maximum is 1.
RVector normalize_indicator(const RVector& s);

// S(z) = 1 / sum_{sigma_j > delta sigma_1} |<conj u_n(., z), psi_j>|^2 / sigma_j.
// test_vectors(p, e) = u_n(theta_e, z_p). Throws DegenerateData when no sigma_j
// is usable.
LocalizationMap indicator(const SpectralSystem& system, const CMatrix& test_vectors, const ProbePoints& probes,
                          double delta);

enum class VariantChoice { Auto, Eigensystem, RightSingular };

struct LocalizationConfig {
  // Truncation relative to sigma_1; <= 0 selects max(1e-4, epsilon^2).
  double delta = 0.0;
  double epsilon = 0.0;
  // Both the reference and the unknown index are real valued (Auto only).
  bool indices_real = true;
  VariantChoice variant = VariantChoice::RightSingular;
};

double default_truncation(double epsilon);

// Auto: eigensystem of W_# on full, identical grids with real indices; right
// singular system of F_data - F_n otherwise. A forced eigensystem on grids
// that do not allow it throws InvalidArgument.
SpectralVariant choose_variant(const FarFieldData& data, VariantChoice choice, bool indices_real);
VariantChoice parse_variant(const std::string& name);

// Full pipeline against the reference forward solves in `state`.
LocalizationMap localize(const ForwardState& state, const FarFieldData& data, const ProbePoints& probes,
                         const LocalizationConfig& cfg);

void write_localization_csv(std::ostream& out, const LocalizationMap& map);
void save_localization_csv(const std::string& path, const LocalizationMap& map);

}  // namespace iscat
