#include "iscat/localization.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numeric>
#include <ostream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace iscat {

CMatrix farfield_operator(const FarFieldData& u) {
  u.validate();
  RVector w(static_cast<Eigen::Index>(u.incidence.size()));
  for (std::size_t e = 0; e < u.incidence.size(); ++e) w[static_cast<Eigen::Index>(e)] = u.incidence.weight(e);
  return u.values * w.cast<cplx>().asDiagonal();
}

CMatrix build_W(const CMatrix& f_truth, const CMatrix& f_n, double k) {
  if (f_truth.rows() != f_truth.cols() || f_truth.rows() != f_n.rows() || f_truth.cols() != f_n.cols()) {
    throw InvalidArgument("build_W: operators must be square and of equal size");
  }
  const double g2 = std::norm(far_field_gamma(k));
  const CMatrix scattering = CMatrix::Identity(f_n.rows(), f_n.cols()) + cplx(0.0, 2.0 * k * g2) * f_n;
  return scattering * (f_truth - f_n);
}

CMatrix w_sharp(const CMatrix& w) {
  if (w.rows() != w.cols()) throw InvalidArgument("w_sharp: square matrix required");
  const CMatrix herm = w + w.adjoint();
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(herm);
  if (eig.info() != Eigen::Success) throw NumericalFailure("w_sharp: eigendecomposition failed");
  CMatrix out = eig.eigenvectors() * eig.eigenvalues().cwiseAbs().cast<cplx>().asDiagonal() *
                eig.eigenvectors().adjoint();

  // |W - W*| = |i (W - W*)|, and the latter is Hermitian.
  const CMatrix skew = cplx(0.0, 1.0) * (w - w.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> eig_skew(skew);
  if (eig_skew.info() != Eigen::Success) throw NumericalFailure("w_sharp: eigendecomposition failed");
  out += eig_skew.eigenvectors() * eig_skew.eigenvalues().cwiseAbs().cast<cplx>().asDiagonal() *
         eig_skew.eigenvectors().adjoint();
  // Remove round-off asymmetry.
  return 0.5 * (out + out.adjoint());
}

const char* to_string(SpectralVariant v) {
  return v == SpectralVariant::Eigensystem ? "eigensystem" : "right-singular";
}

SpectralSystem spectral_system(const CMatrix& op, SpectralVariant variant, const RVector& w_in, const RVector& w_out) {
  if (w_in.size() != op.cols() || w_out.size() != op.rows()) {
    throw InvalidArgument("spectral_system: weights do not match the operator");
  }
  const RVector s_in = w_in.cwiseSqrt();
  const RVector s_out = w_out.cwiseSqrt();
  const CMatrix scaled = s_out.cast<cplx>().asDiagonal() * op * s_in.cwiseInverse().cast<cplx>().asDiagonal();

  SpectralSystem sys;
  sys.variant = variant;
  sys.weights = w_in;
  CMatrix v;
  if (variant == SpectralVariant::Eigensystem) {
    if (op.rows() != op.cols() || (w_in - w_out).cwiseAbs().maxCoeff() > 0.0) {
      throw InvalidArgument("spectral_system: eigensystem variant needs a square operator on one grid");
    }
    const CMatrix herm = 0.5 * (scaled + scaled.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(herm);
    if (eig.info() != Eigen::Success) throw NumericalFailure("spectral_system: eigendecomposition failed");
    const Eigen::Index n = herm.rows();
    sys.values.resize(n);
    v.resize(n, n);
    // Ascending -> descending; tiny negative eigenvalues of a PSD operator are round-off.
    for (Eigen::Index j = 0; j < n; ++j) {
      sys.values[j] = std::max(0.0, eig.eigenvalues()[n - 1 - j]);
      v.col(j) = eig.eigenvectors().col(n - 1 - j);
    }
  } else {
    Eigen::JacobiSVD<CMatrix> svd(scaled, Eigen::ComputeThinV);
    sys.values = svd.singularValues();
    v = svd.matrixV();
  }
  sys.vectors = s_in.cwiseInverse().cast<cplx>().asDiagonal() * v;
  return sys;
}

SpectralSystem spectral_system(const CMatrix& op, SpectralVariant variant) {
  return spectral_system(op, variant, RVector::Ones(op.cols()), RVector::Ones(op.rows()));
}

RVector normalize_indicator(const RVector& s) {
  if (s.size() == 0) return s;
  const double m = s.maxCoeff();
  if (!(m > 0.0)) throw NumericalFailure("normalize_indicator: maximum must be positive");
  return s / m;
}

LocalizationMap indicator(const SpectralSystem& system, const CMatrix& test_vectors, const ProbePoints& probes,
                          double delta) {
  if (test_vectors.rows() != static_cast<Eigen::Index>(probes.size()) ||
      test_vectors.cols() != system.vectors.rows()) {
    throw InvalidArgument("indicator: test vectors do not match probes or spectral system");
  }
  if (!(delta > 0.0)) throw InvalidArgument("indicator: truncation must be positive");
  if (system.values.size() == 0 || !(system.values[0] > 0.0)) {
    throw DegenerateData("indicator: sigma_1 = 0, no detectable defect");
  }
  const double cutoff = delta * system.values[0];
  int terms = 0;
  while (terms < system.values.size() && system.values[terms] > cutoff) ++terms;

  // C(p, j) = sum_e w_e u(theta_e, z_p) psi_j(e) = <conj u, conj psi_j>, same modulus.
  const CMatrix coeff =
      test_vectors * system.weights.cast<cplx>().asDiagonal() * system.vectors.leftCols(terms);
  LocalizationMap map;
  map.points = probes.points;
  map.elements = probes.elements;
  map.raw.resize(static_cast<Eigen::Index>(probes.size()));
  for (Eigen::Index p = 0; p < coeff.rows(); ++p) {
    double sum = 0.0;
    for (int j = 0; j < terms; ++j) sum += std::norm(coeff(p, j)) / system.values[j];
    map.raw[p] = 1.0 / sum;
  }
  if (!map.raw.allFinite()) throw NumericalFailure("indicator: non-finite values");
  map.normalized = normalize_indicator(map.raw);
  map.terms = terms;
  map.sigma = system.values;
  map.variant = system.variant;
  return map;
}

double default_truncation(double epsilon) { return std::max(1e-4, epsilon * epsilon); }

SpectralVariant choose_variant(const FarFieldData& data, VariantChoice choice, bool indices_real) {
  const bool same_grids = data.incidence == data.measurement && data.incidence.is_full();
  switch (choice) {
    case VariantChoice::RightSingular:
      return SpectralVariant::RightSingular;
    case VariantChoice::Eigensystem:
      if (!same_grids) throw InvalidArgument("eigensystem variant needs identical full-aperture grids");
      return SpectralVariant::Eigensystem;
    case VariantChoice::Auto:
      break;
  }
  return same_grids && indices_real ? SpectralVariant::Eigensystem : SpectralVariant::RightSingular;
}

VariantChoice parse_variant(const std::string& name) {
  if (name == "auto") return VariantChoice::Auto;
  if (name == "eigensystem") return VariantChoice::Eigensystem;
  if (name == "singular" || name == "right-singular") return VariantChoice::RightSingular;
  throw InvalidArgument("unknown localization variant '" + name + "'");
}

LocalizationMap localize(const ForwardState& state, const FarFieldData& data, const ProbePoints& probes,
                         const LocalizationConfig& cfg) {
  data.validate();
  if (!(state.incidence() == data.incidence) || !(state.measurement() == data.measurement) ||
      state.wave_number() != data.wave_number) {
    throw InvalidArgument("localize: reference solves and data use different grids or wave numbers");
  }
  const FarFieldData reference = state.far_field();
  const CMatrix f_n = farfield_operator(reference);
  const CMatrix f_data = farfield_operator(data);

  RVector w_in(static_cast<Eigen::Index>(data.incidence.size()));
  for (std::size_t e = 0; e < data.incidence.size(); ++e) w_in[static_cast<Eigen::Index>(e)] = data.incidence.weight(e);
  RVector w_out(static_cast<Eigen::Index>(data.measurement.size()));
  for (std::size_t m = 0; m < data.measurement.size(); ++m) {
    w_out[static_cast<Eigen::Index>(m)] = data.measurement.weight(m);
  }

  const SpectralVariant variant = choose_variant(data, cfg.variant, cfg.indices_real);
  SpectralSystem sys;
  if (variant == SpectralVariant::Eigensystem) {
    sys = spectral_system(w_sharp(build_W(f_data, f_n, data.wave_number)), variant, w_in, w_out);
  } else {
    sys = spectral_system(f_data - f_n, variant, w_in, w_out);
  }
  // sigma_1 at round-off level relative to the data operator means no signal.
  const double scale = f_data.norm() + f_n.norm();
  if (sys.values.size() == 0 || !(sys.values[0] > 1e-13 * scale)) {
    throw DegenerateData("localize: data and reference coincide, no detectable defect");
  }
  const double delta = cfg.delta > 0.0 ? cfg.delta : default_truncation(cfg.epsilon);
  return indicator(sys, state.probe_values(probes), probes, delta);
}

void write_localization_csv(std::ostream& out, const LocalizationMap& map) {
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  out << "x,y,S,S_normalized\n";
  for (std::size_t p = 0; p < map.points.size(); ++p) {
    const auto i = static_cast<Eigen::Index>(p);
    out << map.points[p].x() << ',' << map.points[p].y() << ',' << map.raw[i] << ',' << map.normalized[i] << '\n';
  }
}

void save_localization_csv(const std::string& path, const LocalizationMap& map) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot open " + path);
  write_localization_csv(out, map);
}

}  // namespace iscat
