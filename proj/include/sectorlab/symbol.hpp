#pragma once

// Polynomial symbols of differential operators on the torus: evaluation,
// strong-ellipticity and admissibility tests, weight conjugation, and the
// indicial-root formulas for the scalar hyperbolic-cusp model operator.

#include "sectorlab/core.hpp"
#include "sectorlab/norms.hpp"

namespace sectorlab {

// d x d complex matrix field; constant coefficients stored once
struct MatrixField {
  int d = 1;
  bool constant = true;
  Mat value;          // if constant
  std::vector<Mat> values;  // per grid point otherwise

  static MatrixField scalar_const(cd v) {
    MatrixField m;
    m.d = 1;
    m.constant = true;
    m.value = Mat::Constant(1, 1, v);
    return m;
  }
  static MatrixField matrix_const(const Mat& v) {
    MatrixField m;
    m.d = int(v.rows());
    m.constant = true;
    m.value = v;
    return m;
  }
  static MatrixField scalar_field(const Vec& v) {
    MatrixField m;
    m.d = 1;
    m.constant = false;
    m.values.reserve(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) m.values.push_back(Mat::Constant(1, 1, v[i]));
    return m;
  }
  const Mat& at(std::int64_t p) const { return constant ? value : values[size_t(p)]; }
};

struct SymbolTerm {
  MultiIdx J{0, 0, 0, 0};
  MatrixField coeff;
};

struct SymbolPolynomial {
  PeriodicGrid grid;
  int order = 2;   // m, even
  int rank = 1;    // bundle rank d
  std::vector<SymbolTerm> terms;

  void validate() const {
    if (order <= 0 || order % 2 != 0) throw ConfigError("symbol order must be even positive");
    for (const auto& t : terms)
      if (mi_order(t.J) > order) throw ConfigError("term order exceeds symbol order");
  }
  bool constant_coefficients() const {
    for (const auto& t : terms)
      if (!t.coeff.constant) return false;
    return true;
  }
};

// standard constructions -----------------------------------------------------

// positive flat Laplacian power: (grad^* grad)^{m'}  ->  symbol |xi|^{2m'}
SymbolPolynomial sym_flat_laplacian(const PeriodicGrid& g, int power = 1, int rank = 1);
// 1D divergence form -d(a d.) = -a u'' - a' u'   (a given on the grid)
SymbolPolynomial sym_divergence_form_1d(const PeriodicGrid& g, const VecR& a, Scheme s);
// scale all coefficients
SymbolPolynomial sym_scaled(const SymbolPolynomial& s, cd factor);
// add a zeroth-order endomorphism
SymbolPolynomial sym_plus_endomorphism(const SymbolPolynomial& s, const MatrixField& endo);

// evaluation ------------------------------------------------------------------
Mat principal_symbol(const SymbolPolynomial& s, std::int64_t p, const std::array<double, 4>& xi);
Mat full_symbol(const SymbolPolynomial& s, std::int64_t p, const std::array<double, 4>& xi);

// ---------------------------------------------------------------------------
// Strong ellipticity (spectrum of the principal symbol inside a sector of
// half-angle < pi/2, plus numerical range for non-normal matrix symbols)
// ---------------------------------------------------------------------------
struct EllipticityReport {
  bool pass = false;
  double theta_prime = 0;      // smallest sector half-angle containing all samples
  double worst_margin = 0;     // min |eig(sigma_m)| over unit-sphere xi samples
  int sampled_xi = 0;
  bool singular_found = false;
  std::array<double, 4> singular_xi{0, 0, 0, 0};
};

std::vector<std::array<double, 4>> default_xi_samples(const PeriodicGrid& g, int directions,
                                                      bool with_radii);

EllipticityReport check_strong_ellipticity(const SymbolPolynomial& s,
                                           const std::vector<std::array<double, 4>>& xis,
                                           const std::vector<std::int64_t>& xs);

// ---------------------------------------------------------------------------
// Admissibility:  || (zeta I - sigma_m)^{-1} || <= C (1+|xi|)^{-m} for zeta
// outside a closed spectral cone.
// ---------------------------------------------------------------------------
struct SpectralCone {
  double axis_angle = 0;   // cone axis direction (radians, 0 = positive reals)
  double half_angle = 0;   // half opening
  bool contains(cd z) const {
    if (z == cd(0, 0)) return true;
    double a = std::arg(z) - axis_angle;
    while (a > kPi) a -= 2 * kPi;
    while (a < -kPi) a += 2 * kPi;
    return std::abs(a) <= half_angle;
  }
};

struct AdmissibilityRow {
  cd zeta;
  double fitted_C;
};

struct AdmissibilityReport {
  bool pass = false;
  double fitted_C = 0;  // sup over tested zetas
  std::vector<AdmissibilityRow> per_zeta;
  bool singular_found = false;
  cd singular_zeta;
  std::array<double, 4> singular_xi{0, 0, 0, 0};
};

AdmissibilityReport check_admissibility(const SymbolPolynomial& s, const SpectralCone& cone,
                                        const std::vector<cd>& zetas,
                                        const std::vector<std::array<double, 4>>& xis,
                                        const std::vector<std::int64_t>& xs);

// ---------------------------------------------------------------------------
// Weight conjugation: symbol of w^{-1} L w by the Leibniz rule; principal
// part unchanged.
// ---------------------------------------------------------------------------
struct WeightField {
  PeriodicGrid grid;
  VecR w;
  double log_derivative_bound = 0;  // metadata
  void validate() const {
    if (w.size() != grid.npoints()) throw ConfigError("weight size mismatch");
    if (w.minCoeff() <= 0) throw DomainError("weight must be strictly positive");
  }
};

SymbolPolynomial conjugate_by_weight(const SymbolPolynomial& s, const WeightField& w, Scheme sch);

// ---------------------------------------------------------------------------
// Indicial roots of (lambda I - L) for the scalar model Laplacian on an
// exact hyperbolic cusp end: gamma_pm = (n-1)/2 +- zeta0(lambda), with
// zeta0 = sqrt((n-1)^2/4 - lambda) on the principal branch.
// ---------------------------------------------------------------------------
struct IndicialQuery {
  int n = 3;
  cd lambda;
  double c0_threshold() const { return 0.25 * (n - 1.0) * (n - 1.0); }
  void validate() const {
    if (n < 2) throw ConfigError("indicial query needs n >= 2");
  }
};

std::pair<cd, cd> indicial_roots(const IndicialQuery& q);
// inf of Re zeta0 over the half-plane Re lambda <= -B  (equals sqrt(C0+B))
double indicial_halfplane_delta(int n, double B);

// Theorem-level weight interval ((n-1)/2 - delta, (n-1)/2 + delta)
std::pair<double, double> weight_interval(int n, double delta);

}  // namespace sectorlab
