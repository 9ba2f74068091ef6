#pragma once

// Discrete Hölder and semiclassical Hölder norms on periodic grids, plus the
// bounded-geometry bookkeeping for metric fields.
//
// The semiclassical norm sum_j eps^j sup|grad^j u| + eps^{k+a} [grad^k u]_a
// takes its Hölder quotient over pairs within g-distance eps*r0, so that it
// coincides exactly on the grid with the ordinary norm of the rescaled
// metric eps^{-2} g at window r0.

#include "sectorlab/core.hpp"

namespace sectorlab {

// ---------------------------------------------------------------------------
// MetricField: symmetric n x n real metric per grid point, stored upper
// triangular, with cached inverse and declared regularity metadata.
// ---------------------------------------------------------------------------
struct MetricField {
  PeriodicGrid grid;
  int n = 1;                       // tensor dimension (== grid.dim)
  std::vector<VecR> comp;          // n(n+1)/2 component fields, (a<=b) order
  std::vector<VecR> inv_comp;      // cached inverse components
  int reg_order = 2;               // declared l
  double reg_alpha = 0.5;          // declared alpha'

  static int tri_index(int a, int b, int n);
  static MetricField flat(const PeriodicGrid& g);
  static MetricField conformal(const PeriodicGrid& g, const VecR& two_u);  // e^{2u} delta

  Eigen::MatrixXd at(std::int64_t p) const;
  Eigen::MatrixXd inverse_at(std::int64_t p) const;
  void refresh_inverse();          // recompute inv_comp; throws on non-SPD
  double min_eigenvalue() const;

  // constant c with g == c * delta everywhere (within tol), if any
  std::optional<double> uniform_conformal_scale(double tol = 1e-13) const;

  MetricField rescaled(double eps) const;  // eps^{-2} g
};

// ---------------------------------------------------------------------------
// NormConfig: k, alpha, ball radius r0, optional semiclassical parameter.
// ---------------------------------------------------------------------------
struct NormConfig {
  int k = 0;
  double alpha = 0.5;
  double r0 = -1.0;  // default L/8 at use site
  std::optional<double> eps;

  void validate(const PeriodicGrid& g) const {
    if (!(alpha > 0 && alpha < 1)) throw ConfigError("alpha must be in (0,1)");
    if (k < 0) throw ConfigError("k must be >= 0");
    double r = r0 > 0 ? r0 : g.period / 8.0;
    if (r > g.period / 4.0 + 1e-12) throw ConfigError("r0 must be <= L/4");
    if (eps && !(*eps > 0 && *eps <= 1)) throw ConfigError("eps must be in (0,1]");
  }
  double window(const PeriodicGrid& g) const { return r0 > 0 ? r0 : g.period / 8.0; }
};

// sum_{j<=k} sup |grad^j u|  (flat Frobenius magnitudes)
double ck_sup_norm(const Field& u, int k, Scheme s);

// Hölder seminorm of grad^k u over pairs with 0 < dist <= window (flat
// periodic distance); set window <= 0 for the unrestricted all-pairs version
double holder_seminorm(const Field& u, int k, double alpha, double window, Scheme s);

// full norm; `g` may carry a constant conformal scale (then distances and
// tensor magnitudes are measured in g).  Non-constant metrics fall back to
// the flat distance, which is the documented approximation for small
// perturbations.
double holder_norm(const Field& u, const NormConfig& cfg, Scheme s,
                   const MetricField* g = nullptr);

double semiclassical_holder_norm(const Field& u, const NormConfig& cfg, Scheme s);

// semiclassical C^k norm: sum_j eps^j sup|grad^j u|
double semiclassical_ck_norm(const Field& u, int k, double eps, Scheme s);

// ---------------------------------------------------------------------------
// Bounded-geometry report
// ---------------------------------------------------------------------------
struct BoundedGeometryReport {
  struct Row {
    int order;
    double value;
    double bound;
    bool ok;
  };
  std::vector<Row> derivative_rows;  // sup |d^j g| per order 0..l
  double inverse_sup = 0;            // sup over points of |g^{-1}| (spectral norm)
  double inverse_bound = 0;
  bool inverse_ok = true;
  double min_eigenvalue = 0;
  bool positive_definite = true;
  bool pass = false;
};

BoundedGeometryReport check_bounded_geometry(const MetricField& g, int l, double alpha_prime,
                                             const std::vector<double>& derivative_bounds,
                                             double inverse_bound, Scheme s = Scheme::FD2);

}  // namespace sectorlab
