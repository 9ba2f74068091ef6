#include "sectorlab/norms.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace sectorlab {

int MetricField::tri_index(int a, int b, int n) {
  if (a > b) std::swap(a, b);
  // row-wise upper triangle
  return a * n - a * (a - 1) / 2 + (b - a);
}

MetricField MetricField::flat(const PeriodicGrid& g) {
  MetricField m;
  m.grid = g;
  m.n = g.dim;
  int nc = m.n * (m.n + 1) / 2;
  m.comp.assign(nc, VecR::Zero(g.npoints()));
  for (int a = 0; a < m.n; ++a) m.comp[tri_index(a, a, m.n)].setOnes();
  m.refresh_inverse();
  return m;
}

MetricField MetricField::conformal(const PeriodicGrid& g, const VecR& two_u) {
  MetricField m = flat(g);
  VecR f = two_u.array().exp();
  for (int a = 0; a < m.n; ++a)
    m.comp[tri_index(a, a, m.n)] = f;
  m.refresh_inverse();
  return m;
}

Eigen::MatrixXd MetricField::at(std::int64_t p) const {
  Eigen::MatrixXd g(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) g(a, b) = g(b, a) = comp[tri_index(a, b, n)][p];
  return g;
}

Eigen::MatrixXd MetricField::inverse_at(std::int64_t p) const {
  Eigen::MatrixXd gi(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) gi(a, b) = gi(b, a) = inv_comp[tri_index(a, b, n)][p];
  return gi;
}

void MetricField::refresh_inverse() {
  int nc = n * (n + 1) / 2;
  inv_comp.assign(nc, VecR::Zero(grid.npoints()));
  for (std::int64_t p = 0; p < grid.npoints(); ++p) {
    Eigen::MatrixXd g = at(p);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() <= 0)
      throw DomainError("metric not positive definite at a grid point");
    Eigen::MatrixXd gi = g.inverse();
    for (int a = 0; a < n; ++a)
      for (int b = a; b < n; ++b) inv_comp[tri_index(a, b, n)][p] = gi(a, b);
  }
}

double MetricField::min_eigenvalue() const {
  double m = std::numeric_limits<double>::infinity();
  for (std::int64_t p = 0; p < grid.npoints(); ++p) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(at(p), Eigen::EigenvaluesOnly);
    m = std::min(m, es.eigenvalues().minCoeff());
  }
  return m;
}

std::optional<double> MetricField::uniform_conformal_scale(double tol) const {
  double c = comp[tri_index(0, 0, n)][0];
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) {
      const VecR& v = comp[tri_index(a, b, n)];
      double want = a == b ? c : 0.0;
      for (std::int64_t p = 0; p < grid.npoints(); ++p)
        if (std::abs(v[p] - want) > tol * std::max(1.0, std::abs(c)))
          return std::nullopt;
    }
  return c;
}

MetricField MetricField::rescaled(double eps) const {
  if (!(eps > 0)) throw DomainError("rescaled_metric: eps must be positive");
  MetricField m = *this;
  double s = 1.0 / (eps * eps);
  for (auto& v : m.comp) v *= s;
  for (auto& v : m.inv_comp) v *= eps * eps;
  return m;
}

// ---------------------------------------------------------------------------
// Norms
// ---------------------------------------------------------------------------
namespace {

// pointwise Frobenius magnitude of the full j-th gradient, all components
VecR gradient_magnitude(const Field& u, int j, Scheme s) {
  const PeriodicGrid& g = u.grid;
  VecR mag2 = VecR::Zero(g.npoints());
  for (const auto& J : multi_indices_of_order(g.dim, j)) {
    // multiplicity: number of orderings of the multi-index (full gradient
    // tensor counts each arrangement of axes)
    double mult = 1.0;
    {
      // multinomial j! / prod J_a!
      auto fact = [](int m) {
        double f = 1;
        for (int i = 2; i <= m; ++i) f *= i;
        return f;
      };
      mult = fact(j);
      for (int a = 0; a < 4; ++a) mult /= fact(J[a]);
    }
    for (int c = 0; c < u.rank; ++c) {
      Vec d = derivative(g, Vec(u.component(c)), J, s);
      mag2 += mult * d.cwiseAbs2();
    }
  }
  return mag2.cwiseSqrt();
}

// lattice offsets with 0 < flat distance <= window
std::vector<std::pair<std::array<int, 4>, double>> window_offsets(const PeriodicGrid& g,
                                                                  double window) {
  std::vector<std::pair<std::array<int, 4>, double>> offs;
  std::array<int, 4> reach{0, 0, 0, 0};
  for (int a = 0; a < g.dim; ++a) {
    if (g.n_axis[a] == 1) continue;
    reach[a] = std::min<int>(g.n_axis[a] / 2, int(std::floor(window / g.spacing(a))));
  }
  std::array<int, 4> off{0, 0, 0, 0};
  std::function<void(int)> rec = [&](int axis) {
    if (axis == g.dim) {
      double d2 = 0;
      for (int a = 0; a < g.dim; ++a) {
        double da = off[a] * g.spacing(a);
        d2 += da * da;
      }
      double d = std::sqrt(d2);
      if (d > 0 && d <= window + 1e-12) offs.push_back({off, d});
      return;
    }
    for (int v = -reach[axis]; v <= reach[axis]; ++v) {
      off[axis] = v;
      rec(axis + 1);
    }
    off[axis] = 0;
  };
  rec(0);
  return offs;
}

std::int64_t shifted_index(const PeriodicGrid& g, std::int64_t p,
                           const std::array<int, 4>& off) {
  auto idx = g.unflat(p);
  for (int a = 0; a < g.dim; ++a)
    idx[a] = (idx[a] + off[a] % g.n_axis[a] + g.n_axis[a]) % g.n_axis[a];
  return g.flat(idx);
}

// Hölder quotient sup over pairs within window; fields is the list of
// components of grad^k u (per multi-index with multiplicity folded in)
double quotient_sup(const PeriodicGrid& g,
                    const std::vector<std::pair<Vec, double>>& fields, double alpha,
                    double window, double dist_scale) {
  auto offs = window_offsets(g, window / dist_scale);
  double best = 0;
  for (const auto& [off, d] : offs) {
    double dd = std::pow(d * dist_scale, alpha);
    for (std::int64_t p = 0; p < g.npoints(); ++p) {
      std::int64_t q = shifted_index(g, p, off);
      double diff2 = 0;
      for (const auto& [f, mult] : fields) {
        cd delta = f[p] - f[q];
        diff2 += mult * std::norm(delta);
      }
      double val = std::sqrt(diff2) / dd;
      if (val > best) best = val;
    }
  }
  return best;
}

std::vector<std::pair<Vec, double>> gradient_components(const Field& u, int k, Scheme s) {
  std::vector<std::pair<Vec, double>> fields;
  auto fact = [](int m) {
    double f = 1;
    for (int i = 2; i <= m; ++i) f *= i;
    return f;
  };
  for (const auto& J : multi_indices_of_order(u.grid.dim, k)) {
    double mult = fact(k);
    for (int a = 0; a < 4; ++a) mult /= fact(J[a]);
    for (int c = 0; c < u.rank; ++c)
      fields.push_back({derivative(u.grid, Vec(u.component(c)), J, s), mult});
  }
  return fields;
}

}  // namespace

double ck_sup_norm(const Field& u, int k, Scheme s) {
  double total = 0;
  for (int j = 0; j <= k; ++j) total += gradient_magnitude(u, j, s).maxCoeff();
  return total;
}

double holder_seminorm(const Field& u, int k, double alpha, double window, Scheme s) {
  double w = window > 0 ? window : u.grid.period / 2.0;
  return quotient_sup(u.grid, gradient_components(u, k, s), alpha, w, 1.0);
}

double holder_norm(const Field& u, const NormConfig& cfg, Scheme s, const MetricField* g) {
  cfg.validate(u.grid);
  if (cfg.eps) throw ConfigError("holder_norm: use semiclassical_holder_norm when eps set");
  double r0 = cfg.window(u.grid);
  double cscale = 1.0;  // metric = cscale * delta
  if (g) {
    auto c = g->uniform_conformal_scale();
    if (c) cscale = *c;
    // non-constant metrics: flat distance approximation, magnitudes flat
  }
  double dist_scale = std::sqrt(cscale);     // g-distance = dist_scale * flat distance
  double mag_scale = 1.0 / std::sqrt(cscale);  // each raised index contributes 1/cscale
  double total = 0;
  for (int j = 0; j <= cfg.k; ++j)
    total += std::pow(mag_scale, j) * gradient_magnitude(u, j, s).maxCoeff();
  double q = quotient_sup(u.grid, gradient_components(u, cfg.k, s), cfg.alpha, r0,
                          dist_scale);
  total += std::pow(mag_scale, cfg.k) * q;
  return total;
}

double semiclassical_holder_norm(const Field& u, const NormConfig& cfg, Scheme s) {
  cfg.validate(u.grid);
  if (!cfg.eps) throw ConfigError("semiclassical norm requires eps");
  double eps = *cfg.eps;
  double r0 = cfg.window(u.grid);
  double total = 0;
  for (int j = 0; j <= cfg.k; ++j)
    total += std::pow(eps, j) * gradient_magnitude(u, j, s).maxCoeff();
  // quotient window shrinks to eps*r0 (g-distance), i.e. r0 in eps^{-2}g units
  double q = quotient_sup(u.grid, gradient_components(u, cfg.k, s), cfg.alpha,
                          eps * r0, 1.0);
  total += std::pow(eps, cfg.k + cfg.alpha) * q;
  return total;
}

double semiclassical_ck_norm(const Field& u, int k, double eps, Scheme s) {
  double total = 0;
  for (int j = 0; j <= k; ++j)
    total += std::pow(eps, j) * gradient_magnitude(u, j, s).maxCoeff();
  return total;
}

BoundedGeometryReport check_bounded_geometry(const MetricField& g, int l, double alpha_prime,
                                             const std::vector<double>& derivative_bounds,
                                             double inverse_bound, Scheme s) {
  (void)alpha_prime;  // report covers integer orders; the Hölder tail is k=l via norms
  BoundedGeometryReport rep;
  rep.min_eigenvalue = std::numeric_limits<double>::infinity();
  for (std::int64_t p = 0; p < g.grid.npoints(); ++p) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g.at(p));
    rep.min_eigenvalue = std::min(rep.min_eigenvalue, es.eigenvalues().minCoeff());
    double sup = es.eigenvalues().minCoeff() > 0 ? 1.0 / es.eigenvalues().minCoeff() : 0.0;
    rep.inverse_sup = std::max(rep.inverse_sup, sup);
  }
  rep.positive_definite = rep.min_eigenvalue > 0;
  rep.inverse_bound = inverse_bound;
  rep.inverse_ok = rep.positive_definite && rep.inverse_sup <= inverse_bound;

  // per-order sup norms of all metric components, as one field of rank nc
  Field packed(g.grid, int(g.comp.size()));
  for (size_t c = 0; c < g.comp.size(); ++c)
    packed.component(int(c)) = g.comp[c].cast<cd>();
  for (int j = 0; j <= l; ++j) {
    double bound = j < int(derivative_bounds.size()) ? derivative_bounds[j]
                                                     : derivative_bounds.back();
    double val = 0;
    {
      // sup of Frobenius gradient magnitude across packed components
      Field tmp = packed;
      VecR mag2 = VecR::Zero(g.grid.npoints());
      for (const auto& J : multi_indices_of_order(g.grid.dim, j))
        for (int c = 0; c < packed.rank; ++c) {
          Vec d = derivative(g.grid, Vec(packed.component(c)), J, s);
          mag2 += d.cwiseAbs2();
        }
      val = std::sqrt(mag2.maxCoeff());
    }
    rep.derivative_rows.push_back({j, val, bound, val <= bound});
  }
  rep.pass = rep.positive_definite && rep.inverse_ok;
  for (auto& r : rep.derivative_rows) rep.pass = rep.pass && r.ok;
  return rep;
}

}  // namespace sectorlab
