#include "sectorlab/core.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>

namespace sectorlab {

PeriodicGrid build_grid(int n, int N, double L) {
  if (n < 1 || n > 4) throw ConfigError("grid dimension must be 1..4");
  if (N < 4) throw ConfigError("points per axis must be >= 4");
  if (!(L > 0)) throw ConfigError("period must be positive");
  PeriodicGrid g;
  g.dim = n;
  g.period = L;
  for (int a = 0; a < n; ++a) g.n_axis[a] = N;
  if (g.npoints() > kMaxGridPoints)
    throw ConfigError("grid exceeds memory budget: N^n too large");
  return g;
}

PeriodicGrid build_reduced_grid(int n, const std::array<int, 4>& n_axis, double L) {
  if (n < 1 || n > 4) throw ConfigError("grid dimension must be 1..4");
  if (!(L > 0)) throw ConfigError("period must be positive");
  PeriodicGrid g;
  g.dim = n;
  g.period = L;
  bool any = false;
  for (int a = 0; a < n; ++a) {
    if (n_axis[a] != 1 && n_axis[a] < 4)
      throw ConfigError("active axes need >= 4 points");
    g.n_axis[a] = n_axis[a];
    any = any || n_axis[a] > 1;
  }
  if (!any) throw ConfigError("at least one axis must be active");
  if (g.npoints() > kMaxGridPoints)
    throw ConfigError("grid exceeds memory budget");
  return g;
}

Field field_from_function(const PeriodicGrid& g,
                          const std::function<cd(const std::array<double, 4>&)>& f) {
  Field out(g, 1);
  for (std::int64_t p = 0; p < g.npoints(); ++p) {
    auto idx = g.unflat(p);
    std::array<double, 4> x{0, 0, 0, 0};
    for (int a = 0; a < g.dim; ++a) x[a] = g.coord(a, idx[a]);
    out.data[p] = f(x);
  }
  return out;
}

// --------------------------------------------------------------------------
// FFTW plan cache keyed by (shape, direction).  Single-threaded process.
// --------------------------------------------------------------------------
namespace {

struct PlanKey {
  std::array<int, 4> shape;
  int dim;
  int sign;
  bool operator<(const PlanKey& o) const {
    if (shape != o.shape) return shape < o.shape;
    if (dim != o.dim) return dim < o.dim;
    return sign < o.sign;
  }
};

fftw_plan get_plan(const PeriodicGrid& g, int sign, fftw_complex* buf) {
  static std::map<PlanKey, fftw_plan> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  PlanKey key{g.n_axis, g.dim, sign};
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  int rank = 0;
  int dims[4];
  for (int a = 0; a < g.dim; ++a)
    if (g.n_axis[a] > 1) dims[rank++] = g.n_axis[a];
  if (rank == 0) {  // single point: identity
    dims[rank++] = 1;
  }
  // FFTW_ESTIMATE keeps planning deterministic and does not touch `buf`
  fftw_plan p = fftw_plan_dft(rank, dims, buf, buf, sign, FFTW_ESTIMATE);
  cache[key] = p;
  return p;
}

void run_fft(const PeriodicGrid& g, Vec& v, int sign) {
  if (v.size() != g.npoints())
    throw NumericError("fft: field size does not match grid");
  auto* buf = reinterpret_cast<fftw_complex*>(v.data());
  fftw_plan p = get_plan(g, sign, buf);
  fftw_execute_dft(p, buf, buf);
}

}  // namespace

void fft_forward_inplace(const PeriodicGrid& g, Vec& v) { run_fft(g, v, FFTW_FORWARD); }
void fft_backward_inplace(const PeriodicGrid& g, Vec& v) { run_fft(g, v, FFTW_BACKWARD); }

Vec fft_forward(const PeriodicGrid& g, const Vec& v) {
  Vec w = v;
  fft_forward_inplace(g, w);
  return w;
}
Vec fft_backward(const PeriodicGrid& g, const Vec& v) {
  Vec w = v;
  fft_backward_inplace(g, w);
  return w;
}

Vec apply_multiplier(const PeriodicGrid& g, const Vec& v,
                     const std::function<cd(const std::array<double, 4>&)>& m) {
  Vec w = fft_forward(g, v);
  for (std::int64_t p = 0; p < g.npoints(); ++p) {
    auto idx = g.unflat(p);
    std::array<double, 4> xi{0, 0, 0, 0};
    for (int a = 0; a < g.dim; ++a) xi[a] = g.wavenumber(a, idx[a]);
    w[p] *= m(xi);
  }
  fft_backward_inplace(g, w);
  w /= double(g.npoints());
  return w;
}

// --------------------------------------------------------------------------
// Derivatives
// --------------------------------------------------------------------------
namespace {

// roll-based centered difference along one axis
Vec fd_first(const PeriodicGrid& g, const Vec& v, int axis) {
  if (g.n_axis[axis] == 1) return Vec::Zero(v.size());
  Vec out(v.size());
  double inv2h = 1.0 / (2.0 * g.spacing(axis));
  std::int64_t stride = 1;
  for (int a = g.dim - 1; a > axis; --a) stride *= g.n_axis[a];
  std::int64_t n = g.n_axis[axis];
  std::int64_t block = stride * n;
  for (std::int64_t base = 0; base < g.npoints(); base += block)
    for (std::int64_t i = 0; i < n; ++i) {
      std::int64_t ip = (i + 1) % n, im = (i + n - 1) % n;
      for (std::int64_t s = 0; s < stride; ++s)
        out[base + i * stride + s] =
            (v[base + ip * stride + s] - v[base + im * stride + s]) * inv2h;
    }
  return out;
}

Vec fd_second(const PeriodicGrid& g, const Vec& v, int axis) {
  if (g.n_axis[axis] == 1) return Vec::Zero(v.size());
  Vec out(v.size());
  double invh2 = 1.0 / (g.spacing(axis) * g.spacing(axis));
  std::int64_t stride = 1;
  for (int a = g.dim - 1; a > axis; --a) stride *= g.n_axis[a];
  std::int64_t n = g.n_axis[axis];
  std::int64_t block = stride * n;
  for (std::int64_t base = 0; base < g.npoints(); base += block)
    for (std::int64_t i = 0; i < n; ++i) {
      std::int64_t ip = (i + 1) % n, im = (i + n - 1) % n;
      for (std::int64_t s = 0; s < stride; ++s)
        out[base + i * stride + s] = (v[base + ip * stride + s] -
                                      2.0 * v[base + i * stride + s] +
                                      v[base + im * stride + s]) *
                                     invh2;
    }
  return out;
}

}  // namespace

Vec derivative(const PeriodicGrid& g, const Vec& v, const MultiIdx& J, Scheme s) {
  for (int a = g.dim; a < 4; ++a)
    if (J[a] != 0) throw DomainError("derivative along axis beyond grid dim");
  if (s == Scheme::Spectral) {
    for (int a = 0; a < g.dim; ++a)
      if (J[a] > 0 && g.n_axis[a] == 1 && J[a] % 2 == 1) {
        // reduced axis: derivative vanishes
      }
    Vec w = fft_forward(g, v);
    for (std::int64_t p = 0; p < g.npoints(); ++p) {
      auto idx = g.unflat(p);
      cd factor = 1.0;
      for (int a = 0; a < g.dim; ++a)
        for (int r = 0; r < J[a]; ++r) factor *= cd(0.0, g.wavenumber(a, idx[a]));
      w[p] *= factor;
    }
    fft_backward_inplace(g, w);
    w /= double(g.npoints());
    return w;
  }
  // FD2: even orders by compact second differences, odd by one centered first
  Vec w = v;
  for (int a = 0; a < g.dim; ++a) {
    int j = J[a];
    if (j == 0) continue;
    if (g.n_axis[a] == 1) return Vec::Zero(v.size());
    int halves = j / 2;
    for (int r = 0; r < halves; ++r) w = fd_second(g, w, a);
    if (j % 2 == 1) w = fd_first(g, w, a);
  }
  return w;
}

Field derivative(const Field& f, const MultiIdx& J, Scheme s) {
  Field out(f.grid, f.rank);
  for (int c = 0; c < f.rank; ++c) {
    Vec comp = f.component(c);
    out.component(c) = derivative(f.grid, comp, J, s);
  }
  return out;
}

std::vector<MultiIdx> multi_indices_of_order(int dim, int order) {
  std::vector<MultiIdx> out;
  std::function<void(int, int, MultiIdx)> rec = [&](int axis, int left, MultiIdx cur) {
    if (axis == dim - 1) {
      cur[axis] = left;
      out.push_back(cur);
      return;
    }
    for (int j = 0; j <= left; ++j) {
      cur[axis] = j;
      rec(axis + 1, left - j, cur);
    }
  };
  rec(0, order, MultiIdx{0, 0, 0, 0});
  return out;
}

std::vector<MultiIdx> multi_indices_up_to(int dim, int order) {
  std::vector<MultiIdx> out;
  for (int o = 0; o <= order; ++o) {
    auto v = multi_indices_of_order(dim, o);
    out.insert(out.end(), v.begin(), v.end());
  }
  return out;
}

std::vector<Vec> make_probes(const PeriodicGrid& g, const ProbeConfig& cfg) {
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  int kmax = cfg.max_freq;
  if (kmax < 0) {
    int nmin = 1 << 30;
    for (int a = 0; a < g.dim; ++a)
      if (g.n_axis[a] > 1) nmin = std::min(nmin, g.n_axis[a]);
    kmax = std::max(1, nmin / 8);
  }
  std::vector<Vec> probes;
  probes.reserve(cfg.count);
  for (int t = 0; t < cfg.count; ++t) {
    Vec w = Vec::Zero(g.npoints());
    for (std::int64_t p = 0; p < g.npoints(); ++p) {
      auto idx = g.unflat(p);
      double kk = 0;
      bool in_band = true;
      for (int a = 0; a < g.dim; ++a) {
        int f = g.freq(a, idx[a]);
        if (std::abs(f) > kmax) in_band = false;
        kk += double(f) * f;
      }
      // draw per-mode coefficients in a fixed traversal order to keep
      // the sequence deterministic across band settings
      double re = gauss(rng), im = gauss(rng);
      if (!in_band) continue;
      w[p] = cd(re, im) / std::pow(1.0 + std::sqrt(kk), cfg.decay);
    }
    fft_backward_inplace(g, w);
    w /= double(g.npoints());
    double n = w.norm();
    if (n > 0) w /= n;
    probes.push_back(std::move(w));
  }
  return probes;
}

Vec make_rough_probe(const PeriodicGrid& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vec w(g.npoints());
  for (std::int64_t p = 0; p < g.npoints(); ++p) w[p] = cd(gauss(rng), gauss(rng));
  fft_backward_inplace(g, w);
  w /= double(g.npoints());
  w /= w.norm();
  return w;
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw DomainError("fit_line needs >= 2 samples");
  double n = double(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  LineFit f;
  double denom = n * sxx - sx * sx;
  if (denom == 0) throw DomainError("fit_line: degenerate abscissae");
  f.slope = (n * sxy - sx * sy) / denom;
  f.intercept = (sy - f.slope * sx) / n;
  double ss_res = 0, ss_tot = 0, ybar = sy / n;
  for (size_t i = 0; i < x.size(); ++i) {
    double pred = f.intercept + f.slope * x[i];
    ss_res += (y[i] - pred) * (y[i] - pred);
    ss_tot += (y[i] - ybar) * (y[i] - ybar);
  }
  f.r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
  return f;
}

}  // namespace sectorlab
