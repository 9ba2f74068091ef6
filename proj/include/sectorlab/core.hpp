#pragma once

// Core grid and field types shared by every module: uniform periodic lattices
// on T^n (n <= 4), complex fields over them, spectral and centered-difference
// derivatives, and the seeded band-limited probe generator used by all
// empirical norm measurements.

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace sectorlab {

using cd = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;
using VecR = Eigen::VectorXd;
using MatR = Eigen::MatrixXd;

inline constexpr double kPi = 3.14159265358979323846;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Scheme { Spectral, FD2 };

inline std::string scheme_name(Scheme s) {
  return s == Scheme::Spectral ? "spectral" : "fd2";
}
inline Scheme scheme_from_name(const std::string& s) {
  if (s == "spectral") return Scheme::Spectral;
  if (s == "fd2") return Scheme::FD2;
  throw ConfigError("unknown scheme: " + s);
}

using MultiIdx = std::array<int, 4>;

inline int mi_order(const MultiIdx& J) { return J[0] + J[1] + J[2] + J[3]; }

// ---------------------------------------------------------------------------
// PeriodicGrid: uniform lattice on the torus [0,L)^n.  Axes may be "reduced"
// to a single point (n_axis == 1); derivatives along a reduced axis vanish.
// ---------------------------------------------------------------------------
struct PeriodicGrid {
  int dim = 1;
  std::array<int, 4> n_axis{1, 1, 1, 1};
  double period = 2.0 * kPi;

  std::int64_t npoints() const {
    std::int64_t n = 1;
    for (int a = 0; a < dim; ++a) n *= n_axis[a];
    return n;
  }
  double spacing(int axis = 0) const { return period / n_axis[axis]; }
  bool reduced() const {
    for (int a = 0; a < dim; ++a)
      if (n_axis[a] == 1) return true;
    return false;
  }

  // row-major flattening, last axis fastest
  std::int64_t flat(const std::array<int, 4>& idx) const {
    std::int64_t p = 0;
    for (int a = 0; a < dim; ++a) p = p * n_axis[a] + idx[a];
    return p;
  }
  std::array<int, 4> unflat(std::int64_t p) const {
    std::array<int, 4> idx{0, 0, 0, 0};
    for (int a = dim - 1; a >= 0; --a) {
      idx[a] = int(p % n_axis[a]);
      p /= n_axis[a];
    }
    return idx;
  }
  double coord(int axis, int i) const { return spacing(axis) * i; }

  // integer frequency in [-N/2, N/2) for lattice index k
  int freq(int axis, int k) const {
    int n = n_axis[axis];
    return k <= (n - 1) / 2 ? k : k - n;
  }
  double wavenumber(int axis, int k) const {
    return 2.0 * kPi * freq(axis, k) / period;
  }
  // periodic representative of coordinate difference in [-L/2, L/2)
  double wrap(double d) const {
    while (d >= 0.5 * period) d -= period;
    while (d < -0.5 * period) d += period;
    return d;
  }
  double dist(std::int64_t p, std::int64_t q) const {
    auto a = unflat(p), b = unflat(q);
    double s = 0;
    for (int ax = 0; ax < dim; ++ax) {
      double d = wrap(coord(ax, a[ax]) - coord(ax, b[ax]));
      s += d * d;
    }
    return std::sqrt(s);
  }

  bool operator==(const PeriodicGrid& o) const {
    return dim == o.dim && n_axis == o.n_axis && period == o.period;
  }
};

// memory guard: keep total complex payload under ~64M entries by default
inline constexpr std::int64_t kMaxGridPoints = (std::int64_t(1) << 26);

PeriodicGrid build_grid(int n, int N, double L);
PeriodicGrid build_reduced_grid(int n, const std::array<int, 4>& n_axis, double L);

// ---------------------------------------------------------------------------
// Field: rank-d complex field.  Storage is component-major: component c
// occupies [c*npoints, (c+1)*npoints), each block row-major over the grid.
// ---------------------------------------------------------------------------
struct Field {
  PeriodicGrid grid;
  int rank = 1;
  Vec data;

  Field() = default;
  Field(const PeriodicGrid& g, int r = 1) : grid(g), rank(r) {
    data = Vec::Zero(g.npoints() * r);
  }
  std::int64_t npoints() const { return grid.npoints(); }
  cd& at(std::int64_t p, int c = 0) { return data[c * npoints() + p]; }
  cd at(std::int64_t p, int c = 0) const { return data[c * npoints() + p]; }
  Eigen::Map<Vec> component(int c) {
    return Eigen::Map<Vec>(data.data() + c * npoints(), npoints());
  }
  Eigen::Map<const Vec> component(int c) const {
    return Eigen::Map<const Vec>(data.data() + c * npoints(), npoints());
  }
};

Field field_from_function(const PeriodicGrid& g,
                          const std::function<cd(const std::array<double, 4>&)>& f);

// ---------------------------------------------------------------------------
// FFT plumbing (FFTW).  Unnormalized transforms; callers scale explicitly.
// ---------------------------------------------------------------------------
void fft_forward_inplace(const PeriodicGrid& g, Vec& v);   // sum e^{-i}
void fft_backward_inplace(const PeriodicGrid& g, Vec& v);  // sum e^{+i}

Vec fft_forward(const PeriodicGrid& g, const Vec& v);
Vec fft_backward(const PeriodicGrid& g, const Vec& v);

// apply a Fourier multiplier m(xi) to a single-component vector
Vec apply_multiplier(const PeriodicGrid& g, const Vec& v,
                     const std::function<cd(const std::array<double, 4>&)>& m);

// ---------------------------------------------------------------------------
// Derivatives.  Spectral: exact on resolved modes.  FD2: centered stencils,
// with even per-axis orders realized by powers of the compact 3-point second
// difference (so the 1D flat Laplacian has eigenvalues (2/h^2)(1-cos kh)).
// ---------------------------------------------------------------------------
Vec derivative(const PeriodicGrid& g, const Vec& v, const MultiIdx& J, Scheme s);
Field derivative(const Field& f, const MultiIdx& J, Scheme s);

// all multi-indices over `dim` axes with |J| == order
std::vector<MultiIdx> multi_indices_of_order(int dim, int order);
// all multi-indices with |J| <= order
std::vector<MultiIdx> multi_indices_up_to(int dim, int order);

// ---------------------------------------------------------------------------
// Probes: random band-limited fields with Fourier coefficients decaying at
// exponent 2, fixed seed.  These back every empirical norm measurement.
// ---------------------------------------------------------------------------
struct ProbeConfig {
  int count = 200;
  std::uint64_t seed = 12345;
  double decay = 2.0;
  int max_freq = -1;  // default N/8 per axis
};

std::vector<Vec> make_probes(const PeriodicGrid& g, const ProbeConfig& cfg);
// band-unlimited rough probe (white Fourier noise)
Vec make_rough_probe(const PeriodicGrid& g, std::uint64_t seed);

// least-squares slope of y against x, plus R^2 of the fit
struct LineFit {
  double slope = 0, intercept = 0, r2 = 0;
};
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace sectorlab
