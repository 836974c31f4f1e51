#include "dilab/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "dilab/error.hpp"

namespace dilab {

namespace fft {
namespace {

struct PlanKey {
  std::vector<int> dims;
  int sign;
  bool operator<(const PlanKey& o) const {
    if (sign != o.sign) return sign < o.sign;
    return dims < o.dims;
  }
};

std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}

fftw_plan plan_for(const std::vector<int>& dims, int sign) {
  static std::map<PlanKey, fftw_plan> cache;
  std::lock_guard<std::mutex> lock(plan_mutex());
  PlanKey key{dims, sign};
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  std::size_t total = 1;
  for (int d : dims) total *= static_cast<std::size_t>(d);
  auto* buf = fftw_alloc_complex(total);
  fftw_plan p = fftw_plan_dft(static_cast<int>(dims.size()), dims.data(), buf, buf, sign,
                              FFTW_ESTIMATE | FFTW_UNALIGNED);
  fftw_free(buf);
  if (p == nullptr) throw Error(ErrorCode::numerical, "FFTW planning failed");
  cache.emplace(key, p);
  return p;
}

void execute(cplx* data, const std::vector<int>& dims, int sign) {
  fftw_plan p = plan_for(dims, sign);
  auto* d = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(p, d, d);
}

}  // namespace

void forward(cplx* data, const std::vector<int>& dims) { execute(data, dims, FFTW_FORWARD); }
void backward(cplx* data, const std::vector<int>& dims) { execute(data, dims, FFTW_BACKWARD); }

}  // namespace fft

namespace {

void require_cartesian(const Grid& grid, const char* what) {
  if (!grid.cartesian()) throw Error(ErrorCode::unsupported, std::string(what) + " requires a cartesian grid");
}

std::vector<int> dims_of(const Grid& grid) { return std::vector<int>(grid.dimension(), grid.points()); }

RealVector axis_frequencies(const Grid& grid) {
  const int n = grid.points();
  const double step = 1.0 / (n * grid.spacing());
  RealVector xi(n);
  for (int k = 0; k < n; ++k) xi[k] = (k < (n + 1) / 2 ? k : k - n) * step;
  // numpy's fftfreq convention: the Nyquist index carries the negative frequency.
  return xi;
}

// Phase exp(2 pi i (L - h/2) xi) per axis index, accounting for the shifted node origin.
ComplexVector axis_shift(const Grid& grid) {
  const RealVector xi = axis_frequencies(grid);
  const double x0 = -grid.extent() + 0.5 * grid.spacing();
  ComplexVector ph(xi.size());
  for (Eigen::Index k = 0; k < xi.size(); ++k) ph[k] = std::polar(1.0, -2.0 * std::numbers::pi * x0 * xi[k]);
  return ph;
}

}  // namespace

RealVector frequency_component(const Grid& grid, int a) {
  require_cartesian(grid, "frequency_component");
  const RealVector xi = axis_frequencies(grid);
  const int n = grid.points();
  if (grid.dimension() == 1) return xi;
  RealVector out(static_cast<Eigen::Index>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out[static_cast<Eigen::Index>(i) * n + j] = a == 0 ? xi[i] : xi[j];
  return out;
}

RealVector frequency_norm_sq(const Grid& grid) {
  RealVector s = RealVector::Zero(grid.size());
  for (int a = 0; a < grid.dimension(); ++a) s += frequency_component(grid, a).array().square().matrix();
  return s;
}

double frequency_cell(const Grid& grid) {
  require_cartesian(grid, "frequency_cell");
  return std::pow(1.0 / (2.0 * grid.extent()), grid.dimension());
}

ComplexVector fourier_transform(const ComplexField& f) {
  const Grid& grid = *f.grid;
  require_cartesian(grid, "fourier_transform");
  ComplexVector c = f.values;
  fft::forward(c.data(), dims_of(grid));
  const ComplexVector ph = axis_shift(grid);
  const double cell = std::pow(grid.spacing(), grid.dimension());
  const int n = grid.points();
  if (grid.dimension() == 1) {
    for (int k = 0; k < n; ++k) c[k] *= ph[k] * cell;
  } else {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) c[static_cast<Eigen::Index>(i) * n + j] *= ph[i] * ph[j] * cell;
  }
  return c;
}

ComplexField inverse_fourier_transform(const GridPtr& grid, const ComplexVector& coefficients) {
  require_cartesian(*grid, "inverse_fourier_transform");
  if (coefficients.size() != grid->size()) throw Error(ErrorCode::incompatible_grid, "coefficient count mismatch");
  ComplexVector c = coefficients;
  const ComplexVector ph = axis_shift(*grid);
  const double scale = 1.0 / (std::pow(grid->spacing(), grid->dimension()) * static_cast<double>(grid->size()));
  const int n = grid->points();
  if (grid->dimension() == 1) {
    for (int k = 0; k < n; ++k) c[k] *= std::conj(ph[k]) * scale;
  } else {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        c[static_cast<Eigen::Index>(i) * n + j] *= std::conj(ph[i] * ph[j]) * scale;
  }
  fft::backward(c.data(), dims_of(*grid));
  return ComplexField(grid, std::move(c));
}

ComplexField apply_symbol(const ComplexField& f, const ComplexVector& symbol) {
  const Grid& grid = *f.grid;
  require_cartesian(grid, "apply_symbol");
  if (symbol.size() != grid.size()) throw Error(ErrorCode::incompatible_grid, "symbol size mismatch");
  ComplexVector c = f.values;
  const auto dims = dims_of(grid);
  fft::forward(c.data(), dims);
  c.array() *= symbol.array() / static_cast<double>(grid.size());
  fft::backward(c.data(), dims);
  return ComplexField(f.grid, std::move(c), f.label);
}

ComplexField apply_symbol(const ComplexField& f, const RealVector& symbol) {
  return apply_symbol(f, ComplexVector(symbol.cast<cplx>()));
}

ComplexVector derivative_symbol(const Grid& grid, int a) {
  const RealVector xi = frequency_component(grid, a);
  ComplexVector s = (2.0 * std::numbers::pi * xi).cast<cplx>() * cplx(0.0, 1.0);
  if (grid.points() % 2 == 0) {
    const int n = grid.points();
    const int nyq = n / 2;
    if (grid.dimension() == 1) {
      s[nyq] = 0.0;
    } else {
      for (int m = 0; m < n; ++m) {
        const Eigen::Index idx = a == 0 ? static_cast<Eigen::Index>(nyq) * n + m : static_cast<Eigen::Index>(m) * n + nyq;
        s[idx] = 0.0;
      }
    }
  }
  return s;
}

}  // namespace dilab
