#include <doctest.h>

#include <algorithm>
#include <vector>

#include "dilab/error.hpp"
#include "dilab/spectral.hpp"
#include "helpers.hpp"

using namespace dilab;
using testing::field;
using testing::pi;

namespace {

using RealFn = std::function<double(double)>;

ComplexField gaussian(const GridPtr& g, double w) {
  return field(g, [w](double x, double y) { return std::exp(-(x * x + y * y) / (2 * w * w)); });
}

// e^{itH} of exp(-a x^2) for H = -d^2/dx^2
cplx free_gaussian(double a, double x, double t) {
  const cplx d(1.0, -4.0 * a * t);
  return std::exp(-a * x * x / d) / std::sqrt(d);
}

}  // namespace

TEST_CASE("free periodic spectrum is the lattice of 4 pi^2 xi^2") {
  const double L = 3.0;
  const int N = 32;
  auto g = build_grid(GridMode::cartesian, 1, L, N);
  SpectralOperator op(zero_potential(g));
  std::vector<double> expect;
  for (int k = -N / 2; k < N / 2; ++k) expect.push_back(4 * pi * pi * (k / (2 * L)) * (k / (2 * L)));
  std::sort(expect.begin(), expect.end());
  for (int k = 0; k < N; ++k) CHECK(op.eigenvalues()[k] == doctest::Approx(expect[k]).epsilon(1e-10).scale(1.0));
}

TEST_CASE("free radial n=3 spectrum approaches (k pi / L)^2") {
  const double L = 10.0;
  auto g = build_grid(GridMode::radial, 3, L, 800);
  SpectralOperator op(zero_potential(g));
  for (int k = 1; k <= 5; ++k)
    CHECK(op.eigenvalues()[k - 1] == doctest::Approx(std::pow(k * pi / L, 2)).epsilon(1e-4));
}

TEST_CASE("eigenvectors are orthonormal and diagonalize H") {
  auto g = build_grid(GridMode::radial, 4, 12.0, 300);
  SpectralOperator op(sample_potential(PotentialFamily::inverse_power, {}, g));
  const Eigen::MatrixXd& Q = op.eigenvectors();
  CHECK((Q.transpose() * Q - Eigen::MatrixXd::Identity(Q.cols(), Q.cols())).cwiseAbs().maxCoeff() < 1e-10);
  const Eigen::MatrixXd D = Q.transpose() * op.matrix() * Q;
  CHECK((D.diagonal() - op.eigenvalues()).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("functional calculus") {
  auto g = build_grid(GridMode::radial, 3, 15.0, 300);
  SpectralOperator op(sample_potential(PotentialFamily::gaussian_bump, {}, g));
  auto f = gaussian(g, 1.5);
  auto id = op.functional_calculus(RealFn([](double) { return 1.0; }), f);
  CHECK(testing::max_abs(id.values - f.values) < 1e-12);
  auto hf = op.functional_calculus(RealFn([](double l) { return l; }), f);
  CHECK(testing::max_abs(hf.values - op.apply(f).values) < 1e-9);
  CHECK(op.sobolev_norm(f, 0.0) == doctest::Approx(f.norm()).epsilon(1e-12));
  CHECK(op.sobolev_norm(f, 2.0) == doctest::Approx(op.apply(f).norm()).epsilon(1e-10));
  const double s1 = std::pow(op.sobolev_norm(f, 1.0), 2);
  CHECK(s1 == doctest::Approx(inner(f, op.apply(f)).real()).epsilon(1e-10));
  CHECK_THROWS_AS(op.functional_calculus(RealFn([](double) { return std::nan(""); }), f), Error);
}

TEST_CASE("exact propagator is unitary and reversible") {
  auto g = build_grid(GridMode::radial, 3, 30.0, 400);
  SpectralOperator op(sample_potential(PotentialFamily::inverse_power, {}, g));
  auto f = gaussian(g, 2.0);
  auto u = op.propagate(f, 3.7);
  CHECK(u.mass() == doctest::Approx(f.mass()).epsilon(1e-13));
  auto back = op.propagate(u, -3.7);
  CHECK(testing::max_abs(back.values - f.values) < 1e-12);
}

TEST_CASE("free gaussian matches the closed-form solution") {
  auto g = build_grid(GridMode::cartesian, 1, 40.0, 512);
  auto f = gaussian(g, 1.0);
  const double a = 0.5, t = 1.25;
  auto op = assemble_hamiltonian(zero_potential(g));
  ExactEvolution ev(op, f, t / 10);
  for (int i = 0; i < 10; ++i) ev.step();
  CHECK(ev.time() == doctest::Approx(t));
  auto exact = field(g, [&](double x, double) { return free_gaussian(a, x, t); });
  CHECK(testing::max_abs(ev.state().values - exact.values) < 1e-10);
  CHECK(testing::max_abs(propagate_free(f, t).values - exact.values) < 1e-10);
  CHECK(testing::max_abs(op->propagate(f, t).values - exact.values) < 1e-10);
}

TEST_CASE("split step is second order and unitary") {
  auto g = build_grid(GridMode::cartesian, 1, 20.0, 256);
  auto V = sample_potential(PotentialFamily::inverse_power, {}, g);
  SpectralOperator op(V);
  auto f = gaussian(g, 1.0);
  const double t = 1.0;
  auto exact = op.propagate(f, t);
  const double e1 = (propagate_splitstep(V, f, t, 0.02).values - exact.values).norm();
  const double e2 = (propagate_splitstep(V, f, t, 0.01).values - exact.values).norm();
  CHECK(std::log2(e1 / e2) == doctest::Approx(2.0).epsilon(0.05));
  CHECK(propagate_splitstep(V, f, t, 0.01).mass() == doctest::Approx(f.mass()).epsilon(1e-13));
}

TEST_CASE("step counts") {
  CHECK(step_count(1.0, 0.1) == 10);
  CHECK(step_count(4.0, 0.0005) == 8000);
  CHECK_THROWS_AS(step_count(1.0, 0.3), Error);
}
