#include <cmath>
#include <random>

#include "doctest.h"
#include "mollow/density_matrix.hpp"
#include "mollow/errors.hpp"
#include "mollow/hamiltonian.hpp"
#include "mollow/liouvillian.hpp"
#include "mollow/operators.hpp"
#include "mollow/propagate.hpp"
#include "mollow/steady_state.hpp"

using namespace mollow;

namespace {

DenseMatrix random_state(int d, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> n;
  DenseMatrix a(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) a(i, j) = cplx(n(rng), n(rng));
  }
  DenseMatrix rho = a * a.adjoint();
  return rho / rho.trace();
}

// -i[H, rho] + sum rate (2 A rho A+ - A+A rho - rho A+A), all dense.
DenseMatrix reference_rhs(const DenseMatrix& h, const std::vector<Dissipator>& ds, const DenseMatrix& rho) {
  DenseMatrix out = -kI * (h * rho - rho * h);
  for (const auto& d : ds) {
    const DenseMatrix a = to_dense(d.op);
    const DenseMatrix ada = a.adjoint() * a;
    out += d.rate * (2.0 * a * rho * a.adjoint() - ada * rho - rho * ada);
  }
  return out;
}

SystemParams params(int n_max) {
  SystemParams p = SystemParams::device_defaults();
  p.n_max = n_max;
  return p;
}

Liouvillian bare_atom(double gamma1, double rabi, double detuning = 0.0) {
  const auto s = atom_operators();
  const SparseMatrix h = 0.5 * rabi * s.sigma_x + detuning * s.raise * s.lower;
  const Dissipator d{s.lower, 0.5 * gamma1};
  return build_liouvillian(h, std::span<const Dissipator>(&d, 1));
}

}  // namespace

TEST_CASE("density matrix invariants") {
  CHECK_NOTHROW(DensityMatrix(random_state(6, 1)));
  DenseMatrix bad = random_state(4, 2);
  bad(0, 0) += 0.1;
  CHECK_THROWS_AS(DensityMatrix{bad}, InvalidParameter);
  DenseMatrix negative = DenseMatrix::Zero(2, 2);
  negative(0, 0) = 1.5;
  negative(1, 1) = -0.5;
  CHECK_THROWS_AS(DensityMatrix{negative}, InvalidParameter);
  DenseMatrix skew = random_state(3, 3);
  skew(0, 1) += cplx(0.0, 0.2);
  CHECK_THROWS_AS(DensityMatrix{skew}, InvalidParameter);

  const auto e = DensityMatrix::product_basis_state(4, 2, 1);
  CHECK(e.matrix()(5, 5) == cplx(1.0));
  CHECK(expectation(product_operators(4).photon_number, e).real() == doctest::Approx(2.0));
  CHECK(expectation(product_operators(4).excited_projector, e).real() == doctest::Approx(1.0));
  CHECK_THROWS_AS(DensityMatrix::product_basis_state(4, 4, 0), InvalidDimension);
  CHECK_THROWS_AS(expectation(product_operators(3).a, e), InvalidDimension);

  const auto mixed = DensityMatrix::maximally_mixed(8);
  CHECK(min_eigenvalue(mixed.matrix()) == doctest::Approx(0.125));
  CHECK(trace_distance(e.matrix(), e.matrix()) == doctest::Approx(0.0));
  CHECK(trace_distance(DensityMatrix::product_basis_state(4, 0, 0).matrix(), e.matrix()) ==
        doctest::Approx(1.0));
}

TEST_CASE("vectorisation is column major") {
  const DenseMatrix m = DenseMatrix::Random(3, 3);
  const Vector v = vectorize(m);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) CHECK(v(i + 3 * j) == m(i, j));
  }
  CHECK((unvectorize(v, 3) - m).norm() == 0.0);
  CHECK_THROWS_AS(unvectorize(v, 2), InvalidDimension);
}

TEST_CASE("liouvillian action matches the dense master equation") {
  SystemParams p = params(5);
  p.omega_drive += angular(2.0 * kMHz);
  const Liouvillian L = build_system_liouvillian(p);
  const DenseMatrix h = to_dense(build_hamiltonian_rwa(p));
  const auto ds = default_dissipators(p);
  for (unsigned seed : {11u, 12u, 13u}) {
    const DenseMatrix rho = random_state(10, seed);
    const DenseMatrix ref = reference_rhs(h, ds, rho);
    const DenseMatrix got = unvectorize(L.superop * vectorize(rho), 10);
    CHECK((got - ref).norm() <= 1e-12 * L.norm1());
  }
  CHECK(L.dim() == 100);
  CHECK(L.trace_defect() <= 1e-12 * L.norm1());
  const Vector t = trace_functional(10);
  CHECK(t.dot(vectorize(DenseMatrix::Identity(10, 10))).real() == doctest::Approx(10.0));
}

TEST_CASE("default dissipators carry half rates") {
  const SystemParams p = params(4);
  const auto ds = default_dissipators(p);
  REQUIRE(ds.size() == 2);
  CHECK(ds[0].rate == doctest::Approx(0.5 * p.gamma1));
  CHECK(ds[1].rate == doctest::Approx(0.5 * p.kappa));
  CHECK((to_dense(ds[0].op) - to_dense(product_operators(4).sigma_lower)).norm() == 0.0);
  CHECK((to_dense(ds[1].op) - to_dense(product_operators(4).a)).norm() == 0.0);
}

TEST_CASE("liouvillian input validation") {
  const SparseMatrix h = to_sparse(DenseMatrix::Identity(4, 4));
  const Dissipator wrong{identity(2), 1.0};
  CHECK_THROWS_AS(build_liouvillian(h, std::span<const Dissipator>(&wrong, 1)), InvalidDimension);
  const Dissipator negative{identity(4), -1.0};
  CHECK_THROWS_AS(build_liouvillian(h, std::span<const Dissipator>(&negative, 1)), InvalidParameter);
  DenseMatrix nh = DenseMatrix::Identity(4, 4);
  nh(0, 1) = 1.0;
  CHECK_THROWS_AS(build_liouvillian(to_sparse(nh), {}), InvalidParameter);
  CHECK_THROWS_AS(build_liouvillian(to_sparse(DenseMatrix::Identity(3, 4)), {}), InvalidDimension);
}

TEST_CASE("undriven system relaxes to the ground vacuum") {
  SystemParams p = params(6);
  p.rabi_omega = 0.0;
  const DensityMatrix rho = steady_state(build_system_liouvillian(p));
  CHECK(rho.matrix()(0, 0).real() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(trace_distance(rho.matrix(), DensityMatrix::product_basis_state(6, 0, 0).matrix()) < 1e-10);
}

TEST_CASE("driven empty cavity holds a coherent state") {
  SystemParams p = params(40);
  p.g = 0.0;
  p.rabi_omega = angular(12.0 * kMHz);
  SteadyStateReport report;
  const DensityMatrix rho = steady_state(build_system_liouvillian(p), {}, &report);
  const auto ops = product_operators(p.n_max);
  // d<a>/dt = -i (Omega/2) - (kappa/2)<a> = 0
  const cplx alpha = cplx(0.0, -1.0) * p.rabi_omega / p.kappa;
  CHECK(std::abs(expectation(ops.a, rho) - alpha) < 1e-9 * std::abs(alpha));
  CHECK(expectation(ops.photon_number, rho).real() == doctest::Approx(std::norm(alpha)).epsilon(1e-9));
  CHECK(report.residual <= 1e-10);
}

TEST_CASE("driven bare atom reaches the optical Bloch steady state") {
  const double gamma = angular(4.8 * kMHz);
  const double rabi = angular(7.0 * kMHz);
  const double det = angular(1.5 * kMHz);
  const DensityMatrix rho = steady_state(bare_atom(gamma, rabi, det));
  // rho_ee = (Omega^2/4) / (det^2 + Gamma^2/4 + Omega^2/2)
  const double expected = 0.25 * rabi * rabi / (det * det + 0.25 * gamma * gamma + 0.5 * rabi * rabi);
  CHECK(rho.matrix()(1, 1).real() == doctest::Approx(expected).epsilon(1e-10));
}

TEST_CASE("steady state of the coupled system") {
  const SystemParams p = params(32);
  const Liouvillian L = build_system_liouvillian(p);
  SteadyStateReport report;
  const DensityMatrix rho = steady_state(L, {}, &report);
  CHECK(report.residual < 1e-10);
  CHECK(std::abs(rho.matrix().trace() - 1.0) < 1e-12);
  CHECK(min_eigenvalue(rho.matrix()) >= -1e-8);
  CHECK((L.superop * rho.vectorized()).norm() <= 1e-10 * L.norm1());
}

TEST_CASE("steady state at the device point") {
  const SystemParams p = params(64);
  const DensityMatrix rho = steady_state(build_system_liouvillian(p));
  const double excited = expectation(product_operators(64).excited_projector, rho).real();
  CHECK(excited > 0.4);
  CHECK(excited <= 0.51);
  // Half-population limit: within a few percent of 1/2.
  CHECK(excited == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("doubling the truncation leaves the steady state unchanged") {
  SystemParams p = params(64);
  const auto observe = [](const SystemParams& q) {
    const auto ops = product_operators(q.n_max);
    const DensityMatrix rho = steady_state(build_system_liouvillian(q));
    return std::pair{expectation(ops.photon_number, rho).real(), expectation(ops.excited_projector, rho).real()};
  };
  const auto [n64, e64] = observe(p);
  p.n_max = 128;
  const auto [n128, e128] = observe(p);
  CHECK(std::abs(n128 - n64) < 1e-3 * n128);
  CHECK(std::abs(e128 - e64) < 1e-3 * e128);
}

TEST_CASE("degenerate generator has no unique steady state") {
  // Two decoupled undamped levels: every diagonal state is stationary.
  const SparseMatrix h = to_sparse(DenseMatrix::Zero(2, 2));
  CHECK_THROWS_AS(steady_state(build_liouvillian(h, {})), NoUniqueSteadyState);
}

TEST_CASE("propagation of the damped atom follows exponential decay") {
  const double gamma = angular(4.8 * kMHz);
  const Liouvillian L = bare_atom(gamma, 0.0);
  const Vector excited = DensityMatrix::product_basis_state(1, 0, 1).vectorized();
  for (double t : {0.0, 1e-8, 5e-8, 3e-7}) {
    const DenseMatrix rho = unvectorize(propagate(L, excited, t), 2);
    CHECK(rho(1, 1).real() == doctest::Approx(std::exp(-gamma * t)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(propagate(L, excited, -1.0), DomainError);
  CHECK_THROWS_AS(propagate(L, Vector::Zero(3), 1.0), InvalidDimension);
}

TEST_CASE("propagation matches the dense matrix exponential") {
  SystemParams p = params(4);
  p.rabi_omega = angular(10.0 * kMHz);
  const Liouvillian L = build_system_liouvillian(p);
  const Vector v0 = DensityMatrix::product_basis_state(4, 0, 0).vectorized();
  const double t = 40e-9;
  // Reference by many small dense RK4 steps.
  const DenseMatrix A = to_dense(L.superop);
  Vector ref = v0;
  const int steps = 20000;
  const double h = t / steps;
  for (int k = 0; k < steps; ++k) {
    const Vector k1 = A * ref;
    const Vector k2 = A * (ref + 0.5 * h * k1);
    const Vector k3 = A * (ref + 0.5 * h * k2);
    const Vector k4 = A * (ref + h * k3);
    ref += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  const Vector got = propagate(L, v0, t);
  CHECK((got - ref).norm() < 1e-9);
}

TEST_CASE("propagated states stay physical") {
  const SystemParams p = params(24);
  const Liouvillian L = build_system_liouvillian(p);
  Vector v = DensityMatrix::product_basis_state(24, 0, 0).vectorized();
  Propagator prop(L, 10e-9);
  for (int k = 0; k < 30; ++k) {
    prop.advance(v);
    const DenseMatrix rho = unvectorize(v, 48);
    CHECK(std::abs(rho.trace() - 1.0) < 1e-9);
    CHECK(min_eigenvalue(rho) >= -1e-8);
  }
}

TEST_CASE("probed substep coefficients reproduce the propagated probe") {
  const SystemParams p = params(6);
  const Liouvillian L = build_system_liouvillian(p);
  const Vector probe = Vector::Random(L.dim());
  const Vector start = DensityMatrix::maximally_mixed(12).vectorized();
  Propagator prop(L, 1.0 / L.norm1());
  REQUIRE(prop.substeps() == 1);
  Vector v = start;
  std::vector<cplx> c;
  prop.advance_substep_probed(v, probe, c);
  for (double theta : {0.0, 0.3, 1.0}) {
    cplx acc = 0.0;
    for (std::size_t k = c.size(); k-- > 0;) acc = acc * theta + c[k];
    const Vector ref = propagate(L, start, theta * prop.substep());
    CHECK(std::abs(acc - probe.cwiseProduct(ref).sum()) < 1e-12 * probe.norm() * ref.norm());
  }
  CHECK((v - propagate(L, start, prop.step())).norm() < 1e-13);
}
