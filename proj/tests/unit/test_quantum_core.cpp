#include <cmath>

#include "doctest.h"
#include "mollow/dressed_states.hpp"
#include "mollow/errors.hpp"
#include "mollow/hamiltonian.hpp"
#include "mollow/operators.hpp"
#include "mollow/system_params.hpp"

using namespace mollow;

namespace {

// Dense reference: a|n> = sqrt(n)|n-1>, photon-major index 2n + atom.
DenseMatrix dense_annihilation(int n_max) {
  DenseMatrix a = DenseMatrix::Zero(n_max, n_max);
  for (int n = 1; n < n_max; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

DenseMatrix reference_hamiltonian(const SystemParams& p) {
  const int d = 2 * p.n_max;
  DenseMatrix h = DenseMatrix::Zero(d, d);
  const double dr = p.omega_r - p.omega_drive;
  const double da = p.omega_a - p.omega_drive;
  for (int n = 0; n < p.n_max; ++n) {
    for (int s = 0; s < 2; ++s) h(2 * n + s, 2 * n + s) = dr * n + da * s;
    if (n >= 1) {
      // g a+ s- : |n-1, e> -> |n, g>
      h(2 * n, 2 * (n - 1) + 1) += p.g * std::sqrt(static_cast<double>(n));
      h(2 * (n - 1) + 1, 2 * n) += p.g * std::sqrt(static_cast<double>(n));
      for (int s = 0; s < 2; ++s) {
        h(2 * (n - 1) + s, 2 * n + s) += 0.5 * p.rabi_omega * std::sqrt(static_cast<double>(n));
        h(2 * n + s, 2 * (n - 1) + s) += 0.5 * p.rabi_omega * std::sqrt(static_cast<double>(n));
      }
    }
  }
  return h;
}

SystemParams small_params(int n_max) {
  SystemParams p = SystemParams::device_defaults();
  p.n_max = n_max;
  return p;
}

}  // namespace

TEST_CASE("fock operators match the ladder definition") {
  const auto f = fock_operators(6);
  CHECK((to_dense(f.annihilate) - dense_annihilation(6)).norm() == 0.0);
  CHECK((to_dense(f.create) - dense_annihilation(6).adjoint()).norm() == 0.0);
  for (int n = 0; n < 6; ++n) CHECK(to_dense(f.number)(n, n).real() == doctest::Approx(n));
  // [a, a+] = 1 except in the truncated corner
  const DenseMatrix comm = to_dense(f.annihilate * f.create - f.create * f.annihilate);
  for (int n = 0; n < 5; ++n) CHECK(comm(n, n).real() == doctest::Approx(1.0));
  CHECK(comm(5, 5).real() == doctest::Approx(-5.0));
  CHECK_THROWS_AS(fock_operators(1), InvalidDimension);
}

TEST_CASE("atom operators use ground |0> and excited |1>") {
  const auto s = atom_operators();
  const DenseMatrix lower = to_dense(s.lower);
  CHECK(lower(0, 1) == cplx(1.0));
  CHECK(lower.cwiseAbs().sum() == doctest::Approx(1.0));
  CHECK((to_dense(s.raise) - lower.adjoint()).norm() == 0.0);
  CHECK(to_dense(s.sigma_z)(0, 0).real() == 1.0);
  CHECK(to_dense(s.sigma_z)(1, 1).real() == -1.0);
  CHECK((to_dense(s.sigma_x) - (lower + lower.adjoint())).norm() == 0.0);
}

TEST_CASE("tensor product is photon major") {
  const auto ops = product_operators(5);
  CHECK(ops.dim() == 10);
  const DenseMatrix a = to_dense(ops.a);
  const DenseMatrix sm = to_dense(ops.sigma_lower);
  for (int n = 1; n < 5; ++n) {
    for (int s = 0; s < 2; ++s) CHECK(a(2 * (n - 1) + s, 2 * n + s).real() == doctest::Approx(std::sqrt(n)));
  }
  for (int n = 0; n < 5; ++n) CHECK(sm(2 * n, 2 * n + 1).real() == 1.0);
  CHECK((to_dense(ops.excited_projector) - to_dense(ops.sigma_raise * ops.sigma_lower)).norm() == 0.0);
  // sparse and dense Kronecker agree
  const DenseMatrix x = DenseMatrix::Random(3, 3);
  const DenseMatrix y = DenseMatrix::Random(2, 2);
  CHECK((to_dense(tensor(to_sparse(x), to_sparse(y))) - tensor(x, y)).norm() < 1e-14);
  // operators on different factors commute
  CHECK((to_dense(ops.a * ops.sigma_lower - ops.sigma_lower * ops.a)).norm() == 0.0);
}

TEST_CASE("emitter_lowering") {
  CHECK((to_dense(emitter_lowering(2)) - to_dense(atom_operators().lower)).norm() == 0.0);
  CHECK((to_dense(emitter_lowering(12)) - to_dense(product_operators(6).sigma_lower)).norm() == 0.0);
  CHECK_THROWS_AS(emitter_lowering(3), InvalidDimension);
  CHECK_THROWS_AS(emitter_lowering(0), InvalidDimension);
}

TEST_CASE("hamiltonian matches an element-wise construction") {
  SystemParams p = small_params(8);
  p.omega_drive += angular(1.3 * kMHz);
  p.omega_a -= angular(0.7 * kMHz);
  const DenseMatrix h = to_dense(build_hamiltonian_rwa(p));
  const DenseMatrix ref = reference_hamiltonian(p);
  CHECK((h - ref).norm() <= 1e-12 * ref.norm());
  CHECK(hermiticity_defect(build_hamiltonian_rwa(p)) <= 1e-12);
  CHECK(hermiticity_defect(SparseMatrix(4, 4)) == 0.0);
}

TEST_CASE("system parameter validation") {
  SystemParams p = small_params(4);
  CHECK_NOTHROW(p.validate());
  SUBCASE("truncation") {
    p.n_max = 1;
    CHECK_THROWS_AS(p.validate(), InvalidDimension);
  }
  SUBCASE("negative rate") {
    p.kappa = -1.0;
    CHECK_THROWS_AS(p.validate(), InvalidParameter);
  }
  SUBCASE("non-finite") {
    p.g = std::nan("");
    CHECK_THROWS_AS(p.validate(), InvalidParameter);
  }
  SUBCASE("rotating-wave bound") {
    p.rabi_omega = 0.02 * p.omega_r;
    CHECK_THROWS_AS(p.validate(), InvalidParameter);
    CHECK_THROWS_AS(build_hamiltonian_rwa(p), InvalidParameter);
  }
  SUBCASE("kappa prime") { CHECK(p.kappa_prime() == doctest::Approx(angular(5.0 * kMHz))); }
}

TEST_CASE("dressed states are eigenvectors of the undriven resonant hamiltonian") {
  SystemParams p = small_params(64);
  p.rabi_omega = 0.0;
  const SparseMatrix h = build_hamiltonian_rwa(p);
  const double hnorm = to_dense(h).norm();
  for (int n = 1; n <= 40; ++n) {
    for (Branch b : {Branch::plus, Branch::minus}) {
      const Vector v = dressed_state_vector({n, b}, p.n_max);
      CHECK(v.norm() == doctest::Approx(1.0).epsilon(1e-15));
      const double e = dressed_energy_rotating(n, b, p);
      CHECK((h * v - e * v).norm() < 1e-9 * hnorm);
    }
  }
  CHECK(dressed_energy(3, Branch::plus, p) == doctest::Approx(3 * p.omega_a + p.g * std::sqrt(3.0)));
  CHECK_THROWS_AS(dressed_state_vector({0, Branch::plus}, 8), DomainError);
  CHECK_THROWS_AS(dressed_state_vector({8, Branch::plus}, 8), DomainError);
  CHECK_THROWS_AS(dressed_energy(0, Branch::minus, p), DomainError);
}

TEST_CASE("transition frequencies form the dressed-state quartet") {
  const SystemParams p = small_params(16);
  const int n = 9;
  const double rn = std::sqrt(9.0), rm = std::sqrt(8.0);
  auto f = [&](Branch a, Branch b) { return transition_frequency({n, a}, {n - 1, b}, p); };
  CHECK(f(Branch::plus, Branch::minus) == doctest::Approx(p.omega_a + p.g * (rn + rm)));
  CHECK(f(Branch::minus, Branch::plus) == doctest::Approx(p.omega_a - p.g * (rn + rm)));
  CHECK(f(Branch::plus, Branch::plus) == doctest::Approx(p.omega_a + p.g * (rn - rm)));
  CHECK(f(Branch::minus, Branch::minus) == doctest::Approx(p.omega_a - p.g * (rn - rm)));
}

TEST_CASE("transition matrix elements equal the explicit inner products") {
  const int n_max = 24;
  const SparseMatrix lower = product_operators(n_max).sigma_lower;
  for (int n = 2; n < n_max; ++n) {
    for (Branch from : {Branch::plus, Branch::minus}) {
      for (Branch to : {Branch::plus, Branch::minus}) {
        const Vector a = dressed_state_vector({n, from}, n_max);
        const Vector b = dressed_state_vector({n - 1, to}, n_max);
        const cplx direct = b.dot(lower * a);
        const double element = transition_matrix_element({n, from}, {n - 1, to});
        CHECK(std::abs(direct - element) < 1e-15);
        CHECK(std::abs(element) == 0.5);
      }
    }
  }
  CHECK_THROWS_AS(transition_matrix_element({3, Branch::plus}, {1, Branch::plus}), DomainError);
  CHECK_THROWS_AS(transition_matrix_element({1, Branch::plus}, {0, Branch::plus}), DomainError);
}

TEST_CASE("central-quartet spread shrinks relative to g as n grows") {
  const SystemParams p = small_params(8);
  double previous = 1e300;
  for (int n : {4, 16, 64, 256, 1024}) {
    const double spread = dressed_energy(n, Branch::plus, p) - dressed_energy(n - 1, Branch::plus, p) - p.omega_a;
    const double ratio = spread / p.g;
    CHECK(ratio < previous);
    previous = ratio;
  }
  CHECK(previous < 0.02);
}
