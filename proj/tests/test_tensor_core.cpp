#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "qlocality/error.hpp"
#include "qlocality/tensor_core.hpp"

using namespace qloc;
using namespace qloc::test;

TEST_CASE("kron") {
  CHECK(max_abs(kron(eye(2), eye(2)) -
                ComplexMatrix::Identity(4, 4)) == 0.0);

  const ComplexVector out = kron(pauli_x(), eye(2)) * ket(4, 0);
  CHECK(max_abs(out - ket(4, 2)) == 0.0);

  Rng rng(1);
  const ComplexMatrix a = random_matrix(2, 2, rng);
  const ComplexMatrix b = random_matrix(3, 3, rng);
  const ComplexMatrix k = kron(a, b);
  double worst = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int p = 0; p < 3; ++p)
        for (int q = 0; q < 3; ++q) worst = std::max(worst, std::abs(k(3 * i + p, 3 * j + q) - a(i, j) * b(p, q)));
  CHECK(worst == 0.0);
}

TEST_CASE("permute_systems") {
  const SystemLayout two{{"a", 2}, {"b", 2}};
  const std::vector<std::size_t> swap{1, 0};
  const ComplexMatrix p01 = ket(4, 1) * ket(4, 1).adjoint();
  CHECK(max_abs(permute_systems(p01, two, swap) - ket(4, 2) * ket(4, 2).adjoint()) == 0.0);

  Rng rng(2);
  const SystemLayout three{{"a", 2}, {"b", 3}, {"c", 2}};
  const ComplexMatrix m = random_matrix(12, 12, rng);
  const std::vector<std::size_t> perm{2, 0, 1};
  const ComplexMatrix back =
      permute_systems(permute_systems(m, three, perm), three.permuted(perm), inverse_permutation(perm));
  CHECK(max_abs(back - m) <= 1e-12);

  // Cyclic shift of a product state: (A, B, C) -> (C, A, B).
  const ComplexMatrix ra = random_density(SystemLayout{{"a", 2}}, rng).matrix;
  const ComplexMatrix rb = random_density(SystemLayout{{"b", 3}}, rng).matrix;
  const ComplexMatrix rc = random_density(SystemLayout{{"c", 2}}, rng).matrix;
  const ComplexMatrix shifted = permute_systems(kron(kron(ra, rb), rc), three, perm);
  CHECK(max_abs(shifted - kron(kron(rc, ra), rb)) <= 1e-14);

  const ComplexVector v = haar_random_vector(12, rng);
  const ComplexVector pv = permute_systems(v, three, perm);
  CHECK(max_abs(pv * pv.adjoint() - permute_systems(ComplexMatrix(v * v.adjoint()), three, perm)) <= 1e-15);
  CHECK_THROWS_AS(permute_systems(eye(5), three, perm), Error);
}

TEST_CASE("partial_trace") {
  const StateVector phi = max_entangled(2, "a", "b");
  const ComplexMatrix rho = phi.amplitudes * phi.amplitudes.adjoint();
  const std::vector<std::string> keep_a{"a"};
  CHECK(max_abs(partial_trace(rho, phi.layout, keep_a) - 0.5 * ComplexMatrix::Identity(2, 2)) <= 1e-15);

  Rng rng(3);
  const SystemLayout ab{{"a", 2}, {"b", 3}};
  const ComplexMatrix ra = random_density(SystemLayout{{"a", 2}}, rng).matrix;
  const ComplexMatrix rb = random_density(SystemLayout{{"b", 3}}, rng).matrix;
  CHECK(max_abs(partial_trace(kron(ra, rb), ab, keep_a) - ra) <= 1e-15);

  // Naive index-summation oracle on a 2 x 3 x 2 system keeping the outer two.
  const SystemLayout three{{"a", 2}, {"b", 3}, {"c", 2}};
  const ComplexMatrix m = random_matrix(12, 12, rng);
  const std::vector<std::string> keep{"a", "c"};
  const ComplexMatrix got = partial_trace(m, three, keep);
  ComplexMatrix want = ComplexMatrix::Zero(4, 4);
  for (int a = 0; a < 2; ++a)
    for (int c = 0; c < 2; ++c)
      for (int a2 = 0; a2 < 2; ++a2)
        for (int c2 = 0; c2 < 2; ++c2)
          for (int b = 0; b < 3; ++b) want(a * 2 + c, a2 * 2 + c2) += m((a * 3 + b) * 2 + c, (a2 * 3 + b) * 2 + c2);
  CHECK(max_abs(got - want) <= 1e-12);

  const std::vector<std::string> unknown{"z"};
  CHECK_THROWS_AS(partial_trace(m, three, unknown), Error);
}

TEST_CASE("partial_trace preserves trace and positivity") {
  Rng rng(4);
  for (int i = 0; i < 200; ++i) {
    std::vector<System> systems;
    long total = 1;
    for (int s = 0; s < 3; ++s) {
      const int d = 1 + static_cast<int>(rng.index(4));
      if (total * d > 36) break;
      total *= d;
      systems.push_back({"s" + std::to_string(s), d});
    }
    const SystemLayout layout(systems);
    const DensityMatrix rho = random_density(layout, rng);
    std::vector<std::string> keep;
    for (const auto& s : systems)
      if (rng.uniform() < 0.5) keep.push_back(s.label);
    const ComplexMatrix r = partial_trace(rho.matrix, layout, keep);
    CHECK(std::abs(r.trace() - Complex(1.0)) <= 1e-12);
    CHECK(min_eigenvalue(r) >= -1e-10);
  }
}

TEST_CASE("numerical_rank and null_space") {
  CHECK(numerical_rank(ComplexMatrix::Identity(5, 5)) == 5);
  const StateVector phi = max_entangled(2);
  CHECK(numerical_rank(phi.amplitudes * phi.amplitudes.adjoint()) == 1);
  ComplexMatrix d = ComplexMatrix::Zero(2, 2);
  d(0, 0) = 1.0;
  d(1, 1) = 1e-12;
  CHECK(numerical_rank(d, 1e-9) == 1);

  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 0) = 1.0;
  const Subspace ns = null_space(m);
  REQUIRE(ns.dim() == 1);
  CHECK(std::abs(std::abs(ns.basis(1, 0)) - 1.0) <= 1e-15);

  Rng rng(5);
  CHECK(null_space(random_matrix(6, 6, rng)).dim() == 0);

  for (int i = 0; i < 100; ++i) {
    const long rows = 1 + rng.index(6);
    const long cols = 1 + rng.index(6);
    const long r = 1 + rng.index(std::min(rows, cols));
    const ComplexMatrix a = random_matrix(rows, r, rng) * random_matrix(r, cols, rng);
    const Subspace k = null_space(a);
    CHECK(k.dim() + numerical_rank(a) == cols);
    CHECK(k.orthonormality_error() <= 1e-12);
    if (k.dim() > 0) CHECK((a * k.basis).norm() <= 1e-9 * a.norm());
  }
}

TEST_CASE("max_entangled") {
  const StateVector one = max_entangled(1);
  CHECK(one.amplitudes.size() == 1);
  CHECK(std::abs(one.amplitudes(0) - Complex(1.0)) == 0.0);

  const StateVector two = max_entangled(2);
  CHECK(std::abs(two.amplitudes(0) - Complex(1 / std::sqrt(2.0))) <= 1e-15);
  CHECK(std::abs(two.amplitudes(3) - Complex(1 / std::sqrt(2.0))) <= 1e-15);
  CHECK(std::abs(two.amplitudes(1)) == 0.0);

  const StateVector three = max_entangled(3);
  for (const char* side : {"R", "Q"}) {
    const std::vector<std::string> keep{side};
    CHECK(max_abs(reduced_state(three, keep) - ComplexMatrix::Identity(3, 3) / 3.0) <= 1e-15);
  }
}

TEST_CASE("relating_unitary") {
  Rng rng(6);
  const std::vector<std::string> kept{"R"};

  const StateVector psi = max_entangled(3);
  const ComplexMatrix same = relating_unitary(psi, psi, kept);
  CHECK(phase_invariant_distance(same, eye(3)) <= 1e-12);

  const ComplexMatrix u = haar_random_unitary(3, rng);
  const StateVector psi2(psi.layout, apply_local(u, psi.amplitudes, psi.layout, std::vector<std::string>{"Q"}));
  const ComplexMatrix w = relating_unitary(psi, psi2, kept);
  const ComplexVector mapped = apply_local(w, psi.amplitudes, psi.layout, std::vector<std::string>{"Q"});
  CHECK((mapped - psi2.amplitudes).norm() <= 1e-10);
  CHECK(phase_invariant_distance(w, u) <= 1e-10);

  // Rank-deficient kept marginal: the relation holds, uniqueness is not claimed.
  const SystemLayout rx{{"R", 2}, {"X", 3}};
  const ComplexVector v = haar_random_vector(6, rng);
  ComplexMatrix low = ComplexMatrix::Zero(2, 3);
  low.col(0) = v.head(2);
  low.col(1) = v.segment(2, 2);
  ComplexVector flat(6);
  for (int r = 0; r < 2; ++r)
    for (int x = 0; x < 3; ++x) flat(r * 3 + x) = low(r, x);
  flat.normalize();
  const StateVector a(rx, flat);
  const ComplexMatrix ux = haar_random_unitary(3, rng);
  const StateVector b(rx, apply_local(ux, flat, rx, std::vector<std::string>{"X"}));
  const ComplexMatrix wx = relating_unitary(a, b, kept);
  CHECK(unitarity_error(wx) <= 1e-10);
  CHECK((apply_local(wx, flat, rx, std::vector<std::string>{"X"}) - b.amplitudes).norm() <= 1e-9);

  const StateVector other(psi.layout, kron(ComplexVector(ket(3, 0)), ComplexVector(ket(3, 0))));
  CHECK_THROWS_AS(relating_unitary(psi, other, kept), Error);
}

TEST_CASE("relating_unitary on random purifications") {
  Rng rng(7);
  const SystemLayout layout{{"K", 3}, {"P", 2}, {"Q", 2}};
  const std::vector<std::string> kept{"K"};
  const std::vector<std::string> rest{"P", "Q"};
  for (int i = 0; i < 20; ++i) {
    const StateVector s = random_state(layout, rng);
    const ComplexMatrix u = haar_random_unitary(4, rng);
    const StateVector t(layout, apply_local(u, s.amplitudes, layout, rest));
    const ComplexMatrix w = relating_unitary(s, t, kept);
    CHECK(unitarity_error(w) <= 1e-10);
    CHECK((apply_local(w, s.amplitudes, layout, rest) - t.amplitudes).norm() <= 1e-9);
  }
}

TEST_CASE("haar_random_unitary") {
  const ComplexMatrix u = haar_random_unitary(4, std::uint64_t{11});
  CHECK(unitarity_error(u) <= 1e-12);
  CHECK(max_abs(u - haar_random_unitary(4, std::uint64_t{11})) == 0.0);
  CHECK(max_abs(u - haar_random_unitary(4, std::uint64_t{12})) > 0.0);

  Rng rng(13);
  ComplexMatrix mean = ComplexMatrix::Zero(2, 2);
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    const ComplexVector c = haar_random_unitary(2, rng).col(0);
    mean += c * c.adjoint();
  }
  mean /= static_cast<double>(n);
  CHECK(max_abs(mean - 0.5 * ComplexMatrix::Identity(2, 2)) <= 5e-2);
}

TEST_CASE("schmidt") {
  Rng rng(8);
  const SystemLayout ab{{"a", 2}, {"b", 3}};
  const std::vector<std::string> cut{"a"};
  const StateVector product(ab, kron(haar_random_vector(2, rng), haar_random_vector(3, rng)));
  CHECK(schmidt(product, cut).coefficients.size() == 1);

  const StateVector phi = max_entangled(2);
  const auto s = schmidt(phi, std::vector<std::string>{"R"});
  REQUIRE(s.coefficients.size() == 2);
  CHECK(std::abs(s.coefficients(0) - 0.5) <= 1e-15);
  CHECK(std::abs(s.coefficients(1) - 0.5) <= 1e-15);

  for (int i = 0; i < 20; ++i) {
    const StateVector psi = random_state(ab, rng);
    const auto d = schmidt(psi, cut);
    CHECK(std::abs(d.coefficients.sum() - 1.0) <= 1e-12);
    ComplexVector rebuilt = ComplexVector::Zero(6);
    for (long k = 0; k < d.coefficients.size(); ++k) {
      rebuilt += std::sqrt(d.coefficients(k)) * kron(ComplexVector(d.left.col(k)), ComplexVector(d.right.col(k)));
    }
    CHECK((rebuilt - psi.amplitudes).norm() <= 1e-12);
  }
}

TEST_CASE("layout validation") {
  CHECK_THROWS_AS(SystemLayout({{"a", 2}, {"a", 2}}), Error);
  CHECK_THROWS_AS(SystemLayout({{"a", 0}}), Error);
  const SystemLayout l{{"a", 2}, {"b", 3}};
  CHECK(l.total_dim() == 6);
  CHECK_THROWS_AS(l.index_of("c"), Error);
  CHECK(l.complement(std::vector<std::string>{"a"}) == std::vector<std::string>{"b"});
}
