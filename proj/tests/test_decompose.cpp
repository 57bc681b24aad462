#include <doctest.h>

#include "helpers.hpp"
#include "qlocality/decompose.hpp"
#include "qlocality/error.hpp"

using namespace qloc;
using namespace qloc::test;

namespace {

const Partition kAbc = Partition::parse("A=q0;B=q1;C=q2");

}  // namespace

TEST_CASE("tensor_factor_unitary") {
  Rng rng(51);
  const SystemLayout l = layout3(2, 3, 2);
  const ComplexMatrix w = haar_random_unitary(6, rng);  // on q1, q2
  const ComplexMatrix x = embed_operator(w, l, std::vector<std::string>{"q1", "q2"});
  const std::vector<std::string> factor{"q0"};
  const ComplexMatrix got = tensor_factor_unitary(x, l, factor);
  CHECK(phase_invariant_distance(got, w) <= 1e-10);

  const ComplexMatrix y = haar_random_unitary(12, rng);
  try {
    tensor_factor_unitary(y, l, factor);
    FAIL("expected NotFactorizable");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotFactorizable);
    REQUIRE(e.residual().has_value());
    CHECK(*e.residual() > 0.1);
  }

  const SystemLayout ab{{"a", 2}, {"b", 2}};
  const std::vector<std::string> target{"b"};
  try {
    tensor_factor_unitary(example_channel("cnot(0,1)", ab).ops()[0], ab, target);
    FAIL("expected NotFactorizable");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotFactorizable);
    CHECK(e.residual().value_or(0.0) > 0.5);
  }
}

TEST_CASE("semicausal unitaries split into V then W") {
  for (const auto& l : {layout3(2, 2, 2), layout3(2, 3, 2), layout3(3, 2, 2)}) {
    const KrausMap e = example_channel("random_semicausal(17)", l);
    const ComplexMatrix u = e.ops()[0];
    const UnitaryDecomposition d = decompose_semicausal_unitary(u, l, kAbc);
    CHECK(d.residual <= 1e-9);
    CHECK(unitarity_error(d.v) <= 1e-10);
    CHECK(unitarity_error(d.w) <= 1e-10);
    const ComplexMatrix rebuilt = embed_operator(d.w, d.canonical_layout, d.w_layout.labels()) *
                                  embed_operator(d.v, d.canonical_layout, d.v_layout.labels());
    CHECK(phase_invariant_distance(rebuilt, u) <= 1e-9);
  }
}

TEST_CASE("V is fixed up to a context gauge") {
  Rng rng(52);
  const SystemLayout l = layout3(2, 2, 3);
  const ComplexMatrix v = haar_random_unitary(6, rng);   // q0, q2
  const ComplexMatrix w = haar_random_unitary(6, rng);   // q1, q2
  const ComplexMatrix uc = haar_random_unitary(3, rng);
  const ComplexMatrix v2 = kron(eye(2), uc) * v;
  const ComplexMatrix w2 = w * kron(eye(2), ComplexMatrix(uc.adjoint()));
  const std::vector<std::string> ac{"q0", "q2"};
  const std::vector<std::string> bc{"q1", "q2"};
  const ComplexMatrix u = embed_operator(w, l, bc) * embed_operator(v, l, ac);
  CHECK(max_abs(u - embed_operator(w2, l, bc) * embed_operator(v2, l, ac)) <= 1e-12);

  const UnitaryDecomposition d = decompose_semicausal_unitary(u, l, kAbc);
  CHECK(d.residual <= 1e-9);
  const std::vector<std::string> a{"q0"};
  const ComplexMatrix rel = d.v * v.adjoint();
  CHECK_NOTHROW(tensor_factor_unitary(rel, d.v_layout, a, 1e-8));
}

TEST_CASE("non-semicausal input is rejected") {
  const SystemLayout l = layout3(2, 2, 2);
  const ComplexMatrix swap = example_channel("swap_AB", l).ops()[0];
  try {
    decompose_semicausal_unitary(swap, l, kAbc);
    FAIL("expected NotSemicausal");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotSemicausal);
    CHECK(e.residual().value_or(0.0) > 0.1);
  }
  const ComplexMatrix ident = eye(8);
  CHECK(decompose_semicausal_unitary(ident, l, kAbc).residual <= 1e-12);
}

TEST_CASE("autonomous CP decomposition") {
  for (const auto& l : {layout3(2, 2, 2), layout3(2, 3, 2), layout3(3, 2, 2)}) {
    const KrausMap e = example_channel("random_semicausal_cp(23)", l);
    const AutonomousDecomposition d = decompose_autonomous_cp(e, kAbc);
    CHECK(d.residual <= 1e-9);
    CHECK(d.factorization_deviation <= 1e-8);
    CHECK(unitarity_error(d.v) <= 1e-10);
    CHECK(d.f_bc.trace_preservation_error() <= 1e-10);
  }
}

TEST_CASE("measure-and-write has a non-autonomous local map") {
  const SystemLayout l = layout3(2, 2, 2);
  try {
    decompose_autonomous_cp(example_channel("measure_write_AB", l), kAbc);
    FAIL("expected LocalMapNotAutonomous");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::LocalMapNotAutonomous);
  }
}

TEST_CASE("semilocalization of semicausal channels") {
  const SystemLayout l = layout3(2, 2, 2);
  for (const char* name : {"measure_write_AB", "random_semicausal_cp(4)", "random_semicausal(4)",
                           "product_local(4)", "dephasing"}) {
    const KrausMap e = example_channel(name, l);
    const SequentialDilation s = semilocalize(e, kAbc);
    CHECK_MESSAGE(s.residual <= 1e-8, name);
    CHECK(unitarity_error(s.v) <= 1e-10);
    CHECK(unitarity_error(s.w) <= 1e-10);

    // Independent recomposition from the returned factors.
    const std::string env = s.v_layout.labels().back();
    const SystemLayout full = s.canonical_layout.concat(SystemLayout{{env, static_cast<int>(s.env_dim)}});
    const ComplexMatrix t = embed_operator(s.w, full, s.w_layout.labels()) *
                            embed_operator(s.v, full, s.v_layout.labels());
    CHECK(choi_distance(sequential_channel(t, s.canonical_layout, s.env_dim), e) <= 1e-8);
  }
  const SequentialDilation mw = semilocalize(example_channel("measure_write_AB", l), kAbc);
  CHECK(mw.wrong_order_residual > 0.1);
  CHECK_THROWS_AS(semilocalize(example_channel("swap_AB", l), kAbc), Error);
}
