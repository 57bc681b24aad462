#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "qlocality/channels.hpp"
#include "qlocality/error.hpp"

using namespace qloc;
using namespace qloc::test;

namespace {

KrausMap pauli_depolarizing() {
  const SystemLayout q{{"q", 2}};
  return KrausMap(q, q, {0.5 * ComplexMatrix::Identity(2, 2), 0.5 * pauli_x(), 0.5 * pauli_y(), 0.5 * pauli_z()});
}

KrausMap qubit_dephasing() {
  const SystemLayout q{{"q", 2}};
  return KrausMap(q, q, {std::sqrt(0.5) * ComplexMatrix::Identity(2, 2), std::sqrt(0.5) * pauli_z()});
}

}  // namespace

TEST_CASE("KrausMap validation") {
  const SystemLayout q{{"q", 2}};
  CHECK_THROWS_AS(KrausMap(q, q, {ComplexMatrix::Identity(2, 2), ComplexMatrix::Identity(2, 2)}), Error);
  CHECK_THROWS_AS(KrausMap(q, q, {ComplexMatrix::Identity(3, 3)}), Error);
  CHECK_THROWS_AS(KrausMap(q, q, {}), Error);
}

TEST_CASE("apply") {
  Rng rng(1);
  const SystemLayout q{{"q", 3}};
  const DensityMatrix rho = random_density(q, rng);
  CHECK(max_abs(qloc::apply(identity_channel(q), rho).matrix - rho.matrix) <= 1e-15);

  const SystemLayout qubit{{"q", 2}};
  const KrausMap constant = example_channel("constant(0)", qubit);
  const ComplexMatrix out = qloc::apply(constant, ComplexMatrix(ket(2, 1) * ket(2, 1).adjoint()));
  CHECK(max_abs(out - ket(2, 0) * ket(2, 0).adjoint()) <= 1e-15);

  // Choi contraction oracle for a channel between different layouts.
  const KrausMap f = random_channel(SystemLayout{{"i", 3}}, SystemLayout{{"o", 2}}, 3, rng);
  const ChoiMatrix j = kraus_to_choi(f);
  for (int k = 0; k < 10; ++k) {
    const ComplexMatrix s = random_density(SystemLayout{{"i", 3}}, rng).matrix;
    ComplexMatrix oracle = ComplexMatrix::Zero(2, 2);
    for (int o = 0; o < 2; ++o)
      for (int p = 0; p < 2; ++p)
        for (int i = 0; i < 3; ++i)
          for (int l = 0; l < 3; ++l) oracle(o, p) += j.matrix(o * 3 + i, p * 3 + l) * s(i, l);
    CHECK(max_abs(qloc::apply(f, s) - oracle) <= 1e-11);
    CHECK(max_abs(apply_choi(j, s) - oracle) <= 1e-11);
  }
}

TEST_CASE("kraus_to_choi") {
  const SystemLayout q{{"q", 2}};
  const ComplexMatrix jid = kraus_to_choi(identity_channel(q)).matrix;
  ComplexMatrix want = ComplexMatrix::Zero(4, 4);
  want(0, 0) = want(0, 3) = want(3, 0) = want(3, 3) = 1.0;
  CHECK(max_abs(jid - want) == 0.0);

  const SystemLayout two{{"a", 2}, {"b", 2}};
  const KrausMap trace = partial_trace_channel(two, std::vector<std::string>{});
  CHECK(trace.out_dim() == 1);
  CHECK(max_abs(kraus_to_choi(trace).matrix - ComplexMatrix::Identity(4, 4)) <= 1e-15);

  CHECK(max_abs(kraus_to_choi(pauli_depolarizing()).matrix - 0.5 * ComplexMatrix::Identity(4, 4)) <= 1e-15);
  CHECK(max_abs(kraus_to_choi(depolarizing_channel(q)).matrix - 0.5 * ComplexMatrix::Identity(4, 4)) <= 1e-15);
}

TEST_CASE("choi_to_kraus") {
  Rng rng(2);
  const SystemLayout q{{"q", 3}};
  const KrausMap u = unitary_channel(haar_random_unitary(3, rng), q);
  CHECK(choi_to_kraus(kraus_to_choi(u)).ops().size() == 1);

  CHECK(choi_to_kraus(ChoiMatrix{SystemLayout{{"q", 2}}, SystemLayout{{"q", 2}},
                                 0.5 * ComplexMatrix::Identity(4, 4)})
            .ops()
            .size() == 4);

  const KrausMap f = random_channel(q, SystemLayout{{"o", 2}}, 4, rng);
  const ChoiMatrix j = kraus_to_choi(f);
  const KrausMap back = choi_to_kraus(j);
  CHECK((kraus_to_choi(back).matrix - j.matrix).norm() <= 1e-10);
  for (const auto& a : back.ops()) {
    Eigen::Index r, c;
    a.cwiseAbs().maxCoeff(&r, &c);
    CHECK(std::abs(a(r, c).imag()) <= 1e-12);
    CHECK(a(r, c).real() > 0.0);
  }

  ChoiMatrix bad = j;
  bad.matrix *= 1.5;
  CHECK_THROWS_AS(choi_to_kraus(bad), Error);
  ChoiMatrix neg{SystemLayout{{"q", 2}}, SystemLayout{{"q", 2}}, kraus_to_choi(identity_channel(SystemLayout{{"q", 2}})).matrix};
  neg.matrix(1, 1) = -0.5;
  neg.matrix(2, 2) = 0.5;
  try {
    choi_to_kraus(neg);
    FAIL("expected an exception");
  } catch (const Error& e) {
    CHECK(e.kind() != ErrorKind::InvalidInput);
  }
}

TEST_CASE("stinespring_dilate") {
  Rng rng(3);
  const SystemLayout q{{"q", 3}};
  const ComplexMatrix u = haar_random_unitary(3, rng);
  const StinespringRep rep = stinespring_dilate(unitary_channel(u, q));
  CHECK(rep.env_dim == 1);
  CHECK(max_abs(rep.unitary - u) <= 1e-15);

  const KrausMap deph = qubit_dephasing();
  const StinespringRep drep = stinespring_dilate(deph);
  CHECK(drep.env_dim == 2);
  CHECK(unitarity_error(drep.unitary) <= 1e-12);
  CHECK(choi_distance(stinespring_to_kraus(drep), deph) <= 1e-10);

  const KrausMap mw = example_channel("measure_write_AB", SystemLayout{{"a", 2}, {"b", 2}});
  CHECK(stinespring_dilate(mw).env_dim == channel_rank(mw));
  CHECK(choi_distance(stinespring_to_kraus(stinespring_dilate(mw)), mw) <= 1e-10);

  // Unequal input and output: a map 3 -> 2 of rank 2.
  const KrausMap f = random_channel(q, SystemLayout{{"o", 2}}, 2, rng);
  const StinespringRep frep = stinespring_dilate(f);
  CHECK(unitarity_error(frep.unitary) <= 1e-12);
  CHECK(frep.env_dim >= channel_rank(f));
  CHECK(choi_distance(stinespring_to_kraus(frep), f) <= 1e-10);
}

TEST_CASE("channel_rank") {
  Rng rng(4);
  CHECK(channel_rank(unitary_channel(haar_random_unitary(4, rng), SystemLayout{{"q", 4}})) == 1);
  CHECK(channel_rank(qubit_dephasing()) == 2);
  CHECK(channel_rank(pauli_depolarizing()) == 4);
}

TEST_CASE("compose and tensor") {
  Rng rng(5);
  const SystemLayout a{{"a", 2}};
  const SystemLayout b{{"b", 3}};
  const KrausMap f = random_channel(a, a, 2, rng);
  CHECK(choi_distance(compose(identity_channel(a), f), f) <= 1e-12);
  CHECK(choi_distance(compose(f, identity_channel(a)), f) <= 1e-12);

  const KrausMap ii = tensor(identity_channel(a), identity_channel(SystemLayout{{"c", 2}}));
  CHECK(choi_distance(ii, identity_channel(SystemLayout{{"a", 2}, {"c", 2}})) <= 1e-15);

  const KrausMap g = random_channel(b, b, 3, rng);
  const ComplexMatrix jt = kraus_to_choi(tensor(f, g)).matrix;  // (fo go)(fi gi)
  const ComplexMatrix jk = kron(kraus_to_choi(f).matrix, kraus_to_choi(g).matrix);  // fo fi go gi
  const SystemLayout joint{{"fo", 2}, {"fi", 2}, {"go", 3}, {"gi", 3}};
  const std::vector<std::size_t> perm{0, 2, 1, 3};
  CHECK(max_abs(permute_systems(jk, joint, perm) - jt) <= 1e-11);

  CHECK_THROWS_AS(compose(f, g), Error);
}

TEST_CASE("remix_kraus keeps the channel") {
  Rng rng(6);
  const SystemLayout q{{"q", 3}};
  const KrausMap f = random_channel(q, q, 2, rng);
  const KrausMap m = remix_kraus(f, 5, rng);
  CHECK(m.ops().size() == 5);
  CHECK(choi_distance(f, m) <= 1e-12);
}

TEST_CASE("example channels") {
  const SystemLayout l{{"q0", 2}, {"q1", 3}, {"q2", 2}};
  const KrausMap mw = example_channel("measure_write_AB", l);
  CHECK(mw.trace_preservation_error() <= 1e-12);

  Rng rng(7);
  const SystemLayout q{{"q", 2}};
  const KrausMap c0 = example_channel("constant(0)", q);
  for (int i = 0; i < 5; ++i) {
    const ComplexVector v = haar_random_vector(2, rng);
    CHECK(max_abs(qloc::apply(c0, ComplexMatrix(v * v.adjoint())) - ket(2, 0) * ket(2, 0).adjoint()) <= 1e-15);
  }
  CHECK(channel_rank(example_channel("random_semicausal(3)", l)) == 1);
  CHECK(example_channel("random_semicausal(3)", l).ops().size() == 1);

  const KrausMap cnot = example_channel("cnot(0,1)", SystemLayout{{"a", 2}, {"b", 2}});
  REQUIRE(cnot.ops().size() == 1);
  CHECK(max_abs(cnot.ops()[0] * ket(4, 2) - ket(4, 3)) == 0.0);
  CHECK(max_abs(cnot.ops()[0] * ket(4, 1) - ket(4, 1)) == 0.0);

  const KrausMap swap = example_channel("swap_AB", SystemLayout{{"a", 2}, {"b", 2}});
  CHECK(max_abs(swap.ops()[0] * ket(4, 1) - ket(4, 2)) == 0.0);

  for (const std::string name :
       {"identity", "constant(1)", "dephasing", "depolarizing", "swap_AB", "cnot(1,0)",
        "measure_write_AB", "random_semicausal(4)", "random_semicausal_cp(4)",
        "product_local(4)", "random(4)", "trace_C", "autonomous(4)", "dephased_trace_C",
        "constant_AC(1)", "random_local(4)"}) {
    const KrausMap e = example_channel(name, SystemLayout{{"q0", 2}, {"q1", 2}, {"q2", 3}});
    CHECK_MESSAGE(e.trace_preservation_error() <= 1e-12, name);
  }
  CHECK(example_channel_names().size() == 16);
  CHECK_THROWS_AS(example_channel("no_such_channel", l), Error);
  CHECK_THROWS_AS(example_channel("constant(9)", q), Error);
}

TEST_CASE("channel battery: round trips and positivity") {
  Rng rng(8);
  for (int i = 0; i < 50; ++i) {
    const int din = 1 + static_cast<int>(rng.index(4));
    const int dout = 1 + static_cast<int>(rng.index(4));
    const long k = std::max<long>((din + dout - 1) / dout, 1 + rng.index(din * din));
    const KrausMap f = random_channel(SystemLayout{{"i", din}}, SystemLayout{{"o", dout}}, k, rng);
    const ChoiMatrix j = kraus_to_choi(f);
    CHECK((kraus_to_choi(choi_to_kraus(j)).matrix - j.matrix).norm() <= 1e-10);
    CHECK((kraus_to_choi(stinespring_to_kraus(stinespring_dilate(f))).matrix - j.matrix).norm() <= 1e-10);
    CHECK(channel_rank(f) <= static_cast<long>(din) * din);
    const ComplexMatrix out = qloc::apply(f, random_density(SystemLayout{{"i", din}}, rng).matrix);
    CHECK(std::abs(out.trace() - Complex(1.0)) <= 1e-11);
    CHECK(min_eigenvalue(out) >= -1e-9);
  }
}
