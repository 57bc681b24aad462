#include <doctest.h>

#include "helpers.hpp"
#include "qlocality/autonomy.hpp"
#include "qlocality/error.hpp"

using namespace qloc;
using namespace qloc::test;

TEST_CASE("reference output") {
  const KrausMap f = example_channel("trace_C", layout2(2, 2));
  const ComplexMatrix ref = reference_output(f);
  CHECK(std::abs(ref.trace() - Complex(1.0)) <= 1e-12);
  CHECK(orc_rank(f) == 2);
  CHECK(orc_rank(example_channel("constant_AC(0)", layout2(2, 2))) == 4);
}

TEST_CASE("rank lower bound holds for every map") {
  for (int s = 0; s < 10; ++s) {
    const auto l = s % 2 ? layout2(2, 3) : layout2(3, 2);
    for (const std::string name : {"autonomous", "random_local"}) {
      const KrausMap f = example_channel(name + "(" + std::to_string(s) + ")", l);
      CHECK(rank_lower_bound_check(f));
      CHECK(orc_rank(f) >= context_dim(f));
    }
  }
}

TEST_CASE("autonomous maps are certified with a unitary") {
  for (const auto& l : {layout2(2, 2), layout2(2, 3), layout2(3, 2)}) {
    const KrausMap f = example_channel("autonomous(12)", l);
    const AutonomyCertificate c = check_autonomous(f);
    CHECK(c.verdict);
    CHECK_FALSE(c.inconclusive);
    CHECK(c.orc_rank == c.dc);
    REQUIRE(c.unitary.has_value());
    CHECK(unitarity_error(*c.unitary) <= 1e-10);
    CHECK(c.reconstruction_error <= 1e-9);
    CHECK(choi_distance(autonomous_channel(*c.unitary, f.in_layout(), f.out_layout()), f) <= 1e-9);
  }
}

TEST_CASE("unitary is recovered up to a context gauge") {
  Rng rng(41);
  const SystemLayout l = layout2(2, 3);
  const ComplexMatrix u = haar_random_unitary(6, rng);
  const ComplexMatrix uc = haar_random_unitary(3, rng);
  const ComplexMatrix gauged = kron(eye(2), uc) * u;
  const KrausMap f = autonomous_channel(u, l, SystemLayout{{"q0", 2}});
  CHECK(choi_distance(f, autonomous_channel(gauged, l, SystemLayout{{"q0", 2}})) <= 1e-12);

  const AutonomyCertificate c = check_autonomous(f);
  REQUIRE(c.unitary.has_value());
  // U_found U^dagger must be 1_A (x) u for some unitary u on C.
  const ComplexMatrix rel = *c.unitary * u.adjoint();
  ComplexMatrix block = rel.block(0, 0, 3, 3);
  CHECK(max_abs(rel - kron(eye(2), block)) <= 1e-8);
  CHECK(unitarity_error(block) <= 1e-8);
}

TEST_CASE("non-autonomous maps are rejected") {
  for (const char* name : {"random_local(5)", "constant_AC(1)", "dephased_trace_C"}) {
    const AutonomyCertificate c = check_autonomous(example_channel(name, layout2(2, 2)));
    CHECK_FALSE_MESSAGE(c.verdict, name);
    CHECK(c.orc_rank > c.dc);
  }
}

TEST_CASE("three characterizations agree") {
  for (int s = 0; s < 8; ++s) {
    const auto l = s % 2 ? layout2(2, 2) : layout2(3, 2);
    for (const std::string name : {"autonomous", "random_local"}) {
      const KrausMap f = example_channel(name + "(" + std::to_string(s) + ")", l);
      const EquivalenceSuiteReport r = equivalence_suite(f, kDefaultTol, s);
      CHECK_MESSAGE(r.agree(), name);
      CHECK(r.orc == (name == "autonomous"));
    }
  }
  for (const char* name : {"trace_C", "dephased_trace_C", "constant_AC(0)"}) {
    const EquivalenceSuiteReport r = equivalence_suite(example_channel(name, layout2(2, 2)));
    CHECK_MESSAGE(r.agree(), name);
  }
}
