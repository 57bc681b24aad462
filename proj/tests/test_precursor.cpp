#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "qlocality/error.hpp"
#include "qlocality/precursor.hpp"

using namespace qloc;
using namespace qloc::test;

TEST_CASE("context_dim") {
  CHECK(context_dim(example_channel("trace_C", layout2(2, 3))) == 3);
  CHECK(context_dim(example_channel("trace_C", layout3(3, 2, 2))) == 4);
  Rng rng(1);
  const KrausMap odd = random_channel(SystemLayout{{"i", 3}}, SystemLayout{{"o", 2}}, 2, rng);
  CHECK_THROWS_AS(context_dim(odd), Error);
}

TEST_CASE("partial trace precursors") {
  const KrausMap f = example_channel("trace_C", layout2(2, 2));
  const Subspace s0 = precursor_subspace(f, ket(2, 0));
  CHECK(s0.dim() == 2);
  Subspace want{4, ComplexMatrix::Zero(4, 2)};
  want.basis(0, 0) = 1.0;
  want.basis(1, 1) = 1.0;
  CHECK(subspace_distance(s0, want) <= 1e-12);
  CHECK(is_precursor(f, ket(4, 1), ket(2, 0)));
  CHECK_FALSE(is_precursor(f, ket(4, 2), ket(2, 0)));
  CHECK(check_udc(f).passed);
}

TEST_CASE("constant and dephased maps violate the dimension condition") {
  const KrausMap c = example_channel("constant_AC(0)", layout2(2, 2));
  CHECK(precursor_subspace(c, ket(2, 0)).dim() == 4);
  CHECK(precursor_subspace(c, ket(2, 1)).dim() == 0);
  CHECK_FALSE(check_udc(c).passed);

  const KrausMap d = example_channel("dephased_trace_C", layout2(2, 2));
  ComplexVector plus = ComplexVector::Constant(2, Complex(1.0 / std::sqrt(2.0)));
  CHECK(precursor_subspace(d, ket(2, 0)).dim() == 2);
  CHECK(precursor_subspace(d, plus).dim() == 0);
  const UdcReport r = check_udc(d);
  CHECK_FALSE(r.passed);
  CHECK(r.expected_dim == 2);

  try {
    precursor_frame(d);
    FAIL("expected UdcViolation");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::UdcViolation);
    CHECK(std::string(e.what()).find("uniform superposition") != std::string::npos);
  }
}

TEST_CASE("precursor vectors map to the pure output") {
  const KrausMap f = example_channel("autonomous(3)", layout2(2, 3));
  Rng rng(31);
  for (int i = 0; i < 10; ++i) {
    const ComplexVector psi = haar_random_vector(2, rng);
    const Subspace s = precursor_subspace(f, psi);
    REQUIRE(s.dim() == 3);
    const ComplexVector phi = s.basis * haar_random_vector(3, rng);
    CHECK(is_precursor(f, phi, psi, 1e-9));
  }
  CHECK(check_udc(f).passed);
}

TEST_CASE("precursor frame invariants") {
  for (const auto& l : {layout2(2, 2), layout2(2, 3), layout2(3, 2), layout3(3, 3, 3)}) {
    const KrausMap f = example_channel("autonomous(21)", l);
    const PrecursorFrame frame = precursor_frame(f);
    CHECK(frame.subspaces.size() == static_cast<std::size_t>(frame.dc));
    CHECK(frame.coefficient_error <= 1e-9);
    CHECK(frame.decomposition_error <= 1e-9);
    for (const auto& t : frame.subspaces) CHECK(t.dim() == frame.da);

    const FrameDiagnostics dg = diagnose_frame(f, frame, 5);
    CHECK(dg.total_dim == f.in_dim());
    CHECK(dg.max_cross_overlap <= 1e-9);
    CHECK(dg.completeness_error <= 1e-9);
    CHECK(dg.max_intersection_defect == 0);
    CHECK(dg.min_purity >= 1.0 - 1e-9);
    CHECK(dg.min_entangled_purity >= 1.0 - 1e-9);
  }
}

TEST_CASE("frame basis vectors are precursors of the computational basis") {
  const KrausMap f = example_channel("trace_C", layout2(3, 2));
  const PrecursorFrame frame = precursor_frame(f);
  for (const auto& b : frame.bases) {
    for (long k = 0; k < 3; ++k) CHECK(is_precursor(f, b.col(k), ket(3, k)));
  }
}

TEST_CASE("fidelity between precursors never exceeds output fidelity") {
  for (const char* name : {"autonomous(4)", "random_local(4)", "trace_C", "dephased_trace_C"}) {
    const FidelityReport r = fidelity_monotonicity_check(example_channel(name, layout2(2, 2)), 30, 9);
    CHECK_MESSAGE(r.passed, name);
    // A generic local map has no pure outputs, hence no precursors at all.
    CHECK((r.orthogonal_pairs_checked > 0) == (std::string(name) != "random_local(4)"));
  }
  const FidelityReport a = fidelity_monotonicity_check(example_channel("autonomous(4)", layout2(2, 2)), 30, 9);
  CHECK(a.pairs_checked == 30);
}
