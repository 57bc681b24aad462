#pragma once

// Autonomy of a map F: AC -> A. The input layout lists the A systems first
// and then C, so input index = a * d_C + c.

#include <cstdint>
#include <optional>

#include "qlocality/channels.hpp"
#include "qlocality/precursor.hpp"

namespace qloc {

/// rho^{RA} = (1_R (x) F)(|Psi><Psi|) with |Psi> maximally entangled between
/// R (dimension d_A d_C) and AC. Ordered A then R.
ComplexMatrix reference_output(const KrausMap& f);

/// Numerical rank of rho^{RA}.
long orc_rank(const KrausMap& f, double tol = kDefaultTol);

/// orc_rank(f) >= d_C.
bool rank_lower_bound_check(const KrausMap& f, double tol = kDefaultTol);

struct AutonomyCertificate {
  bool verdict = false;
  bool inconclusive = false;  // an eigenvalue of rho^{RA} lies within 10x of the rank threshold
  long orc_rank = 0;
  long dc = 0;
  std::optional<ComplexMatrix> unitary;  // U on AC, up to (1_A (x) u_C) on the left
  /// Choi distance between F and s -> Tr_C U s U^dagger; infinite when no U was formed.
  double reconstruction_error = 0.0;
};

AutonomyCertificate check_autonomous(const KrausMap& f, double tol = kDefaultTol);

/// The map s -> Tr_C U s U^dagger on the layouts of f.
KrausMap autonomous_channel(const ComplexMatrix& u, const SystemLayout& in,
                            const SystemLayout& out);

struct EquivalenceSuiteReport {
  AutonomyCertificate autonomy;
  UdcReport udc;
  bool orc = false;

  bool agree() const { return autonomy.verdict == udc.passed && udc.passed == orc; }
};

EquivalenceSuiteReport equivalence_suite(const KrausMap& f, double tol = kDefaultTol,
                                         std::uint64_t seed = 0);

}  // namespace qloc
