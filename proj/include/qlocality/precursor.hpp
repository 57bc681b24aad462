#pragma once

// Precursor subspaces of a map F: AC -> A, the uniform dimension condition
// and the frame T_1..T_dC that cuts across them.

#include <cstdint>
#include <vector>

#include "qlocality/channels.hpp"

namespace qloc {

/// d_C = in_dim / out_dim for a map AC -> A; throws DimensionMismatch when
/// the output is not a tensor factor by dimension.
long context_dim(const KrausMap& f);

/// True iff ||f(|phi><phi|) - |psi><psi|||_F <= tol (both normalized).
bool is_precursor(const KrausMap& f, const ComplexVector& phi, const ComplexVector& psi,
                  double tol = kDefaultTol);

/// S_psi: null space of the stacked (1 - |psi><psi|) A_mu.
Subspace precursor_subspace(const KrausMap& f, const ComplexVector& psi,
                            double tol = kDefaultTol);

struct UdcEntry {
  ComplexVector probe;
  long dim = 0;
};

struct UdcReport {
  bool passed = false;
  long expected_dim = 0;  // d_C
  std::vector<UdcEntry> entries;
};

/// Operator-basis states of the output space followed by `random_count`
/// seeded Haar states.
std::vector<ComplexVector> default_udc_probes(long d_out, std::uint64_t seed = 0,
                                              long random_count = 20);

UdcReport check_udc(const KrausMap& f, const std::vector<ComplexVector>& probes,
                    double tol = kDefaultTol);
UdcReport check_udc(const KrausMap& f, double tol = kDefaultTol);

struct PrecursorFrame {
  long da = 0, dc = 0;
  std::vector<Subspace> subspaces;   // T_n, each of dimension d_A
  std::vector<ComplexMatrix> bases;  // bases[n].col(k) = Upsilon_nk, a precursor of |k>
  double coefficient_error = 0.0;    // max |a_k - 1/sqrt(d_A)| over all stages
  double decomposition_error = 0.0;  // max ||phi - sum_k a_k phi_k|| over all stages
};

/// Recursive construction over orthocomplements. Throws UdcViolation when a
/// stage finds dim S_k != d_C - n.
PrecursorFrame precursor_frame(const KrausMap& f, double tol = kDefaultTol);

struct FrameDiagnostics {
  double max_cross_overlap = 0.0;   // between distinct T_n
  double completeness_error = 0.0;  // ||B^dagger B - 1||_max for all Upsilon
  long total_dim = 0;
  long max_intersection_defect = 0;  // max |dim(T_n ∩ S_k) - 1|
  double min_purity = 1.0;           // f on random unit vectors of T_n
  double min_entangled_purity = 1.0;  // (1 (x) f) on random R (x) T_n inputs
};

FrameDiagnostics diagnose_frame(const KrausMap& f, const PrecursorFrame& frame,
                                std::uint64_t seed, long samples = 5);

struct FidelityReport {
  long pairs_checked = 0;
  long orthogonal_pairs_checked = 0;
  double min_slack = 0.0;  // min of |<psi|psi'>|^2 - |<phi|phi'>|^2
  double max_orthogonal_overlap = 0.0;
  bool passed = false;
};

/// Samples precursor pairs (phi, psi), (phi', psi') and orthogonal output
/// pairs; passes when slack >= -tol and orthogonal overlaps <= tol.
FidelityReport fidelity_monotonicity_check(const KrausMap& f, long pairs,
                                           std::uint64_t seed, double tol = 1e-10);

}  // namespace qloc
