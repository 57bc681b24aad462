#pragma once

// Sequential structure of semicausal operations: A and C interact first,
// then B and C.

#include "qlocality/autonomy.hpp"
#include "qlocality/locality.hpp"

namespace qloc {

/// w with x = w (x) 1 on `factor` (after reordering). w acts on the
/// complement of `factor` in layout order. Throws NotFactorizable with the
/// Frobenius deviation attached.
ComplexMatrix tensor_factor_unitary(const ComplexMatrix& x, const SystemLayout& layout,
                                    std::span<const std::string> factor,
                                    double tol = kDefaultTol);

/// U = (W^{BC} (x) 1_A)(1_B (x) V^{AC}) in canonical order A, B, C.
struct UnitaryDecomposition {
  ComplexMatrix v;
  SystemLayout v_layout;  // A then C
  ComplexMatrix w;
  SystemLayout w_layout;  // B then C
  SystemLayout canonical_layout;
  double residual = 0.0;  // phase-invariant Frobenius distance to U
};

UnitaryDecomposition decompose_semicausal_unitary(const ComplexMatrix& u,
                                                  const SystemLayout& layout,
                                                  const Partition& p,
                                                  double tol = kDefaultTol);

/// e = (1_A (x) F^{BC}) o (1_B (x) V^{AC}).
struct AutonomousDecomposition {
  ComplexMatrix v;
  SystemLayout v_layout;  // A then C
  KrausMap f_bc;          // on B then C
  SystemLayout canonical_layout;
  double factorization_deviation = 0.0;
  double residual = 0.0;  // Choi distance of the recomposed channel
};

AutonomousDecomposition decompose_autonomous_cp(const KrausMap& e, const Partition& p,
                                                double tol = kDefaultTol);

/// e(s) = Tr_E W V (s (x) |0><0|_E) V^dagger W^dagger with V on (A, C, E)
/// and W on (B, C, E).
struct SequentialDilation {
  long env_dim = 1;
  long env_init = 0;
  ComplexMatrix v;
  SystemLayout v_layout;
  ComplexMatrix w;
  SystemLayout w_layout;
  SystemLayout canonical_layout;
  double residual = 0.0;              // Choi distance, V then W
  double wrong_order_residual = 0.0;  // Choi distance, W then V
};

SequentialDilation semilocalize(const KrausMap& e, const Partition& p,
                                double tol = kDefaultTol);

/// Channel of the sequential unitary T on (A, B, C, E) with E starting in |0>.
KrausMap sequential_channel(const ComplexMatrix& t, const SystemLayout& system,
                            long env_dim);

}  // namespace qloc
