#pragma once

// Trace-preserving CP maps between labelled layouts in Kraus, Choi and
// Stinespring form, plus the corpus of named example channels.

#include <cstdint>
#include <string>
#include <vector>

#include "qlocality/tensor_core.hpp"

namespace qloc {

/// Tolerance used when a KrausMap is constructed: sum A^dagger A must equal
/// the identity to this level (max-entry).
inline constexpr double kTraceTol = 1e-8;

class KrausMap {
 public:
  KrausMap() = default;
  /// Throws DimensionMismatch on bad shapes and NotTracePreserving when
  /// sum A^dagger A deviates from identity by more than kTraceTol.
  KrausMap(SystemLayout in, SystemLayout out, std::vector<ComplexMatrix> ops);

  const SystemLayout& in_layout() const { return in_; }
  const SystemLayout& out_layout() const { return out_; }
  const std::vector<ComplexMatrix>& ops() const { return ops_; }
  long in_dim() const { return in_.total_dim(); }
  long out_dim() const { return out_.total_dim(); }
  bool is_endomorphic() const { return in_ == out_; }

  /// ||sum A^dagger A - I||_max.
  double trace_preservation_error() const;

 private:
  SystemLayout in_;
  SystemLayout out_;
  std::vector<ComplexMatrix> ops_;
};

/// Unnormalized Choi matrix J = sum_ij E(|i><j|) (x) |i><j| on out (x) in.
struct ChoiMatrix {
  SystemLayout in_layout;
  SystemLayout out_layout;
  ComplexMatrix matrix;

  /// Combined layout out (x) in; input labels get a trailing "'" when they
  /// clash with output labels.
  SystemLayout joint_layout() const;
};

/// E(s) = Tr_Eout U (s (x) |0><0|_Ein) U^dagger, with U square on
/// in (x) Ein = out (x) Eout.
struct StinespringRep {
  SystemLayout in_layout;
  SystemLayout out_layout;
  long env_dim = 1;     // output-side environment, >= channel rank
  long env_in_dim = 1;  // input-side environment; equals env_dim when in = out
  long env_init = 0;
  ComplexMatrix unitary;
};

DensityMatrix apply(const KrausMap& map, const DensityMatrix& state);
ComplexMatrix apply(const KrausMap& map, const ComplexMatrix& rho);

ChoiMatrix kraus_to_choi(const KrausMap& map);
/// Kraus operators from the eigendecomposition of J, descending eigenvalue,
/// each operator phase-fixed. Throws NotPSD / NotTracePreserving.
KrausMap choi_to_kraus(const ChoiMatrix& j, double tol = kDefaultTol);
/// E(rho) = Tr_in[J (1 (x) rho^T)], independent of any Kraus form.
ComplexMatrix apply_choi(const ChoiMatrix& j, const ComplexMatrix& rho);
double choi_distance(const KrausMap& a, const KrausMap& b);

StinespringRep stinespring_dilate(const KrausMap& map);
/// Dilation with a prescribed input-side environment. The output-side
/// environment is in_dim * env_in / out_dim and must hold the channel rank.
StinespringRep stinespring_dilate(const KrausMap& map, long env_in_dim);
KrausMap stinespring_to_kraus(const StinespringRep& rep);

long channel_rank(const KrausMap& map, double tol = kDefaultTol);

/// f after g.
KrausMap compose(const KrausMap& f, const KrausMap& g);
KrausMap tensor(const KrausMap& f, const KrausMap& g);
/// Conjugates every Kraus operator by the subsystem permutation (in and out).
KrausMap permute_channel(const KrausMap& e, std::span<const std::size_t> perm);
/// Mixes Kraus operators with an isometry on the Kraus index
/// (count >= ops.size()); the channel is unchanged.
KrausMap remix_kraus(const KrausMap& e, long count, Rng& rng);

// ---------------------------------------------------------------------------
// Constructors.

KrausMap identity_channel(const SystemLayout& layout);
KrausMap unitary_channel(const ComplexMatrix& u, const SystemLayout& layout);
/// Channel keeping `keep` (layout order) and tracing the rest.
KrausMap partial_trace_channel(const SystemLayout& layout,
                               std::span<const std::string> keep);
/// Every input goes to |k><k| on `out`.
KrausMap constant_channel(const SystemLayout& in, const SystemLayout& out, long k);
/// Complete dephasing of `target` in the computational basis.
KrausMap dephasing_channel(const SystemLayout& layout, const std::string& target);
/// Generalized CNOT: |c>|t> -> |c>|t + c mod d_t>.
KrausMap cnot_channel(const SystemLayout& layout, const std::string& control,
                      const std::string& target);
KrausMap swap_channel(const SystemLayout& layout, const std::string& a,
                      const std::string& b);
/// Kraus A_{k,j} = P_k^a (x) |k mod d_b><j|_b, identity elsewhere.
KrausMap measure_write_channel(const SystemLayout& layout, const std::string& a,
                               const std::string& b);
/// Fully depolarizing channel on the whole layout.
KrausMap depolarizing_channel(const SystemLayout& layout);
/// Random channel from a Haar isometry in -> out (x) K.
KrausMap random_channel(const SystemLayout& in, const SystemLayout& out,
                        long kraus_count, Rng& rng);

/// Named corpus channel. Names (dims are taken from `layout`; roles follow
/// layout order A, B, C):
///   identity, constant(k), dephasing, depolarizing, swap_AB,
///   cnot(control,target), measure_write_AB, random_semicausal(seed),
///   random_semicausal_cp(seed), product_local(seed), random(seed)
/// and maps AC -> A on a two-system layout (A, C):
///   trace_C, autonomous(seed), dephased_trace_C, constant_AC(k),
///   random_local(seed).
KrausMap example_channel(const std::string& name, const SystemLayout& layout);
std::vector<std::string> example_channel_names();

}  // namespace qloc
