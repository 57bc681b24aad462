#pragma once

// B -/-> A decisions for a global channel on a layout split into roles
// A (target), B (remote) and C (context).

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qlocality/channels.hpp"

namespace qloc {

enum class Role { A, B, C };

/// Assignment of every layout label to exactly one role. Roles B and C may
/// be empty (trivial); A may not.
class Partition {
 public:
  Partition(std::vector<std::string> a, std::vector<std::string> b,
            std::vector<std::string> c);

  /// Parses `A=l1,l2;B=l3;C=l4`. Omitted roles are empty.
  static Partition parse(const std::string& expr);

  const std::vector<std::string>& a() const { return a_; }
  const std::vector<std::string>& b() const { return b_; }
  const std::vector<std::string>& c() const { return c_; }

  /// Throws InvalidArgument unless every label of `layout` is assigned once
  /// and A has dimension >= 2.
  void validate(const SystemLayout& layout) const;

  /// Labels in canonical order A..., B..., C....
  std::vector<std::string> canonical_labels() const;
  std::string to_string() const;

 private:
  std::vector<std::string> a_, b_, c_;
};

/// Channel reordered to A, B, C with the grouped role dimensions.
struct CanonicalChannel {
  KrausMap map;
  SystemLayout a_layout, b_layout, c_layout;
  long da = 1, db = 1, dc = 1;

  SystemLayout ac_layout() const { return a_layout.concat(c_layout); }
};

CanonicalChannel canonicalize(const KrausMap& e, const Partition& p);

struct SignalingWitness {
  enum class Kind { Preparation, Intervention };
  Kind kind = Kind::Preparation;
  /// Preparation kind: product input alpha (x) beta_k (x) gamma.
  ComplexVector alpha, gamma, b0, b1;
  /// Intervention kind: global pure input and the two B-interventions.
  ComplexVector global_input;
  std::string intervention0, intervention1;
  ComplexMatrix rho0, rho1;  // final A states
  double distance = 0.0;     // trace distance of rho0, rho1
};

struct LocalityReport {
  bool semicausal = false;    // B -/-> A
  bool inconclusive = false;  // tol < deviation <= 10 tol
  double deviation = 0.0;     // relative Choi factorization residual
  double tolerance = kDefaultTol;
  std::optional<KrausMap> local_map;  // F^{A<-AC}, canonical A then C
  std::optional<SignalingWitness> witness;
};

struct WitnessSearchOptions {
  std::uint64_t seed = 0;
  long trials = 200;
  double tol = 1e-6;
  bool preparations = true;
  bool interventions = true;
};

/// Choi factorization test of Tr_BC o e against F (x) Tr_B. On failure a
/// witness search runs with `witness_options`.
LocalityReport check_semicausal(const KrausMap& e, const Partition& p,
                                double tol = kDefaultTol,
                                const WitnessSearchOptions& witness_options = {});

/// F(s) = Tr_BC e(|b><b| (x) s) as a map AC -> A (canonical order).
KrausMap extract_local_map(const KrausMap& e, const Partition& p,
                           const StateVector& b_state);

/// Randomized and fixed-probe search for two B preparations or
/// interventions that change the final A state. Returns the best witness
/// when its distance exceeds options.tol.
std::optional<SignalingWitness> find_signaling_witness(
    const KrausMap& e, const Partition& p, const WitnessSearchOptions& options = {});

/// Best witness found regardless of threshold (distance 0 when B is trivial).
SignalingWitness best_signaling_witness(const KrausMap& e, const Partition& p,
                                        const WitnessSearchOptions& options);

/// d^2 pure states |n>, (|n>+|m>)/sqrt2, (|n>+i|m>)/sqrt2 (n < m) whose
/// projectors span all d x d operators.
std::vector<ComplexVector> operator_basis_pure_states(int d);
/// Coefficients c with X = sum_n c_n |n><n| over operator_basis_pure_states.
ComplexVector operator_basis_expansion(const ComplexMatrix& x);
/// Operator basis plus the partners (|n>-|m>)/sqrt2, (|n>-i|m>)/sqrt2.
std::vector<ComplexVector> probe_states(int d);

struct EquivalenceReport {
  bool choi = false;           // Locality (I)
  bool preparations = false;   // Locality (II)
  bool interventions = false;  // Locality (III)
  double choi_deviation = 0.0;
  double preparation_distance = 0.0;
  double intervention_distance = 0.0;

  bool agree() const { return choi == preparations && preparations == interventions; }
};

EquivalenceReport verify_locality_equivalence(const KrausMap& e, const Partition& p,
                                              std::uint64_t seed,
                                              double tol = kDefaultTol,
                                              double witness_tol = 1e-6,
                                              long trials = 200);

/// Checks e (x) I^R is semicausal for roles (A+R, B, C) and (A, B+R, C).
/// Throws PreconditionFailed when e itself is not semicausal.
bool extension_check(const KrausMap& e, const Partition& p, int r_dim,
                     double tol = kDefaultTol);

}  // namespace qloc
