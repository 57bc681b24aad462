#pragma once

// Dense complex linear algebra over labelled tensor-product spaces.
//
// Basis ordering convention: the first system of a layout is the most
// significant digit of the flat index, matching the Kronecker product.

#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qloc {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kDefaultTol = 1e-9;

struct System {
  std::string label;
  int dim = 1;

  bool operator==(const System&) const = default;
};

/// Ordered list of labelled subsystems. Labels are unique, dims >= 1.
class SystemLayout {
 public:
  SystemLayout() = default;
  explicit SystemLayout(std::vector<System> systems);
  SystemLayout(std::initializer_list<System> systems);

  /// Layout with labels `prefix0, prefix1, ...`.
  static SystemLayout from_dims(std::span<const int> dims,
                                const std::string& prefix = "q");

  const std::vector<System>& systems() const { return systems_; }
  std::size_t size() const { return systems_.size(); }
  bool empty() const { return systems_.empty(); }
  const System& operator[](std::size_t i) const { return systems_[i]; }

  /// Product of all dims (1 for the empty layout).
  long total_dim() const;
  std::vector<int> dims() const;
  std::vector<std::string> labels() const;

  bool contains(const std::string& label) const;
  /// Position of `label`; throws UnknownLabel.
  std::size_t index_of(const std::string& label) const;
  std::vector<std::size_t> indices_of(std::span<const std::string> labels) const;

  /// Sub-layout with the given labels, in the given order.
  SystemLayout select(std::span<const std::string> labels) const;
  /// Sub-layout with the given labels, in layout order.
  SystemLayout keep_in_order(std::span<const std::string> labels) const;
  /// Labels not in `labels`, in layout order.
  std::vector<std::string> complement(std::span<const std::string> labels) const;
  /// New position i holds old system perm[i].
  SystemLayout permuted(std::span<const std::size_t> perm) const;
  SystemLayout concat(const SystemLayout& other) const;

  bool operator==(const SystemLayout&) const = default;

 private:
  std::vector<System> systems_;
};

/// Pure state on a layout. Normalization is checked by `is_normalized`,
/// not enforced, so unnormalized vectors can be carried explicitly.
struct StateVector {
  SystemLayout layout;
  ComplexVector amplitudes;

  StateVector() = default;
  StateVector(SystemLayout layout, ComplexVector amplitudes);

  static StateVector basis(const SystemLayout& layout, long index);

  double norm() const { return amplitudes.norm(); }
  bool is_normalized(double tol = 1e-10) const;
  StateVector normalized() const;
  ComplexMatrix projector() const;
};

struct DensityMatrix {
  SystemLayout layout;
  ComplexMatrix matrix;

  DensityMatrix() = default;
  DensityMatrix(SystemLayout layout, ComplexMatrix matrix);
  explicit DensityMatrix(const StateVector& pure);

  /// Largest violation among Hermiticity, trace and positivity.
  double validity_error() const;
};

/// Orthonormal column basis of a subspace of C^ambient_dim.
struct Subspace {
  long ambient_dim = 0;
  ComplexMatrix basis;  // ambient_dim x k

  long dim() const { return basis.cols(); }
  ComplexMatrix projector() const;
  /// ||basis^dagger basis - I||_max.
  double orthonormality_error() const;
};

/// Seeded generator. Uniforms take the top 53 bits of mt19937_64; normals
/// use the Box-Muller transform on two such uniforms, so streams are
/// bit-reproducible across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform();
  double normal();
  Complex complex_normal();  // real and imaginary parts each N(0, 1/2)
  std::uint64_t next_u64() { return engine_(); }
  /// Uniform integer in [0, n).
  long index(long n);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// ---------------------------------------------------------------------------
// Products, permutations, traces.

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexVector kron(const ComplexVector& a, const ComplexVector& b);
StateVector kron(const StateVector& a, const StateVector& b);

/// map[old_index] = new_index for the subsystem permutation.
std::vector<long> permutation_map(const SystemLayout& layout,
                                  std::span<const std::size_t> perm);

/// P m P^dagger for the subsystem permutation `perm` (new position i holds
/// old system perm[i]).
ComplexMatrix permute_systems(const ComplexMatrix& m, const SystemLayout& layout,
                              std::span<const std::size_t> perm);
ComplexVector permute_systems(const ComplexVector& v, const SystemLayout& layout,
                              std::span<const std::size_t> perm);
std::vector<std::size_t> inverse_permutation(std::span<const std::size_t> perm);

/// Trace over all systems not in `keep`; kept systems stay in layout order.
ComplexMatrix partial_trace(const ComplexMatrix& m, const SystemLayout& layout,
                            std::span<const std::string> keep);
DensityMatrix partial_trace(const DensityMatrix& rho,
                            std::span<const std::string> keep);
/// Reduced state of a pure vector on `keep` (layout order).
ComplexMatrix reduced_state(const StateVector& psi,
                            std::span<const std::string> keep);

/// Full operator on `layout` acting as `op` on `targets` (in that order) and
/// as identity elsewhere.
ComplexMatrix embed_operator(const ComplexMatrix& op, const SystemLayout& layout,
                             std::span<const std::string> targets);
/// Applies `op` on `targets` to a state vector without forming the full
/// operator.
ComplexVector apply_local(const ComplexMatrix& op, const ComplexVector& v,
                          const SystemLayout& layout,
                          std::span<const std::string> targets);

// ---------------------------------------------------------------------------
// Spectral helpers.

/// Singular values above tol * max(sigma_max, 1).
long numerical_rank(const ComplexMatrix& m, double tol = kDefaultTol);
double rank_threshold(double sigma_max, double tol);
Subspace null_space(const ComplexMatrix& m, double tol = kDefaultTol);
/// Orthonormal basis of the column span.
Subspace column_space(const ComplexMatrix& m, double tol = kDefaultTol);

/// Largest principal cosine between two subspaces (0 if either is empty).
double max_overlap(const Subspace& a, const Subspace& b);
/// Sine of the largest principal angle; 1 when dimensions differ.
double subspace_distance(const Subspace& a, const Subspace& b);
/// Number of principal cosines >= 1 - tol.
long intersection_dim(const Subspace& a, const Subspace& b, double tol = 1e-8);

double trace_distance(const ComplexMatrix& a, const ComplexMatrix& b);
double purity(const ComplexMatrix& rho);
/// Smallest eigenvalue of the Hermitian part.
double min_eigenvalue(const ComplexMatrix& m);
/// Closest unitary in Frobenius norm (polar factor).
ComplexMatrix polar_unitary(const ComplexMatrix& m);
double unitarity_error(const ComplexMatrix& u);
/// min over theta of ||a - e^{i theta} b||_F.
double phase_invariant_distance(const ComplexMatrix& a, const ComplexMatrix& b);
/// Multiplies by a phase so the largest-magnitude entry is real positive.
ComplexVector fix_phase(const ComplexVector& v);
ComplexMatrix fix_phase(const ComplexMatrix& m);

// ---------------------------------------------------------------------------
// States and unitaries.

/// (1/sqrt d) sum_i |i>|i> on layout {(left, d), (right, d)}.
StateVector max_entangled(int d, const std::string& left = "R",
                          const std::string& right = "Q");

ComplexMatrix haar_random_unitary(int d, std::uint64_t seed);
ComplexMatrix haar_random_unitary(int d, Rng& rng);
ComplexVector haar_random_vector(long d, Rng& rng);
StateVector random_state(const SystemLayout& layout, Rng& rng);
/// Ginibre-induced density matrix of the given rank (full rank if rank <= 0).
DensityMatrix random_density(const SystemLayout& layout, Rng& rng, long rank = 0);

struct SchmidtDecomposition {
  RealVector coefficients;  // probabilities lambda_i, descending
  ComplexMatrix left;       // columns |l_i> on the cut systems
  ComplexMatrix right;      // columns |r_i> on the complement
  SystemLayout left_layout;
  SystemLayout right_layout;
};

/// psi = sum_i sqrt(lambda_i) |l_i>|r_i>, keeping lambda_i > cutoff.
SchmidtDecomposition schmidt(const StateVector& psi,
                             std::span<const std::string> cut,
                             double cutoff = 1e-26);

/// Unitary W on the complement of `kept` (complement in layout order) with
/// (1_kept (x) W) psi1 = psi2. Throws MarginalMismatch when the reduced
/// states on `kept` differ by more than tol (Frobenius).
ComplexMatrix relating_unitary(const StateVector& psi1, const StateVector& psi2,
                               std::span<const std::string> kept,
                               double tol = kDefaultTol);

}  // namespace qloc
