#include "qlocality/tensor_core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "qlocality/error.hpp"

namespace qloc {

namespace {

using RowMajorMatrix =
    Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

std::vector<long> strides_of(const std::vector<int>& dims) {
  std::vector<long> strides(dims.size(), 1);
  for (std::size_t i = dims.size(); i-- > 1;) {
    strides[i - 1] = strides[i] * dims[i];
  }
  return strides;
}

void require_square(const ComplexMatrix& m, long dim, const char* what) {
  if (m.rows() != dim || m.cols() != dim) {
    throw Error(ErrorKind::DimensionMismatch,
                std::string(what) + ": expected " + std::to_string(dim) + "x" +
                    std::to_string(dim) + " matrix, got " +
                    std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
}

void require_permutation(std::span<const std::size_t> perm, std::size_t n) {
  if (perm.size() != n) {
    throw Error(ErrorKind::InvalidArgument,
                "permutation length does not match the layout");
  }
  std::vector<bool> seen(n, false);
  for (std::size_t p : perm) {
    if (p >= n || seen[p]) {
      throw Error(ErrorKind::InvalidArgument, "not a permutation");
    }
    seen[p] = true;
  }
}

// Permutation that moves `front` (in the given order) ahead of the rest
// (kept in layout order).
std::vector<std::size_t> front_permutation(const SystemLayout& layout,
                                           std::span<const std::string> front) {
  std::vector<std::size_t> perm = layout.indices_of(front);
  std::set<std::size_t> used(perm.begin(), perm.end());
  if (used.size() != perm.size()) {
    throw Error(ErrorKind::InvalidArgument, "duplicate label in selection");
  }
  for (std::size_t i = 0; i < layout.size(); ++i) {
    if (!used.contains(i)) perm.push_back(i);
  }
  return perm;
}

long product_of(const SystemLayout& layout, std::span<const std::size_t> idx) {
  long d = 1;
  for (std::size_t i : idx) d *= layout[i].dim;
  return d;
}

}  // namespace

// ---------------------------------------------------------------------------
// SystemLayout

SystemLayout::SystemLayout(std::vector<System> systems)
    : systems_(std::move(systems)) {
  std::set<std::string> seen;
  for (const auto& s : systems_) {
    if (s.dim < 1) {
      throw Error(ErrorKind::InvalidArgument,
                  "system '" + s.label + "' has dimension < 1");
    }
    if (!seen.insert(s.label).second) {
      throw Error(ErrorKind::InvalidArgument,
                  "duplicate system label '" + s.label + "'");
    }
  }
}

SystemLayout::SystemLayout(std::initializer_list<System> systems)
    : SystemLayout(std::vector<System>(systems)) {}

SystemLayout SystemLayout::from_dims(std::span<const int> dims,
                                     const std::string& prefix) {
  std::vector<System> systems;
  for (std::size_t i = 0; i < dims.size(); ++i) {
    systems.push_back({prefix + std::to_string(i), dims[i]});
  }
  return SystemLayout(std::move(systems));
}

long SystemLayout::total_dim() const {
  long d = 1;
  for (const auto& s : systems_) d *= s.dim;
  return d;
}

std::vector<int> SystemLayout::dims() const {
  std::vector<int> out;
  for (const auto& s : systems_) out.push_back(s.dim);
  return out;
}

std::vector<std::string> SystemLayout::labels() const {
  std::vector<std::string> out;
  for (const auto& s : systems_) out.push_back(s.label);
  return out;
}

bool SystemLayout::contains(const std::string& label) const {
  return std::any_of(systems_.begin(), systems_.end(),
                     [&](const System& s) { return s.label == label; });
}

std::size_t SystemLayout::index_of(const std::string& label) const {
  for (std::size_t i = 0; i < systems_.size(); ++i) {
    if (systems_[i].label == label) return i;
  }
  throw Error(ErrorKind::UnknownLabel, "no system labelled '" + label + "'");
}

std::vector<std::size_t> SystemLayout::indices_of(
    std::span<const std::string> labels) const {
  std::vector<std::size_t> out;
  for (const auto& l : labels) out.push_back(index_of(l));
  return out;
}

SystemLayout SystemLayout::select(std::span<const std::string> labels) const {
  std::vector<System> out;
  for (std::size_t i : indices_of(labels)) out.push_back(systems_[i]);
  return SystemLayout(std::move(out));
}

SystemLayout SystemLayout::keep_in_order(
    std::span<const std::string> labels) const {
  std::vector<std::size_t> idx = indices_of(labels);
  std::sort(idx.begin(), idx.end());
  std::vector<System> out;
  for (std::size_t i : idx) out.push_back(systems_[i]);
  return SystemLayout(std::move(out));
}

std::vector<std::string> SystemLayout::complement(
    std::span<const std::string> labels) const {
  std::set<std::size_t> used;
  for (std::size_t i : indices_of(labels)) used.insert(i);
  std::vector<std::string> out;
  for (std::size_t i = 0; i < systems_.size(); ++i) {
    if (!used.contains(i)) out.push_back(systems_[i].label);
  }
  return out;
}

SystemLayout SystemLayout::permuted(std::span<const std::size_t> perm) const {
  require_permutation(perm, systems_.size());
  std::vector<System> out;
  for (std::size_t p : perm) out.push_back(systems_[p]);
  return SystemLayout(std::move(out));
}

SystemLayout SystemLayout::concat(const SystemLayout& other) const {
  std::vector<System> out = systems_;
  out.insert(out.end(), other.systems_.begin(), other.systems_.end());
  return SystemLayout(std::move(out));
}

// ---------------------------------------------------------------------------
// States

StateVector::StateVector(SystemLayout l, ComplexVector a)
    : layout(std::move(l)), amplitudes(std::move(a)) {
  if (amplitudes.size() != layout.total_dim()) {
    throw Error(ErrorKind::DimensionMismatch,
                "state vector length " + std::to_string(amplitudes.size()) +
                    " does not match layout dimension " +
                    std::to_string(layout.total_dim()));
  }
}

StateVector StateVector::basis(const SystemLayout& layout, long index) {
  ComplexVector v = ComplexVector::Zero(layout.total_dim());
  if (index < 0 || index >= v.size()) {
    throw Error(ErrorKind::InvalidArgument, "basis index out of range");
  }
  v(index) = 1.0;
  return StateVector(layout, v);
}

bool StateVector::is_normalized(double tol) const {
  return std::abs(amplitudes.norm() - 1.0) <= tol;
}

StateVector StateVector::normalized() const {
  const double n = amplitudes.norm();
  if (n == 0.0) {
    throw Error(ErrorKind::InvalidArgument, "cannot normalize the zero vector");
  }
  return StateVector(layout, amplitudes / n);
}

ComplexMatrix StateVector::projector() const {
  return amplitudes * amplitudes.adjoint();
}

DensityMatrix::DensityMatrix(SystemLayout l, ComplexMatrix m)
    : layout(std::move(l)), matrix(std::move(m)) {
  require_square(matrix, layout.total_dim(), "density matrix");
}

DensityMatrix::DensityMatrix(const StateVector& pure)
    : layout(pure.layout), matrix(pure.projector()) {}

double DensityMatrix::validity_error() const {
  const double herm = (matrix - matrix.adjoint()).cwiseAbs().maxCoeff();
  const double tr = std::abs(matrix.trace() - Complex(1.0));
  const double neg = std::max(0.0, -min_eigenvalue(matrix));
  return std::max({herm, tr, neg});
}

ComplexMatrix Subspace::projector() const {
  if (basis.cols() == 0) return ComplexMatrix::Zero(ambient_dim, ambient_dim);
  return basis * basis.adjoint();
}

double Subspace::orthonormality_error() const {
  if (basis.cols() == 0) return 0.0;
  const ComplexMatrix g = basis.adjoint() * basis;
  return (g - ComplexMatrix::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
}

// ---------------------------------------------------------------------------
// Rng

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double t = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(t);
  has_spare_ = true;
  return r * std::cos(t);
}

Complex Rng::complex_normal() {
  const double re = normal();
  const double im = normal();
  return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
}

long Rng::index(long n) {
  return static_cast<long>(uniform() * static_cast<double>(n)) % n;
}

// ---------------------------------------------------------------------------
// Products, permutations, traces

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (long i = 0; i < a.rows(); ++i) {
    for (long j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexVector kron(const ComplexVector& a, const ComplexVector& b) {
  ComplexVector out(a.size() * b.size());
  for (long i = 0; i < a.size(); ++i) {
    out.segment(i * b.size(), b.size()) = a(i) * b;
  }
  return out;
}

StateVector kron(const StateVector& a, const StateVector& b) {
  return StateVector(a.layout.concat(b.layout), kron(a.amplitudes, b.amplitudes));
}

std::vector<long> permutation_map(const SystemLayout& layout,
                                  std::span<const std::size_t> perm) {
  require_permutation(perm, layout.size());
  const std::vector<int> dims = layout.dims();
  const std::size_t n = dims.size();
  std::vector<int> new_dims(n);
  for (std::size_t i = 0; i < n; ++i) new_dims[i] = dims[perm[i]];
  const std::vector<long> new_strides = strides_of(new_dims);
  // Stride in the new ordering of each old system.
  std::vector<long> old_to_new_stride(n);
  for (std::size_t i = 0; i < n; ++i) old_to_new_stride[perm[i]] = new_strides[i];

  const long total = layout.total_dim();
  std::vector<long> map(total);
  std::vector<int> digits(n, 0);
  long target = 0;
  for (long x = 0; x < total; ++x) {
    map[x] = target;
    // Odometer increment over the old digits, last system fastest.
    for (std::size_t k = n; k-- > 0;) {
      if (++digits[k] < dims[k]) {
        target += old_to_new_stride[k];
        break;
      }
      target -= old_to_new_stride[k] * (dims[k] - 1);
      digits[k] = 0;
    }
  }
  return map;
}

ComplexMatrix permute_systems(const ComplexMatrix& m, const SystemLayout& layout,
                              std::span<const std::size_t> perm) {
  require_square(m, layout.total_dim(), "permute_systems");
  const std::vector<long> map = permutation_map(layout, perm);
  ComplexMatrix out(m.rows(), m.cols());
  for (long c = 0; c < m.cols(); ++c) {
    for (long r = 0; r < m.rows(); ++r) out(map[r], map[c]) = m(r, c);
  }
  return out;
}

ComplexVector permute_systems(const ComplexVector& v, const SystemLayout& layout,
                              std::span<const std::size_t> perm) {
  if (v.size() != layout.total_dim()) {
    throw Error(ErrorKind::DimensionMismatch,
                "permute_systems: vector length does not match layout");
  }
  const std::vector<long> map = permutation_map(layout, perm);
  ComplexVector out(v.size());
  for (long i = 0; i < v.size(); ++i) out(map[i]) = v(i);
  return out;
}

std::vector<std::size_t> inverse_permutation(std::span<const std::size_t> perm) {
  std::vector<std::size_t> inv(perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i) inv[perm[i]] = i;
  return inv;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, const SystemLayout& layout,
                            std::span<const std::string> keep) {
  require_square(m, layout.total_dim(), "partial_trace");
  std::vector<std::size_t> kept = layout.indices_of(keep);
  std::sort(kept.begin(), kept.end());
  if (std::adjacent_find(kept.begin(), kept.end()) != kept.end()) {
    throw Error(ErrorKind::InvalidArgument, "duplicate label in keep set");
  }
  std::vector<std::size_t> perm = kept;
  for (std::size_t i = 0; i < layout.size(); ++i) {
    if (!std::binary_search(kept.begin(), kept.end(), i)) perm.push_back(i);
  }
  const long dk = product_of(layout, kept);
  const long dd = layout.total_dim() / dk;
  // After the permutation, new index = k * dd + d.
  const std::vector<long> map = permutation_map(layout, perm);
  std::vector<long> old_of_new(map.size());
  for (std::size_t x = 0; x < map.size(); ++x) old_of_new[map[x]] = static_cast<long>(x);

  ComplexMatrix out = ComplexMatrix::Zero(dk, dk);
  for (long d = 0; d < dd; ++d) {
    for (long j = 0; j < dk; ++j) {
      const long cj = old_of_new[j * dd + d];
      for (long i = 0; i < dk; ++i) {
        out(i, j) += m(old_of_new[i * dd + d], cj);
      }
    }
  }
  return out;
}

DensityMatrix partial_trace(const DensityMatrix& rho,
                            std::span<const std::string> keep) {
  return DensityMatrix(rho.layout.keep_in_order(keep),
                       partial_trace(rho.matrix, rho.layout, keep));
}

ComplexMatrix reduced_state(const StateVector& psi,
                            std::span<const std::string> keep) {
  std::vector<std::size_t> kept = psi.layout.indices_of(keep);
  std::sort(kept.begin(), kept.end());
  std::vector<std::string> ordered;
  for (std::size_t i : kept) ordered.push_back(psi.layout[i].label);
  const std::vector<std::size_t> perm = front_permutation(psi.layout, ordered);
  const ComplexVector v = permute_systems(psi.amplitudes, psi.layout, perm);
  const long dk = product_of(psi.layout, kept);
  const long dr = psi.layout.total_dim() / dk;
  Eigen::Map<const RowMajorMatrix> mat(v.data(), dk, dr);
  return mat * mat.adjoint();
}

ComplexMatrix embed_operator(const ComplexMatrix& op, const SystemLayout& layout,
                             std::span<const std::string> targets) {
  const std::vector<std::size_t> perm = front_permutation(layout, targets);
  const long dt = product_of(layout, layout.indices_of(targets));
  require_square(op, dt, "embed_operator");
  const long dr = layout.total_dim() / dt;
  const ComplexMatrix front = kron(op, ComplexMatrix::Identity(dr, dr));
  const SystemLayout permuted = layout.permuted(perm);
  return permute_systems(front, permuted, inverse_permutation(perm));
}

ComplexVector apply_local(const ComplexMatrix& op, const ComplexVector& v,
                          const SystemLayout& layout,
                          std::span<const std::string> targets) {
  const std::vector<std::size_t> perm = front_permutation(layout, targets);
  const long dt = product_of(layout, layout.indices_of(targets));
  require_square(op, dt, "apply_local");
  const long dr = layout.total_dim() / dt;
  const ComplexVector front = permute_systems(v, layout, perm);
  Eigen::Map<const RowMajorMatrix> mat(front.data(), dt, dr);
  RowMajorMatrix out = op * mat;
  ComplexVector flat = Eigen::Map<ComplexVector>(out.data(), dt * dr);
  return permute_systems(flat, layout.permuted(perm), inverse_permutation(perm));
}

// ---------------------------------------------------------------------------
// Spectral helpers

double rank_threshold(double sigma_max, double tol) {
  return tol * std::max(sigma_max, 1.0);
}

long numerical_rank(const ComplexMatrix& m, double tol) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  const RealVector& s = svd.singularValues();
  const double thr = rank_threshold(s.size() ? s(0) : 0.0, tol);
  return static_cast<long>((s.array() > thr).count());
}

Subspace null_space(const ComplexMatrix& m, double tol) {
  const long n = m.cols();
  if (m.rows() == 0) return {n, ComplexMatrix::Identity(n, n)};
  Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeFullV);
  const RealVector& s = svd.singularValues();
  const double thr = rank_threshold(s.size() ? s(0) : 0.0, tol);
  const long rank = static_cast<long>((s.array() > thr).count());
  return {n, svd.matrixV().rightCols(n - rank)};
}

Subspace column_space(const ComplexMatrix& m, double tol) {
  const long n = m.rows();
  if (m.cols() == 0) return {n, ComplexMatrix(n, 0)};
  Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeThinU);
  const RealVector& s = svd.singularValues();
  const double thr = rank_threshold(s.size() ? s(0) : 0.0, tol);
  const long rank = static_cast<long>((s.array() > thr).count());
  return {n, svd.matrixU().leftCols(rank)};
}

namespace {
RealVector principal_cosines(const Subspace& a, const Subspace& b) {
  if (a.ambient_dim != b.ambient_dim) {
    throw Error(ErrorKind::DimensionMismatch,
                "subspaces live in different ambient spaces");
  }
  if (a.dim() == 0 || b.dim() == 0) return RealVector(0);
  const ComplexMatrix g = a.basis.adjoint() * b.basis;
  Eigen::JacobiSVD<ComplexMatrix> svd(g);
  return svd.singularValues();
}
}  // namespace

double max_overlap(const Subspace& a, const Subspace& b) {
  const RealVector c = principal_cosines(a, b);
  return c.size() ? c(0) : 0.0;
}

double subspace_distance(const Subspace& a, const Subspace& b) {
  if (a.dim() != b.dim() || a.ambient_dim != b.ambient_dim) return 1.0;
  if (a.dim() == 0) return 0.0;
  // ||(1 - P_a) B|| is the sine of the largest principal angle.
  const ComplexMatrix resid = b.basis - a.basis * (a.basis.adjoint() * b.basis);
  Eigen::JacobiSVD<ComplexMatrix> svd(resid);
  return std::min(1.0, svd.singularValues()(0));
}

long intersection_dim(const Subspace& a, const Subspace& b, double tol) {
  const RealVector c = principal_cosines(a, b);
  return static_cast<long>((c.array() >= 1.0 - tol).count());
}

double min_eigenvalue(const ComplexMatrix& m) {
  const ComplexMatrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

double trace_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
  const ComplexMatrix d = a - b;
  const ComplexMatrix h = 0.5 * (d + d.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h, Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

double purity(const ComplexMatrix& rho) {
  return (rho * rho).trace().real();
}

ComplexMatrix polar_unitary(const ComplexMatrix& m) {
  Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

double unitarity_error(const ComplexMatrix& u) {
  if (u.rows() != u.cols()) return std::numeric_limits<double>::infinity();
  return (u.adjoint() * u - ComplexMatrix::Identity(u.rows(), u.cols()))
      .cwiseAbs()
      .maxCoeff();
}

double phase_invariant_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
  const Complex overlap = (b.adjoint() * a).trace();
  const Complex phase = std::abs(overlap) > 0.0 ? overlap / std::abs(overlap)
                                                : Complex(1.0);
  return (a - phase * b).norm();
}

ComplexVector fix_phase(const ComplexVector& v) {
  if (v.size() == 0) return v;
  Eigen::Index best = 0;
  v.cwiseAbs().maxCoeff(&best);
  const Complex z = v(best);
  if (std::abs(z) == 0.0) return v;
  return v * (std::conj(z) / std::abs(z));
}

ComplexMatrix fix_phase(const ComplexMatrix& m) {
  if (m.size() == 0) return m;
  // Row-major scan so ties resolve to the first entry in reading order.
  double best_abs = -1.0;
  Complex z = 0.0;
  for (long r = 0; r < m.rows(); ++r) {
    for (long c = 0; c < m.cols(); ++c) {
      if (std::abs(m(r, c)) > best_abs * (1.0 + 1e-12)) {
        best_abs = std::abs(m(r, c));
        z = m(r, c);
      }
    }
  }
  if (std::abs(z) == 0.0) return m;
  return m * (std::conj(z) / std::abs(z));
}

// ---------------------------------------------------------------------------
// States and unitaries

StateVector max_entangled(int d, const std::string& left,
                          const std::string& right) {
  if (d < 1) throw Error(ErrorKind::InvalidArgument, "dimension must be >= 1");
  ComplexVector v = ComplexVector::Zero(static_cast<long>(d) * d);
  const double amp = 1.0 / std::sqrt(static_cast<double>(d));
  for (int i = 0; i < d; ++i) v(static_cast<long>(i) * d + i) = amp;
  return StateVector(SystemLayout{{left, d}, {right, d}}, v);
}

ComplexMatrix haar_random_unitary(int d, Rng& rng) {
  if (d < 1) throw Error(ErrorKind::InvalidArgument, "dimension must be >= 1");
  ComplexMatrix z(d, d);
  for (int c = 0; c < d; ++c) {
    for (int r = 0; r < d; ++r) z(r, c) = rng.complex_normal();
  }
  Eigen::HouseholderQR<ComplexMatrix> qr(z);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(d, d);
  const ComplexMatrix& r = qr.matrixQR();
  for (int i = 0; i < d; ++i) {
    const Complex rii = r(i, i);
    const Complex phase = std::abs(rii) > 0.0 ? rii / std::abs(rii) : Complex(1.0);
    q.col(i) *= phase;
  }
  return q;
}

ComplexMatrix haar_random_unitary(int d, std::uint64_t seed) {
  Rng rng(seed);
  return haar_random_unitary(d, rng);
}

ComplexVector haar_random_vector(long d, Rng& rng) {
  ComplexVector v(d);
  for (long i = 0; i < d; ++i) v(i) = rng.complex_normal();
  return v / v.norm();
}

StateVector random_state(const SystemLayout& layout, Rng& rng) {
  return StateVector(layout, haar_random_vector(layout.total_dim(), rng));
}

DensityMatrix random_density(const SystemLayout& layout, Rng& rng, long rank) {
  const long d = layout.total_dim();
  if (rank <= 0 || rank > d) rank = d;
  ComplexMatrix g(d, rank);
  for (long c = 0; c < rank; ++c) {
    for (long r = 0; r < d; ++r) g(r, c) = rng.complex_normal();
  }
  ComplexMatrix rho = g * g.adjoint();
  rho /= rho.trace();
  return DensityMatrix(layout, rho);
}

SchmidtDecomposition schmidt(const StateVector& psi,
                             std::span<const std::string> cut, double cutoff) {
  const std::vector<std::size_t> perm = front_permutation(psi.layout, cut);
  const SystemLayout left_layout = psi.layout.select(cut);
  const std::vector<std::string> rest = psi.layout.complement(cut);
  const SystemLayout right_layout = psi.layout.select(rest);
  const ComplexVector v = permute_systems(psi.amplitudes, psi.layout, perm);
  const long dl = left_layout.total_dim();
  const long dr = right_layout.total_dim();
  const ComplexMatrix mat = Eigen::Map<const RowMajorMatrix>(v.data(), dl, dr);
  Eigen::JacobiSVD<ComplexMatrix> svd(mat, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RealVector s = svd.singularValues();
  long keep = 0;
  while (keep < s.size() && s(keep) * s(keep) > cutoff) ++keep;
  SchmidtDecomposition out;
  out.coefficients = s.head(keep).cwiseAbs2();
  out.left = svd.matrixU().leftCols(keep);
  out.right = svd.matrixV().leftCols(keep).conjugate();
  out.left_layout = left_layout;
  out.right_layout = right_layout;
  return out;
}

ComplexMatrix relating_unitary(const StateVector& psi1, const StateVector& psi2,
                               std::span<const std::string> kept, double tol) {
  if (!(psi1.layout == psi2.layout)) {
    throw Error(ErrorKind::DimensionMismatch,
                "relating_unitary: states live on different layouts");
  }
  const SystemLayout& layout = psi1.layout;
  std::vector<std::size_t> kidx = layout.indices_of(kept);
  std::sort(kidx.begin(), kidx.end());
  std::vector<std::string> kept_ordered;
  for (std::size_t i : kidx) kept_ordered.push_back(layout[i].label);
  const std::vector<std::size_t> perm = front_permutation(layout, kept_ordered);
  const long dk = product_of(layout, kidx);
  const long dc = layout.total_dim() / dk;

  const ComplexVector v1 = permute_systems(psi1.amplitudes, layout, perm);
  const ComplexVector v2 = permute_systems(psi2.amplitudes, layout, perm);
  const ComplexMatrix m1 = Eigen::Map<const RowMajorMatrix>(v1.data(), dk, dc);
  const ComplexMatrix m2 = Eigen::Map<const RowMajorMatrix>(v2.data(), dk, dc);

  const double mismatch = (m1 * m1.adjoint() - m2 * m2.adjoint()).norm();
  if (mismatch > tol) {
    throw Error(ErrorKind::MarginalMismatch,
                "reduced states on the kept systems differ by " +
                    std::to_string(mismatch),
                mismatch);
  }
  // Orthogonal Procrustes: X = argmin ||m1 X - m2|| over unitaries, from the
  // SVD of the cross-Gram matrix. The amplitudes transform as m1 W^T.
  const ComplexMatrix cross = m1.adjoint() * m2;
  Eigen::JacobiSVD<ComplexMatrix> svd(cross, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const ComplexMatrix x = svd.matrixU() * svd.matrixV().adjoint();
  return x.transpose();
}

}  // namespace qloc
