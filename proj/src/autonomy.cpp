#include "qlocality/autonomy.hpp"

#include <cmath>
#include <limits>

#include "qlocality/error.hpp"

namespace qloc {

namespace {

constexpr double kMarginalTol = 1e-6;

}  // namespace

ComplexMatrix reference_output(const KrausMap& f) {
  // The Choi matrix is out (x) in; with R standing in for the input copy,
  // rho^{AR} = J / d_in.
  return kraus_to_choi(f).matrix / static_cast<double>(f.in_dim());
}

long orc_rank(const KrausMap& f, double tol) {
  return numerical_rank(reference_output(f), tol);
}

bool rank_lower_bound_check(const KrausMap& f, double tol) {
  return orc_rank(f, tol) >= context_dim(f);
}

KrausMap autonomous_channel(const ComplexMatrix& u, const SystemLayout& in,
                            const SystemLayout& out) {
  const long d = in.total_dim();
  const long da = out.total_dim();
  if (u.rows() != d || u.cols() != d || d % da != 0) {
    throw Error(ErrorKind::DimensionMismatch, "unitary does not act on the input space");
  }
  const long dc = d / da;
  std::vector<ComplexMatrix> ops;
  for (long c = 0; c < dc; ++c) {
    ComplexMatrix k(da, d);
    for (long a = 0; a < da; ++a) k.row(a) = u.row(a * dc + c);
    ops.push_back(std::move(k));
  }
  return KrausMap(in, out, std::move(ops));
}

AutonomyCertificate check_autonomous(const KrausMap& f, double tol) {
  AutonomyCertificate cert;
  cert.dc = context_dim(f);
  const long da = f.out_dim();
  const long d = f.in_dim();
  const long dc = cert.dc;

  const ComplexMatrix rho = reference_output(f);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(rho);
  const RealVector vals = eig.eigenvalues();  // ascending
  const long n = vals.size();
  const double threshold = rank_threshold(std::max(vals(n - 1), 0.0), tol);
  cert.orc_rank = 0;
  for (long i = 0; i < n; ++i) {
    if (vals(i) > threshold) ++cert.orc_rank;
    if (vals(i) > threshold / 10.0 && vals(i) <= threshold * 10.0) cert.inconclusive = true;
  }
  cert.reconstruction_error = std::numeric_limits<double>::infinity();
  if (cert.orc_rank != dc) return cert;

  // |Psi'> on (R, A, C): sum_j sqrt(lambda_j) |v_j>_{AR} |j>_C.
  ComplexVector purified = ComplexVector::Zero(d * da * dc);
  for (long j = 0; j < dc; ++j) {
    const double lambda = std::max(vals(n - 1 - j), 0.0);
    const ComplexVector v = fix_phase(ComplexVector(eig.eigenvectors().col(n - 1 - j)));
    for (long a = 0; a < da; ++a) {
      for (long r = 0; r < d; ++r) {
        purified((r * da + a) * dc + j) = std::sqrt(lambda) * v(a * d + r);
      }
    }
  }
  // |Psi> on (R, A, C) with AC index a * dc + c.
  ComplexVector reference = ComplexVector::Zero(d * d);
  const double amp = 1.0 / std::sqrt(static_cast<double>(d));
  for (long x = 0; x < d; ++x) reference(x * d + x) = amp;

  const SystemLayout layout{{"R", static_cast<int>(d)},
                            {"A", static_cast<int>(da)},
                            {"C", static_cast<int>(dc)}};
  const std::vector<std::string> kept{"R"};
  ComplexMatrix u;
  try {
    u = relating_unitary(StateVector(layout, reference), StateVector(layout, purified), kept,
                         kMarginalTol);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::MarginalMismatch) throw;
    return cert;
  }
  cert.reconstruction_error =
      choi_distance(autonomous_channel(u, f.in_layout(), f.out_layout()), f);
  cert.unitary = std::move(u);
  cert.verdict = cert.reconstruction_error <= tol;
  return cert;
}

EquivalenceSuiteReport equivalence_suite(const KrausMap& f, double tol,
                                         std::uint64_t seed) {
  EquivalenceSuiteReport r;
  r.autonomy = check_autonomous(f, tol);
  r.udc = check_udc(f, default_udc_probes(f.out_dim(), seed), tol);
  r.orc = r.autonomy.orc_rank == r.autonomy.dc;
  return r;
}

}  // namespace qloc
