#include "qlocality/precursor.hpp"

#include <algorithm>
#include <cmath>

#include "qlocality/error.hpp"
#include "qlocality/locality.hpp"

namespace qloc {

namespace {

ComplexMatrix stacked_projected(const std::vector<ComplexMatrix>& ops,
                                const ComplexVector& psi) {
  const long d = psi.size();
  const ComplexMatrix proj = ComplexMatrix::Identity(d, d) - psi * psi.adjoint();
  const long cols = ops.front().cols();
  ComplexMatrix m(d * static_cast<long>(ops.size()), cols);
  for (std::size_t mu = 0; mu < ops.size(); ++mu) {
    m.middleRows(static_cast<long>(mu) * d, d) = proj * ops[mu];
  }
  return m;
}

ComplexVector unit(const ComplexVector& v) {
  const double n = v.norm();
  if (n == 0.0) throw Error(ErrorKind::InvalidArgument, "zero vector");
  return v / n;
}

ComplexVector basis_vector(long d, long k) {
  ComplexVector v = ComplexVector::Zero(d);
  v(k) = 1.0;
  return v;
}

ComplexVector random_in(const Subspace& s, Rng& rng) {
  return s.basis * haar_random_vector(s.dim(), rng);
}

}  // namespace

long context_dim(const KrausMap& f) {
  if (f.in_dim() % f.out_dim() != 0) {
    throw Error(ErrorKind::DimensionMismatch,
                "output dimension does not divide input dimension");
  }
  return f.in_dim() / f.out_dim();
}

bool is_precursor(const KrausMap& f, const ComplexVector& phi, const ComplexVector& psi,
                  double tol) {
  if (phi.size() != f.in_dim() || psi.size() != f.out_dim()) {
    throw Error(ErrorKind::DimensionMismatch, "precursor test dimension mismatch");
  }
  const ComplexVector p = unit(phi);
  const ComplexVector q = unit(psi);
  const ComplexMatrix out = qloc::apply(f, ComplexMatrix(p * p.adjoint()));
  return (out - q * q.adjoint()).norm() <= tol;
}

Subspace precursor_subspace(const KrausMap& f, const ComplexVector& psi, double tol) {
  if (psi.size() != f.out_dim()) {
    throw Error(ErrorKind::DimensionMismatch, "psi is not in the output space");
  }
  return null_space(stacked_projected(f.ops(), unit(psi)), tol);
}

std::vector<ComplexVector> default_udc_probes(long d_out, std::uint64_t seed,
                                              long random_count) {
  std::vector<ComplexVector> probes = operator_basis_pure_states(static_cast<int>(d_out));
  Rng rng(seed);
  for (long i = 0; i < random_count; ++i) probes.push_back(haar_random_vector(d_out, rng));
  return probes;
}

UdcReport check_udc(const KrausMap& f, const std::vector<ComplexVector>& probes,
                    double tol) {
  UdcReport r;
  r.expected_dim = context_dim(f);
  r.passed = true;
  for (const auto& p : probes) {
    const long dim = precursor_subspace(f, p, tol).dim();
    r.entries.push_back({p, dim});
    if (dim != r.expected_dim) r.passed = false;
  }
  return r;
}

UdcReport check_udc(const KrausMap& f, double tol) {
  return check_udc(f, default_udc_probes(f.out_dim()), tol);
}

PrecursorFrame precursor_frame(const KrausMap& f, double tol) {
  PrecursorFrame frame;
  frame.dc = context_dim(f);
  frame.da = f.out_dim();
  const long da = frame.da;
  const long d = f.in_dim();
  const double c = 1.0 / std::sqrt(static_cast<double>(da));

  ComplexVector psi = ComplexVector::Constant(da, Complex(c));
  ComplexMatrix q = ComplexMatrix::Identity(d, d);
  for (long n = 0; n < frame.dc; ++n) {
    const long expected = frame.dc - n;
    std::vector<ComplexMatrix> restricted;
    for (const auto& op : f.ops()) restricted.push_back(op * q);

    std::vector<Subspace> s_k;
    for (long k = 0; k < da; ++k) {
      Subspace s = null_space(stacked_projected(restricted, basis_vector(da, k)), tol);
      if (s.dim() != expected) {
        throw Error(ErrorKind::UdcViolation,
                    "precursor subspace of |" + std::to_string(k) + "> has dimension " +
                        std::to_string(s.dim()) + " at stage " + std::to_string(n) +
                        ", expected " + std::to_string(expected));
      }
      s_k.push_back(std::move(s));
    }
    const Subspace s_psi = null_space(stacked_projected(restricted, psi), tol);
    if (s_psi.dim() != expected) {
      throw Error(ErrorKind::UdcViolation,
                  "precursor subspace of the uniform superposition has dimension " +
                      std::to_string(s_psi.dim()) + " at stage " + std::to_string(n) +
                      ", expected " + std::to_string(expected));
    }
    const ComplexVector phi = s_psi.basis.col(0);

    ComplexMatrix hat(q.cols(), da);
    ComplexVector recomposed = ComplexVector::Zero(q.cols());
    for (long k = 0; k < da; ++k) {
      const ComplexVector phi_k = s_k[k].basis * (s_k[k].basis.adjoint() * phi);
      const double a_k = phi_k.norm();
      if (a_k <= tol) {
        throw Error(ErrorKind::UdcViolation,
                    "precursor has no component in S_" + std::to_string(k));
      }
      hat.col(k) = phi_k / a_k;
      recomposed += phi_k;
      frame.coefficient_error = std::max(frame.coefficient_error, std::abs(a_k - c));
    }
    frame.decomposition_error =
        std::max(frame.decomposition_error, (phi - recomposed).norm());

    const ComplexMatrix upsilon = q * hat;
    frame.bases.push_back(upsilon);
    frame.subspaces.push_back(Subspace{d, upsilon});
    if (n + 1 < frame.dc) {
      q = q * null_space(hat.adjoint(), 1e-8).basis;
    }
  }
  return frame;
}

FrameDiagnostics diagnose_frame(const KrausMap& f, const PrecursorFrame& frame,
                                std::uint64_t seed, long samples) {
  FrameDiagnostics dg;
  Rng rng(seed);
  const long d = f.in_dim();
  const long da = frame.da;

  ComplexMatrix all(d, 0);
  for (std::size_t n = 0; n < frame.subspaces.size(); ++n) {
    const ComplexMatrix& b = frame.subspaces[n].basis;
    ComplexMatrix grown(d, all.cols() + b.cols());
    grown << all, b;
    all = std::move(grown);
    for (std::size_t m = n + 1; m < frame.subspaces.size(); ++m) {
      dg.max_cross_overlap =
          std::max(dg.max_cross_overlap, max_overlap(frame.subspaces[n], frame.subspaces[m]));
    }
  }
  dg.total_dim = all.cols();
  const ComplexMatrix gram = all.adjoint() * all;
  dg.completeness_error =
      (gram - ComplexMatrix::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
  if (dg.total_dim != d) {
    dg.completeness_error = std::max(dg.completeness_error, 1.0);
  }

  std::vector<Subspace> s_k;
  for (long k = 0; k < da; ++k) s_k.push_back(precursor_subspace(f, basis_vector(da, k)));
  for (const auto& t : frame.subspaces) {
    for (const auto& s : s_k) {
      dg.max_intersection_defect =
          std::max(dg.max_intersection_defect, std::abs(intersection_dim(t, s) - 1));
    }
  }

  for (const auto& t : frame.subspaces) {
    for (long i = 0; i < samples; ++i) {
      const ComplexVector v = random_in(t, rng);
      const ComplexMatrix out_v = qloc::apply(f, ComplexMatrix(v * v.adjoint()));
      dg.min_purity = std::min(dg.min_purity, purity(out_v));

      // |Psi> = sum_{r,k} m_{rk} |r> (x) Upsilon_k with R of dimension d_A.
      ComplexMatrix m(da, t.dim());
      const ComplexVector coeffs = haar_random_vector(da * t.dim(), rng);
      for (long r = 0; r < da; ++r) {
        for (long k = 0; k < t.dim(); ++k) m(r, k) = coeffs(r * t.dim() + k);
      }
      const ComplexMatrix big = m * t.basis.transpose();  // rows r, cols AC
      ComplexMatrix rho = ComplexMatrix::Zero(da * da, da * da);
      for (const auto& op : f.ops()) {
        const ComplexMatrix out = big * op.transpose();  // rows r, cols A
        ComplexVector flat(da * da);
        for (long r = 0; r < da; ++r) {
          for (long a = 0; a < da; ++a) flat(r * da + a) = out(r, a);
        }
        rho.noalias() += flat * flat.adjoint();
      }
      dg.min_entangled_purity = std::min(dg.min_entangled_purity, purity(rho));
    }
  }
  return dg;
}

FidelityReport fidelity_monotonicity_check(const KrausMap& f, long pairs,
                                           std::uint64_t seed, double tol) {
  FidelityReport r;
  r.min_slack = 1.0;
  Rng rng(seed);
  const long dout = f.out_dim();

  for (long i = 0; i < pairs; ++i) {
    const ComplexVector psi = haar_random_vector(dout, rng);
    const ComplexVector psi2 = haar_random_vector(dout, rng);
    const Subspace s1 = precursor_subspace(f, psi);
    const Subspace s2 = precursor_subspace(f, psi2);
    if (s1.dim() > 0 && s2.dim() > 0) {
      const ComplexVector phi = unit(random_in(s1, rng));
      const ComplexVector phi2 = unit(random_in(s2, rng));
      const double out_fid = std::norm(psi.dot(psi2));
      const double in_fid = std::norm(phi.dot(phi2));
      r.min_slack = std::min(r.min_slack, out_fid - in_fid);
      ++r.pairs_checked;
    }

    ComplexVector orth = psi2 - psi * psi.dot(psi2);
    if (orth.norm() < 1e-8) continue;
    orth.normalize();
    const Subspace so = precursor_subspace(f, orth);
    if (s1.dim() > 0 && so.dim() > 0) {
      r.max_orthogonal_overlap = std::max(r.max_orthogonal_overlap, max_overlap(s1, so));
      ++r.orthogonal_pairs_checked;
    }
  }
  // Computational basis pairs always have precursors when any output is pure.
  for (long k = 0; k < dout; ++k) {
    for (long l = k + 1; l < dout; ++l) {
      const Subspace sk = precursor_subspace(f, basis_vector(dout, k));
      const Subspace sl = precursor_subspace(f, basis_vector(dout, l));
      if (sk.dim() > 0 && sl.dim() > 0) {
        r.max_orthogonal_overlap = std::max(r.max_orthogonal_overlap, max_overlap(sk, sl));
        ++r.orthogonal_pairs_checked;
      }
    }
  }
  if (r.pairs_checked == 0) r.min_slack = 0.0;
  r.passed = r.min_slack >= -tol && r.max_orthogonal_overlap <= tol;
  return r;
}

}  // namespace qloc
