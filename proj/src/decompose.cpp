#include "qlocality/decompose.hpp"

#include <algorithm>
#include <cmath>

#include "qlocality/error.hpp"

namespace qloc {

namespace {

constexpr double kMarginalTol = 1e-6;

std::vector<std::string> concat(std::vector<std::string> a, const std::vector<std::string>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

std::string fresh_label(const SystemLayout& layout, std::string base) {
  while (layout.contains(base)) base += "'";
  return base;
}

KrausMap require_local_map(const KrausMap& e, const Partition& p, double tol) {
  WitnessSearchOptions quiet;
  quiet.preparations = false;
  quiet.interventions = false;
  const LocalityReport r = check_semicausal(e, p, tol, quiet);
  if (!r.semicausal) {
    throw Error(ErrorKind::NotSemicausal,
                "channel signals from B to A (Choi deviation " + std::to_string(r.deviation) +
                    ")",
                r.deviation);
  }
  return *r.local_map;
}

}  // namespace

ComplexMatrix tensor_factor_unitary(const ComplexMatrix& x, const SystemLayout& layout,
                                    std::span<const std::string> factor, double tol) {
  if (x.rows() != layout.total_dim() || x.cols() != layout.total_dim()) {
    throw Error(ErrorKind::DimensionMismatch, "operator does not match the layout");
  }
  const std::vector<std::string> rest = layout.complement(factor);
  const std::vector<std::string> order = concat(rest, layout.keep_in_order(factor).labels());
  const std::vector<std::size_t> perm = layout.indices_of(order);
  const ComplexMatrix xp = permute_systems(x, layout, perm);
  const long df = layout.select(factor).total_dim();
  const ComplexMatrix reduced = partial_trace(x, layout, rest) / static_cast<double>(df);
  const ComplexMatrix w = polar_unitary(reduced);
  const double deviation = (xp - kron(w, ComplexMatrix::Identity(df, df))).norm();
  if (deviation > tol) {
    throw Error(ErrorKind::NotFactorizable,
                "operator is not of the form W (x) 1 (deviation " + std::to_string(deviation) +
                    ")",
                deviation);
  }
  return w;
}

UnitaryDecomposition decompose_semicausal_unitary(const ComplexMatrix& u,
                                                  const SystemLayout& layout,
                                                  const Partition& p, double tol) {
  if (unitarity_error(u) > 1e-8) {
    throw Error(ErrorKind::InvalidArgument, "operator is not unitary");
  }
  const KrausMap e = unitary_channel(u, layout);
  const KrausMap f = require_local_map(e, p, tol);
  const AutonomyCertificate cert = check_autonomous(f, tol);
  if (!cert.verdict) {
    throw Error(ErrorKind::AutonomyExtractionFailed,
                "local map of a semicausal unitary failed the autonomy certificate",
                cert.reconstruction_error);
  }

  UnitaryDecomposition out;
  out.canonical_layout = layout.select(p.canonical_labels());
  const std::vector<std::size_t> perm = layout.indices_of(p.canonical_labels());
  const ComplexMatrix uc = permute_systems(u, layout, perm);
  const std::vector<std::string> ac = concat(p.a(), p.c());
  const std::vector<std::string> bc = concat(p.b(), p.c());
  out.v = *cert.unitary;
  out.v_layout = layout.select(ac);
  const ComplexMatrix v_full = embed_operator(out.v, out.canonical_layout, ac);
  const ComplexMatrix x = uc * v_full.adjoint();
  out.w = tensor_factor_unitary(x, out.canonical_layout, p.a(), std::max(tol, 1e-8));
  out.w_layout = layout.select(bc);
  const ComplexMatrix rebuilt = embed_operator(out.w, out.canonical_layout, bc) * v_full;
  out.residual = phase_invariant_distance(uc, rebuilt);
  return out;
}

AutonomousDecomposition decompose_autonomous_cp(const KrausMap& e, const Partition& p,
                                                double tol) {
  const KrausMap f = require_local_map(e, p, tol);
  const AutonomyCertificate cert = check_autonomous(f, tol);
  if (!cert.verdict) {
    throw Error(ErrorKind::LocalMapNotAutonomous,
                "local map is not autonomous (output rank " + std::to_string(cert.orc_rank) +
                    ", context dimension " + std::to_string(cert.dc) + ")",
                cert.reconstruction_error);
  }
  const CanonicalChannel cc = canonicalize(e, p);
  const SystemLayout& canonical = cc.map.in_layout();
  const std::vector<std::string> ac = concat(p.a(), p.c());
  const std::vector<std::string> bc = concat(p.b(), p.c());

  AutonomousDecomposition out;
  out.canonical_layout = canonical;
  out.v = *cert.unitary;
  out.v_layout = canonical.select(ac);
  const ComplexMatrix v_full = embed_operator(out.v, canonical, ac);

  // G = e o (1_B (x) V^dagger) should equal id_A (x) F^{BC}.
  std::vector<ComplexMatrix> g_ops;
  for (const auto& k : cc.map.ops()) g_ops.push_back(k * v_full.adjoint());
  const KrausMap g(canonical, canonical, std::move(g_ops));
  const ComplexMatrix jg = kraus_to_choi(g).matrix;

  const int da = static_cast<int>(cc.da);
  const int dbc = static_cast<int>(cc.db * cc.dc);
  const SystemLayout joint{{"Ao", da}, {"Xo", dbc}, {"Ai", da}, {"Xi", dbc}};
  const std::vector<std::size_t> grouped{0, 2, 1, 3};
  const ComplexMatrix jp = permute_systems(jg, joint, grouped);  // Ao, Ai, Xo, Xi
  const long block = static_cast<long>(dbc) * dbc;
  ComplexMatrix k = ComplexMatrix::Zero(block, block);
  for (long a = 0; a < da; ++a) {
    for (long b = 0; b < da; ++b) k += jp.block((a * da + a) * block, (b * da + b) * block, block, block);
  }
  k /= static_cast<double>(da) * da;
  ComplexMatrix phi = ComplexMatrix::Zero(static_cast<long>(da) * da, static_cast<long>(da) * da);
  for (long a = 0; a < da; ++a) {
    for (long b = 0; b < da; ++b) phi(a * da + a, b * da + b) = 1.0;
  }
  const double norm = jp.norm();
  out.factorization_deviation = norm > 0.0 ? (jp - kron(phi, k)).norm() / norm : 0.0;
  if (out.factorization_deviation > std::max(tol, 1e-8)) {
    throw Error(ErrorKind::FactorizationFailed,
                "residual map does not factor as identity on A",
                out.factorization_deviation);
  }
  const SystemLayout bc_layout = canonical.select(bc);
  out.f_bc = choi_to_kraus(ChoiMatrix{bc_layout, bc_layout, k}, std::max(tol, 1e-12));

  std::vector<ComplexMatrix> ops;
  for (const auto& fk : out.f_bc.ops()) ops.push_back(embed_operator(fk, canonical, bc) * v_full);
  out.residual = choi_distance(KrausMap(canonical, canonical, std::move(ops)), cc.map);
  return out;
}

KrausMap sequential_channel(const ComplexMatrix& t, const SystemLayout& system,
                            long env_dim) {
  const long d = system.total_dim();
  if (t.rows() != d * env_dim || t.cols() != d * env_dim) {
    throw Error(ErrorKind::DimensionMismatch, "sequential unitary has the wrong shape");
  }
  std::vector<ComplexMatrix> ops;
  for (long e = 0; e < env_dim; ++e) {
    ComplexMatrix k(d, d);
    for (long o = 0; o < d; ++o) {
      for (long i = 0; i < d; ++i) k(o, i) = t(o * env_dim + e, i * env_dim);
    }
    ops.push_back(std::move(k));
  }
  return KrausMap(system, system, std::move(ops));
}

SequentialDilation semilocalize(const KrausMap& e, const Partition& p, double tol) {
  const KrausMap f = require_local_map(e, p, tol);
  const CanonicalChannel cc = canonicalize(e, p);
  const SystemLayout& canonical = cc.map.in_layout();

  SequentialDilation out;
  out.canonical_layout = canonical;
  out.env_dim = std::max(channel_rank(cc.map), channel_rank(f));
  const long de = out.env_dim;
  const int da = static_cast<int>(cc.da);
  const int db = static_cast<int>(cc.db);
  const int dc = static_cast<int>(cc.dc);
  const int dei = static_cast<int>(de);

  const ComplexMatrix ug = stinespring_dilate(cc.map, de).unitary;  // on A B C E
  const ComplexMatrix v = stinespring_dilate(f, de).unitary;        // on A C E

  const SystemLayout sys{{"#A", da}, {"#B", db}, {"#C", dc}, {"#E", dei}};
  const std::vector<std::string> ace{"#A", "#C", "#E"};
  const std::vector<std::string> bce{"#B", "#C", "#E"};
  const ComplexMatrix v_full = embed_operator(v, sys, ace);

  // Maximally entangled references for A, B, C; E starts in |0>.
  const long d = cc.da * cc.db * cc.dc;
  ComplexMatrix input = ComplexMatrix::Zero(d * de, d);
  for (long x = 0; x < d; ++x) input(x * de, x) = 1.0 / std::sqrt(static_cast<double>(d));
  auto flatten = [&](const ComplexMatrix& m) {
    ComplexVector out_vec(m.size());
    for (long r = 0; r < m.rows(); ++r) {
      for (long c = 0; c < m.cols(); ++c) out_vec(r * m.cols() + c) = m(r, c);
    }
    return out_vec;
  };
  const SystemLayout global{{"#A", da}, {"#B", db}, {"#C", dc}, {"#E", dei},
                            {"#RA", da}, {"#RB", db}, {"#RC", dc}};
  const StateVector phi_v(global, flatten(v_full * input));
  const StateVector phi_u(global, flatten(ug * input));
  const std::vector<std::string> kept{"#A", "#RA", "#RB", "#RC"};
  out.w = relating_unitary(phi_v, phi_u, kept, kMarginalTol);  // on B C E
  out.v = v;

  const std::string env = fresh_label(canonical, "E");
  const SystemLayout env_layout{{env, dei}};
  out.v_layout = cc.a_layout.concat(cc.c_layout).concat(env_layout);
  out.w_layout = cc.b_layout.concat(cc.c_layout).concat(env_layout);

  const ComplexMatrix w_full = embed_operator(out.w, sys, bce);
  out.residual = choi_distance(sequential_channel(w_full * v_full, canonical, de), cc.map);
  out.wrong_order_residual =
      choi_distance(sequential_channel(v_full * w_full, canonical, de), cc.map);
  if (out.residual > std::max(tol, 1e-8)) {
    throw Error(ErrorKind::ReconstructionFailed,
                "sequential dilation does not reproduce the channel (residual " +
                    std::to_string(out.residual) + ")",
                out.residual);
  }
  return out;
}

}  // namespace qloc
