#include "qlocality/locality.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "qlocality/error.hpp"

namespace qloc {

namespace {

using RowMajorMatrix =
    Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

constexpr double kMaxDistance = 1.0 - 1e-12;

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, sep)) {
    const auto b = tok.find_first_not_of(" \t");
    const auto e = tok.find_last_not_of(" \t");
    out.push_back(b == std::string::npos ? "" : tok.substr(b, e - b + 1));
  }
  return out;
}

// Final A state for a pure canonical input.
ComplexMatrix final_a_state(const CanonicalChannel& cc, const ComplexVector& psi) {
  const long dbc = cc.db * cc.dc;
  ComplexMatrix rho = ComplexMatrix::Zero(cc.da, cc.da);
  for (const auto& k : cc.map.ops()) {
    const ComplexVector out = k * psi;
    Eigen::Map<const RowMajorMatrix> m(out.data(), cc.da, dbc);
    rho.noalias() += m * m.adjoint();
  }
  return rho;
}

// Final A state for a mixed canonical input.
ComplexMatrix final_a_state(const CanonicalChannel& cc, const ComplexMatrix& sigma) {
  const long dbc = cc.db * cc.dc;
  const ComplexMatrix out = qloc::apply(cc.map, sigma);
  ComplexMatrix rho = ComplexMatrix::Zero(cc.da, cc.da);
  for (long a = 0; a < cc.da; ++a) {
    for (long b = 0; b < cc.da; ++b) {
      for (long x = 0; x < dbc; ++x) rho(a, b) += out(a * dbc + x, b * dbc + x);
    }
  }
  return rho;
}

ComplexVector product_input(const ComplexVector& alpha,
                            const ComplexVector& beta, const ComplexVector& gamma) {
  return kron(kron(alpha, beta), gamma);
}

struct ChoiFactorization {
  double deviation = 0.0;
  ChoiMatrix local_choi;
};

ChoiFactorization factorize(const CanonicalChannel& cc) {
  const long dbc = cc.db * cc.dc;
  std::vector<ComplexMatrix> g_ops;
  for (const auto& k : cc.map.ops()) {
    for (long j = 0; j < dbc; ++j) {
      ComplexMatrix g(cc.da, k.cols());
      for (long a = 0; a < cc.da; ++a) g.row(a) = k.row(a * dbc + j);
      g_ops.push_back(std::move(g));
    }
  }
  const KrausMap g(cc.map.in_layout(), cc.a_layout, std::move(g_ops));
  const ComplexMatrix jg = kraus_to_choi(g).matrix;

  const auto da = static_cast<int>(cc.da);
  const auto db = static_cast<int>(cc.db);
  const auto dc = static_cast<int>(cc.dc);
  const SystemLayout joint{{"Aout", da}, {"Ain", da}, {"Bin", db}, {"Cin", dc}};
  const std::vector<std::string> keep{"Aout", "Ain", "Cin"};
  const ComplexMatrix jf = partial_trace(jg, joint, keep) / static_cast<double>(db);
  const SystemLayout extended{{"Aout", da}, {"Ain", da}, {"Cin", dc}, {"Bin", db}};
  const std::vector<std::size_t> to_canonical{0, 1, 3, 2};
  const ComplexMatrix expected =
      permute_systems(kron(jf, ComplexMatrix::Identity(db, db)), extended, to_canonical);
  const double norm = jg.norm();
  ChoiFactorization out;
  out.deviation = norm > 0.0 ? (jg - expected).norm() / norm : 0.0;
  out.local_choi = ChoiMatrix{cc.ac_layout(), cc.a_layout, jf};
  return out;
}

void consider(SignalingWitness& best, SignalingWitness&& candidate) {
  if (candidate.distance > best.distance + 1e-15) best = std::move(candidate);
}

ComplexVector apply_b_unitary(const CanonicalChannel& cc, const ComplexMatrix& u,
                              const ComplexVector& psi) {
  ComplexVector out = ComplexVector::Zero(psi.size());
  for (long a = 0; a < cc.da; ++a) {
    for (long c = 0; c < cc.dc; ++c) {
      for (long b = 0; b < cc.db; ++b) {
        const Complex amp = psi((a * cc.db + b) * cc.dc + c);
        if (amp == Complex(0.0)) continue;
        for (long b2 = 0; b2 < cc.db; ++b2) {
          out((a * cc.db + b2) * cc.dc + c) += u(b2, b) * amp;
        }
      }
    }
  }
  return out;
}

ComplexMatrix reset_b(const CanonicalChannel& cc, const ComplexVector& psi,
                      const ComplexVector& beta) {
  // sigma' = Tr_B |psi><psi| with |beta> inserted in the B slot.
  const long dac = cc.da * cc.dc;
  ComplexMatrix rho_ac = ComplexMatrix::Zero(dac, dac);
  for (long b = 0; b < cc.db; ++b) {
    ComplexVector slice(dac);
    for (long a = 0; a < cc.da; ++a) {
      for (long c = 0; c < cc.dc; ++c) slice(a * cc.dc + c) = psi((a * cc.db + b) * cc.dc + c);
    }
    rho_ac.noalias() += slice * slice.adjoint();
  }
  const long d = cc.da * cc.db * cc.dc;
  ComplexMatrix sigma(d, d);
  for (long a = 0; a < cc.da; ++a)
    for (long b = 0; b < cc.db; ++b)
      for (long c = 0; c < cc.dc; ++c)
        for (long a2 = 0; a2 < cc.da; ++a2)
          for (long b2 = 0; b2 < cc.db; ++b2)
            for (long c2 = 0; c2 < cc.dc; ++c2)
              sigma((a * cc.db + b) * cc.dc + c, (a2 * cc.db + b2) * cc.dc + c2) =
                  rho_ac(a * cc.dc + c, a2 * cc.dc + c2) * beta(b) * std::conj(beta(b2));
  return sigma;
}

struct Intervention {
  std::string description;
  ComplexMatrix unitary;  // empty for a reset
  ComplexVector reset_state;
};

Intervention random_intervention(const CanonicalChannel& cc, Rng& rng) {
  Intervention iv;
  if (rng.uniform() < 0.5) {
    iv.unitary = haar_random_unitary(static_cast<int>(cc.db), rng);
    iv.description = "unitary";
  } else {
    iv.reset_state = haar_random_vector(cc.db, rng);
    iv.description = "reset";
  }
  return iv;
}

ComplexMatrix final_after(const CanonicalChannel& cc, const Intervention& iv,
                          const ComplexVector& psi) {
  if (iv.unitary.size() > 0) return final_a_state(cc, apply_b_unitary(cc, iv.unitary, psi));
  return final_a_state(cc, reset_b(cc, psi, iv.reset_state));
}

void search_preparations(const CanonicalChannel& cc, const WitnessSearchOptions& opt,
                         Rng& rng, SignalingWitness& best) {
  const auto pa = probe_states(static_cast<int>(cc.da));
  const auto pb = probe_states(static_cast<int>(cc.db));
  const auto pc = probe_states(static_cast<int>(cc.dc));
  std::vector<ComplexMatrix> finals(pb.size());
  for (const auto& alpha : pa) {
    for (const auto& gamma : pc) {
      for (std::size_t k = 0; k < pb.size(); ++k) {
        finals[k] = final_a_state(cc, product_input(alpha, pb[k], gamma));
      }
      for (std::size_t i = 0; i < pb.size(); ++i) {
        for (std::size_t j = i + 1; j < pb.size(); ++j) {
          const double dist = trace_distance(finals[i], finals[j]);
          if (dist > best.distance + 1e-15) {
            SignalingWitness w;
            w.kind = SignalingWitness::Kind::Preparation;
            w.alpha = alpha;
            w.gamma = gamma;
            w.b0 = pb[i];
            w.b1 = pb[j];
            w.rho0 = finals[i];
            w.rho1 = finals[j];
            w.distance = dist;
            best = std::move(w);
          }
        }
      }
      if (best.distance >= kMaxDistance) return;
    }
  }
  for (long t = 0; t < opt.trials; ++t) {
    SignalingWitness w;
    w.kind = SignalingWitness::Kind::Preparation;
    w.alpha = haar_random_vector(cc.da, rng);
    w.gamma = haar_random_vector(cc.dc, rng);
    w.b0 = haar_random_vector(cc.db, rng);
    w.b1 = haar_random_vector(cc.db, rng);
    w.rho0 = final_a_state(cc, product_input(w.alpha, w.b0, w.gamma));
    w.rho1 = final_a_state(cc, product_input(w.alpha, w.b1, w.gamma));
    w.distance = trace_distance(w.rho0, w.rho1);
    consider(best, std::move(w));
    if (best.distance >= kMaxDistance) return;
  }
}

void search_interventions(const CanonicalChannel& cc, const WitnessSearchOptions& opt,
                          Rng& rng, SignalingWitness& best) {
  const long d = cc.da * cc.db * cc.dc;
  for (long t = 0; t < opt.trials; ++t) {
    const ComplexVector psi = haar_random_vector(d, rng);
    const Intervention i0 = random_intervention(cc, rng);
    const Intervention i1 = random_intervention(cc, rng);
    SignalingWitness w;
    w.kind = SignalingWitness::Kind::Intervention;
    w.global_input = psi;
    w.intervention0 = i0.description;
    w.intervention1 = i1.description;
    w.rho0 = final_after(cc, i0, psi);
    w.rho1 = final_after(cc, i1, psi);
    w.distance = trace_distance(w.rho0, w.rho1);
    consider(best, std::move(w));
    if (best.distance >= kMaxDistance) return;
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Partition

Partition::Partition(std::vector<std::string> a, std::vector<std::string> b,
                     std::vector<std::string> c)
    : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)) {
  if (a_.empty()) throw Error(ErrorKind::InvalidArgument, "partition role A is empty");
  std::set<std::string> seen;
  for (const auto* role : {&a_, &b_, &c_}) {
    for (const auto& l : *role) {
      if (l.empty() || !seen.insert(l).second) {
        throw Error(ErrorKind::InvalidArgument,
                    "label '" + l + "' is empty or assigned more than once");
      }
    }
  }
}

Partition Partition::parse(const std::string& expr) {
  std::vector<std::string> a, b, c;
  std::set<char> roles_seen;
  for (const auto& clause : split(expr, ';')) {
    if (clause.empty()) continue;
    const auto eq = clause.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorKind::InvalidInput, "partition clause '" + clause + "' lacks '='");
    }
    const std::string role = split(clause.substr(0, eq), ',').front();
    std::vector<std::string> labels;
    for (auto& l : split(clause.substr(eq + 1), ',')) {
      if (!l.empty()) labels.push_back(l);
    }
    if (role.size() != 1 || std::string("ABC").find(role[0]) == std::string::npos ||
        !roles_seen.insert(role[0]).second) {
      throw Error(ErrorKind::InvalidInput, "bad or repeated role '" + role + "'");
    }
    (role[0] == 'A' ? a : role[0] == 'B' ? b : c) = std::move(labels);
  }
  try {
    return Partition(std::move(a), std::move(b), std::move(c));
  } catch (const Error& e) {
    throw Error(ErrorKind::InvalidInput, e.what());
  }
}

void Partition::validate(const SystemLayout& layout) const {
  const std::vector<std::string> all = canonical_labels();
  if (all.size() != layout.size()) {
    throw Error(ErrorKind::InvalidArgument,
                "partition " + to_string() + " does not assign every label of the layout");
  }
  for (const auto& l : all) layout.index_of(l);
  if (layout.select(a_).total_dim() < 2) {
    throw Error(ErrorKind::InvalidArgument, "role A must be nontrivial");
  }
}

std::vector<std::string> Partition::canonical_labels() const {
  std::vector<std::string> out = a_;
  out.insert(out.end(), b_.begin(), b_.end());
  out.insert(out.end(), c_.begin(), c_.end());
  return out;
}

std::string Partition::to_string() const {
  auto join = [](const std::vector<std::string>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i];
    return s;
  };
  std::string s = "A=" + join(a_);
  if (!b_.empty()) s += ";B=" + join(b_);
  if (!c_.empty()) s += ";C=" + join(c_);
  return s;
}

CanonicalChannel canonicalize(const KrausMap& e, const Partition& p) {
  if (!e.is_endomorphic()) {
    throw Error(ErrorKind::DimensionMismatch,
                "locality analysis needs a channel with equal input and output layouts");
  }
  const SystemLayout& layout = e.in_layout();
  p.validate(layout);
  const std::vector<std::size_t> perm = layout.indices_of(p.canonical_labels());
  CanonicalChannel cc{permute_channel(e, perm), layout.select(p.a()),
                      layout.select(p.b()), layout.select(p.c())};
  cc.da = cc.a_layout.total_dim();
  cc.db = cc.b_layout.total_dim();
  cc.dc = cc.c_layout.total_dim();
  return cc;
}

// ---------------------------------------------------------------------------
// Probes

std::vector<ComplexVector> operator_basis_pure_states(int d) {
  if (d < 1) throw Error(ErrorKind::InvalidArgument, "dimension must be >= 1");
  const double s = 1.0 / std::sqrt(2.0);
  std::vector<ComplexVector> out;
  for (int n = 0; n < d; ++n) {
    ComplexVector v = ComplexVector::Zero(d);
    v(n) = 1.0;
    out.push_back(v);
  }
  for (int n = 0; n < d; ++n) {
    for (int m = n + 1; m < d; ++m) {
      ComplexVector plus = ComplexVector::Zero(d);
      plus(n) = s;
      plus(m) = s;
      ComplexVector iplus = ComplexVector::Zero(d);
      iplus(n) = s;
      iplus(m) = Complex(0.0, s);
      out.push_back(plus);
      out.push_back(iplus);
    }
  }
  return out;
}

ComplexVector operator_basis_expansion(const ComplexMatrix& x) {
  if (x.rows() != x.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "operator expansion needs a square matrix");
  }
  const auto d = static_cast<int>(x.rows());
  const auto states = operator_basis_pure_states(d);
  const long n = static_cast<long>(d) * d;
  ComplexMatrix basis(n, n);
  for (long k = 0; k < n; ++k) {
    const ComplexMatrix proj = states[k] * states[k].adjoint();
    basis.col(k) = Eigen::Map<const ComplexVector>(proj.data(), n);
  }
  const ComplexVector rhs = Eigen::Map<const ComplexVector>(x.data(), n);
  return basis.fullPivLu().solve(rhs);
}

std::vector<ComplexVector> probe_states(int d) {
  std::vector<ComplexVector> out = operator_basis_pure_states(d);
  const double s = 1.0 / std::sqrt(2.0);
  for (int n = 0; n < d; ++n) {
    for (int m = n + 1; m < d; ++m) {
      ComplexVector minus = ComplexVector::Zero(d);
      minus(n) = s;
      minus(m) = -s;
      ComplexVector iminus = ComplexVector::Zero(d);
      iminus(n) = s;
      iminus(m) = Complex(0.0, -s);
      out.push_back(minus);
      out.push_back(iminus);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Locality tests

SignalingWitness best_signaling_witness(const KrausMap& e, const Partition& p,
                                        const WitnessSearchOptions& options) {
  const CanonicalChannel cc = canonicalize(e, p);
  SignalingWitness best;
  best.distance = 0.0;
  if (cc.db == 1) return best;
  Rng rng(options.seed);
  if (options.preparations) search_preparations(cc, options, rng, best);
  if (options.interventions && best.distance < kMaxDistance) {
    search_interventions(cc, options, rng, best);
  }
  return best;
}

std::optional<SignalingWitness> find_signaling_witness(
    const KrausMap& e, const Partition& p, const WitnessSearchOptions& options) {
  SignalingWitness best = best_signaling_witness(e, p, options);
  if (best.distance > options.tol) return best;
  return std::nullopt;
}

LocalityReport check_semicausal(const KrausMap& e, const Partition& p, double tol,
                                const WitnessSearchOptions& witness_options) {
  const CanonicalChannel cc = canonicalize(e, p);
  const ChoiFactorization f = factorize(cc);
  LocalityReport r;
  r.deviation = f.deviation;
  r.tolerance = tol;
  r.semicausal = f.deviation <= tol;
  r.inconclusive = !r.semicausal && f.deviation <= 10.0 * tol;
  if (r.semicausal || r.inconclusive) {
    r.local_map = choi_to_kraus(f.local_choi, std::max(tol, 1e-12));
  }
  if (!r.semicausal) r.witness = find_signaling_witness(e, p, witness_options);
  return r;
}

KrausMap extract_local_map(const KrausMap& e, const Partition& p,
                           const StateVector& b_state) {
  const CanonicalChannel cc = canonicalize(e, p);
  if (b_state.amplitudes.size() != cc.db) {
    throw Error(ErrorKind::DimensionMismatch, "B state has the wrong dimension");
  }
  const ComplexVector beta = b_state.amplitudes / b_state.amplitudes.norm();
  const long dbc = cc.db * cc.dc;
  const long dac = cc.da * cc.dc;
  // Embedding AC -> ABC, |a c> -> |a>|beta>|c>.
  ComplexMatrix embed = ComplexMatrix::Zero(cc.da * dbc, dac);
  for (long a = 0; a < cc.da; ++a)
    for (long b = 0; b < cc.db; ++b)
      for (long c = 0; c < cc.dc; ++c) embed((a * cc.db + b) * cc.dc + c, a * cc.dc + c) = beta(b);
  std::vector<ComplexMatrix> ops;
  for (const auto& k : cc.map.ops()) {
    const ComplexMatrix ke = k * embed;
    for (long j = 0; j < dbc; ++j) {
      ComplexMatrix f(cc.da, dac);
      for (long a = 0; a < cc.da; ++a) f.row(a) = ke.row(a * dbc + j);
      if (f.norm() > 0.0) ops.push_back(std::move(f));
    }
  }
  return KrausMap(cc.ac_layout(), cc.a_layout, std::move(ops));
}

EquivalenceReport verify_locality_equivalence(const KrausMap& e, const Partition& p,
                                              std::uint64_t seed, double tol,
                                              double witness_tol, long trials) {
  EquivalenceReport r;
  const CanonicalChannel cc = canonicalize(e, p);
  r.choi_deviation = factorize(cc).deviation;
  r.choi = r.choi_deviation <= tol;

  WitnessSearchOptions prep{seed, trials, witness_tol, true, false};
  r.preparation_distance = best_signaling_witness(e, p, prep).distance;
  r.preparations = r.preparation_distance <= witness_tol;

  WitnessSearchOptions inter{seed + 1, trials, witness_tol, false, true};
  r.intervention_distance = best_signaling_witness(e, p, inter).distance;
  r.interventions = r.intervention_distance <= witness_tol;
  return r;
}

bool extension_check(const KrausMap& e, const Partition& p, int r_dim, double tol) {
  WitnessSearchOptions quiet;
  quiet.preparations = false;
  quiet.interventions = false;
  if (!check_semicausal(e, p, tol, quiet).semicausal) {
    throw Error(ErrorKind::PreconditionFailed,
                "extension check needs a semicausal channel");
  }
  std::string r_label = "R";
  while (e.in_layout().contains(r_label)) r_label += "'";
  const KrausMap extended = tensor(e, identity_channel(SystemLayout{{r_label, r_dim}}));

  std::vector<std::string> a_r = p.a();
  a_r.push_back(r_label);
  std::vector<std::string> b_r = p.b();
  b_r.push_back(r_label);
  const bool ar = check_semicausal(extended, Partition(a_r, p.b(), p.c()), tol, quiet).semicausal;
  const bool br = check_semicausal(extended, Partition(p.a(), b_r, p.c()), tol, quiet).semicausal;
  return ar && br;
}

}  // namespace qloc
