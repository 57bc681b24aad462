#include "qlocality/channels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "qlocality/error.hpp"

namespace qloc {

namespace {

std::string shape(const ComplexMatrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

// Row-major flattening of a Kraus operator: index o * d_in + i.
ComplexVector choi_vector(const ComplexMatrix& a) {
  const long dout = a.rows();
  const long din = a.cols();
  ComplexVector v(dout * din);
  for (long o = 0; o < dout; ++o) {
    for (long i = 0; i < din; ++i) {
#ifdef QLOCALITY_MUTANT_CHOI_ORDER
      v(i * dout + o) = a(o, i);
#else
      v(o * din + i) = a(o, i);
#endif
    }
  }
  return v;
}

ComplexMatrix inverse_sqrt_psd(const ComplexMatrix& s) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (s + s.adjoint()));
  RealVector ev = es.eigenvalues();
  for (long i = 0; i < ev.size(); ++i) ev(i) = 1.0 / std::sqrt(std::max(ev(i), 1e-300));
  return es.eigenvectors() * ev.cast<Complex>().asDiagonal() *
         es.eigenvectors().adjoint();
}

std::string role_label(const SystemLayout& layout, std::size_t i,
                       const char* role) {
  if (i >= layout.size()) {
    throw Error(ErrorKind::InvalidArgument,
                std::string("layout has no system for role ") + role);
  }
  return layout[i].label;
}

}  // namespace

// ---------------------------------------------------------------------------
// KrausMap

KrausMap::KrausMap(SystemLayout in, SystemLayout out, std::vector<ComplexMatrix> ops)
    : in_(std::move(in)), out_(std::move(out)), ops_(std::move(ops)) {
  if (ops_.empty()) {
    throw Error(ErrorKind::InvalidArgument, "Kraus map needs at least one operator");
  }
  for (std::size_t k = 0; k < ops_.size(); ++k) {
    if (ops_[k].rows() != out_dim() || ops_[k].cols() != in_dim()) {
      throw Error(ErrorKind::DimensionMismatch,
                  "Kraus operator " + std::to_string(k) + " is " + shape(ops_[k]) +
                      ", expected " + std::to_string(out_dim()) + "x" +
                      std::to_string(in_dim()));
    }
  }
  const double err = trace_preservation_error();
  if (!(err <= kTraceTol)) {
    throw Error(ErrorKind::NotTracePreserving,
                "sum of A^dagger A deviates from identity by " + std::to_string(err),
                err);
  }
}

double KrausMap::trace_preservation_error() const {
  ComplexMatrix s = ComplexMatrix::Zero(in_dim(), in_dim());
  for (const auto& a : ops_) s.noalias() += a.adjoint() * a;
  return (s - ComplexMatrix::Identity(in_dim(), in_dim())).cwiseAbs().maxCoeff();
}

SystemLayout ChoiMatrix::joint_layout() const {
  std::vector<System> systems = out_layout.systems();
  for (System s : in_layout.systems()) {
    while (std::any_of(systems.begin(), systems.end(),
                       [&](const System& t) { return t.label == s.label; })) {
      s.label += "'";
    }
    systems.push_back(s);
  }
  return SystemLayout(std::move(systems));
}

// ---------------------------------------------------------------------------
// Application and representations

ComplexMatrix apply(const KrausMap& map, const ComplexMatrix& rho) {
  if (rho.rows() != map.in_dim() || rho.cols() != map.in_dim()) {
    throw Error(ErrorKind::DimensionMismatch,
                "apply: state is " + shape(rho) + ", channel input dimension is " +
                    std::to_string(map.in_dim()));
  }
  ComplexMatrix out = ComplexMatrix::Zero(map.out_dim(), map.out_dim());
  for (const auto& a : map.ops()) out.noalias() += a * rho * a.adjoint();
  return out;
}

DensityMatrix apply(const KrausMap& map, const DensityMatrix& state) {
  if (!(state.layout == map.in_layout())) {
    throw Error(ErrorKind::DimensionMismatch,
                "apply: state layout does not match the channel input layout");
  }
  return DensityMatrix(map.out_layout(), apply(map, state.matrix));
}

ChoiMatrix kraus_to_choi(const KrausMap& map) {
  const long n = map.in_dim() * map.out_dim();
  ComplexMatrix j = ComplexMatrix::Zero(n, n);
  for (const auto& a : map.ops()) {
    const ComplexVector v = choi_vector(a);
    j.noalias() += v * v.adjoint();
  }
  return {map.in_layout(), map.out_layout(), j};
}

KrausMap choi_to_kraus(const ChoiMatrix& choi, double tol) {
  const long din = choi.in_layout.total_dim();
  const long dout = choi.out_layout.total_dim();
  if (choi.matrix.rows() != din * dout || choi.matrix.cols() != din * dout) {
    throw Error(ErrorKind::DimensionMismatch,
                "Choi matrix is " + shape(choi.matrix) + ", expected " +
                    std::to_string(din * dout) + "x" + std::to_string(din * dout));
  }
  ComplexMatrix tr_out = ComplexMatrix::Zero(din, din);
  for (long o = 0; o < dout; ++o) tr_out += choi.matrix.block(o * din, o * din, din, din);
  const double tp_err = (tr_out - ComplexMatrix::Identity(din, din)).cwiseAbs().maxCoeff();
  if (tp_err > tol) {
    throw Error(ErrorKind::NotTracePreserving,
                "Tr_out J deviates from identity by " + std::to_string(tp_err), tp_err);
  }
  const ComplexMatrix h = 0.5 * (choi.matrix + choi.matrix.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
  const RealVector& ev = es.eigenvalues();  // ascending
  const double lmax = ev(ev.size() - 1);
  if (ev(0) < -tol * std::max(1.0, lmax)) {
    throw Error(ErrorKind::NotPSD,
                "Choi matrix has eigenvalue " + std::to_string(ev(0)), -ev(0));
  }
  const double thr = rank_threshold(lmax, tol);
  std::vector<ComplexMatrix> ops;
  for (long k = ev.size() - 1; k >= 0 && ev(k) > thr; --k) {
    const ComplexVector v = fix_phase(ComplexVector(es.eigenvectors().col(k)));
    ComplexMatrix a(dout, din);
    for (long o = 0; o < dout; ++o) {
      for (long i = 0; i < din; ++i) a(o, i) = std::sqrt(ev(k)) * v(o * din + i);
    }
    ops.push_back(std::move(a));
  }
  if (ops.empty()) {
    throw Error(ErrorKind::NotTracePreserving, "Choi matrix is numerically zero");
  }
  if (static_cast<long>(ops.size()) < ev.size()) {
    // Truncation can leave O(tol) trace defects; renormalize.
    ComplexMatrix s = ComplexMatrix::Zero(din, din);
    for (const auto& a : ops) s.noalias() += a.adjoint() * a;
    if ((s - ComplexMatrix::Identity(din, din)).cwiseAbs().maxCoeff() > 1e-14) {
      const ComplexMatrix fix = inverse_sqrt_psd(s);
      for (auto& a : ops) a = a * fix;
    }
  }
  return KrausMap(choi.in_layout, choi.out_layout, std::move(ops));
}

ComplexMatrix apply_choi(const ChoiMatrix& j, const ComplexMatrix& rho) {
  const long din = j.in_layout.total_dim();
  const long dout = j.out_layout.total_dim();
  if (rho.rows() != din || rho.cols() != din) {
    throw Error(ErrorKind::DimensionMismatch, "apply_choi: state has wrong dimension");
  }
  // out(o, p) = sum_{i,i'} J(o i, p i') rho(i, i').
  ComplexMatrix out = ComplexMatrix::Zero(dout, dout);
  for (long o = 0; o < dout; ++o) {
    for (long p = 0; p < dout; ++p) {
      out(o, p) = (j.matrix.block(o * din, p * din, din, din).array() * rho.array()).sum();
    }
  }
  return out;
}

double choi_distance(const KrausMap& a, const KrausMap& b) {
  const ChoiMatrix ja = kraus_to_choi(a);
  const ChoiMatrix jb = kraus_to_choi(b);
  if (ja.matrix.rows() != jb.matrix.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "choi_distance: channel shapes differ");
  }
  return (ja.matrix - jb.matrix).norm();
}

long channel_rank(const KrausMap& map, double tol) {
  return numerical_rank(kraus_to_choi(map).matrix, tol);
}

StinespringRep stinespring_dilate(const KrausMap& map, long env_in_dim) {
  const long din = map.in_dim();
  const long dout = map.out_dim();
  const long rank = channel_rank(map);
  std::vector<ComplexMatrix> ops =
      static_cast<long>(map.ops().size()) == rank
          ? map.ops()
          : choi_to_kraus(kraus_to_choi(map)).ops();
  const long total = din * env_in_dim;
  if (env_in_dim < 1 || total % dout != 0) {
    throw Error(ErrorKind::InvalidArgument,
                "input environment dimension does not give a square unitary");
  }
  const long env_out = total / dout;
  if (env_out < static_cast<long>(ops.size())) {
    throw Error(ErrorKind::InvalidArgument,
                "environment too small for a channel of rank " +
                    std::to_string(ops.size()));
  }
  // Isometry columns for inputs |i>|0>.
  ComplexMatrix iso = ComplexMatrix::Zero(total, din);
  for (std::size_t mu = 0; mu < ops.size(); ++mu) {
    for (long o = 0; o < dout; ++o) {
      for (long i = 0; i < din; ++i) iso(o * env_out + static_cast<long>(mu), i) = ops[mu](o, i);
    }
  }
  const Subspace rest = null_space(iso.adjoint(), 1e-12);
  ComplexMatrix u(total, total);
  long next = 0;
  for (long i = 0; i < din; ++i) {
    for (long e = 0; e < env_in_dim; ++e) {
      const long col = i * env_in_dim + e;
      u.col(col) = e == 0 ? ComplexVector(iso.col(i)) : ComplexVector(rest.basis.col(next++));
    }
  }
  return {map.in_layout(), map.out_layout(), env_out, env_in_dim, 0, u};
}

StinespringRep stinespring_dilate(const KrausMap& map) {
  const long din = map.in_dim();
  const long dout = map.out_dim();
  const long rank = channel_rank(map);
  const long step = std::lcm(din, dout);
  long total = step;
  while (total < dout * rank) total += step;
  return stinespring_dilate(map, total / din);
}

KrausMap stinespring_to_kraus(const StinespringRep& rep) {
  const long din = rep.in_layout.total_dim();
  const long dout = rep.out_layout.total_dim();
  if (rep.unitary.rows() != din * rep.env_in_dim ||
      rep.unitary.cols() != din * rep.env_in_dim ||
      dout * rep.env_dim != din * rep.env_in_dim) {
    throw Error(ErrorKind::DimensionMismatch, "Stinespring unitary has the wrong shape");
  }
  std::vector<ComplexMatrix> ops;
  for (long e = 0; e < rep.env_dim; ++e) {
    ComplexMatrix a(dout, din);
    for (long o = 0; o < dout; ++o) {
      for (long i = 0; i < din; ++i) {
        a(o, i) = rep.unitary(o * rep.env_dim + e, i * rep.env_in_dim + rep.env_init);
      }
    }
    ops.push_back(std::move(a));
  }
  return KrausMap(rep.in_layout, rep.out_layout, std::move(ops));
}

KrausMap compose(const KrausMap& f, const KrausMap& g) {
  if (!(g.out_layout() == f.in_layout())) {
    throw Error(ErrorKind::DimensionMismatch,
                "compose: output layout of the first map does not match input of "
                "the second");
  }
  std::vector<ComplexMatrix> ops;
  for (const auto& a : f.ops()) {
    for (const auto& b : g.ops()) ops.push_back(a * b);
  }
  return KrausMap(g.in_layout(), f.out_layout(), std::move(ops));
}

KrausMap tensor(const KrausMap& f, const KrausMap& g) {
  std::vector<ComplexMatrix> ops;
  for (const auto& a : f.ops()) {
    for (const auto& b : g.ops()) ops.push_back(kron(a, b));
  }
  return KrausMap(f.in_layout().concat(g.in_layout()),
                  f.out_layout().concat(g.out_layout()), std::move(ops));
}

KrausMap permute_channel(const KrausMap& e, std::span<const std::size_t> perm) {
  if (!e.is_endomorphic()) {
    throw Error(ErrorKind::InvalidArgument, "permute_channel needs an endomorphic map");
  }
  std::vector<ComplexMatrix> ops;
  for (const auto& a : e.ops()) ops.push_back(permute_systems(a, e.in_layout(), perm));
  const SystemLayout l = e.in_layout().permuted(perm);
  return KrausMap(l, l, std::move(ops));
}

KrausMap remix_kraus(const KrausMap& e, long count, Rng& rng) {
  const long k = static_cast<long>(e.ops().size());
  count = std::max(count, k);
  const ComplexMatrix u = haar_random_unitary(static_cast<int>(count), rng);
  std::vector<ComplexMatrix> ops;
  for (long nu = 0; nu < count; ++nu) {
    ComplexMatrix b = ComplexMatrix::Zero(e.out_dim(), e.in_dim());
    for (long mu = 0; mu < k; ++mu) b += u(nu, mu) * e.ops()[mu];
    ops.push_back(std::move(b));
  }
  return KrausMap(e.in_layout(), e.out_layout(), std::move(ops));
}

// ---------------------------------------------------------------------------
// Constructors

KrausMap identity_channel(const SystemLayout& layout) {
  const long d = layout.total_dim();
  return KrausMap(layout, layout, {ComplexMatrix::Identity(d, d)});
}

KrausMap unitary_channel(const ComplexMatrix& u, const SystemLayout& layout) {
  return KrausMap(layout, layout, {u});
}

KrausMap partial_trace_channel(const SystemLayout& layout,
                               std::span<const std::string> keep) {
  const SystemLayout out = layout.keep_in_order(keep);
  std::vector<std::string> kept = out.labels();
  std::vector<std::size_t> perm = layout.indices_of(kept);
  for (std::size_t i = 0; i < layout.size(); ++i) {
    if (std::find(perm.begin(), perm.end(), i) == perm.end()) perm.push_back(i);
  }
  const std::vector<long> map = permutation_map(layout, perm);
  const long dk = out.total_dim();
  const long dd = layout.total_dim() / dk;
  std::vector<ComplexMatrix> ops(dd, ComplexMatrix::Zero(dk, layout.total_dim()));
  for (long x = 0; x < layout.total_dim(); ++x) {
    const long y = map[x];
    ops[y % dd](y / dd, x) = 1.0;
  }
  return KrausMap(layout, out, std::move(ops));
}

KrausMap constant_channel(const SystemLayout& in, const SystemLayout& out, long k) {
  if (k < 0 || k >= out.total_dim()) {
    throw Error(ErrorKind::InvalidArgument, "constant channel target out of range");
  }
  std::vector<ComplexMatrix> ops;
  for (long j = 0; j < in.total_dim(); ++j) {
    ComplexMatrix a = ComplexMatrix::Zero(out.total_dim(), in.total_dim());
    a(k, j) = 1.0;
    ops.push_back(std::move(a));
  }
  return KrausMap(in, out, std::move(ops));
}

KrausMap dephasing_channel(const SystemLayout& layout, const std::string& target) {
  const int d = layout[layout.index_of(target)].dim;
  const std::vector<std::string> t{target};
  std::vector<ComplexMatrix> ops;
  for (int k = 0; k < d; ++k) {
    ComplexMatrix p = ComplexMatrix::Zero(d, d);
    p(k, k) = 1.0;
    ops.push_back(embed_operator(p, layout, t));
  }
  return KrausMap(layout, layout, std::move(ops));
}

KrausMap cnot_channel(const SystemLayout& layout, const std::string& control,
                      const std::string& target) {
  const int dc = layout[layout.index_of(control)].dim;
  const int dt = layout[layout.index_of(target)].dim;
  ComplexMatrix op = ComplexMatrix::Zero(dc * dt, dc * dt);
  for (int c = 0; c < dc; ++c) {
    for (int t = 0; t < dt; ++t) op(c * dt + (t + c) % dt, c * dt + t) = 1.0;
  }
  const std::vector<std::string> targets{control, target};
  return unitary_channel(embed_operator(op, layout, targets), layout);
}

KrausMap swap_channel(const SystemLayout& layout, const std::string& a,
                      const std::string& b) {
  const int d = layout[layout.index_of(a)].dim;
  if (layout[layout.index_of(b)].dim != d) {
    throw Error(ErrorKind::DimensionMismatch, "swap needs equal dimensions");
  }
  ComplexMatrix op = ComplexMatrix::Zero(d * d, d * d);
  for (int x = 0; x < d; ++x) {
    for (int y = 0; y < d; ++y) op(y * d + x, x * d + y) = 1.0;
  }
  const std::vector<std::string> targets{a, b};
  return unitary_channel(embed_operator(op, layout, targets), layout);
}

KrausMap measure_write_channel(const SystemLayout& layout, const std::string& a,
                               const std::string& b) {
  const int da = layout[layout.index_of(a)].dim;
  const int db = layout[layout.index_of(b)].dim;
  const std::vector<std::string> targets{a, b};
  std::vector<ComplexMatrix> ops;
  for (int k = 0; k < da; ++k) {
    for (int j = 0; j < db; ++j) {
      ComplexMatrix pa = ComplexMatrix::Zero(da, da);
      pa(k, k) = 1.0;
      ComplexMatrix wb = ComplexMatrix::Zero(db, db);
      wb(k % db, j) = 1.0;
      ops.push_back(embed_operator(kron(pa, wb), layout, targets));
    }
  }
  return KrausMap(layout, layout, std::move(ops));
}

KrausMap depolarizing_channel(const SystemLayout& layout) {
  const long d = layout.total_dim();
  const double pi2 = 2.0 * std::numbers::pi;
  std::vector<ComplexMatrix> ops;
  for (long x = 0; x < d; ++x) {
    for (long z = 0; z < d; ++z) {
      // Weyl operator X^x Z^z / d.
      ComplexMatrix w = ComplexMatrix::Zero(d, d);
      for (long k = 0; k < d; ++k) {
        w((k + x) % d, k) = std::polar(1.0 / static_cast<double>(d),
                                       pi2 * static_cast<double>(z * k) / static_cast<double>(d));
      }
      ops.push_back(std::move(w));
    }
  }
  return KrausMap(layout, layout, std::move(ops));
}

KrausMap random_channel(const SystemLayout& in, const SystemLayout& out,
                        long kraus_count, Rng& rng) {
  const long din = in.total_dim();
  const long dout = out.total_dim();
  kraus_count = std::max({kraus_count, 1L, (din + dout - 1) / dout});
  const long rows = dout * kraus_count;
  ComplexMatrix g(rows, din);
  for (long c = 0; c < din; ++c) {
    for (long r = 0; r < rows; ++r) g(r, c) = rng.complex_normal();
  }
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  const ComplexMatrix iso = qr.householderQ() * ComplexMatrix::Identity(rows, din);
  std::vector<ComplexMatrix> ops;
  for (long mu = 0; mu < kraus_count; ++mu) {
    ComplexMatrix a(dout, din);
    for (long o = 0; o < dout; ++o) a.row(o) = iso.row(o * kraus_count + mu);
    ops.push_back(std::move(a));
  }
  return KrausMap(in, out, std::move(ops));
}

// ---------------------------------------------------------------------------
// Corpus

namespace {

struct ParsedName {
  std::string base;
  std::vector<long> args;
};

ParsedName parse_name(const std::string& name) {
  ParsedName p;
  const auto open = name.find('(');
  if (open == std::string::npos) {
    p.base = name;
    return p;
  }
  if (name.back() != ')') {
    throw Error(ErrorKind::UnknownChannel, "malformed channel name '" + name + "'");
  }
  p.base = name.substr(0, open);
  std::stringstream ss(name.substr(open + 1, name.size() - open - 2));
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      p.args.push_back(std::stol(tok));
    } catch (const std::exception&) {
      throw Error(ErrorKind::UnknownChannel, "bad argument in '" + name + "'");
    }
  }
  return p;
}

long arg_or(const ParsedName& p, std::size_t i, long fallback) {
  return i < p.args.size() ? p.args[i] : fallback;
}

// U = (W^{BC} (x) 1_A)(1_B (x) V^{AC}) on a layout with roles A, B, C in
// positions 0, 1, 2 (C optional).
ComplexMatrix semicausal_unitary(const SystemLayout& layout, Rng& rng) {
  const std::string a = role_label(layout, 0, "A");
  const std::string b = role_label(layout, 1, "B");
  std::vector<std::string> ac{a};
  std::vector<std::string> bc{b};
  if (layout.size() > 2) {
    ac.push_back(layout[2].label);
    bc.push_back(layout[2].label);
  }
  const ComplexMatrix v = haar_random_unitary(
      static_cast<int>(layout.select(ac).total_dim()), rng);
  const ComplexMatrix w = haar_random_unitary(
      static_cast<int>(layout.select(bc).total_dim()), rng);
  return embed_operator(w, layout, bc) * embed_operator(v, layout, ac);
}

}  // namespace

KrausMap example_channel(const std::string& name, const SystemLayout& layout) {
  const ParsedName p = parse_name(name);
  const std::string& base = p.base;
  if (base == "identity") return identity_channel(layout);
  if (base == "constant") return constant_channel(layout, layout, arg_or(p, 0, 0));
  if (base == "dephasing") return dephasing_channel(layout, role_label(layout, 0, "A"));
  if (base == "depolarizing") return depolarizing_channel(layout);
  if (base == "swap_AB" || base == "swap") {
    return swap_channel(layout, role_label(layout, 0, "A"), role_label(layout, 1, "B"));
  }
  if (base == "cnot") {
    const long c = arg_or(p, 0, 0);
    const long t = arg_or(p, 1, 1);
    if (c < 0 || t < 0 || c == t) {
      throw Error(ErrorKind::UnknownChannel, "cnot needs distinct control and target");
    }
    return cnot_channel(layout, role_label(layout, static_cast<std::size_t>(c), "control"),
                        role_label(layout, static_cast<std::size_t>(t), "target"));
  }
  if (base == "measure_write_AB" || base == "measure_write") {
    return measure_write_channel(layout, role_label(layout, 0, "A"),
                                 role_label(layout, 1, "B"));
  }
  if (base == "random_semicausal") {
    Rng rng(static_cast<std::uint64_t>(arg_or(p, 0, 0)));
    return unitary_channel(semicausal_unitary(layout, rng), layout);
  }
  if (base == "random_semicausal_cp") {
    // (I_A (x) F^{BC}) o (I_B (x) V^{AC}) with a random CP map F.
    Rng rng(static_cast<std::uint64_t>(arg_or(p, 0, 0)));
    const std::string a = role_label(layout, 0, "A");
    const std::string b = role_label(layout, 1, "B");
    std::vector<std::string> ac{a};
    std::vector<std::string> bc{b};
    if (layout.size() > 2) {
      ac.push_back(layout[2].label);
      bc.push_back(layout[2].label);
    }
    const ComplexMatrix v = haar_random_unitary(
        static_cast<int>(layout.select(ac).total_dim()), rng);
    const SystemLayout bc_layout = layout.select(bc);
    const KrausMap f = random_channel(bc_layout, bc_layout, 2, rng);
    const ComplexMatrix vfull = embed_operator(v, layout, ac);
    std::vector<ComplexMatrix> ops;
    for (const auto& k : f.ops()) ops.push_back(embed_operator(k, layout, bc) * vfull);
    return KrausMap(layout, layout, std::move(ops));
  }
  if (base == "product_local") {
    Rng rng(static_cast<std::uint64_t>(arg_or(p, 0, 0)));
    const std::vector<std::string> a{role_label(layout, 0, "A")};
    const std::vector<std::string> b{role_label(layout, 1, "B")};
    const KrausMap ea = random_channel(layout.select(a), layout.select(a), 2, rng);
    const KrausMap eb = random_channel(layout.select(b), layout.select(b), 2, rng);
    std::vector<ComplexMatrix> ops;
    for (const auto& x : ea.ops()) {
      for (const auto& y : eb.ops()) {
        ops.push_back(embed_operator(x, layout, a) * embed_operator(y, layout, b));
      }
    }
    return KrausMap(layout, layout, std::move(ops));
  }
  if (base == "random") {
    Rng rng(static_cast<std::uint64_t>(arg_or(p, 0, 0)));
    return random_channel(layout, layout, 2, rng);
  }

  // Maps AC -> A: A is the first system, C the rest.
  const std::vector<std::string> a{role_label(layout, 0, "A")};
  const SystemLayout a_layout = layout.select(a);
  if (base == "trace_C") return partial_trace_channel(layout, a);
  if (base == "autonomous") {
    Rng rng(static_cast<std::uint64_t>(arg_or(p, 0, 0)));
    const ComplexMatrix u =
        haar_random_unitary(static_cast<int>(layout.total_dim()), rng);
    return compose(partial_trace_channel(layout, a), unitary_channel(u, layout));
  }
  if (base == "dephased_trace_C") {
    return compose(dephasing_channel(a_layout, a[0]), partial_trace_channel(layout, a));
  }
  if (base == "constant_AC") return constant_channel(layout, a_layout, arg_or(p, 0, 0));
  if (base == "random_local") {
    // Tr_{CE} U (s (x) |0><0|_E) U^dagger with a Haar U on ACE, d_E = 2.
    Rng rng(static_cast<std::uint64_t>(arg_or(p, 0, 0)));
    const long d = layout.total_dim();
    const long da = a_layout.total_dim();
    const long dc = d / da;
    const long de = 2;
    const ComplexMatrix u = haar_random_unitary(static_cast<int>(d * de), rng);
    std::vector<ComplexMatrix> ops;
    for (long c = 0; c < dc; ++c) {
      for (long e = 0; e < de; ++e) {
        ComplexMatrix k(da, d);
        for (long x = 0; x < da; ++x) {
          for (long y = 0; y < d; ++y) k(x, y) = u((x * dc + c) * de + e, y * de);
        }
        ops.push_back(std::move(k));
      }
    }
    return KrausMap(layout, a_layout, std::move(ops));
  }
  throw Error(ErrorKind::UnknownChannel, "unknown channel '" + name + "'");
}

std::vector<std::string> example_channel_names() {
  return {"identity",        "constant(k)",       "dephasing",
          "depolarizing",    "swap_AB",           "cnot(control,target)",
          "measure_write_AB", "random_semicausal(seed)",
          "random_semicausal_cp(seed)", "product_local(seed)", "random(seed)",
          "trace_C",         "autonomous(seed)",  "dephased_trace_C",
          "constant_AC(k)",  "random_local(seed)"};
}

}  // namespace qloc
