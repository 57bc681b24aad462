#include "qlocality/battery.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include "qlocality/channel_file.hpp"
#include "qlocality/cli.hpp"
#include "qlocality/decompose.hpp"
#include "qlocality/error.hpp"

namespace qloc {

namespace {

namespace fs = std::filesystem;

struct Failure {
  std::string message;
};

class Checker {
 public:
  void require(bool ok, const std::string& what) {
    ++checks_;
    if (!ok) throw Failure{what};
  }
  void at_most(double value, double bound, const std::string& what) {
    worst_ = std::max(worst_, bound > 0.0 ? value / bound : value);
    std::ostringstream os;
    os << what << ": " << value << " > " << bound;
    require(value <= bound, os.str());
  }
  long checks() const { return checks_; }
  double worst_ratio() const { return worst_; }

 private:
  long checks_ = 0;
  double worst_ = 0.0;
};

struct NamedChannel {
  std::string name;
  KrausMap map;
  Partition partition;
};

SystemLayout dims3(int a, int b, int c) { return SystemLayout{{"q0", a}, {"q1", b}, {"q2", c}}; }
SystemLayout dims2(int a, int c) { return SystemLayout{{"q0", a}, {"q1", c}}; }

Partition abc() { return Partition({"q0"}, {"q1"}, {"q2"}); }

const std::vector<std::array<int, 3>>& rotation() {
  static const std::vector<std::array<int, 3>> dims{{2, 2, 2}, {2, 3, 2}, {3, 2, 2}};
  return dims;
}

NamedChannel corpus_entry(const std::string& name, const std::array<int, 3>& d) {
  return {name + " " + std::to_string(d[0]) + "x" + std::to_string(d[1]) + "x" +
              std::to_string(d[2]),
          example_channel(name, dims3(d[0], d[1], d[2])), abc()};
}

std::vector<NamedChannel> locality_corpus(bool full) {
  std::vector<NamedChannel> out;
  for (const char* name :
       {"identity", "swap_AB", "cnot(0,1)", "cnot(1,0)", "measure_write_AB", "constant(0)",
        "constant(1)", "dephasing", "depolarizing", "product_local(3)"}) {
    out.push_back(corpus_entry(name, {2, 2, 2}));
  }
  const int count = full ? 20 : 6;
  for (int s = 0; s < count; ++s) {
    const std::string kind = s % 2 == 0 ? "random_semicausal" : "random_semicausal_cp";
    out.push_back(corpus_entry(kind + "(" + std::to_string(s) + ")", rotation()[s % 3]));
  }
  for (int s = 0; s < count; ++s) {
    out.push_back(corpus_entry("random(" + std::to_string(100 + s) + ")", rotation()[s % 3]));
  }
  return out;
}

std::vector<NamedChannel> semicausal_corpus(bool full) {
  std::vector<NamedChannel> out;
  for (auto& c : locality_corpus(full)) {
    WitnessSearchOptions quiet;
    quiet.preparations = false;
    quiet.interventions = false;
    if (check_semicausal(c.map, c.partition, kDefaultTol, quiet).semicausal) {
      out.push_back(std::move(c));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

std::string criterion_round_trips(bool full, Checker& ck) {
  const int count = full ? 50 : 10;
  Rng rng(2024);
  for (int i = 0; i < count; ++i) {
    const int din = 1 + static_cast<int>(rng.index(4));
    const int dout = 1 + static_cast<int>(rng.index(4));
    const long min_k = (din + dout - 1) / dout;
    const long kmax = static_cast<long>(din) * dout;
    const long k = min_k + rng.index(kmax - min_k + 1);
    const KrausMap f = random_channel(SystemLayout{{"i", din}}, SystemLayout{{"o", dout}}, k, rng);
    const ChoiMatrix j = kraus_to_choi(f);
    const KrausMap back = choi_to_kraus(j);
    const std::string tag = "channel " + std::to_string(i);
    ck.at_most((kraus_to_choi(back).matrix - j.matrix).norm(), 1e-10, tag + " Choi round trip");
    ck.require(static_cast<long>(back.ops().size()) == channel_rank(f),
               tag + " Kraus count equals channel rank");
    const KrausMap dilated = stinespring_to_kraus(stinespring_dilate(f));
    ck.at_most((kraus_to_choi(dilated).matrix - j.matrix).norm(), 1e-10,
               tag + " Stinespring round trip");
  }
  return std::to_string(count) + " random channels";
}

std::string criterion_locality_equivalence(bool full, Checker& ck) {
  long semicausal = 0, signaling = 0;
  const long trials = full ? 200 : 60;
  for (const auto& c : locality_corpus(full)) {
    const EquivalenceReport r =
        verify_locality_equivalence(c.map, c.partition, 17, kDefaultTol, 1e-6, trials);
    ck.require(r.agree(), c.name + ": Choi, probe and intervention verdicts disagree");
    if (r.choi) {
      ++semicausal;
      ck.at_most(r.choi_deviation, 1e-9, c.name + " deviation");
    } else {
      ++signaling;
      ck.require(r.preparation_distance >= 1e-6 && r.intervention_distance >= 1e-6,
                 c.name + ": witness below 1e-6");
      const LocalityReport lr = check_semicausal(c.map, c.partition);
      ck.require(lr.witness.has_value() && lr.witness->distance >= 1e-6,
                 c.name + ": check_semicausal returned no witness");
    }
  }
  return std::to_string(semicausal) + " semicausal, " + std::to_string(signaling) +
         " signaling channels agree";
}

std::string criterion_local_map(bool full, Checker& ck) {
  const int samples = full ? 50 : 10;
  long channels = 0;
  for (const auto& c : semicausal_corpus(full)) {
    const CanonicalChannel cc = canonicalize(c.map, c.partition);
    const LocalityReport r = check_semicausal(c.map, c.partition);
    const KrausMap& f = *r.local_map;
    const SystemLayout& layout = cc.map.in_layout();
    std::vector<std::string> ac = c.partition.a();
    ac.insert(ac.end(), c.partition.c().begin(), c.partition.c().end());
    Rng rng(31 + static_cast<std::uint64_t>(channels));
    for (int i = 0; i < samples; ++i) {
      const DensityMatrix sigma = random_density(layout, rng, 1 + rng.index(3));
      const ComplexMatrix lhs = qloc::apply(f, partial_trace(sigma.matrix, layout, ac));
      const ComplexMatrix rhs =
          partial_trace(qloc::apply(cc.map, sigma.matrix), layout, c.partition.a());
      ck.at_most((lhs - rhs).norm(), 1e-9, c.name + " local-map identity");
    }
    const SystemLayout& b = cc.b_layout;
    const KrausMap f0 = extract_local_map(c.map, c.partition, random_state(b, rng));
    const KrausMap f1 = extract_local_map(c.map, c.partition, random_state(b, rng));
    ck.at_most(choi_distance(f0, f1), 1e-9, c.name + " B-state independence");
    ck.at_most(choi_distance(f0, f), 1e-9, c.name + " extraction matches Choi factor");
    ++channels;
  }
  return std::to_string(channels) + " semicausal channels, " + std::to_string(samples) +
         " states each";
}

std::string criterion_extension(bool full, Checker& ck) {
  long channels = 0;
  for (const auto& c : semicausal_corpus(full)) {
    for (int r : {2, 3}) {
      ck.require(extension_check(c.map, c.partition, r),
                 c.name + ": extension fails with R of dim " + std::to_string(r));
    }
    ++channels;
  }
  bool rejected = false;
  try {
    extension_check(example_channel("swap_AB", dims3(2, 2, 1)), abc(), 2);
  } catch (const Error& e) {
    rejected = e.kind() == ErrorKind::PreconditionFailed;
  }
  ck.require(rejected, "swap_AB must be rejected with PreconditionFailed");
  return std::to_string(channels) + " channels, R of dim 2 and 3";
}

std::string criterion_rank_bound(bool full, Checker& ck) {
  const int count = full ? 50 : 12;
  Rng rng(5150);
  long tight = 0;
  for (int i = 0; i < count; ++i) {
    const int da = 2 + (i % 2);
    const int dc = 2 + ((i / 2) % 2);
    const long k = dc + rng.index(3);
    const KrausMap f = random_channel(dims2(da, dc), SystemLayout{{"q0", da}}, k, rng);
    const long rank = orc_rank(f);
    ck.require(rank >= dc, "map " + std::to_string(i) + ": rank " + std::to_string(rank) +
                               " < d_C " + std::to_string(dc));
    if (rank == dc) ++tight;
  }
  for (const auto& d : {std::array<int, 2>{2, 2}, {2, 3}, {3, 2}, {3, 3}}) {
    ck.require(orc_rank(example_channel("trace_C", dims2(d[0], d[1]))) == d[1],
               "trace_C attains the bound");
  }
  return std::to_string(count) + " random maps, " + std::to_string(tight) + " at the bound";
}

std::string criterion_autonomy(bool full, Checker& ck) {
  const int count = full ? 10 : 4;
  static const std::array<std::array<int, 2>, 3> dims{{{2, 2}, {2, 3}, {3, 2}}};
  double worst = 0.0;
  for (int i = 0; i < count; ++i) {
    const auto& d = dims[i % 3];
    const SystemLayout ac = dims2(d[0], d[1]);
    const KrausMap good = example_channel("autonomous(" + std::to_string(i) + ")", ac);
    const EquivalenceSuiteReport g = equivalence_suite(good, kDefaultTol, i);
    ck.require(g.agree() && g.autonomy.verdict,
               "autonomous map " + std::to_string(i) + " not certified on all three tests");
    ck.at_most(g.autonomy.reconstruction_error, 1e-9, "autonomous reconstruction");
    worst = std::max(worst, g.autonomy.reconstruction_error);

    const KrausMap bad = example_channel("random_local(" + std::to_string(i) + ")", ac);
    const EquivalenceSuiteReport b = equivalence_suite(bad, kDefaultTol, i);
    ck.require(b.agree() && !b.autonomy.verdict,
               "non-autonomous map " + std::to_string(i) + " verdicts disagree or pass");
  }
  for (const char* name : {"trace_C", "dephased_trace_C", "constant_AC(0)"}) {
    const EquivalenceSuiteReport r = equivalence_suite(example_channel(name, dims2(2, 2)));
    ck.require(r.agree(), std::string(name) + ": verdicts disagree");
  }
  std::ostringstream os;
  os << count << " autonomous + " << count << " non-autonomous maps, worst reconstruction "
     << worst;
  return os.str();
}

std::string criterion_precursors(bool full, Checker& ck) {
  const int pairs = full ? 50 : 15;
  std::vector<KrausMap> maps;
  for (int i = 0; i < 3; ++i) {
    maps.push_back(example_channel("autonomous(" + std::to_string(40 + i) + ")",
                                   dims2(2 + i % 2, 2 + (i / 2) % 2)));
  }
  maps.push_back(example_channel("trace_C", dims2(2, 3)));
  maps.push_back(example_channel("dephased_trace_C", dims2(2, 2)));
  maps.push_back(example_channel("constant_AC(0)", dims2(2, 2)));
  maps.push_back(example_channel("random_local(7)", dims2(2, 2)));

  Rng rng(808);
  long fidelity_pairs = 0;
  for (std::size_t m = 0; m < maps.size(); ++m) {
    const KrausMap& f = maps[m];
    const std::string tag = "map " + std::to_string(m);
    const KrausMap mixed = remix_kraus(f, static_cast<long>(f.ops().size()) + 2, rng);
    std::vector<ComplexVector> probes = operator_basis_pure_states(static_cast<int>(f.out_dim()));
    for (int i = 0; i < 5; ++i) probes.push_back(haar_random_vector(f.out_dim(), rng));
    for (const auto& psi : probes) {
      const Subspace s0 = precursor_subspace(f, psi);
      const Subspace s1 = precursor_subspace(mixed, psi);
      ck.require(s0.dim() == s1.dim(), tag + ": representation changes dim S_psi");
      if (s0.dim() > 0) ck.at_most(subspace_distance(s0, s1), 1e-8, tag + " principal angle");
      for (long k = 0; k < s0.dim(); ++k) {
        ck.require(is_precursor(f, s0.basis.col(k), psi, 1e-8), tag + ": basis vector not a precursor");
      }
    }
    // Distinct outputs share no precursors.
    for (std::size_t i = 0; i + 1 < probes.size(); ++i) {
      const double fid = std::norm(probes[i].dot(probes[i + 1]));
      if (fid > 1.0 - 1e-6) continue;
      const Subspace a = precursor_subspace(f, probes[i]);
      const Subspace b = precursor_subspace(f, probes[i + 1]);
      if (a.dim() > 0 && b.dim() > 0) {
        ck.require(intersection_dim(a, b, 1e-9) == 0, tag + ": precursor subspaces intersect");
      }
    }
    const FidelityReport fr = fidelity_monotonicity_check(f, pairs, 900 + m, 1e-10);
    ck.at_most(-fr.min_slack, 1e-10, tag + " fidelity monotonicity slack");
    ck.at_most(fr.max_orthogonal_overlap, 1e-9, tag + " orthogonal-output overlap");
    fidelity_pairs += fr.pairs_checked;
  }
  return std::to_string(maps.size()) + " maps, " + std::to_string(fidelity_pairs) +
         " precursor pairs";
}

std::string criterion_frame(bool, Checker& ck) {
  static const std::array<std::array<int, 2>, 5> dims{{{2, 2}, {2, 3}, {3, 2}, {3, 3}, {2, 2}}};
  for (int i = 0; i < 5; ++i) {
    const auto& d = dims[i];
    const KrausMap f = example_channel("autonomous(" + std::to_string(60 + i) + ")",
                                       dims2(d[0], d[1]));
    const PrecursorFrame fr = precursor_frame(f);
    const FrameDiagnostics dg = diagnose_frame(f, fr, 70 + i, 5);
    const std::string tag = "map " + std::to_string(i);
    ck.require(static_cast<long>(fr.subspaces.size()) == d[1], tag + ": wrong number of T_n");
    for (const auto& t : fr.subspaces) ck.require(t.dim() == d[0], tag + ": dim T_n != d_A");
    ck.require(dg.total_dim == static_cast<long>(d[0]) * d[1], tag + ": frame incomplete");
    ck.at_most(dg.max_cross_overlap, 1e-9, tag + " T_n overlap");
    ck.at_most(dg.completeness_error, 1e-9, tag + " orthonormality");
    ck.require(dg.max_intersection_defect == 0, tag + ": T_n meets some S_k in dim != 1");
    ck.at_most(fr.coefficient_error, 1e-9, tag + " coefficient phases");
    ck.at_most(1.0 - dg.min_purity, 1e-9, tag + " output purity");
    ck.at_most(1.0 - dg.min_entangled_purity, 1e-9, tag + " entangled output purity");
  }
  bool violated = false;
  try {
    precursor_frame(example_channel("dephased_trace_C", dims2(2, 2)));
  } catch (const Error& e) {
    violated = e.kind() == ErrorKind::UdcViolation;
  }
  ck.require(violated, "dephased map must raise UdcViolation");
  return "5 autonomous frames";
}

std::string criterion_unitary_decomposition(bool full, Checker& ck) {
  const int count = full ? 20 : 6;
  double worst = 0.0;
  for (int i = 0; i < count; ++i) {
    const auto& d = rotation()[i % 3];
    const SystemLayout layout = dims3(d[0], d[1], d[2]);
    const KrausMap e = example_channel("random_semicausal(" + std::to_string(200 + i) + ")", layout);
    const UnitaryDecomposition dec = decompose_semicausal_unitary(e.ops().front(), layout, abc());
    // Independent re-application: compose the factors as channels.
    const KrausMap v = unitary_channel(embed_operator(dec.v, layout, dec.v_layout.labels()), layout);
    const KrausMap w = unitary_channel(embed_operator(dec.w, layout, dec.w_layout.labels()), layout);
    const double channel_residual = choi_distance(compose(w, v), e);
    ck.at_most(dec.residual, 1e-8, "unitary " + std::to_string(i) + " residual");
    ck.at_most(channel_residual, 1e-8, "unitary " + std::to_string(i) + " channel residual");
    ck.at_most(unitarity_error(dec.v) + unitarity_error(dec.w), 1e-9, "factor unitarity");
    worst = std::max(worst, dec.residual);
  }
  const SystemLayout l = dims3(2, 2, 2);
  bool rejected = false;
  try {
    decompose_semicausal_unitary(example_channel("swap_AB", l).ops().front(), l, abc());
  } catch (const Error& e) {
    rejected = e.kind() == ErrorKind::NotSemicausal;
  }
  ck.require(rejected, "swap_AB must be rejected with NotSemicausal");
  const UnitaryDecomposition id =
      decompose_semicausal_unitary(ComplexMatrix::Identity(8, 8), l, abc());
  ck.at_most(id.residual, 1e-12, "identity residual");
  std::ostringstream os;
  os << count << " unitaries, worst residual " << worst;
  return os.str();
}

std::string criterion_counterexample(bool, Checker& ck) {
  for (const auto& layout : {dims3(2, 2, 1), dims3(2, 2, 2), dims3(3, 2, 2)}) {
    const KrausMap mw = example_channel("measure_write_AB", layout);
    const LocalityReport forward = check_semicausal(mw, abc());
    ck.require(forward.semicausal, "measure_write must satisfy B -/-> A");
    const LocalityReport backward = check_semicausal(mw, Partition({"q1"}, {"q0"}, {"q2"}));
    ck.require(!backward.semicausal && backward.witness.has_value(),
               "measure_write must signal A -> B");
    ck.at_most(1.0 - backward.witness->distance, 1e-9, "A -> B witness distance");
    bool rejected = false;
    try {
      decompose_autonomous_cp(mw, abc());
    } catch (const Error& e) {
      rejected = e.kind() == ErrorKind::LocalMapNotAutonomous;
    }
    ck.require(rejected, "measure_write must be rejected with LocalMapNotAutonomous");
  }
  return "measure_write on 3 layouts";
}

std::string criterion_semilocalization(bool full, Checker& ck) {
  std::vector<NamedChannel> cases;
  cases.push_back(corpus_entry("measure_write_AB", {2, 2, 1}));
  cases.push_back(corpus_entry("measure_write_AB", {2, 2, 2}));
  cases.push_back(corpus_entry("product_local(1)", {2, 2, 1}));
  cases.push_back(corpus_entry("product_local(2)", {2, 2, 2}));
  cases.push_back(corpus_entry("identity", {2, 2, 2}));
  cases.push_back(corpus_entry("random_semicausal(5)", {2, 2, 2}));
  cases.push_back(corpus_entry("random_semicausal(6)", {2, 3, 1}));
  cases.push_back(corpus_entry("random_semicausal_cp(7)", {2, 2, 2}));
  cases.push_back(corpus_entry("random_semicausal_cp(8)", {2, 2, 1}));
  cases.push_back(corpus_entry("dephasing", {2, 2, 2}));
  if (!full) cases.erase(cases.begin() + 5, cases.end());
  double worst = 0.0;
  double mw_wrong = 0.0;
  for (const auto& c : cases) {
    const SequentialDilation s = semilocalize(c.map, c.partition);
    // Independent re-application on the caller's side.
    const SystemLayout& canonical = s.canonical_layout;
    const SystemLayout sys = canonical.concat(SystemLayout{{"#env", static_cast<int>(s.env_dim)}});
    std::vector<std::string> v_targets = c.partition.a();
    v_targets.insert(v_targets.end(), c.partition.c().begin(), c.partition.c().end());
    std::vector<std::string> w_targets = c.partition.b();
    w_targets.insert(w_targets.end(), c.partition.c().begin(), c.partition.c().end());
    v_targets.push_back("#env");
    w_targets.push_back("#env");
    const ComplexMatrix v = embed_operator(s.v, sys, v_targets);
    const ComplexMatrix w = embed_operator(s.w, sys, w_targets);
    const double residual =
        choi_distance(sequential_channel(w * v, canonical, s.env_dim), canonicalize(c.map, c.partition).map);
    ck.at_most(residual, 1e-8, c.name + " sequential dilation");
    worst = std::max(worst, residual);
    if (c.name.rfind("measure_write", 0) == 0) {
      ck.require(s.wrong_order_residual >= 0.1,
                 c.name + ": wrong order reconstructs the channel");
      mw_wrong = std::max(mw_wrong, s.wrong_order_residual);
    }
  }
  bool rejected = false;
  try {
    semilocalize(example_channel("swap_AB", dims3(2, 2, 1)), abc());
  } catch (const Error& e) {
    rejected = e.kind() == ErrorKind::NotSemicausal;
  }
  ck.require(rejected, "swap_AB must be rejected with NotSemicausal");
  std::ostringstream os;
  os << cases.size() << " channels, worst residual " << worst
     << ", measure_write wrong-order residual " << mw_wrong;
  return os.str();
}

int cli(const std::vector<std::string>& args, std::string* out = nullptr) {
  std::ostringstream o, e;
  const int code = run_cli(args, o, e);
  if (out) *out = o.str();
  return code;
}

std::string criterion_cli(bool, Checker& ck) {
  const fs::path dir = fs::temp_directory_path() /
                       ("qlocality-selftest-" +
                        std::to_string(std::chrono::steady_clock::now().time_since_epoch().count()));
  fs::create_directories(dir);
  auto path = [&](const std::string& name) { return (dir / name).string(); };
  struct Cleanup {
    fs::path p;
    ~Cleanup() {
      std::error_code ec;
      fs::remove_all(p, ec);
    }
  } cleanup{dir};

  ck.require(cli({"gen", "swap_AB", "--dims", "2,2", "--out", path("swap.json")}) == 0, "gen swap");
  ck.require(cli({"gen", "random_semicausal", "--dims", "2,3,2", "--seed", "7", "--out",
                  path("semicausal.json")}) == 0,
             "gen random_semicausal");
  ck.require(cli({"gen", "measure_write", "--dims", "2,2,1", "--out", path("mw.json")}) == 0,
             "gen measure_write");
  ck.require(cli({"gen", "autonomous", "--dims", "2,2", "--seed", "3", "--out",
                  path("autonomous.json")}) == 0,
             "gen autonomous");
  ck.require(cli({"gen", "random", "--dims", "2,2", "--seed", "9", "--representation", "choi",
                  "--out", path("choi.json")}) == 0,
             "gen choi");
  {
    std::ofstream bad(path("bad.json"));
    bad << R"({"version": 1, "layout": [{"label": "q0", "dim": 2}], "representation": "kraus",)"
        << R"( "operators": [[[[1, 0], [0, 0]], [[0, 0], [1, 0]], [[0, 0], [0, 0]]]]})";
  }

  const std::vector<std::vector<std::string>> golden{
      {"check", path("swap.json"), "--partition", "A=q0;B=q1"},
      {"check", path("semicausal.json"), "--partition", "A=q0;B=q1;C=q2"},
      {"check", path("mw.json"), "--partition", "A=q1;B=q0;C=q2", "--seed", "4"},
      {"decompose", path("semicausal.json"), "--partition", "A=q0;B=q1;C=q2"},
      {"decompose", path("mw.json"), "--partition", "A=q0;B=q1;C=q2", "--mode", "semilocalize"},
      {"precursors", path("autonomous.json"), "--psi", "0", "--frame", "--udc"},
  };
  for (const auto& args : golden) {
    std::string first, second;
    const int c1 = cli(args, &first);
    const int c2 = cli(args, &second);
    ck.require(c1 == c2 && first == second, "report not byte-identical: " + args[0] + " " + args[1]);
  }

  std::string report;
  ck.require(cli({"check", path("semicausal.json"), "--partition", "A=q0;B=q1;C=q2"}, &report) == 0,
             "exit 0 for semicausal check");
  ck.require(nlohmann::json::parse(report)["deviation"].get<double>() <= 1e-10,
             "semicausal deviation in report");
  ck.require(cli({"check", path("swap.json"), "--partition", "A=q0;B=q1"}, &report) == 1,
             "exit 1 for swap");
  ck.require(std::abs(nlohmann::json::parse(report)["witness"]["distance"].get<double>() - 1.0) <=
                 1e-9,
             "swap witness distance 1");
  ck.require(cli({"check", path("bad.json"), "--partition", "A=q0"}, &report) == 2,
             "exit 2 for malformed file");
  ck.require(report.find("operators[0]") != std::string::npos,
             "diagnostic names the offending matrix");
  ck.require(cli({"decompose", path("mw.json"), "--partition", "A=q0;B=q1;C=q2", "--mode",
                  "autonomous"},
                 &report) == 3,
             "exit 3 for measure_write autonomous decomposition");
  ck.require(report.find("LocalMapNotAutonomous") != std::string::npos,
             "reason LocalMapNotAutonomous");

  for (const char* name : {"swap.json", "semicausal.json", "mw.json", "choi.json"}) {
    const ChannelFile a = read_channel_file(path(name));
    const nlohmann::json dumped = channel_to_json(a);
    const ChannelFile b = channel_from_json(nlohmann::json::parse(dumped.dump()));
    bool same = a.map.ops().size() == b.map.ops().size() && channel_to_json(b) == dumped;
    same = same && (a.payload.array() == b.payload.array()).all();
    for (std::size_t k = 0; same && k < a.map.ops().size(); ++k) {
      same = (a.map.ops()[k].array() == b.map.ops()[k].array()).all();
    }
    ck.require(same, std::string(name) + ": channel file round trip is not exact");
  }
  return "golden runs identical, exit codes 0/1/2/3 exercised, round trips exact";
}

using CriterionFn = std::function<std::string(bool, Checker&)>;

const std::vector<std::pair<std::string, CriterionFn>>& criteria() {
  static const std::vector<std::pair<std::string, CriterionFn>> list{
      {"representation round trips", criterion_round_trips},
      {"locality equivalence", criterion_locality_equivalence},
      {"local map identity", criterion_local_map},
      {"extension property", criterion_extension},
      {"rank lower bound", criterion_rank_bound},
      {"autonomy equivalence", criterion_autonomy},
      {"precursor properties", criterion_precursors},
      {"precursor frame", criterion_frame},
      {"unitary decomposition", criterion_unitary_decomposition},
      {"counterexample behavior", criterion_counterexample},
      {"semilocalization", criterion_semilocalization},
      {"cli", criterion_cli},
  };
  return list;
}

}  // namespace

std::vector<std::string> criterion_names() {
  std::vector<std::string> names;
  for (const auto& c : criteria()) names.push_back(c.first);
  return names;
}

CriterionResult run_criterion(int id, const BatteryOptions& options) {
  CriterionResult r;
  r.id = id;
  if (id < 1 || id > static_cast<int>(criteria().size())) {
    r.name = "unknown";
    r.detail = "no criterion " + std::to_string(id);
    return r;
  }
  const auto& [name, fn] = criteria()[static_cast<std::size_t>(id - 1)];
  r.name = name;
  Checker ck;
  const auto start = std::chrono::steady_clock::now();
  try {
    r.detail = fn(options.full, ck);
    r.passed = true;
  } catch (const Failure& f) {
    r.detail = f.message;
  } catch (const std::exception& e) {
    r.detail = std::string("exception: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (r.passed) r.detail += " (" + std::to_string(ck.checks()) + " checks)";
  return r;
}

std::vector<CriterionResult> run_battery(const BatteryOptions& options) {
  std::vector<CriterionResult> out;
  for (int id = 1; id <= static_cast<int>(criteria().size()); ++id) {
    if (!options.only.empty() &&
        std::find(options.only.begin(), options.only.end(), id) == options.only.end()) {
      continue;
    }
    out.push_back(run_criterion(id, options));
  }
  return out;
}

std::string format_result(const CriterionResult& r) {
  std::ostringstream os;
  os.precision(2);
  os << (r.passed ? "PASS" : "FAIL") << " " << (r.id < 10 ? " " : "") << r.id << " " << r.name
     << " (" << std::fixed << r.seconds << " s): " << r.detail;
  return os.str();
}

}  // namespace qloc
