#include "qlocality/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "qlocality/battery.hpp"
#include "qlocality/channel_file.hpp"
#include "qlocality/decompose.hpp"
#include "qlocality/error.hpp"

namespace qloc {

using nlohmann::json;

namespace {

namespace fs = std::filesystem;

bool is_input_error(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DimensionMismatch:
    case ErrorKind::UnknownLabel:
    case ErrorKind::InvalidArgument:
    case ErrorKind::NotPSD:
    case ErrorKind::NotTracePreserving:
    case ErrorKind::UnknownChannel:
    case ErrorKind::InvalidInput:
      return true;
    default:
      return false;
  }
}

double resolve_tolerance(const std::optional<double>& flag) {
  double tol = kDefaultTol;
  if (flag) {
    tol = *flag;
  } else if (const char* env = std::getenv("QLOCALITY_TOL"); env != nullptr && *env != '\0') {
    try {
      std::size_t used = 0;
      tol = std::stod(env, &used);
      if (used != std::string(env).size()) throw std::invalid_argument(env);
    } catch (const std::exception&) {
      throw Error(ErrorKind::InvalidInput,
                  "QLOCALITY_TOL is not a number: '" + std::string(env) + "'");
    }
  }
  if (!(tol > 0.0)) throw Error(ErrorKind::InvalidInput, "tolerance must be positive");
  return tol;
}

std::vector<int> parse_dims(const std::string& spec) {
  std::vector<int> dims;
  std::stringstream ss(spec);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t used = 0;
      const int d = std::stoi(tok, &used);
      if (used != tok.size() || d < 1) throw std::invalid_argument(tok);
      dims.push_back(d);
    } catch (const std::exception&) {
      throw Error(ErrorKind::InvalidInput, "bad dimension '" + tok + "' in --dims");
    }
  }
  if (dims.empty()) throw Error(ErrorKind::InvalidInput, "--dims is empty");
  return dims;
}

json witness_json(const SignalingWitness& w) {
  json j;
  if (w.kind == SignalingWitness::Kind::Preparation) {
    j["kind"] = "preparation";
    j["alpha"] = vector_to_json(w.alpha);
    j["gamma"] = vector_to_json(w.gamma);
    j["b0"] = vector_to_json(w.b0);
    j["b1"] = vector_to_json(w.b1);
  } else {
    j["kind"] = "intervention";
    j["global_input"] = vector_to_json(w.global_input);
    j["intervention0"] = w.intervention0;
    j["intervention1"] = w.intervention1;
  }
  j["rho0"] = matrix_to_json(w.rho0);
  j["rho1"] = matrix_to_json(w.rho1);
  j["distance"] = w.distance;
  return j;
}

json frame_json(const PrecursorFrame& frame, const FrameDiagnostics& dg, bool valid) {
  json subspaces = json::array();
  for (const auto& b : frame.bases) {
    json vecs = json::array();
    for (long k = 0; k < b.cols(); ++k) vecs.push_back(vector_to_json(b.col(k)));
    subspaces.push_back(std::move(vecs));
  }
  return {{"subspaces", std::move(subspaces)},
          {"coefficient_error", frame.coefficient_error},
          {"decomposition_error", frame.decomposition_error},
          {"diagnostics",
           {{"max_cross_overlap", dg.max_cross_overlap},
            {"completeness_error", dg.completeness_error},
            {"total_dim", dg.total_dim},
            {"max_intersection_defect", dg.max_intersection_defect},
            {"min_purity", dg.min_purity},
            {"min_entangled_purity", dg.min_entangled_purity}}},
          {"valid", valid}};
}

struct Common {
  std::string file;
  std::optional<double> tol;
  std::uint64_t seed = 0;
  std::string format = "json";
  bool timing = false;
};

void add_common(CLI::App* sub, Common& c, bool with_file = true) {
  if (with_file) sub->add_option("file", c.file, "Channel file (JSON)")->required();
  sub->add_option("--tol", c.tol, "Residual tolerance (default 1e-9 or QLOCALITY_TOL)");
  sub->add_option("--seed", c.seed, "Seed for randomized searches");
  sub->add_option("--format", c.format, "Report format")
      ->check(CLI::IsMember({"json", "text"}));
  sub->add_flag("--timing", c.timing, "Include wall time in the report");
}

class Reporter {
 public:
  Reporter(const Common& c, std::ostream& out)
      : common_(c), out_(out), start_(std::chrono::steady_clock::now()) {}

  void emit(json report) const {
    if (common_.timing) {
      const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start_;
      report["wall_time_seconds"] = dt.count();
    }
    if (common_.format == "text") {
      out_ << render_text(report);
    } else {
      out_ << report.dump(2) << "\n";
    }
  }

 private:
  const Common& common_;
  std::ostream& out_;
  std::chrono::steady_clock::time_point start_;
};

json header(const std::string& command, const Common& c, double tol) {
  return {{"command", command}, {"file", c.file}, {"tolerance", tol}, {"seed", c.seed}};
}

int cmd_check(const Common& c, const std::string& partition, long trials, std::ostream& out) {
  const Reporter rep(c, out);
  const double tol = resolve_tolerance(c.tol);
  const Partition p = Partition::parse(partition);
  const ChannelFile file = read_channel_file(c.file);
  WitnessSearchOptions wopt;
  wopt.seed = c.seed;
  wopt.trials = trials;
  const LocalityReport r = check_semicausal(file.map, p, tol, wopt);

  json report = header("check", c, tol);
  report["partition"] = p.to_string();
  report["trials"] = trials;
  report["semicausal"] = r.semicausal;
  report["inconclusive"] = r.inconclusive;
  report["deviation"] = r.deviation;
  if (r.local_map) report["local_map"] = kraus_json(*r.local_map);
  if (r.witness) report["witness"] = witness_json(*r.witness);
  rep.emit(std::move(report));
  return r.semicausal ? kExitOk : kExitSignaling;
}

std::string write_factor(const fs::path& dir, const std::string& name, const json& j) {
  fs::create_directories(dir);
  const fs::path path = dir / name;
  write_json_file(path, j);
  return path.string();
}

int cmd_decompose(const Common& c, const std::string& partition, const std::string& mode,
                  const std::string& out_dir, std::ostream& out) {
  const Reporter rep(c, out);
  const double tol = resolve_tolerance(c.tol);
  const Partition p = Partition::parse(partition);
  const ChannelFile file = read_channel_file(c.file);

  json report = header("decompose", c, tol);
  report["partition"] = p.to_string();
  report["mode"] = mode;
  std::vector<std::pair<std::string, json>> factors;

  if (mode == "unitary") {
    if (file.map.ops().size() != 1 || !file.map.is_endomorphic()) {
      throw Error(ErrorKind::InvalidInput, "unitary mode needs a single-operator channel");
    }
    const UnitaryDecomposition d =
        decompose_semicausal_unitary(file.map.ops().front(), file.map.in_layout(), p, tol);
    report["canonical_layout"] = layout_to_json(d.canonical_layout);
    report["residual"] = d.residual;
    factors.emplace_back("v", unitary_json(d.v, d.v_layout, {{"factor", "V"}}));
    factors.emplace_back("w", unitary_json(d.w, d.w_layout, {{"factor", "W"}}));
  } else if (mode == "autonomous") {
    const AutonomousDecomposition d = decompose_autonomous_cp(file.map, p, tol);
    report["canonical_layout"] = layout_to_json(d.canonical_layout);
    report["factorization_deviation"] = d.factorization_deviation;
    report["residual"] = d.residual;
    factors.emplace_back("v", unitary_json(d.v, d.v_layout, {{"factor", "V"}}));
    factors.emplace_back("f_bc", kraus_json(d.f_bc, {{"factor", "F_BC"}}));
  } else {
    const SequentialDilation d = semilocalize(file.map, p, tol);
    report["canonical_layout"] = layout_to_json(d.canonical_layout);
    report["env_dim"] = d.env_dim;
    report["env_init"] = d.env_init;
    report["residual"] = d.residual;
    report["wrong_order_residual"] = d.wrong_order_residual;
    factors.emplace_back("v", unitary_json(d.v, d.v_layout, {{"factor", "V"}}));
    factors.emplace_back("w", unitary_json(d.w, d.w_layout, {{"factor", "W"}}));
  }
  json listed = json::object();
  for (auto& [name, j] : factors) {
    listed[name] = out_dir.empty() ? std::move(j) : json(write_factor(out_dir, name + ".json", j));
  }
  report[out_dir.empty() ? "factors" : "factor_files"] = std::move(listed);
  rep.emit(std::move(report));
  return kExitOk;
}

ComplexVector parse_psi(const std::string& spec, long dim) {
  const auto first = spec.find_first_not_of(" \t");
  if (first != std::string::npos && spec[first] == '[') {
    json j;
    try {
      j = json::parse(spec);
    } catch (const json::exception& e) {
      throw Error(ErrorKind::InvalidInput, std::string("--psi: ") + e.what());
    }
    ComplexVector v = vector_from_json(j, "--psi");
    if (v.size() != dim) {
      throw Error(ErrorKind::InvalidInput,
                  "--psi has " + std::to_string(v.size()) + " entries, output dimension is " +
                      std::to_string(dim));
    }
    if (v.norm() == 0.0) throw Error(ErrorKind::InvalidInput, "--psi is the zero vector");
    return v.normalized();
  }
  long k = -1;
  try {
    std::size_t used = 0;
    k = std::stol(spec, &used);
    if (used != spec.size()) k = -1;
  } catch (const std::exception&) {
    k = -1;
  }
  if (k < 0 || k >= dim) {
    throw Error(ErrorKind::InvalidInput,
                "--psi must be a basis index below " + std::to_string(dim) +
                    " or a JSON array of [re, im] pairs");
  }
  ComplexVector v = ComplexVector::Zero(dim);
  v(k) = 1.0;
  return v;
}

int cmd_precursors(const Common& c, const std::string& psi_spec, bool frame, bool udc,
                   std::ostream& out) {
  const Reporter rep(c, out);
  const double tol = resolve_tolerance(c.tol);
  if (psi_spec.empty() && !frame && !udc) {
    throw Error(ErrorKind::InvalidInput, "give --psi, --frame or --udc");
  }
  const ChannelFile file = read_channel_file(c.file);
  const KrausMap& f = file.map;
  json report = header("precursors", c, tol);
  report["context_dim"] = context_dim(f);
  int code = kExitOk;

  if (!psi_spec.empty()) {
    const ComplexVector psi = parse_psi(psi_spec, f.out_dim());
    const Subspace s = precursor_subspace(f, psi, tol);
    json basis = json::array();
    for (long k = 0; k < s.dim(); ++k) basis.push_back(vector_to_json(s.basis.col(k)));
    report["psi"] = vector_to_json(psi);
    report["dimension"] = s.dim();
    report["basis"] = std::move(basis);
  }
  if (udc) {
    const UdcReport u = check_udc(f, default_udc_probes(f.out_dim(), c.seed), tol);
    json dims = json::array();
    for (const auto& e : u.entries) dims.push_back(e.dim);
    report["udc"] = {{"passed", u.passed}, {"expected_dim", u.expected_dim}, {"dims", dims}};
  }
  if (frame) {
    const PrecursorFrame fr = precursor_frame(f, tol);
    const FrameDiagnostics dg = diagnose_frame(f, fr, c.seed);
    const double inv = std::max(tol, 1e-9);
    const bool valid = dg.max_cross_overlap <= inv && dg.completeness_error <= inv &&
                       dg.max_intersection_defect == 0 && dg.min_purity >= 1.0 - inv &&
                       dg.min_entangled_purity >= 1.0 - inv && fr.coefficient_error <= inv;
    report["frame"] = frame_json(fr, dg, valid);
    if (!valid) code = kExitStructural;
  }
  rep.emit(std::move(report));
  return code;
}

const std::vector<std::string>& seeded_names() {
  static const std::vector<std::string> names{"random_semicausal", "random_semicausal_cp",
                                              "product_local",     "random",
                                              "autonomous",        "random_local"};
  return names;
}

int cmd_gen(const std::string& name, const std::string& dims_spec, std::uint64_t seed,
            const std::string& representation, const std::string& out_path, std::ostream& out) {
  const std::vector<int> dims = parse_dims(dims_spec);
  const SystemLayout layout = SystemLayout::from_dims(dims);
  std::string full = name;
  const bool seeded = std::find(seeded_names().begin(), seeded_names().end(), name) !=
                      seeded_names().end();
  if (seeded) full += "(" + std::to_string(seed) + ")";
  ChannelFile file;
  file.map = example_channel(full, layout);
  file.representation = representation;
  file.metadata = {{"name", name}, {"description", full}};
  if (seeded) file.metadata["seed"] = seed;
  if (representation == "unitary" && file.map.ops().size() != 1) {
    throw Error(ErrorKind::InvalidInput, full + " is not a unitary channel");
  }
  const json j = channel_to_json(file);
  if (out_path.empty()) {
    out << j.dump(2) << "\n";
  } else {
    if (const fs::path parent = fs::path(out_path).parent_path(); !parent.empty()) {
      fs::create_directories(parent);
    }
    write_json_file(out_path, j);
  }
  return kExitOk;
}

int cmd_selftest(bool full, std::ostream& out) {
  BatteryOptions opt;
  opt.full = full;
  bool ok = true;
  for (int id = 1; id <= static_cast<int>(criterion_names().size()); ++id) {
    const CriterionResult r = run_criterion(id, opt);
    out << format_result(r) << "\n" << std::flush;
    ok = ok && r.passed;
  }
  out << (ok ? "selftest passed" : "selftest FAILED") << "\n";
  return ok ? kExitOk : kExitSignaling;
}

void render(const json& j, int indent, std::ostream& os) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  for (auto it = j.begin(); it != j.end(); ++it) {
    const json& v = it.value();
    const bool nested = v.is_object() ||
                        (v.is_array() && std::any_of(v.begin(), v.end(), [](const json& e) {
                           return e.is_object();
                         }));
    if (!nested) {
      os << pad << it.key() << ": " << (v.is_string() ? v.get<std::string>() : v.dump())
         << "\n";
    } else if (v.is_object()) {
      os << pad << it.key() << ":\n";
      render(v, indent + 1, os);
    } else {
      for (std::size_t i = 0; i < v.size(); ++i) {
        os << pad << it.key() << "[" << i << "]:\n";
        render(v[i], indent + 1, os);
      }
    }
  }
}

}  // namespace

std::string render_text(const json& report) {
  std::ostringstream os;
  render(report, 0, os);
  return os.str();
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dynamical locality analysis of quantum operations", "qlocality"};
  app.require_subcommand(1);

  Common check_c;
  std::string check_partition;
  long trials = 200;
  auto* check = app.add_subcommand("check", "Decide whether B can signal to A");
  add_common(check, check_c);
  check->add_option("--partition", check_partition, "Roles, e.g. A=q0;B=q1;C=q2")->required();
  check->add_option("--trials", trials, "Random witness trials")->check(CLI::NonNegativeNumber);

  Common dec_c;
  std::string dec_partition;
  std::string mode = "unitary";
  std::string out_dir;
  auto* dec = app.add_subcommand("decompose", "Sequential decomposition of a semicausal map");
  add_common(dec, dec_c);
  dec->add_option("--partition", dec_partition, "Roles, e.g. A=q0;B=q1;C=q2")->required();
  dec->add_option("--mode", mode, "Decomposition")
      ->check(CLI::IsMember({"unitary", "autonomous", "semilocalize"}));
  dec->add_option("--out", out_dir, "Directory for factor files");

  Common pre_c;
  std::string psi;
  bool frame = false;
  bool udc = false;
  auto* pre = app.add_subcommand("precursors", "Precursor subspaces of a map AC -> A");
  add_common(pre, pre_c);
  pre->add_option("--psi", psi, "Output state: basis index or JSON [[re, im], ...]");
  pre->add_flag("--frame", frame, "Construct the precursor frame");
  pre->add_flag("--udc", udc, "Check the uniform dimension condition");

  std::string gen_name;
  std::string gen_dims;
  std::uint64_t gen_seed = 0;
  std::string gen_repr = "kraus";
  std::string gen_out;
  auto* gen = app.add_subcommand("gen", "Write a corpus channel file");
  gen->add_option("name", gen_name, "Channel name, e.g. swap_AB or cnot(0,1)")->required();
  gen->add_option("--dims", gen_dims, "Comma-separated dimensions")->required();
  gen->add_option("--seed", gen_seed, "Seed for random channels");
  gen->add_option("--representation", gen_repr, "File representation")
      ->check(CLI::IsMember({"kraus", "choi", "unitary"}));
  gen->add_option("--out", gen_out, "Output path (default stdout)");

  bool quick = false;
  bool full = false;
  auto* self = app.add_subcommand("selftest", "Run the property battery");
  auto* quick_flag = self->add_flag("--quick", quick, "Reduced sample counts");
  self->add_flag("--full", full, "Full sample counts")->excludes(quick_flag);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    if (check->parsed()) return cmd_check(check_c, check_partition, trials, out);
    if (dec->parsed()) return cmd_decompose(dec_c, dec_partition, mode, out_dir, out);
    if (pre->parsed()) return cmd_precursors(pre_c, psi, frame, udc, out);
    if (gen->parsed()) return cmd_gen(gen_name, gen_dims, gen_seed, gen_repr, gen_out, out);
    return cmd_selftest(!quick, out);
  } catch (const Error& e) {
    json report{{"command", command},
                {"error", {{"kind", std::string(to_string(e.kind()))}, {"message", e.what()}}}};
    if (e.residual()) report["error"]["residual"] = *e.residual();
    out << report.dump(2) << "\n";
    err << "qlocality " << command << ": " << e.what() << "\n";
    return is_input_error(e.kind()) ? kExitInput : kExitStructural;
  } catch (const fs::filesystem_error& e) {
    err << "qlocality " << command << ": " << e.what() << "\n";
    return kExitInput;
  }
}

}  // namespace qloc
