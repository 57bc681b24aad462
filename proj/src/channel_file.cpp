#include "qlocality/channel_file.hpp"

#include <fstream>

#include "qlocality/error.hpp"

namespace qloc {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& what, const std::string& why) {
  throw Error(ErrorKind::InvalidInput, what + ": " + why);
}

Complex complex_from_json(const json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    bad(what, "complex entries must be [re, im] number pairs");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

void expect_shape(const ComplexMatrix& m, long rows, long cols, const std::string& what) {
  if (m.rows() != rows || m.cols() != cols) {
    bad(what, "expected " + std::to_string(rows) + "x" + std::to_string(cols) + ", found " +
                  std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
}

}  // namespace

json matrix_to_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (long r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (long c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

ComplexMatrix matrix_from_json(const json& j, const std::string& what) {
  if (!j.is_array() || j.empty()) bad(what, "matrix must be a nonempty array of rows");
  const long rows = static_cast<long>(j.size());
  if (!j[0].is_array() || j[0].empty()) bad(what, "row 0 is not a nonempty array");
  const long cols = static_cast<long>(j[0].size());
  ComplexMatrix m(rows, cols);
  for (long r = 0; r < rows; ++r) {
    if (!j[r].is_array() || static_cast<long>(j[r].size()) != cols) {
      bad(what, "row " + std::to_string(r) + " does not have " + std::to_string(cols) +
                    " entries");
    }
    for (long c = 0; c < cols; ++c) {
      m(r, c) = complex_from_json(j[r][c], what + "[" + std::to_string(r) + "][" +
                                               std::to_string(c) + "]");
    }
  }
  return m;
}

json vector_to_json(const ComplexVector& v) {
  json out = json::array();
  for (long i = 0; i < v.size(); ++i) out.push_back({v(i).real(), v(i).imag()});
  return out;
}

ComplexVector vector_from_json(const json& j, const std::string& what) {
  if (!j.is_array() || j.empty()) bad(what, "vector must be a nonempty array");
  ComplexVector v(static_cast<long>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v(static_cast<long>(i)) = complex_from_json(j[i], what + "[" + std::to_string(i) + "]");
  }
  return v;
}

json layout_to_json(const SystemLayout& layout) {
  json out = json::array();
  for (const auto& s : layout.systems()) out.push_back({{"label", s.label}, {"dim", s.dim}});
  return out;
}

SystemLayout layout_from_json(const json& j, const std::string& what) {
  if (!j.is_array() || j.empty()) bad(what, "layout must be a nonempty array");
  std::vector<System> systems;
  for (const auto& s : j) {
    if (!s.is_object() || !s.contains("label") || !s.contains("dim") ||
        !s["label"].is_string() || !s["dim"].is_number_integer()) {
      bad(what, "entries must be {\"label\": text, \"dim\": integer}");
    }
    systems.push_back({s["label"].get<std::string>(), s["dim"].get<int>()});
  }
  try {
    return SystemLayout(std::move(systems));
  } catch (const Error& e) {
    bad(what, e.what());
  }
}

ChannelFile channel_from_json(const json& j) {
  if (!j.is_object()) bad("channel file", "top level must be an object");
  ChannelFile file;
  if (j.contains("version")) {
    if (!j["version"].is_number_integer()) bad("version", "must be an integer");
    file.version = j["version"].get<int>();
    if (file.version != kChannelFileVersion) {
      bad("version", "unsupported version " + std::to_string(file.version));
    }
  }
  if (!j.contains("layout")) bad("channel file", "missing \"layout\"");
  const SystemLayout in = layout_from_json(j["layout"], "layout");
  const SystemLayout out =
      j.contains("output_layout") ? layout_from_json(j["output_layout"], "output_layout") : in;
  if (!j.contains("representation") || !j["representation"].is_string()) {
    bad("channel file", "missing \"representation\"");
  }
  file.representation = j["representation"].get<std::string>();
  if (j.contains("metadata")) file.metadata = j["metadata"];

  try {
    if (file.representation == "kraus") {
      if (!j.contains("operators") || !j["operators"].is_array() || j["operators"].empty()) {
        bad("operators", "kraus representation needs a nonempty operator list");
      }
      std::vector<ComplexMatrix> ops;
      for (std::size_t k = 0; k < j["operators"].size(); ++k) {
        const std::string what = "operators[" + std::to_string(k) + "]";
        ops.push_back(matrix_from_json(j["operators"][k], what));
        expect_shape(ops.back(), out.total_dim(), in.total_dim(), what);
      }
      file.map = KrausMap(in, out, std::move(ops));
    } else if (file.representation == "choi") {
      if (!j.contains("matrix")) bad("matrix", "choi representation needs \"matrix\"");
      const ComplexMatrix m = matrix_from_json(j["matrix"], "matrix");
      const long d = in.total_dim() * out.total_dim();
      expect_shape(m, d, d, "matrix");
      file.map = choi_to_kraus(ChoiMatrix{in, out, m});
      file.payload = m;
    } else if (file.representation == "unitary") {
      if (!j.contains("matrix")) bad("matrix", "unitary representation needs \"matrix\"");
      if (!(in == out)) bad("output_layout", "a unitary must map a layout to itself");
      const ComplexMatrix m = matrix_from_json(j["matrix"], "matrix");
      expect_shape(m, in.total_dim(), in.total_dim(), "matrix");
      if (unitarity_error(m) > kTraceTol) bad("matrix", "operator is not unitary");
      file.map = unitary_channel(m, in);
      file.payload = m;
    } else {
      bad("representation", "unknown representation '" + file.representation + "'");
    }
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::InvalidInput) throw;
    throw Error(ErrorKind::InvalidInput, std::string(e.what()), e.residual());
  }
  return file;
}

json channel_to_json(const ChannelFile& file) {
  json j = kraus_json(file.map, file.metadata);
  if (file.representation == "choi") {
    j.erase("operators");
    j["representation"] = "choi";
    j["matrix"] = matrix_to_json(file.payload.size() > 0 ? file.payload
                                                         : kraus_to_choi(file.map).matrix);
  } else if (file.representation == "unitary" && file.map.ops().size() == 1) {
    j.erase("operators");
    j["representation"] = "unitary";
    j["matrix"] = matrix_to_json(file.payload.size() > 0 ? file.payload
                                                         : file.map.ops().front());
  }
  return j;
}

json kraus_json(const KrausMap& map, const json& metadata) {
  json j;
  j["version"] = kChannelFileVersion;
  j["layout"] = layout_to_json(map.in_layout());
  if (!map.is_endomorphic()) j["output_layout"] = layout_to_json(map.out_layout());
  j["representation"] = "kraus";
  json ops = json::array();
  for (const auto& a : map.ops()) ops.push_back(matrix_to_json(a));
  j["operators"] = std::move(ops);
  if (!metadata.is_null() && !metadata.empty()) j["metadata"] = metadata;
  return j;
}

json unitary_json(const ComplexMatrix& u, const SystemLayout& layout, const json& metadata) {
  json j;
  j["version"] = kChannelFileVersion;
  j["layout"] = layout_to_json(layout);
  j["representation"] = "unitary";
  j["matrix"] = matrix_to_json(u);
  if (!metadata.is_null() && !metadata.empty()) j["metadata"] = metadata;
  return j;
}

ChannelFile read_channel_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidInput, "cannot open " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::InvalidInput, path.string() + ": " + e.what());
  }
  return channel_from_json(j);
}

void write_json_file(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::InvalidInput, "cannot write " + path.string());
  out << j.dump(2) << "\n";
}

}  // namespace qloc
