#pragma once

// JSON channel files. Complex entries are [re, im] pairs and matrices are
// arrays of rows.
//
//   {"version": 1,
//    "layout": [{"label": "q0", "dim": 2}, ...],
//    "output_layout": [...],            // optional, defaults to layout
//    "representation": "kraus" | "choi" | "unitary",
//    "operators": [matrix, ...],        // kraus
//    "matrix": matrix,                  // choi, unitary
//    "metadata": {...}}                 // optional

#include <filesystem>
#include <string>

#include <json.hpp>

#include "qlocality/channels.hpp"

namespace qloc {

inline constexpr int kChannelFileVersion = 1;

struct ChannelFile {
  int version = kChannelFileVersion;
  std::string representation = "kraus";
  KrausMap map;
  /// Matrix as read for choi and unitary files; written back verbatim.
  ComplexMatrix payload;
  nlohmann::json metadata = nlohmann::json::object();
};

nlohmann::json matrix_to_json(const ComplexMatrix& m);
/// Throws InvalidInput naming `what` on malformed or ragged input.
ComplexMatrix matrix_from_json(const nlohmann::json& j, const std::string& what);
nlohmann::json vector_to_json(const ComplexVector& v);
ComplexVector vector_from_json(const nlohmann::json& j, const std::string& what);
nlohmann::json layout_to_json(const SystemLayout& layout);
SystemLayout layout_from_json(const nlohmann::json& j, const std::string& what);

ChannelFile channel_from_json(const nlohmann::json& j);
nlohmann::json channel_to_json(const ChannelFile& file);

/// Kraus file for a map.
nlohmann::json kraus_json(const KrausMap& map, const nlohmann::json& metadata = {});
/// Unitary file for an operator on `layout`.
nlohmann::json unitary_json(const ComplexMatrix& u, const SystemLayout& layout,
                            const nlohmann::json& metadata = {});

ChannelFile read_channel_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const nlohmann::json& j);

}  // namespace qloc
