#pragma once

#include <filesystem>
#include <string>

#include "carleman/lattice/field.hpp"

#include <json.hpp>

namespace carleman::io {

// Binary field layout, all little-endian:
//   uint64 d, uint64 M, then (2M+1)^d pairs of float64 (re, im), row-major
//   with j_1 slowest.
// A JSON sidecar <path>.json carries the same d and M plus caller metadata.

inline constexpr const char* kFieldFormat = "carleman-field-v1";

std::string encode_field(const lattice::LatticeField& u);
lattice::LatticeField decode_field(const std::string& bytes);

/// Writes the binary file and its sidecar; returns the sidecar path.
std::filesystem::path write_field(const std::filesystem::path& path, const lattice::LatticeField& u,
                                  const nlohmann::json& metadata = nlohmann::json::object());
lattice::LatticeField read_field(const std::filesystem::path& path);

}  // namespace carleman::io
