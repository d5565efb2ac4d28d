#pragma once

// Field files (JSON, one grid row per line, 17 significant digits), OBJ
// meshes and CSV tables.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "mos/backlund.hpp"
#include "mos/frame.hpp"
#include "mos/seeds.hpp"

namespace mos::io {

inline constexpr std::string_view kFormat = "mos-fields";
inline constexpr std::string_view kVersion = "1.0";

/// How a Backlund field file was produced, so it can be regenerated on a
/// refined grid.
struct BacklundSource {
  double m = 0.0;
  bool bianchi_darboux = false;
  Vec5 init = Vec5::Zero();  // general mode: admissible initial state
  double omega0 = 0.0;       // Bianchi-Darboux mode
  double phi0 = 0.0;
};

struct FieldFile {
  GoverningFields fields;
  std::optional<SeedSpec> seed;  // grid member mirrors fields.grid()
  std::optional<BacklundSource> backlund;
};

std::string serialize(const FieldFile& f);
/// Errors name the offending field and index, or the line of a syntax error.
FieldFile parse(std::string_view text);

void write_field_file(const std::filesystem::path& path, const FieldFile& f);
FieldFile read_field_file(const std::filesystem::path& path);

/// Triangulated grid surface, two triangles per cell; cells touching a node
/// that is flagged or non-finite are skipped. Returns the face count and
/// refuses to write an empty mesh.
std::size_t write_obj(const std::filesystem::path& path, const Vec3Field& v,
                      const NodeMask& flags = {});

/// Per-node table x, y, r, N, rbar, A1, A2, Ho, Ko, T1, T2 (NaN as "nan").
void write_table(const std::filesystem::path& path, const SurfaceTriple& s,
                 const CoefficientFields& c, const StressFields& t);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace mos::io
