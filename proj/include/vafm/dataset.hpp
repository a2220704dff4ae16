#pragma once

#include <json.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "vafm/error.hpp"
#include "vafm/geometry.hpp"
#include "vafm/image.hpp"
#include "vafm/mesh.hpp"
#include "vafm/render.hpp"
#include "vafm/rng.hpp"
#include "vafm/structure.hpp"
#include "vafm/voxel_grid.hpp"
#include "vafm/voxelize.hpp"

namespace vafm {

inline constexpr const char* kManifestFormat = "vafm-manifest/1";
inline constexpr const char* kManifestFile = "manifest.json";
inline constexpr const char* kGridFile = "grid.vox";

struct ViewRecord {
  std::uint32_t index = 0;
  std::array<double, 4> quaternion{1, 0, 0, 0};  // w, x, y, z
  std::string file;
  double max_height = 0.0;  // Angstrom

  friend bool operator==(const ViewRecord&, const ViewRecord&) = default;
};

struct ViewManifest {
  std::string source_id;
  std::uint64_t seed = 0;
  std::uint32_t resolution = 256;
  std::uint32_t n_views = 0;
  double voxel_size = 0.0;
  std::string normalization_mode = "fixed";
  double max_height = 0.0;
  std::uint32_t image_size = 256;
  std::string colormap = "hot";
  std::vector<ViewRecord> views;

  friend bool operator==(const ViewManifest&, const ViewManifest&) = default;
};

inline std::string view_filename(std::uint32_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "view_%03u.png", index);
  return buf;
}

// ---------------------------------------------------------------------------
// Manifest JSON

inline nlohmann::ordered_json manifest_to_json(const ViewManifest& m) {
  nlohmann::ordered_json views = nlohmann::ordered_json::array();
  for (const auto& v : m.views) {
    views.push_back({{"index", v.index},
                     {"quaternion", v.quaternion},
                     {"file", v.file},
                     {"max_height_angstrom", v.max_height}});
  }
  return {{"format", kManifestFormat},
          {"source_id", m.source_id},
          {"seed", m.seed},
          {"resolution", m.resolution},
          {"n_views", m.n_views},
          {"voxel_size_angstrom", m.voxel_size},
          {"normalization", {{"mode", m.normalization_mode}, {"max_height_angstrom", m.max_height}}},
          {"image_size", m.image_size},
          {"colormap", m.colormap},
          {"views", std::move(views)}};
}

inline std::string manifest_text(const ViewManifest& m) { return manifest_to_json(m).dump(2) + "\n"; }

namespace detail {

template <typename T>
T require(const nlohmann::json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) throw Error(ErrorCode::SchemaError, std::string("missing key '") + key + "'");
  const auto& v = obj.at(key);
  if constexpr (std::is_same_v<T, std::string>) {
    if (!v.is_string()) throw Error(ErrorCode::SchemaError, std::string("'") + key + "' must be a string");
  } else if constexpr (std::is_integral_v<T>) {
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
      throw Error(ErrorCode::SchemaError, std::string("'") + key + "' must be a non-negative integer");
    }
  } else {
    if (!v.is_number()) throw Error(ErrorCode::SchemaError, std::string("'") + key + "' must be a number");
  }
  return v.get<T>();
}

}  // namespace detail

/// Parses and validates manifest text without touching the filesystem.
inline ViewManifest parse_manifest(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::SchemaError, std::string("manifest is not JSON: ") + e.what());
  }
  if (detail::require<std::string>(j, "format") != kManifestFormat) {
    throw Error(ErrorCode::SchemaError, "unsupported manifest format");
  }
  ViewManifest m;
  m.source_id = detail::require<std::string>(j, "source_id");
  m.seed = detail::require<std::uint64_t>(j, "seed");
  m.resolution = detail::require<std::uint32_t>(j, "resolution");
  m.n_views = detail::require<std::uint32_t>(j, "n_views");
  m.voxel_size = detail::require<double>(j, "voxel_size_angstrom");
  if (!(m.voxel_size > 0)) throw Error(ErrorCode::SchemaError, "voxel_size_angstrom must be positive");
  if (!j.contains("normalization")) throw Error(ErrorCode::SchemaError, "missing key 'normalization'");
  const auto& norm = j.at("normalization");
  m.normalization_mode = detail::require<std::string>(norm, "mode");
  if (m.normalization_mode != "fixed" && m.normalization_mode != "per_image") {
    throw Error(ErrorCode::SchemaError, "unknown normalization mode '" + m.normalization_mode + "'");
  }
  m.max_height = detail::require<double>(norm, "max_height_angstrom");
  if (j.contains("image_size")) m.image_size = detail::require<std::uint32_t>(j, "image_size");
  if (j.contains("colormap")) m.colormap = detail::require<std::string>(j, "colormap");

  if (!j.contains("views") || !j.at("views").is_array()) throw Error(ErrorCode::SchemaError, "'views' must be an array");
  for (const auto& v : j.at("views")) {
    ViewRecord r;
    r.index = detail::require<std::uint32_t>(v, "index");
    if (!v.contains("quaternion") || !v.at("quaternion").is_array() || v.at("quaternion").size() != 4) {
      throw Error(ErrorCode::SchemaError, "view quaternion must be [w,x,y,z]");
    }
    double n2 = 0.0;
    for (int c = 0; c < 4; ++c) {
      const auto& q = v.at("quaternion")[c];
      if (!q.is_number()) throw Error(ErrorCode::SchemaError, "quaternion components must be numbers");
      r.quaternion[c] = q.get<double>();
      n2 += r.quaternion[c] * r.quaternion[c];
    }
    if (!(std::abs(std::sqrt(n2) - 1.0) <= 1e-9)) {
      throw Error(ErrorCode::SchemaError, "view " + std::to_string(r.index) + " quaternion is not unit length");
    }
    r.file = detail::require<std::string>(v, "file");
    r.max_height = detail::require<double>(v, "max_height_angstrom");
    if (r.index != m.views.size()) throw Error(ErrorCode::SchemaError, "view indices must be 0..n-1 in order");
    if (r.file != view_filename(r.index)) throw Error(ErrorCode::SchemaError, "view file must be " + view_filename(r.index));
    m.views.push_back(std::move(r));
  }
  if (m.views.size() != m.n_views) throw Error(ErrorCode::SchemaError, "n_views does not match the view records");
  return m;
}

inline void write_manifest(const std::filesystem::path& dir, const ViewManifest& m) {
  const auto text = manifest_text(m);
  detail::write_bytes(dir / kManifestFile, std::vector<std::uint8_t>(text.begin(), text.end()));
}

/// Reads manifest.json from a dataset directory, validates it, and checks
/// that the grid and every view image exist and no stray views are present.
inline ViewManifest load_manifest(const std::filesystem::path& dir) {
  const auto path = dir / kManifestFile;
  if (!std::filesystem::exists(path)) throw Error(ErrorCode::MissingFile, path.string());
  const auto bytes = detail::read_bytes(path);
  ViewManifest m = parse_manifest(std::string(bytes.begin(), bytes.end()));
  if (!std::filesystem::exists(dir / kGridFile)) throw Error(ErrorCode::MissingFile, (dir / kGridFile).string());
  std::set<std::string> referenced;
  for (const auto& v : m.views) {
    if (!std::filesystem::exists(dir / v.file)) throw Error(ErrorCode::MissingFile, (dir / v.file).string());
    referenced.insert(v.file);
  }
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    const auto name = entry.path().filename().string();
    if (name.starts_with("view_") && entry.path().extension() == ".png" && !referenced.contains(name)) {
      throw Error(ErrorCode::SchemaError, name + " is not referenced by the manifest");
    }
  }
  return m;
}

// ---------------------------------------------------------------------------
// Generation

/// Structure to image: a PDB or OBJ file on disk, or PDB text already in
/// memory (e.g. fetched from AlphaFold DB).
struct DatasetInput {
  enum class Kind { Pdb, Obj };
  Kind kind = Kind::Pdb;
  std::string source_id;
  std::optional<std::string> text;  // unset: read source_id as a path

  static DatasetInput from_path(const std::filesystem::path& path) {
    auto ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    return {ext == ".obj" ? Kind::Obj : Kind::Pdb, path.string(), std::nullopt};
  }

  static DatasetInput from_pdb_text(std::string text, std::string source_id) {
    return {Kind::Pdb, std::move(source_id), std::move(text)};
  }
};

struct DatasetOptions {
  std::uint32_t n_views = 25;
  std::uint64_t seed = 0;
  VoxelizeConfig voxelize;
  int image_size = 256;
  Colormap colormap = Colormap::Hot;
  PdbOptions pdb;
  RadiusTable radii = RadiusTable::bondi();
  bool overwrite = false;
  /// Debug: every view uses the identity rotation.
  bool identity_views = false;
};

inline Rotation view_rotation(std::uint64_t seed, std::uint32_t index) {
  Rng rng = Rng::derive(seed, index);
  return sample_rotation(rng);
}

inline std::string read_text(const std::filesystem::path& path) {
  const auto bytes = detail::read_bytes(path);
  return {bytes.begin(), bytes.end()};
}

inline VoxelGrid voxelize_input(const DatasetInput& input, const DatasetOptions& options) {
  const std::string text = input.text ? *input.text : read_text(input.source_id);
  VoxelizeConfig cfg = options.voxelize;
  if (input.kind == DatasetInput::Kind::Obj) {
    cfg.mode = VoxelizeMode::Mesh;
    return voxelize_mesh(parse_obj(text), cfg);
  }
  cfg.mode = VoxelizeMode::Atoms;
  return voxelize_atoms(parse_pdb(text, input.source_id, options.pdb), options.radii, cfg);
}

namespace detail {

inline bool is_dataset_file(const std::filesystem::path& p) {
  const auto name = p.filename().string();
  return name == kManifestFile || name == kGridFile || (name.starts_with("view_") && p.extension() == ".png");
}

inline void remove_dataset_files(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::remove(dir / kManifestFile, ec);
  if (!std::filesystem::is_directory(dir, ec)) return;
  std::vector<std::filesystem::path> doomed;
  for (const auto& entry : std::filesystem::directory_iterator(dir, ec)) {
    if (is_dataset_file(entry.path())) doomed.push_back(entry.path());
  }
  for (const auto& p : doomed) std::filesystem::remove(p, ec);
}

}  // namespace detail

/// ingest -> voxelize -> n rotated height maps -> hot-colormapped PNGs.
///
/// All views share one color scale: heights are rendered first, the largest
/// is taken as the fixed normalization, then images are encoded. View i uses
/// the rotation drawn from Rng::derive(seed, i), so any view can be
/// regenerated on its own. manifest.json is written last; its presence marks
/// a complete dataset, and on failure every file written so far is removed.
inline ViewManifest generate_dataset(const DatasetInput& input, const DatasetOptions& options,
                                     const std::filesystem::path& out_dir) {
  if (options.n_views < 1) throw Error(ErrorCode::InvalidArgument, "n_views must be >= 1");
  RenderConfig render_cfg;
  render_cfg.image_size = options.image_size;
  render_cfg.colormap = options.colormap;
  render_cfg.validate();
  options.voxelize.validate();

  std::error_code ec;
  if (std::filesystem::exists(out_dir, ec)) {
    if (!std::filesystem::is_directory(out_dir, ec)) {
      throw Error(ErrorCode::OutputExists, out_dir.string() + " exists and is not a directory");
    }
    if (!std::filesystem::is_empty(out_dir, ec)) {
      if (!options.overwrite) throw Error(ErrorCode::OutputExists, out_dir.string() + " is not empty");
      detail::remove_dataset_files(out_dir);
    }
  }
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create " + out_dir.string() + ": " + ec.message());

  try {
    const VoxelGrid grid = voxelize_input(input, options);
    const HeightRenderer renderer(grid);

    ViewManifest manifest;
    manifest.source_id = input.source_id;
    manifest.seed = options.seed;
    manifest.resolution = grid.dims()[0];
    manifest.n_views = options.n_views;
    manifest.voxel_size = grid.voxel_size();
    manifest.normalization_mode = "fixed";
    manifest.image_size = static_cast<std::uint32_t>(options.image_size);
    manifest.colormap = options.colormap == Colormap::Hot ? "hot" : "gray";

    std::vector<HeightMap> maps;
    maps.reserve(options.n_views);
    for (std::uint32_t i = 0; i < options.n_views; ++i) {
      const Rotation r = options.identity_views ? Rotation::identity() : view_rotation(options.seed, i);
      maps.push_back(renderer.render(r, options.image_size));
      ViewRecord rec;
      rec.index = i;
      rec.quaternion = r.wxyz();
      rec.file = view_filename(i);
      rec.max_height = maps.back().max();
      manifest.max_height = std::max(manifest.max_height, rec.max_height);
      manifest.views.push_back(std::move(rec));
    }

    render_cfg.normalization = {NormalizationMode::Fixed, manifest.max_height > 0 ? manifest.max_height : 1.0};
    std::vector<std::exception_ptr> failures(options.n_views);
#pragma omp parallel for schedule(dynamic, 1)
    for (long i = 0; i < long(options.n_views); ++i) {
      try {
        write_png(out_dir / manifest.views[i].file, apply_colormap(maps[i], render_cfg));
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
    for (const auto& f : failures) {
      if (f) std::rethrow_exception(f);
    }
    write_grid(out_dir / kGridFile, grid);
    write_manifest(out_dir, manifest);
    return manifest;
  } catch (...) {
    detail::remove_dataset_files(out_dir);
    throw;
  }
}

}  // namespace vafm
