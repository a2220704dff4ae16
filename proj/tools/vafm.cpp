// vafm: command-line front end for the virtual AFM pipeline.

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "vafm/fetch.hpp"
#include "vafm/vafm.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;

struct Globals {
  std::uint64_t seed = 0;
  int threads = 0;
  bool quiet = false;
};

void say(const Globals& g, const std::string& line) {
  if (!g.quiet) std::cout << line << '\n';
}

vafm::Rotation parse_quaternion(const std::string& text) {
  std::vector<double> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      parts.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw CLI::ValidationError("--quat", "expected four comma-separated numbers w,x,y,z");
    }
  }
  if (parts.size() != 4) throw CLI::ValidationError("--quat", "expected four comma-separated numbers w,x,y,z");
  const double n = std::sqrt(parts[0] * parts[0] + parts[1] * parts[1] + parts[2] * parts[2] + parts[3] * parts[3]);
  if (!(n > 0) || !std::isfinite(n)) throw CLI::ValidationError("--quat", "quaternion must be non-zero and finite");
  if (std::abs(n - 1.0) > 1e-6) {
    vafm::diagnostics::warn("quaternion norm is " + std::to_string(n) + "; normalizing");
  }
  return vafm::Rotation(parts[0], parts[1], parts[2], parts[3]);
}

std::string fmt(const char* pattern, double a, double b, double c) {
  char buf[128];
  std::snprintf(buf, sizeof buf, pattern, a, b, c);
  return buf;
}

const std::map<std::string, vafm::VoxelizeMode> kModes{{"atoms", vafm::VoxelizeMode::Atoms},
                                                        {"mesh", vafm::VoxelizeMode::Mesh}};
const std::map<std::string, vafm::Colormap> kColormaps{{"hot", vafm::Colormap::Hot}, {"gray", vafm::Colormap::Gray}};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Virtual AFM: protein structures to multi-view height-map images, plus PSNR/SSIM scoring"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--seed", g.seed, "Base RNG seed (u64)")->capture_default_str();
  app.add_option("--threads", g.threads, "Worker threads (0 = all cores; 1 = serial reference path)")
      ->check(CLI::NonNegativeNumber);
  app.add_flag("--quiet", g.quiet, "Suppress informational output and warnings");

  // fetch
  auto* fetch = app.add_subcommand("fetch", "Download an AlphaFold DB model (PDB) by UniProt accession");
  std::string fetch_accession, fetch_out, url_template;
  fetch->add_option("--accession", fetch_accession, "UniProt accession, e.g. P69905")->required();
  fetch->add_option("--out", fetch_out, "Output PDB path")->required();
  fetch->add_option("--url-template", url_template,
                    "Download URL with {ACCESSION} placeholder (default: AlphaFold DB model_v4; env VAFM_ALPHAFOLD_URL)");

  // voxelize
  auto* voxelize = app.add_subcommand("voxelize", "Voxelize a PDB (atoms) or OBJ (mesh) into a VAFM1 grid");
  std::string vox_in, vox_out, vox_mode = "atoms";
  vafm::VoxelizeConfig vox_cfg;
  vafm::PdbOptions pdb_opts;
  bool surface_only = false, no_hetatm = false;
  voxelize->add_option("--in", vox_in, "Input .pdb or .obj file")->required()->check(CLI::ExistingFile);
  voxelize->add_option("--mode", vox_mode, "atoms (union of van der Waals spheres) | mesh (OBJ surface + fill)")
      ->check(CLI::IsMember({"atoms", "mesh"}))
      ->capture_default_str();
  voxelize->add_option("--res", vox_cfg.resolution, "Grid edge length, voxels (>= 8)")
      ->check(CLI::Range(8, 4096))
      ->capture_default_str();
  voxelize->add_option("--probe", vox_cfg.probe_inflation, "Radius inflation added to every atom, Angstrom (1.4 = water)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  voxelize->add_option("--margin", vox_cfg.margin, "Empty border on every face, voxels")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  voxelize->add_option("--out", vox_out, "Output grid file (VAFM1)")->required();
  voxelize->add_flag("--strict", vox_cfg.strict, "Mesh mode: fail on a non-watertight mesh instead of keeping the surface");
  voxelize->add_flag("--surface-only", surface_only, "Mesh mode: skip the interior fill");
  voxelize->add_flag("--include-waters", pdb_opts.include_waters, "Keep HOH/WAT residues");
  voxelize->add_flag("--no-hetatm", no_hetatm, "Drop HETATM records");

  // render
  auto* render = app.add_subcommand("render", "Render one height-map view of a grid to PNG");
  std::string render_grid, render_quat = "1,0,0,0", render_out, render_heights, render_cmap = "hot";
  int render_size = 256;
  double render_max = 0.0;
  render->add_option("--grid", render_grid, "Input VAFM1 grid")->required()->check(CLI::ExistingFile);
  render->add_option("--quat", render_quat, "View rotation as w,x,y,z (normalized on input)")->capture_default_str();
  render->add_option("--size", render_size, "Image edge length, pixels (>= 16)")
      ->check(CLI::Range(16, 16384))
      ->capture_default_str();
  render->add_option("--colormap", render_cmap, "hot | gray")->check(CLI::IsMember({"hot", "gray"}))->capture_default_str();
  render->add_option("--max-height", render_max,
                     "Fixed normalization: Angstrom mapped to white (default: per-image maximum)")
      ->check(CLI::PositiveNumber);
  render->add_option("--out", render_out, "Output PNG")->required();
  render->add_option("--heights", render_heights, "Also write raw heights (VHM1, f32 Angstrom)");

  // dataset
  auto* dataset = app.add_subcommand("dataset", "Generate N randomly oriented views with a manifest");
  std::string ds_in, ds_accession, ds_out, ds_cmap = "hot";
  vafm::DatasetOptions ds_opts;
  bool ds_no_hetatm = false;
  auto* ds_in_opt = dataset->add_option("--in", ds_in, "Input .pdb or .obj file")->check(CLI::ExistingFile);
  auto* ds_acc_opt = dataset->add_option("--accession", ds_accession, "UniProt accession fetched from AlphaFold DB");
  ds_in_opt->excludes(ds_acc_opt);
  dataset->add_option("--views", ds_opts.n_views, "Number of views (>= 1)")->check(CLI::PositiveNumber)->capture_default_str();
  dataset->add_option("--out", ds_out, "Output directory")->required();
  dataset->add_option("--res", ds_opts.voxelize.resolution, "Grid edge length, voxels")
      ->check(CLI::Range(8, 4096))
      ->capture_default_str();
  dataset->add_option("--probe", ds_opts.voxelize.probe_inflation, "Atom radius inflation, Angstrom")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  dataset->add_option("--margin", ds_opts.voxelize.margin, "Empty border, voxels")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  dataset->add_option("--size", ds_opts.image_size, "Image edge length, pixels")
      ->check(CLI::Range(16, 16384))
      ->capture_default_str();
  dataset->add_option("--colormap", ds_cmap, "hot | gray")->check(CLI::IsMember({"hot", "gray"}))->capture_default_str();
  dataset->add_flag("--overwrite", ds_opts.overwrite, "Replace an existing dataset in --out");
  dataset->add_flag("--identity", ds_opts.identity_views, "Debug: render every view with the identity rotation");
  dataset->add_flag("--strict", ds_opts.voxelize.strict, "OBJ input: fail on a non-watertight mesh");
  dataset->add_flag("--include-waters", ds_opts.pdb.include_waters, "Keep HOH/WAT residues");
  dataset->add_flag("--no-hetatm", ds_no_hetatm, "Drop HETATM records");
  dataset->add_option("--url-template", url_template, "AlphaFold DB URL template with {ACCESSION}");

  // metrics
  auto* metrics = app.add_subcommand("metrics", "PSNR/SSIM of predicted views against ground truth, paired by filename");
  std::string m_pred, m_gt, m_out;
  metrics->add_option("--pred", m_pred, "Directory of predicted PNGs")->required()->check(CLI::ExistingDirectory);
  metrics->add_option("--gt", m_gt, "Directory of ground-truth PNGs")->required()->check(CLI::ExistingDirectory);
  metrics->add_option("--out", m_out, "Report JSON path (vafm-report/1)");

  // info
  auto* info = app.add_subcommand("info", "Summarize a PDB or OBJ file: counts, bounding box, suggested voxel size");
  std::string info_in;
  vafm::VoxelizeConfig info_cfg;
  info->add_option("--in", info_in, "Input .pdb or .obj file")->required()->check(CLI::ExistingFile);
  info->add_option("--res", info_cfg.resolution, "Grid edge length, voxels")->check(CLI::Range(8, 4096))->capture_default_str();
  info->add_option("--probe", info_cfg.probe_inflation, "Atom radius inflation, Angstrom")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  info->add_option("--margin", info_cfg.margin, "Empty border, voxels")->check(CLI::NonNegativeNumber)->capture_default_str();

  try {
    app.parse(argc, argv);
    if (dataset->parsed() && ds_in.empty() && ds_accession.empty()) {
      throw CLI::RequiredError("dataset needs --in or --accession");
    }
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\nRun with --help for the flag reference.\n";
    return kExitUsage;
  }

  vafm::set_thread_count(g.threads);
  std::optional<vafm::diagnostics::ScopedSink> mute;
  if (g.quiet) mute.emplace(nullptr);

  vafm::FetchOptions fetch_opts;
  fetch_opts.url_template = url_template;

  try {
    if (fetch->parsed()) {
      const std::string text = vafm::fetch_alphafold(fetch_accession, fetch_opts);
      vafm::detail::write_bytes(fetch_out, std::vector<std::uint8_t>(text.begin(), text.end()));
      say(g, "wrote " + fetch_out + " (" + std::to_string(text.size()) + " bytes)");
    } else if (voxelize->parsed()) {
      vox_cfg.mode = kModes.at(vox_mode);
      vox_cfg.mesh_fill = surface_only ? vafm::MeshFill::Surface : vafm::MeshFill::Solid;
      pdb_opts.include_hetatm = !no_hetatm;
      const std::string text = vafm::read_text(vox_in);
      const vafm::VoxelGrid grid = vox_cfg.mode == vafm::VoxelizeMode::Mesh
                                       ? vafm::voxelize_mesh(vafm::parse_obj(text), vox_cfg)
                                       : vafm::voxelize_atoms(vafm::parse_pdb(text, vox_in, pdb_opts),
                                                              vafm::RadiusTable::bondi(), vox_cfg);
      vafm::write_grid(vox_out, grid);
      const auto& d = grid.dims();
      say(g, "grid " + std::to_string(d[0]) + "x" + std::to_string(d[1]) + "x" + std::to_string(d[2]) +
                 ", voxel size " + std::to_string(grid.voxel_size()) + " A, " + std::to_string(grid.count()) +
                 " occupied voxels -> " + vox_out);
    } else if (render->parsed()) {
      vafm::RenderConfig cfg;
      cfg.image_size = render_size;
      cfg.colormap = kColormaps.at(render_cmap);
      if (render_max > 0) cfg.normalization = {vafm::NormalizationMode::Fixed, render_max};
      const vafm::Rotation r = parse_quaternion(render_quat);
      const vafm::VoxelGrid grid = vafm::read_grid(render_grid);
      const vafm::HeightMap map = vafm::render_height_map(grid, r, cfg);
      vafm::write_png(render_out, vafm::apply_colormap(map, cfg));
      if (!render_heights.empty()) vafm::write_heights(render_heights, map);
      say(g, "max height " + std::to_string(map.max()) + " A, pixel size " + std::to_string(map.pixel_size) +
                 " A -> " + render_out);
    } else if (dataset->parsed()) {
      ds_opts.seed = g.seed;
      ds_opts.colormap = kColormaps.at(ds_cmap);
      ds_opts.pdb.include_hetatm = !ds_no_hetatm;
      vafm::DatasetInput input =
          ds_accession.empty()
              ? vafm::DatasetInput::from_path(ds_in)
              : vafm::DatasetInput::from_pdb_text(vafm::fetch_alphafold(ds_accession, fetch_opts), ds_accession);
      const auto manifest = vafm::generate_dataset(input, ds_opts, ds_out);
      say(g, std::to_string(manifest.n_views) + " views, voxel size " + std::to_string(manifest.voxel_size) +
                 " A, max height " + std::to_string(manifest.max_height) + " A -> " + ds_out);
    } else if (metrics->parsed()) {
      const auto report = vafm::compare_sets(m_pred, m_gt);
      if (!m_out.empty()) {
        const std::string text = vafm::report_to_json(report).dump(2) + "\n";
        vafm::detail::write_bytes(m_out, std::vector<std::uint8_t>(text.begin(), text.end()));
      }
      if (!g.quiet) std::cout << vafm::report_to_table(report);
    } else if (info->parsed()) {
      info_cfg.validate();
      const std::string text = vafm::read_text(info_in);
      auto ext = fs::path(info_in).extension().string();
      if (ext == ".obj" || ext == ".OBJ") {
        const auto mesh = vafm::parse_obj(text);
        const auto box = mesh.bbox();
        const auto e = box.extent();
        std::cout << "vertices: " << mesh.vertices.size() << "\ntriangles: " << mesh.triangles.size() << '\n'
                  << "bbox min: " << fmt("%.3f %.3f %.3f", box.min.x, box.min.y, box.min.z) << " A\n"
                  << "bbox max: " << fmt("%.3f %.3f %.3f", box.max.x, box.max.y, box.max.z) << " A\n"
                  << "boundary edges: " << vafm::boundary_edge_count(mesh) << '\n'
                  << "suggested voxel size: " << std::max({e.x, e.y, e.z}) / info_cfg.content_voxels() << " A\n";
      } else {
        const auto model = vafm::parse_pdb(text, info_in);
        std::map<std::string, std::size_t> elements;
        std::size_t hetero = 0;
        for (const auto& a : model.atoms()) {
          ++elements[a.element];
          hetero += a.hetero;
        }
        const auto& box = model.bbox();
        const auto raw = vafm::make_raw_lattice(
            vafm::sphere_bounds(vafm::atom_spheres(model, vafm::RadiusTable::bondi(), info_cfg.probe_inflation)),
            info_cfg);
        std::cout << "atoms: " << model.size() << " (" << hetero << " HETATM)\nelements:";
        for (const auto& [el, n] : elements) std::cout << ' ' << el << '=' << n;
        std::cout << "\nbbox min: " << fmt("%.3f %.3f %.3f", box.min.x, box.min.y, box.min.z) << " A\n"
                  << "bbox max: " << fmt("%.3f %.3f %.3f", box.max.x, box.max.y, box.max.z) << " A\n"
                  << "suggested voxel size: " << raw.voxel_size << " A (resolution " << info_cfg.resolution
                  << ", margin " << info_cfg.margin << ")\n"
                  << "content voxels: " << raw.dims[0] << "x" << raw.dims[1] << "x" << raw.dims[2] << '\n';
      }
    }
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\nRun with --help for the flag reference.\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}
