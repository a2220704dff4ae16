#pragma once

#include <cctype>
#include <charconv>
#include <cstdio>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include "vafm/diagnostics.hpp"
#include "vafm/error.hpp"
#include "vafm/geometry.hpp"

namespace vafm {

struct Atom {
  int serial = 0;
  std::string name;
  std::string element;
  Vec3 position;
  double occupancy = 1.0;
  std::optional<char> alt_loc;
  char chain_id = ' ';
  int residue_seq = 0;
  std::string residue_name;
  bool hetero = false;

  friend bool operator==(const Atom&, const Atom&) = default;
};

class MolecularModel {
 public:
  MolecularModel(std::vector<Atom> atoms, std::string source_id)
      : atoms_(std::move(atoms)), source_id_(std::move(source_id)) {
    if (atoms_.empty()) throw Error(ErrorCode::NoAtoms, "model '" + source_id_ + "' has no atoms");
    for (const auto& a : atoms_) bbox_.expand(a.position);
  }

  const std::vector<Atom>& atoms() const noexcept { return atoms_; }
  const std::string& source_id() const noexcept { return source_id_; }
  const BoundingBox& bbox() const noexcept { return bbox_; }
  std::size_t size() const noexcept { return atoms_.size(); }

  std::vector<Vec3> positions() const {
    std::vector<Vec3> out;
    out.reserve(atoms_.size());
    for (const auto& a : atoms_) out.push_back(a.position);
    return out;
  }

  friend bool operator==(const MolecularModel&, const MolecularModel&) = default;

 private:
  std::vector<Atom> atoms_;
  std::string source_id_;
  BoundingBox bbox_;
};

/// Element -> van der Waals radius in Angstrom.
struct RadiusTable {
  std::map<std::string, double, std::less<>> radii;
  double default_radius = 1.70;

  /// Bondi (1964) radii, J. Phys. Chem. 68, 441.
  static RadiusTable bondi() {
    return {{{"H", 1.20},  {"He", 1.40}, {"Li", 1.82}, {"C", 1.70},  {"N", 1.55},  {"O", 1.52},
             {"F", 1.47},  {"Ne", 1.54}, {"Na", 2.27}, {"Mg", 1.73}, {"Si", 2.10}, {"P", 1.80},
             {"S", 1.80},  {"Cl", 1.75}, {"Ar", 1.88}, {"K", 2.75},  {"Ni", 1.63}, {"Cu", 1.40},
             {"Zn", 1.39}, {"Ga", 1.87}, {"As", 1.85}, {"Se", 1.90}, {"Br", 1.85}, {"Kr", 2.02},
             {"Pd", 1.63}, {"Ag", 1.72}, {"Cd", 1.58}, {"In", 1.93}, {"Sn", 2.17}, {"Te", 2.06},
             {"I", 1.98},  {"Xe", 2.16}, {"Pt", 1.72}, {"Au", 1.66}, {"Hg", 1.55}, {"Tl", 1.96},
             {"Pb", 2.02}, {"U", 1.86}},
            1.70};
  }
};

/// Unknown elements fall back to the table default with a warning.
inline double vdw_radius(std::string_view element, const RadiusTable& table) {
  if (auto it = table.radii.find(element); it != table.radii.end()) return it->second;
  diagnostics::warn("no van der Waals radius for element '" + std::string(element) + "', using " +
                    std::to_string(table.default_radius) + " A");
  return table.default_radius;
}

struct PdbOptions {
  bool include_hetatm = true;
  bool include_waters = false;
};

namespace detail {

inline std::string_view columns(std::string_view line, std::size_t first, std::size_t last) {
  // 1-based inclusive PDB column range, clipped to the line.
  if (line.size() < first) return {};
  return line.substr(first - 1, std::min(last, line.size()) - first + 1);
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

template <typename T>
std::optional<T> parse_number(std::string_view field) {
  field = trim(field);
  if (field.empty()) return std::nullopt;
  if (field.front() == '+') field.remove_prefix(1);
  T value{};
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size()) return std::nullopt;
  return value;
}

inline std::string normalize_element(std::string_view raw) {
  std::string out;
  for (char c : raw) {
    if (!std::isalpha(static_cast<unsigned char>(c))) continue;
    out += out.empty() ? static_cast<char>(std::toupper(static_cast<unsigned char>(c)))
                       : static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

inline bool is_water(std::string_view residue) {
  return residue == "HOH" || residue == "WAT" || residue == "H2O" || residue == "DOD";
}

}  // namespace detail

/// Reads ATOM/HETATM records from PDB fixed-column text. Only the first MODEL
/// is read, and alternate locations other than blank or 'A' are dropped.
inline MolecularModel parse_pdb(std::string_view text, std::string source_id = {},
                                const PdbOptions& options = {}) {
  std::vector<Atom> atoms;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    const std::string_view record = detail::columns(line, 1, 6);
    if (record.starts_with("ENDMDL")) break;
    const bool is_atom = record == "ATOM  " || record == "ATOM";
    const bool is_het = record == "HETATM";
    if (!is_atom && !is_het) continue;
    if (is_het && !options.include_hetatm) continue;

    const std::string_view alt = detail::columns(line, 17, 17);
    if (!alt.empty() && alt[0] != ' ' && alt[0] != 'A') continue;

    const std::string_view residue = detail::trim(detail::columns(line, 18, 20));
    if (!options.include_waters && detail::is_water(residue)) continue;

    Atom atom;
    const auto x = detail::parse_number<double>(detail::columns(line, 31, 38));
    const auto y = detail::parse_number<double>(detail::columns(line, 39, 46));
    const auto z = detail::parse_number<double>(detail::columns(line, 47, 54));
    if (!x || !y || !z) {
      throw Error(ErrorCode::MalformedRecord, "bad coordinate field on line " + std::to_string(line_no));
    }
    atom.position = {*x, *y, *z};
    if (!is_finite(atom.position)) {
      throw Error(ErrorCode::MalformedRecord, "non-finite coordinate on line " + std::to_string(line_no));
    }
    atom.serial = detail::parse_number<int>(detail::columns(line, 7, 11)).value_or(0);
    atom.name = std::string(detail::trim(detail::columns(line, 13, 16)));
    if (!alt.empty() && alt[0] != ' ') atom.alt_loc = alt[0];
    atom.residue_name = std::string(residue);
    const std::string_view chain = detail::columns(line, 22, 22);
    atom.chain_id = chain.empty() ? ' ' : chain[0];
    atom.residue_seq = detail::parse_number<int>(detail::columns(line, 23, 26)).value_or(0);
    atom.occupancy = std::clamp(detail::parse_number<double>(detail::columns(line, 55, 60)).value_or(1.0), 0.0, 1.0);
    atom.hetero = is_het;

    atom.element = detail::normalize_element(detail::columns(line, 77, 78));
    if (atom.element.empty()) {
      for (char c : atom.name) {
        if (std::isalpha(static_cast<unsigned char>(c))) {
          atom.element = std::string(1, static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
          break;
        }
      }
    }
    if (atom.element.empty()) {
      throw Error(ErrorCode::MalformedRecord, "cannot resolve element on line " + std::to_string(line_no));
    }
    atoms.push_back(std::move(atom));
  }
  if (atoms.empty()) throw Error(ErrorCode::NoAtoms, "no ATOM/HETATM records in '" + source_id + "'");
  return MolecularModel(std::move(atoms), std::move(source_id));
}

/// Canonical PDB writer for the fields retained by parse_pdb.
inline std::string write_pdb(const MolecularModel& model) {
  std::string out;
  char buf[96];
  for (const auto& a : model.atoms()) {
    std::string name = a.name;
    if (name.size() < 4 && a.element.size() == 1) name = " " + name;
    std::string element = a.element;
    for (auto& c : element) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    std::snprintf(buf, sizeof buf, "%-6s%5d %-4.4s%c%3.3s %c%4d    %8.3f%8.3f%8.3f%6.2f%6.2f          %2.2s\n",
                  a.hetero ? "HETATM" : "ATOM", a.serial, name.c_str(), a.alt_loc.value_or(' '),
                  a.residue_name.c_str(), a.chain_id, a.residue_seq, a.position.x, a.position.y, a.position.z,
                  a.occupancy, 0.0, element.c_str());
    out += buf;
  }
  out += "END\n";
  return out;
}

}  // namespace vafm
