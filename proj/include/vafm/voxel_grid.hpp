#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "vafm/error.hpp"
#include "vafm/geometry.hpp"

namespace vafm {

using Dims = std::array<std::uint32_t, 3>;

/// Binary occupancy on a cubic lattice. Voxel (i,j,k) is centered at
/// origin + voxel_size * (i,j,k); bits run x-fastest, then y, then z, packed
/// least-significant-bit first.
class VoxelGrid {
 public:
  VoxelGrid() = default;

  VoxelGrid(Dims dims, double voxel_size, Vec3 origin)
      : dims_(dims), voxel_size_(voxel_size), origin_(origin), bits_((voxel_count() + 7) / 8, 0) {
    if (!(voxel_size > 0) || !std::isfinite(voxel_size)) {
      throw Error(ErrorCode::InvalidArgument, "voxel size must be positive");
    }
  }

  const Dims& dims() const noexcept { return dims_; }
  double voxel_size() const noexcept { return voxel_size_; }
  const Vec3& origin() const noexcept { return origin_; }
  const std::vector<std::uint8_t>& bits() const noexcept { return bits_; }
  std::vector<std::uint8_t>& bits() noexcept { return bits_; }

  std::size_t voxel_count() const noexcept {
    return static_cast<std::size_t>(dims_[0]) * dims_[1] * dims_[2];
  }

  std::size_t index(std::size_t i, std::size_t j, std::size_t k) const noexcept {
    return i + dims_[0] * (j + dims_[1] * k);
  }

  bool get(std::size_t i, std::size_t j, std::size_t k) const noexcept { return test(index(i, j, k)); }
  bool test(std::size_t idx) const noexcept { return (bits_[idx >> 3] >> (idx & 7)) & 1u; }

  void set(std::size_t i, std::size_t j, std::size_t k, bool value = true) noexcept {
    const std::size_t idx = index(i, j, k);
    const auto mask = static_cast<std::uint8_t>(1u << (idx & 7));
    if (value) bits_[idx >> 3] |= mask;
    else bits_[idx >> 3] &= static_cast<std::uint8_t>(~mask);
  }

  std::size_t count() const noexcept {
    std::size_t n = 0;
    for (auto b : bits_) n += static_cast<std::size_t>(std::popcount(b));
    return n;
  }

  Vec3 center_of(std::size_t i, std::size_t j, std::size_t k) const noexcept {
    return origin_ + voxel_size_ * Vec3{double(i), double(j), double(k)};
  }

  /// Geometric center of the whole lattice.
  Vec3 center() const noexcept {
    return origin_ + 0.5 * voxel_size_ * Vec3{dims_[0] - 1.0, dims_[1] - 1.0, dims_[2] - 1.0};
  }

  /// Inclusive index bounds of occupied voxels per axis; empty() when nothing
  /// is occupied.
  struct Extent {
    std::array<std::uint32_t, 3> lo{}, hi{};
    bool empty = true;
    std::uint32_t span(int axis) const noexcept { return empty ? 0 : hi[axis] - lo[axis] + 1; }
  };

  Extent occupied_extent() const {
    Extent e;
    e.lo = {dims_[0], dims_[1], dims_[2]};
    for (std::uint32_t k = 0; k < dims_[2]; ++k)
      for (std::uint32_t j = 0; j < dims_[1]; ++j)
        for (std::uint32_t i = 0; i < dims_[0]; ++i) {
          if (!get(i, j, k)) continue;
          const std::array<std::uint32_t, 3> ijk{i, j, k};
          for (int a = 0; a < 3; ++a) {
            e.lo[a] = std::min(e.lo[a], ijk[a]);
            e.hi[a] = std::max(e.hi[a], ijk[a]);
          }
          e.empty = false;
        }
    return e;
  }

  friend bool operator==(const VoxelGrid&, const VoxelGrid&) = default;

 private:
  Dims dims_{0, 0, 0};
  double voxel_size_ = 1.0;
  Vec3 origin_;
  std::vector<std::uint8_t> bits_;
};

// VAFM1 container: "VAFM", u32 version, 3 x u32 dims, f64 voxel size,
// 3 x f64 origin, packed occupancy. All little-endian.
namespace detail {

template <typename T>
void put_le(std::vector<std::uint8_t>& out, T value) {
  static_assert(std::is_integral_v<T>);
  for (std::size_t b = 0; b < sizeof(T); ++b) out.push_back(static_cast<std::uint8_t>(value >> (8 * b)));
}

inline void put_f64(std::vector<std::uint8_t>& out, double v) { put_le(out, std::bit_cast<std::uint64_t>(v)); }
inline void put_f32(std::vector<std::uint8_t>& out, float v) { put_le(out, std::bit_cast<std::uint32_t>(v)); }

class ByteReader {
 public:
  explicit ByteReader(const std::vector<std::uint8_t>& bytes) : bytes_(bytes) {}

  template <typename T>
  T get_le() {
    need(sizeof(T));
    T v = 0;
    for (std::size_t b = 0; b < sizeof(T); ++b) v |= static_cast<T>(static_cast<T>(bytes_[pos_ + b]) << (8 * b));
    pos_ += sizeof(T);
    return v;
  }
  double get_f64() { return std::bit_cast<double>(get_le<std::uint64_t>()); }
  float get_f32() { return std::bit_cast<float>(get_le<std::uint32_t>()); }

  void expect_magic(const char* magic) {
    need(4);
    if (std::memcmp(bytes_.data() + pos_, magic, 4) != 0) {
      throw Error(ErrorCode::FormatError, std::string("bad magic, expected ") + magic);
    }
    pos_ += 4;
  }

  std::size_t remaining() const noexcept { return bytes_.size() - pos_; }
  std::size_t position() const noexcept { return pos_; }

 private:
  void need(std::size_t n) const {
    if (pos_ + n > bytes_.size()) throw Error(ErrorCode::FormatError, "truncated file");
  }
  const std::vector<std::uint8_t>& bytes_;
  std::size_t pos_ = 0;
};

inline std::vector<std::uint8_t> read_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_bytes(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

}  // namespace detail

inline constexpr std::uint32_t kGridFormatVersion = 1;

inline std::vector<std::uint8_t> encode_grid(const VoxelGrid& grid) {
  std::vector<std::uint8_t> out{'V', 'A', 'F', 'M'};
  detail::put_le<std::uint32_t>(out, kGridFormatVersion);
  for (auto d : grid.dims()) detail::put_le<std::uint32_t>(out, d);
  detail::put_f64(out, grid.voxel_size());
  for (int a = 0; a < 3; ++a) detail::put_f64(out, grid.origin()[a]);
  out.insert(out.end(), grid.bits().begin(), grid.bits().end());
  return out;
}

inline VoxelGrid decode_grid(const std::vector<std::uint8_t>& bytes) {
  detail::ByteReader in(bytes);
  in.expect_magic("VAFM");
  const auto version = in.get_le<std::uint32_t>();
  if (version != kGridFormatVersion) {
    throw Error(ErrorCode::FormatError, "unsupported grid version " + std::to_string(version));
  }
  Dims dims{};
  for (auto& d : dims) d = in.get_le<std::uint32_t>();
  const double voxel_size = in.get_f64();
  Vec3 origin;
  for (int a = 0; a < 3; ++a) origin[a] = in.get_f64();
  VoxelGrid grid(dims, voxel_size, origin);
  if (in.remaining() != grid.bits().size()) {
    throw Error(ErrorCode::FormatError, "occupancy payload is " + std::to_string(in.remaining()) + " bytes, expected " +
                                            std::to_string(grid.bits().size()));
  }
  std::copy(bytes.begin() + static_cast<std::ptrdiff_t>(in.position()), bytes.end(), grid.bits().begin());
  return grid;
}

inline void write_grid(const std::filesystem::path& path, const VoxelGrid& grid) {
  detail::write_bytes(path, encode_grid(grid));
}

inline VoxelGrid read_grid(const std::filesystem::path& path) { return decode_grid(detail::read_bytes(path)); }

}  // namespace vafm
