#pragma once

#include <json.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "vafm/error.hpp"
#include "vafm/image.hpp"

namespace vafm {

inline void require_same_size(const RgbImage& a, const RgbImage& b) {
  if (a.width != b.width || a.height != b.height) {
    throw Error(ErrorCode::DimensionMismatch, std::to_string(a.width) + "x" + std::to_string(a.height) + " vs " +
                                                  std::to_string(b.width) + "x" + std::to_string(b.height));
  }
}

/// PSNR in dB over all channels with peak 255; +infinity for identical images.
inline double psnr(const RgbImage& a, const RgbImage& b) {
  require_same_size(a, b);
  double sum = 0.0;
  for (std::size_t n = 0; n < a.data.size(); ++n) {
    const double d = double(a.data[n]) - double(b.data[n]);
    sum += d * d;
  }
  if (sum == 0.0) return std::numeric_limits<double>::infinity();
  const double mse = sum / double(a.data.size());
  return 10.0 * std::log10(255.0 * 255.0 / mse);
}

/// Rec.601 luma, unrounded.
inline std::vector<double> luma(const RgbImage& img) {
  std::vector<double> out(std::size_t(img.width) * img.height);
  for (std::size_t p = 0; p < out.size(); ++p) {
    const auto* px = &img.data[p * 3];
    out[p] = 0.299 * px[0] + 0.587 * px[1] + 0.114 * px[2];
  }
  return out;
}

struct SsimParams {
  static constexpr int window = 11;
  static constexpr double sigma = 1.5;
  static constexpr double c1 = (0.01 * 255) * (0.01 * 255);
  static constexpr double c2 = (0.03 * 255) * (0.03 * 255);
};

/// Normalized 1-D Gaussian taps; the 2-D window is their outer product.
inline std::array<double, SsimParams::window> ssim_taps() {
  std::array<double, SsimParams::window> g{};
  constexpr int r = SsimParams::window / 2;
  double sum = 0.0;
  for (int i = 0; i < SsimParams::window; ++i) {
    g[i] = std::exp(-double((i - r) * (i - r)) / (2.0 * SsimParams::sigma * SsimParams::sigma));
    sum += g[i];
  }
  for (auto& v : g) v /= sum;
  return g;
}

/// Mean SSIM on luma with an 11x11 Gaussian window (sigma 1.5), evaluated at
/// every window position that fits entirely inside the image.
inline double ssim(const RgbImage& a, const RgbImage& b) {
  require_same_size(a, b);
  constexpr int win = SsimParams::window;
  if (a.width < std::uint32_t(win) || a.height < std::uint32_t(win)) {
    throw Error(ErrorCode::TooSmall, "SSIM needs images of at least 11x11");
  }
  const auto x = luma(a);
  const auto y = luma(b);
  const auto g = ssim_taps();
  const std::size_t w = a.width, h = a.height;
  const std::size_t ow = w - win + 1, oh = h - win + 1;

  // Horizontal pass for the five moments, then vertical.
  std::vector<std::array<double, 5>> horiz(ow * h);
#pragma omp parallel for schedule(static)
  for (long row = 0; row < long(h); ++row) {
    for (std::size_t col = 0; col < ow; ++col) {
      std::array<double, 5> acc{};
      for (int t = 0; t < win; ++t) {
        const std::size_t p = std::size_t(row) * w + col + t;
        const double xv = x[p], yv = y[p];
        acc[0] += g[t] * xv;
        acc[1] += g[t] * yv;
        acc[2] += g[t] * (xv * xv);
        acc[3] += g[t] * (yv * yv);
        acc[4] += g[t] * (xv * yv);
      }
      horiz[std::size_t(row) * ow + col] = acc;
    }
  }

  std::vector<double> row_sums(oh, 0.0);
#pragma omp parallel for schedule(static)
  for (long row = 0; row < long(oh); ++row) {
    double sum = 0.0;
    for (std::size_t col = 0; col < ow; ++col) {
      std::array<double, 5> m{};
      for (int t = 0; t < win; ++t) {
        const auto& hv = horiz[(std::size_t(row) + t) * ow + col];
        for (int c = 0; c < 5; ++c) m[c] += g[t] * hv[c];
      }
      const double mx = m[0], my = m[1];
      const double vx = m[2] - mx * mx;
      const double vy = m[3] - my * my;
      const double cov = m[4] - mx * my;
      sum += ((2.0 * (mx * my) + SsimParams::c1) * (2.0 * cov + SsimParams::c2)) /
             ((mx * mx + my * my + SsimParams::c1) * (vx + vy + SsimParams::c2));
    }
    row_sums[row] = sum;
  }
  double total = 0.0;
  for (double s : row_sums) total += s;
  return total / double(ow * oh);
}

struct PairMetrics {
  std::string pred_file;
  std::string gt_file;
  double psnr_db = 0.0;  // +infinity when identical
  double ssim = 0.0;
  std::optional<double> lpips;
};

struct MetricsReport {
  std::vector<PairMetrics> pairs;
  std::optional<double> mean_psnr_db;  // over finite values only
  double mean_ssim = 0.0;
  std::size_t n_pairs = 0;
  std::size_t n_infinite_psnr = 0;
};

/// Means in the given row order; infinite PSNR rows are counted, not averaged.
inline MetricsReport aggregate(std::vector<PairMetrics> pairs) {
  if (pairs.empty()) throw Error(ErrorCode::EmptyDirectory, "no image pairs to aggregate");
  MetricsReport report;
  double psnr_sum = 0.0, ssim_sum = 0.0;
  std::size_t finite = 0;
  for (const auto& p : pairs) {
    ssim_sum += p.ssim;
    if (std::isinf(p.psnr_db)) {
      ++report.n_infinite_psnr;
    } else {
      psnr_sum += p.psnr_db;
      ++finite;
    }
  }
  report.n_pairs = pairs.size();
  report.mean_ssim = ssim_sum / double(pairs.size());
  if (finite > 0) report.mean_psnr_db = psnr_sum / double(finite);
  report.pairs = std::move(pairs);
  return report;
}

inline std::vector<std::filesystem::path> list_pngs(const std::filesystem::path& dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) throw Error(ErrorCode::IoError, dir.string() + " is not a directory");
  std::vector<std::filesystem::path> out;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".png") out.push_back(entry.path().filename());
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Scores every PNG in pred_dir against the same-named PNG in gt_dir.
inline MetricsReport compare_sets(const std::filesystem::path& pred_dir, const std::filesystem::path& gt_dir) {
  const auto pred = list_pngs(pred_dir);
  if (pred.empty()) throw Error(ErrorCode::EmptyDirectory, pred_dir.string() + " has no PNG files");
  if (list_pngs(gt_dir).empty()) throw Error(ErrorCode::EmptyDirectory, gt_dir.string() + " has no PNG files");
  for (const auto& name : pred) {
    if (!std::filesystem::exists(gt_dir / name)) {
      throw Error(ErrorCode::UnpairedFile, name.string() + " has no counterpart in " + gt_dir.string());
    }
  }

  std::vector<PairMetrics> rows(pred.size());
  std::vector<std::exception_ptr> failures(pred.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (long n = 0; n < long(pred.size()); ++n) {
    try {
      const RgbImage p = read_png(pred_dir / pred[n]);
      const RgbImage g = read_png(gt_dir / pred[n]);
      rows[n].pred_file = (pred_dir / pred[n]).string();
      rows[n].gt_file = (gt_dir / pred[n]).string();
      rows[n].psnr_db = psnr(p, g);
      rows[n].ssim = ssim(p, g);
    } catch (...) {
      failures[n] = std::current_exception();
    }
  }
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }
  return aggregate(std::move(rows));
}

inline constexpr const char* kReportFormat = "vafm-report/1";

inline nlohmann::json report_to_json(const MetricsReport& report) {
  nlohmann::json pairs = nlohmann::json::array();
  for (const auto& p : report.pairs) {
    nlohmann::json row{{"pred", p.pred_file}, {"gt", p.gt_file}, {"ssim", p.ssim}};
    row["psnr_db"] = std::isinf(p.psnr_db) ? nlohmann::json("inf") : nlohmann::json(p.psnr_db);
    if (p.lpips) row["lpips"] = *p.lpips;
    pairs.push_back(std::move(row));
  }
  return {{"format", kReportFormat},
          {"pairs", std::move(pairs)},
          {"aggregate",
           {{"mean_psnr_db", report.mean_psnr_db ? nlohmann::json(*report.mean_psnr_db) : nlohmann::json(nullptr)},
            {"mean_ssim", report.mean_ssim},
            {"mean_lpips", nullptr},
            {"n_pairs", report.n_pairs},
            {"n_infinite_psnr", report.n_infinite_psnr}}}};
}

/// Aligned plain-text table: one row per pair, then the mean row.
inline std::string report_to_table(const MetricsReport& report) {
  std::size_t name_width = 4;
  for (const auto& p : report.pairs) {
    name_width = std::max(name_width, std::filesystem::path(p.pred_file).filename().string().size());
  }
  auto fmt_psnr = [](std::optional<double> v) {
    if (!v) return std::string("inf");
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", *v);
    return std::string(buf);
  };
  std::string out;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-*s  %10s  %8s\n", int(name_width), "view", "PSNR (up)", "SSIM (up)");
  out += buf;
  for (const auto& p : report.pairs) {
    const auto name = std::filesystem::path(p.pred_file).filename().string();
    const auto ps = std::isinf(p.psnr_db) ? std::optional<double>{} : std::optional<double>{p.psnr_db};
    std::snprintf(buf, sizeof buf, "%-*s  %10s  %8.4f\n", int(name_width), name.c_str(), fmt_psnr(ps).c_str(), p.ssim);
    out += buf;
  }
  std::snprintf(buf, sizeof buf, "%-*s  %10s  %8.4f\n", int(name_width), "mean", fmt_psnr(report.mean_psnr_db).c_str(),
                report.mean_ssim);
  out += buf;
  std::snprintf(buf, sizeof buf, "pairs: %zu, identical (infinite PSNR): %zu\n", report.n_pairs, report.n_infinite_psnr);
  out += buf;
  return out;
}

}  // namespace vafm
