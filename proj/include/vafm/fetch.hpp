#pragma once

#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif
#include <httplib.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <regex>
#include <sstream>
#include <string>

#include "vafm/error.hpp"

namespace vafm {

inline constexpr const char* kAlphaFoldUrlTemplate =
    "https://alphafold.ebi.ac.uk/files/AF-{ACCESSION}-F1-model_v4.pdb";

struct FetchOptions {
  /// `{ACCESSION}` is substituted. Empty means $VAFM_ALPHAFOLD_URL, then the
  /// pinned model_v4 default.
  std::string url_template;
  /// Empty means $VAFM_CACHE_DIR; no caching when both are unset.
  std::filesystem::path cache_dir;
  int timeout_seconds = 30;
};

/// UniProt accession grammar (6 or 10 characters).
inline bool is_uniprot_accession(const std::string& accession) {
  static const std::regex pattern(
      "^([OPQ][0-9][A-Z0-9]{3}[0-9]|[A-NR-Z][0-9]([A-Z][A-Z0-9]{2}[0-9]){1,2})$");
  return std::regex_match(accession, pattern);
}

namespace detail {

inline std::string env_or(const char* name, std::string fallback) {
  const char* v = std::getenv(name);
  return (v && *v) ? std::string(v) : std::move(fallback);
}

struct SplitUrl {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

inline SplitUrl split_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw Error(ErrorCode::InvalidArgument, "malformed URL: " + url);
  const auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

inline std::optional<std::string> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return std::move(ss).str();
}

}  // namespace detail

inline std::string alphafold_url(const std::string& accession, const FetchOptions& options = {}) {
  std::string url = options.url_template.empty() ? detail::env_or("VAFM_ALPHAFOLD_URL", kAlphaFoldUrlTemplate)
                                                 : options.url_template;
  const std::string key = "{ACCESSION}";
  for (auto at = url.find(key); at != std::string::npos; at = url.find(key, at + accession.size())) {
    url.replace(at, key.size(), accession);
  }
  return url;
}

/// Downloads the AlphaFold DB PDB model for a UniProt accession. The accession
/// is validated before any network activity.
inline std::string fetch_alphafold(const std::string& accession, const FetchOptions& options = {}) {
  if (!is_uniprot_accession(accession)) {
    throw Error(ErrorCode::InvalidAccession, "'" + accession + "' is not a UniProt accession");
  }

  std::filesystem::path cache_dir =
      options.cache_dir.empty() ? std::filesystem::path(detail::env_or("VAFM_CACHE_DIR", "")) : options.cache_dir;
  const std::filesystem::path cached =
      cache_dir.empty() ? std::filesystem::path{} : cache_dir / ("AF-" + accession + "-F1-model_v4.pdb");
  if (!cached.empty()) {
    if (auto text = detail::read_file(cached)) return *text;
  }

  const auto url = detail::split_url(alphafold_url(accession, options));
  httplib::Client client(url.origin);
  client.set_connection_timeout(options.timeout_seconds, 0);
  client.set_read_timeout(options.timeout_seconds, 0);
  client.set_follow_location(true);
  auto res = client.Get(url.path);
  if (!res) {
    throw Error(ErrorCode::NetworkError,
                "GET " + url.origin + url.path + " failed: " + httplib::to_string(res.error()));
  }
  if (res->status == 404) throw Error(ErrorCode::NotFound, "accession " + accession + " not in AlphaFold DB");
  if (res->status != 200) {
    throw Error(ErrorCode::NetworkError, "GET " + url.origin + url.path + " returned HTTP " + std::to_string(res->status));
  }

  if (!cached.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(cache_dir, ec);
    const auto tmp = cached.string() + ".part";
    {
      std::ofstream out(tmp, std::ios::binary);
      out << res->body;
    }
    std::filesystem::rename(tmp, cached, ec);
  }
  return res->body;
}

}  // namespace vafm
