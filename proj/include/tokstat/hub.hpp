#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

namespace tokstat {

// Default remote layout. A base URL containing "{model_id}" is used as a
// template ("{filename}" is substituted too); any other base URL resolves to
// "<base>/<model_id>/<filename>".
inline constexpr std::string_view kDefaultHubUrl =
    "https://huggingface.co/{model_id}/resolve/main/{filename}";
inline constexpr std::string_view kCacheDirEnv = "TOKSTAT_CACHE_DIR";
inline constexpr std::string_view kHubUrlEnv = "TOKSTAT_HUB_URL";

struct CacheEntry {
  std::string model_id;
  std::string url;
  std::filesystem::path local_path;
  std::string content_digest;  // sha256, lowercase hex
  std::string fetched_at;      // ISO 8601, UTC
};

struct FetchOptions {
  std::string filename = "vocab.txt";
  // When set, a download whose sha256 differs is rejected with IntegrityError.
  std::optional<std::string> expected_sha256;
  long timeout_seconds = 120;
};

struct FetchResult {
  std::filesystem::path path;
  bool from_cache = false;
};

// $TOKSTAT_CACHE_DIR, else $XDG_CACHE_HOME/tokstat, else ~/.cache/tokstat.
std::filesystem::path default_cache_dir();
// $TOKSTAT_HUB_URL, else kDefaultHubUrl.
std::string default_hub_url();

std::string resolve_url(std::string_view base_url, std::string_view model_id,
                        std::string_view filename);

std::string sha256_hex(std::string_view data);
std::string sha256_file(const std::filesystem::path& path);

// Entry recorded in cache_dir's index whose file still exists and matches
// its digest.
std::optional<CacheEntry> lookup_cache(const std::filesystem::path& cache_dir,
                                       std::string_view model_id,
                                       std::string_view filename = "vocab.txt");

// Returns the cached file when its digest is intact; otherwise downloads it,
// publishes it with an atomic rename, and records it in the index. Errors:
// ModelNotFoundError (HTTP 401/404, cache untouched), IntegrityError,
// UnavailableError (host unreachable with a cold cache), NetworkError,
// IoError (cache directory not writable).
FetchResult fetch_vocab(std::string_view model_id, std::string_view base_url,
                        const std::filesystem::path& cache_dir, const FetchOptions& options = {});

}  // namespace tokstat
