#include "tokstat/hub.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <memory>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <curl/curl.h>
#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include "tokstat/errors.hpp"

namespace fs = std::filesystem;

namespace tokstat {

namespace {

constexpr const char* kIndexFile = "index.json";
constexpr const char* kLockFile = ".lock";

std::string getenv_string(std::string_view name) {
  const char* v = std::getenv(std::string(name).c_str());
  return v ? std::string(v) : std::string();
}

void replace_all(std::string& s, std::string_view from, std::string_view to) {
  for (auto pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size())) {
    s.replace(pos, from.size(), to);
  }
}

void validate_model_id(std::string_view id) {
  auto ok_char = [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
           c == '-' || c == '_' || c == '.' || c == '/';
  };
  bool valid = !id.empty() && id.front() != '/' && id.back() != '/' &&
               id.find("..") == std::string_view::npos &&
               std::all_of(id.begin(), id.end(), ok_char);
  if (!valid) throw std::invalid_argument("invalid model id '" + std::string(id) + "'");
}

fs::path entry_dir(const fs::path& cache_dir, std::string_view model_id) {
  std::string name(model_id);
  replace_all(name, "/", "--");
  return cache_dir / name;
}

std::string index_key(std::string_view model_id, std::string_view filename) {
  return filename == "vocab.txt" ? std::string(model_id)
                                 : std::string(model_id) + ":" + std::string(filename);
}

std::string utc_timestamp() {
  auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string unique_suffix() {
  static std::atomic<unsigned> counter{0};
  std::ostringstream s;
  s << ::getpid() << '-' << std::hash<std::thread::id>{}(std::this_thread::get_id()) << '-'
    << counter++;
  return s.str();
}

// Serializes index read-modify-write across threads and processes.
class CacheLock {
 public:
  explicit CacheLock(const fs::path& cache_dir) {
    const auto path = cache_dir / kLockFile;
    fd_ = ::open(path.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644);
    if (fd_ < 0) throw IoError("cannot open cache lock " + path.string());
    ::flock(fd_, LOCK_EX);
  }
  ~CacheLock() {
    ::flock(fd_, LOCK_UN);
    ::close(fd_);
  }
  CacheLock(const CacheLock&) = delete;
  CacheLock& operator=(const CacheLock&) = delete;

 private:
  int fd_ = -1;
};

nlohmann::json read_index(const fs::path& cache_dir) {
  std::ifstream in(cache_dir / kIndexFile);
  if (!in) return {{"entries", nlohmann::json::object()}};
  auto doc = nlohmann::json::parse(in, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.is_object() || !doc.contains("entries") ||
      !doc["entries"].is_object()) {
    return {{"entries", nlohmann::json::object()}};
  }
  return doc;
}

void write_file_atomically(const fs::path& target, std::string_view content) {
  const auto tmp = target.parent_path() / ("." + target.filename().string() + ".tmp-" + unique_suffix());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw IoError("short write to " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot publish " + target.string() + ": " + ec.message());
  }
}

std::optional<CacheEntry> entry_from_json(const fs::path& cache_dir, const nlohmann::json& j,
                                          std::string_view model_id) {
  if (!j.is_object()) return std::nullopt;
  CacheEntry e;
  e.model_id = std::string(model_id);
  e.url = j.value("url", "");
  e.local_path = cache_dir / j.value("local_path", "");
  e.content_digest = j.value("content_digest", "");
  e.fetched_at = j.value("fetched_at", "");
  return e;
}

struct HttpResponse {
  long status = 0;
  std::string body;
};

size_t collect(char* data, size_t size, size_t nmemb, void* user) {
  static_cast<std::string*>(user)->append(data, size * nmemb);
  return size * nmemb;
}

HttpResponse http_get(const std::string& url, long timeout_seconds) {
  static std::once_flag init;
  std::call_once(init, [] { curl_global_init(CURL_GLOBAL_DEFAULT); });

  std::unique_ptr<CURL, decltype(&curl_easy_cleanup)> curl(curl_easy_init(), curl_easy_cleanup);
  if (!curl) throw NetworkError("cannot initialize HTTP client");
  HttpResponse response;
  curl_easy_setopt(curl.get(), CURLOPT_URL, url.c_str());
  curl_easy_setopt(curl.get(), CURLOPT_FOLLOWLOCATION, 1L);
  curl_easy_setopt(curl.get(), CURLOPT_MAXREDIRS, 10L);
  curl_easy_setopt(curl.get(), CURLOPT_NOSIGNAL, 1L);
  curl_easy_setopt(curl.get(), CURLOPT_CONNECTTIMEOUT, 30L);
  curl_easy_setopt(curl.get(), CURLOPT_TIMEOUT, timeout_seconds);
  curl_easy_setopt(curl.get(), CURLOPT_USERAGENT, "tokstat/1.0");
  curl_easy_setopt(curl.get(), CURLOPT_WRITEFUNCTION, collect);
  curl_easy_setopt(curl.get(), CURLOPT_WRITEDATA, &response.body);

  const CURLcode rc = curl_easy_perform(curl.get());
  switch (rc) {
    case CURLE_OK:
      break;
    case CURLE_COULDNT_RESOLVE_HOST:
    case CURLE_COULDNT_RESOLVE_PROXY:
    case CURLE_COULDNT_CONNECT:
    case CURLE_OPERATION_TIMEDOUT:
      throw UnavailableError("cannot reach " + url + ": " + curl_easy_strerror(rc));
    default:
      throw NetworkError("download of " + url + " failed: " + curl_easy_strerror(rc));
  }
  curl_easy_getinfo(curl.get(), CURLINFO_RESPONSE_CODE, &response.status);
  return response;
}

}  // namespace

fs::path default_cache_dir() {
  if (auto v = getenv_string(kCacheDirEnv); !v.empty()) return v;
  if (auto v = getenv_string("XDG_CACHE_HOME"); !v.empty()) return fs::path(v) / "tokstat";
  if (auto v = getenv_string("HOME"); !v.empty()) return fs::path(v) / ".cache" / "tokstat";
  return fs::temp_directory_path() / "tokstat-cache";
}

std::string default_hub_url() {
  if (auto v = getenv_string(kHubUrlEnv); !v.empty()) return v;
  return std::string(kDefaultHubUrl);
}

std::string resolve_url(std::string_view base_url, std::string_view model_id,
                        std::string_view filename) {
  std::string url(base_url);
  if (url.find("{model_id}") != std::string::npos) {
    replace_all(url, "{model_id}", model_id);
    replace_all(url, "{filename}", filename);
    return url;
  }
  while (!url.empty() && url.back() == '/') url.pop_back();
  return url + "/" + std::string(model_id) + "/" + std::string(filename);
}

std::string sha256_hex(std::string_view data) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int length = 0;
  if (EVP_Digest(data.data(), data.size(), digest.data(), &length, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256 computation failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(length * 2);
  for (unsigned int i = 0; i < length; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xF]);
  }
  return out;
}

std::string sha256_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return sha256_hex(buf.str());
}

std::optional<CacheEntry> lookup_cache(const fs::path& cache_dir, std::string_view model_id,
                                       std::string_view filename) {
  auto index = read_index(cache_dir);
  const auto key = index_key(model_id, filename);
  if (!index["entries"].contains(key)) return std::nullopt;
  auto entry = entry_from_json(cache_dir, index["entries"][key], model_id);
  if (!entry || entry->content_digest.empty()) return std::nullopt;
  std::error_code ec;
  if (!fs::is_regular_file(entry->local_path, ec)) return std::nullopt;
  if (sha256_file(entry->local_path) != entry->content_digest) return std::nullopt;
  return entry;
}

FetchResult fetch_vocab(std::string_view model_id, std::string_view base_url,
                        const fs::path& cache_dir, const FetchOptions& options) {
  validate_model_id(model_id);
  if (auto hit = lookup_cache(cache_dir, model_id, options.filename)) {
    if (!options.expected_sha256 || *options.expected_sha256 == hit->content_digest) {
      return {hit->local_path, true};
    }
  }

  const auto url = resolve_url(base_url, model_id, options.filename);
  const auto response = http_get(url, options.timeout_seconds);
  if (response.status == 404 || response.status == 401) {
    throw ModelNotFoundError("model '" + std::string(model_id) + "' not found at " + url +
                             " (HTTP " + std::to_string(response.status) + ")");
  }
  if (response.status < 200 || response.status >= 300) {
    throw NetworkError("GET " + url + " returned HTTP " + std::to_string(response.status));
  }
  const auto digest = sha256_hex(response.body);
  if (options.expected_sha256 && *options.expected_sha256 != digest) {
    throw IntegrityError("digest mismatch for " + url + ": expected " + *options.expected_sha256 +
                         ", got " + digest);
  }

  std::error_code ec;
  const auto dir = entry_dir(cache_dir, model_id);
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create cache directory " + dir.string() + ": " + ec.message());
  const auto target = dir / options.filename;

  CacheLock lock(cache_dir);
  write_file_atomically(target, response.body);
  if (sha256_file(target) != digest) {
    throw IntegrityError("cached copy of " + url + " does not match the downloaded content");
  }
  auto index = read_index(cache_dir);
  index["entries"][index_key(model_id, options.filename)] = {
      {"content_digest", digest},
      {"fetched_at", utc_timestamp()},
      {"local_path", fs::relative(target, cache_dir).generic_string()},
      {"url", url},
  };
  write_file_atomically(cache_dir / kIndexFile, index.dump(2) + "\n");
  return {target, false};
}

}  // namespace tokstat
