#include "cuspfield/cache.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "cuspfield/error.hpp"

namespace cuspfield {

namespace fs = std::filesystem;

namespace {

class DirLock {
 public:
  DirLock(const fs::path& dir, bool exclusive) {
    fd_ = ::open((dir / ".lock").c_str(), O_RDWR | O_CREAT, 0644);
    if (fd_ < 0) fail(ErrorCode::Io, "cache: cannot open lock file in " + dir.string());
    if (::flock(fd_, exclusive ? LOCK_EX : LOCK_SH) != 0) {
      ::close(fd_);
      fail(ErrorCode::Io, "cache: cannot lock " + dir.string());
    }
  }
  ~DirLock() {
    ::flock(fd_, LOCK_UN);
    ::close(fd_);
  }
  DirLock(const DirLock&) = delete;
  DirLock& operator=(const DirLock&) = delete;

 private:
  int fd_ = -1;
};

fs::path ensure_dir() {
  fs::path d = cache_directory();
  std::error_code ec;
  fs::create_directories(d, ec);
  if (ec) fail(ErrorCode::Io, "cache: cannot create " + d.string() + ": " + ec.message());
  return d;
}

std::string hex64(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << v;
  return os.str();
}

// Header: magic, version, kind, key, checksum of the body.
std::string wrap(const std::string& kind, const std::string& key, const std::string& body) {
  std::ostringstream os;
  os << "cuspfield-cache " << kCacheFormatVersion << '\n'
     << "kind " << kind << '\n'
     << "key " << hex64(fnv1a64(key)) << '\n'
     << "checksum " << hex64(fnv1a64(body)) << '\n'
     << body;
  return os.str();
}

struct Unwrapped {
  bool valid = false;
  std::string kind, key, body;
};

Unwrapped unwrap(const std::string& text) {
  Unwrapped u;
  std::istringstream in(text);
  std::string magic, line;
  int version = 0;
  in >> magic >> version;
  if (magic != "cuspfield-cache" || version != kCacheFormatVersion) return u;
  std::string tag, checksum;
  in >> tag >> u.kind;
  if (tag != "kind") return u;
  in >> tag >> u.key;
  if (tag != "key") return u;
  in >> tag >> checksum;
  if (tag != "checksum") return u;
  std::getline(in, line);
  const auto pos = in.tellg();
  if (pos < 0) return u;
  u.body = text.substr(static_cast<std::size_t>(pos));
  u.valid = hex64(fnv1a64(u.body)) == checksum;
  return u;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) return {};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_atomic(const fs::path& p, const std::string& text) {
  const fs::path tmp = p.string() + ".tmp" + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << text;
    if (!out) fail(ErrorCode::Io, "cache: write failed for " + tmp.string());
  }
  fs::rename(tmp, p);
}

std::string basis_key(i64 n, int k, i64 prec) {
  return "basis|" + std::to_string(n) + "|" + std::to_string(k) + "|" + std::to_string(prec);
}

std::string serialize_basis(const EisBasis& b) {
  std::ostringstream os;
  os << "level " << b.level << " weight " << b.weight << " prec " << b.prec << " rank " << b.rank() << '\n';
  for (std::size_t i = 0; i < b.rank(); ++i) {
    os << "monomial " << b.monomials[i].to_string() << '\n';
    os << b.expansions[i].to_string();
  }
  return os.str();
}

EisBasis parse_basis(const std::string& body) {
  std::istringstream in(body);
  std::string w1, w2, w3, w4;
  EisBasis b;
  std::size_t rank = 0;
  in >> w1 >> b.level >> w2 >> b.weight >> w3 >> b.prec >> w4 >> rank;
  if (w1 != "level" || w2 != "weight" || w3 != "prec" || w4 != "rank") fail(ErrorCode::Parse, "cache: bad basis header");
  std::string line;
  std::getline(in, line);
  for (std::size_t i = 0; i < rank; ++i) {
    std::getline(in, line);
    if (line.rfind("monomial ", 0) != 0) fail(ErrorCode::Parse, "cache: expected monomial line");
    b.monomials.push_back(parse_monomial(b.level, line.substr(9)));
    std::string header;
    std::getline(in, header);
    i64 w = 0, p = 0, m = 0;
    if (std::sscanf(header.c_str(), "w=%ld prec=%ld M=%ld", &w, &p, &m) != 3) fail(ErrorCode::Parse, "cache: bad series header");
    std::string text = header + '\n';
    for (i64 j = 0; j < p; ++j) {
      std::getline(in, line);
      text += line + '\n';
    }
    b.expansions.push_back(QExpansion::parse(text));
  }
  return b;
}

double since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

fs::path cache_directory() {
  if (const char* d = std::getenv("CUSPFIELD_CACHE_DIR"); d && *d) return d;
  if (const char* h = std::getenv("HOME"); h && *h) return fs::path(h) / ".cache" / "cuspfield";
  return ".cuspfield-cache";
}

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

EisMonomial parse_monomial(i64 level, std::string_view text) {
  std::string s(text);
  std::vector<EisIndex> factors;
  if (s == "1") return EisMonomial(level, factors);
  std::istringstream in(s);
  std::string item;
  while (std::getline(in, item, '*')) {
    bool tilde = false;
    std::size_t pos = 0;
    if (item.rfind("Et", 0) == 0) tilde = true, pos = 2;
    else if (item.rfind("E", 0) == 0) pos = 1;
    else fail(ErrorCode::Parse, "monomial: bad factor '" + item + "'");
    int w = 0;
    long a = 0, b = 0, n = 0;
    if (std::sscanf(item.c_str() + pos, "%d(%ld,%ld)/%ld", &w, &a, &b, &n) != 4 || n != level)
      fail(ErrorCode::Parse, "monomial: bad factor '" + item + "'");
    factors.emplace_back(level, a, b, w, tilde);
  }
  return EisMonomial(level, factors);
}

std::string serialize_decomposition(const EisDecomposition& d) {
  std::ostringstream os;
  os << "level " << d.level << " weight " << d.weight << " terms " << d.terms.size() << '\n';
  for (const auto& t : d.terms) os << t.coeff.to_string() << ' ' << t.monomial.to_string() << '\n';
  return os.str();
}

EisDecomposition parse_decomposition(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string w1, w2, w3, line;
  EisDecomposition d;
  std::size_t count = 0;
  in >> w1 >> d.level >> w2 >> d.weight >> w3 >> count;
  if (w1 != "level" || w2 != "weight" || w3 != "terms") fail(ErrorCode::Parse, "decomposition: bad header");
  std::getline(in, line);
  for (std::size_t i = 0; i < count; ++i) {
    if (!std::getline(in, line)) fail(ErrorCode::Parse, "decomposition: truncated");
    const auto sp = line.find(' ');
    if (sp == std::string::npos) fail(ErrorCode::Parse, "decomposition: bad term");
    d.terms.push_back({parse_monomial(d.level, line.substr(sp + 1)), CycNumber::parse(line.substr(0, sp))});
  }
  return d;
}

EisBasis cached_basis(i64 n, int k, i64 prec, CacheOutcome* outcome) {
  const auto t0 = std::chrono::steady_clock::now();
  const fs::path dir = ensure_dir();
  const std::string key = basis_key(n, k, prec);
  const fs::path file = dir / ("basis-" + std::to_string(n) + "-" + std::to_string(k) + "-" + std::to_string(prec) + ".cache");
  {
    DirLock lock(dir, false);
    const Unwrapped u = unwrap(read_file(file));
    if (u.valid && u.kind == "basis" && u.key == hex64(fnv1a64(key))) {
      try {
        EisBasis b = parse_basis(u.body);
        if (outcome) *outcome = {true, since(t0)};
        return b;
      } catch (const Error&) {
        // fall through and rebuild
      }
    }
  }
  EisBasis b = build_basis(n, k, prec);
  {
    DirLock lock(dir, true);
    write_atomic(file, wrap("basis", key, serialize_basis(b)));
  }
  if (outcome) *outcome = {false, since(t0)};
  return b;
}

EisDecomposition cached_decomposition(const ModularFormInput& f, CacheOutcome* outcome) {
  const auto t0 = std::chrono::steady_clock::now();
  const fs::path dir = ensure_dir();
  const std::string key = "decomposition|" + f.cache_key();
  const fs::path file = dir / ("decomposition-" + hex64(fnv1a64(key)) + ".cache");
  {
    DirLock lock(dir, false);
    const Unwrapped u = unwrap(read_file(file));
    if (u.valid && u.kind == "decomposition" && u.key == hex64(fnv1a64(key))) {
      try {
        EisDecomposition d = parse_decomposition(u.body);
        if (outcome) *outcome = {true, since(t0)};
        return d;
      } catch (const Error&) {
      }
    }
  }
  EisDecomposition d = express_in_basis(f);
  {
    DirLock lock(dir, true);
    write_atomic(file, wrap("decomposition", key, serialize_decomposition(d)));
  }
  if (outcome) *outcome = {false, since(t0)};
  return d;
}

std::vector<CacheEntry> inspect_cache() {
  std::vector<CacheEntry> out;
  const fs::path dir = cache_directory();
  if (!fs::exists(dir)) return out;
  DirLock lock(dir, false);
  for (const auto& e : fs::directory_iterator(dir)) {
    if (!e.is_regular_file() || e.path().extension() != ".cache") continue;
    CacheEntry c;
    c.file = e.path().filename().string();
    c.bytes = e.file_size();
    const Unwrapped u = unwrap(read_file(e.path()));
    c.valid = u.valid;
    c.kind = u.kind.empty() ? "unknown" : u.kind;
    c.key = u.key;
    out.push_back(c);
  }
  std::sort(out.begin(), out.end(), [](const CacheEntry& a, const CacheEntry& b) { return a.file < b.file; });
  return out;
}

std::size_t purge_cache() {
  const fs::path dir = cache_directory();
  if (!fs::exists(dir)) return 0;
  DirLock lock(dir, true);
  std::size_t n = 0;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".cache") {
      fs::remove(e.path());
      ++n;
    }
  return n;
}

}  // namespace cuspfield
