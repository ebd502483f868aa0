#pragma once

// On-disk cache of Eisenstein bases and form decompositions. Entries carry a
// format version and an FNV-1a checksum; invalid or stale entries are rebuilt.
// Writers hold an exclusive advisory lock on the directory.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "cuspfield/engine.hpp"

namespace cuspfield {

inline constexpr int kCacheFormatVersion = 1;

/// $CUSPFIELD_CACHE_DIR, else $HOME/.cache/cuspfield, else ./.cuspfield-cache.
std::filesystem::path cache_directory();

std::uint64_t fnv1a64(std::string_view data);

struct CacheOutcome {
  bool hit = false;
  double seconds = 0;  // load time on a hit, build time on a miss
};

EisBasis cached_basis(i64 n, int k, i64 prec, CacheOutcome* outcome = nullptr);
EisDecomposition cached_decomposition(const ModularFormInput& f, CacheOutcome* outcome = nullptr);

struct CacheEntry {
  std::string file;
  std::string kind;  // "basis", "decomposition" or "unknown"
  std::string key;
  bool valid = false;
  std::uintmax_t bytes = 0;
};
std::vector<CacheEntry> inspect_cache();
/// Removes every cache entry; returns the number of files removed.
std::size_t purge_cache();

/// Text form of a monomial ("1" or factors joined by '*') and its parser.
EisMonomial parse_monomial(i64 level, std::string_view text);

std::string serialize_decomposition(const EisDecomposition& d);
EisDecomposition parse_decomposition(std::string_view text);

}  // namespace cuspfield
