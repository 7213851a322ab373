#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "kge/grid.hpp"

namespace kge {

// FNV-1a over the canonical key string; stable across runs and builds.
inline std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

inline std::string hash_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

// Binary snapshot cache for reference trajectories. Layout (all
// little-endian, doubles raw IEEE-754):
//   magic "KGEREF01" | u32 key length | key bytes | f64 residual
//   | f64 a | f64 b | u32 modes | u32 snapshot count
//   | per snapshot: f64 t, then for l = -M/2..M/2-1:
//       Re u_l, Im u_l, Re v_l, Im v_l
struct CachedSnapshot {
  double t = 0.0;
  SpectralField u;
  SpectralField v;
};

struct CachedReference {
  std::string key;
  double residual = 0.0;  // H1 self-convergence residual at the final time
  std::vector<CachedSnapshot> snaps;
};

namespace detail {

constexpr char kCacheMagic[9] = "KGEREF01";

template <typename T>
void put(std::ostream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof v);
}
template <typename T>
bool get(std::istream& is, T& v) {
  is.read(reinterpret_cast<char*>(&v), sizeof v);
  return static_cast<bool>(is);
}

}  // namespace detail

inline std::filesystem::path cache_path(const std::filesystem::path& dir, const std::string& key) {
  return dir / (hash_hex(fnv1a64(key)) + ".kgeref");
}

// Atomic publication: write to a temp sibling, then rename. Concurrent
// writers of the same key produce identical bytes, so the race is benign.
inline void store_reference(const std::filesystem::path& dir, const CachedReference& ref) {
  std::filesystem::create_directories(dir);
  const auto final_path = cache_path(dir, ref.key);
  const auto tmp_path = final_path.string() + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream os(tmp_path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cache: cannot open " + tmp_path + " for writing");
    os.write(detail::kCacheMagic, 8);
    const std::uint32_t klen = static_cast<std::uint32_t>(ref.key.size());
    detail::put(os, klen);
    os.write(ref.key.data(), klen);
    detail::put(os, ref.residual);
    const GridSpec& g = *ref.snaps.front().u.grid;
    detail::put(os, g.a);
    detail::put(os, g.b);
    const std::uint32_t modes = static_cast<std::uint32_t>(g.modes);
    detail::put(os, modes);
    const std::uint32_t nsnap = static_cast<std::uint32_t>(ref.snaps.size());
    detail::put(os, nsnap);
    for (const auto& s : ref.snaps) {
      detail::put(os, s.t);
      for (int k = 0; k < g.modes; ++k) {
        detail::put(os, s.u.coeffs[k].real());
        detail::put(os, s.u.coeffs[k].imag());
        detail::put(os, s.v.coeffs[k].real());
        detail::put(os, s.v.coeffs[k].imag());
      }
    }
    if (!os) throw std::runtime_error("cache: short write to " + tmp_path);
  }
  std::filesystem::rename(tmp_path, final_path);
}

// nullptr on miss or key mismatch (hash collision / stale file).
inline bool load_reference(const std::filesystem::path& dir, const std::string& key,
                           CachedReference& out) {
  const auto path = cache_path(dir, key);
  std::ifstream is(path, std::ios::binary);
  if (!is) return false;
  char magic[8];
  is.read(magic, 8);
  if (!is || std::string(magic, 8) != std::string(detail::kCacheMagic, 8)) return false;
  std::uint32_t klen = 0;
  if (!detail::get(is, klen) || klen > (1u << 20)) return false;
  std::string stored(klen, '\0');
  is.read(stored.data(), klen);
  if (!is || stored != key) return false;
  double residual = 0.0, a = 0.0, b = 0.0;
  std::uint32_t modes = 0, nsnap = 0;
  if (!detail::get(is, residual) || !detail::get(is, a) || !detail::get(is, b) ||
      !detail::get(is, modes) || !detail::get(is, nsnap))
    return false;
  if (modes < 4 || modes % 2 != 0 || nsnap == 0) return false;
  GridPtr grid = make_grid(a, b, static_cast<int>(modes));
  out.key = key;
  out.residual = residual;
  out.snaps.clear();
  out.snaps.reserve(nsnap);
  for (std::uint32_t i = 0; i < nsnap; ++i) {
    CachedSnapshot s;
    if (!detail::get(is, s.t)) return false;
    s.u = SpectralField(grid);
    s.v = SpectralField(grid);
    for (std::uint32_t k = 0; k < modes; ++k) {
      double ur, ui, vr, vi;
      if (!detail::get(is, ur) || !detail::get(is, ui) || !detail::get(is, vr) ||
          !detail::get(is, vi))
        return false;
      s.u.coeffs[k] = {ur, ui};
      s.v.coeffs[k] = {vr, vi};
    }
    out.snaps.push_back(std::move(s));
  }
  return true;
}

}  // namespace kge
