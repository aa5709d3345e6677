#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace qipm {

using Engine = std::mt19937_64;

// splitmix64 finalizer; good enough to decorrelate named sub-streams.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Every random draw in the project flows from one root seed through a named
// sub-stream (plus an index for per-iteration / per-trial streams), so a rerun
// with the same root seed reproduces every byte of output.
inline std::uint64_t substream_seed(std::uint64_t root, std::string_view name,
                                    std::uint64_t index = 0) {
  std::uint64_t h = mix64(root);
  for (unsigned char c : name) h = mix64(h ^ c);
  return mix64(h ^ mix64(index));
}

inline Engine make_engine(std::uint64_t root, std::string_view name,
                          std::uint64_t index = 0) {
  return Engine(substream_seed(root, name, index));
}

}  // namespace qipm
