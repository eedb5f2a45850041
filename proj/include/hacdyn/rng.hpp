#pragma once

#include <array>
#include <cstdint>
#include <span>

#include "hacdyn/sample.hpp"

namespace hacdyn {

// Philox4x32-10 (Salmon et al., SC'11). A keyed bijection on 128-bit
// counters: output block i depends only on (key, counter i).
class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter generate(Counter ctr, Key key);
};

enum class StreamRole : std::uint32_t {
  XShocks = 0,
  UShocks = 1,
  Init = 2,
  FixedB = 3,
};

// Standard normal stream. Draw i is a pure function of
// (seed, replication, role, i); nothing is cached between calls.
class ShockStream {
 public:
  ShockStream(StreamKey key, StreamRole role) : key_(key), role_(role) {}

  double normal(std::uint64_t index) const;
  // Fills out[j] with draw (first + j).
  void fill(std::span<double> out, std::uint64_t first = 0) const;

  StreamKey key() const { return key_; }
  StreamRole role() const { return role_; }

 private:
  std::array<double, 2> normal_pair(std::uint64_t block) const;

  StreamKey key_;
  StreamRole role_;
};

}  // namespace hacdyn
