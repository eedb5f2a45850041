#include "hacdyn/rng.hpp"

#include <cmath>
#include <numbers>

namespace hacdyn {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

// Open interval (0, 1) from 53 bits.
inline double to_unit(std::uint32_t hi, std::uint32_t lo) {
  const std::uint64_t bits = ((static_cast<std::uint64_t>(hi) << 32) | lo) >> 11;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

}  // namespace

Philox4x32::Counter Philox4x32::generate(Counter ctr, Key key) {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, ctr[0], hi0, lo0);
    mulhilo(kMul1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
  return ctr;
}

std::array<double, 2> ShockStream::normal_pair(std::uint64_t block) const {
  const auto rep = key_.replication;
  const Philox4x32::Counter ctr = {
      static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32),
      static_cast<std::uint32_t>(rep),
      static_cast<std::uint32_t>((rep >> 32) & 0x00FFFFFFu) |
          (static_cast<std::uint32_t>(role_) << 24)};
  const Philox4x32::Key k = {static_cast<std::uint32_t>(key_.seed),
                             static_cast<std::uint32_t>(key_.seed >> 32)};
  const auto out = Philox4x32::generate(ctr, k);

  // Box-Muller on two 53-bit uniforms.
  const double u1 = to_unit(out[0], out[1]);
  const double u2 = to_unit(out[2], out[3]);
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  return {radius * std::cos(angle), radius * std::sin(angle)};
}

double ShockStream::normal(std::uint64_t index) const {
  return normal_pair(index / 2)[index % 2];
}

void ShockStream::fill(std::span<double> out, std::uint64_t first) const {
  std::size_t j = 0;
  std::uint64_t index = first;
  if (index % 2 == 1 && j < out.size()) {
    out[j++] = normal_pair(index / 2)[1];
    ++index;
  }
  while (j + 1 < out.size()) {
    const auto pair = normal_pair(index / 2);
    out[j++] = pair[0];
    out[j++] = pair[1];
    index += 2;
  }
  if (j < out.size()) out[j] = normal_pair(index / 2)[0];
}

}  // namespace hacdyn
