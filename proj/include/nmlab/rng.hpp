#pragma once

#include "nmlab/core.hpp"

#include <array>
#include <cstdint>
#include <string_view>

namespace nmlab
{

/// Counter-based Philox4x32-10 generator (Salmon et al., Random123).
///
/// The 64-bit seed is the Philox key; the upper half of the 128-bit counter
/// carries a stream id and the lower half counts blocks. `split(i)` derives
/// child stream `mix(stream, i)` under the same key, so every work item of a
/// parallel kernel can own a stream that does not depend on the schedule.
class Rng
{
public:
  static constexpr std::string_view kAlgorithm = "philox4x32-10";

  explicit Rng(std::uint64_t seed = 0, std::uint64_t stream = 0);

  Rng split(std::uint64_t child) const;

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  std::uint32_t next_u32();
  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [lo, hi].
  int uniform_int(int lo, int hi);
  double normal();

  Vec normal_vec(Eigen::Index n);
  Vec unit_vec(Eigen::Index n);
  /// Uniform point in the Euclidean ball of the given radius.
  Vec in_ball(Eigen::Index n, double radius);
  Vec uniform_vec(Eigen::Index n, double lo, double hi);

  /// Raw Philox4x32-10 block function, exposed for known-answer tests.
  static std::array<std::uint32_t, 4> philox(std::array<std::uint32_t, 4> ctr,
                                             std::array<std::uint32_t, 2> key);

private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buf_{};
  int pos_ = 4;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace nmlab
