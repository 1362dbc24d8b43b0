#include "nmlab/rng.hpp"

#include <cmath>
#include <numbers>

namespace nmlab
{

namespace
{

constexpr std::uint32_t kM0 = 0xD2511F53u;
constexpr std::uint32_t kM1 = 0xCD9E8D57u;
constexpr std::uint32_t kW0 = 0x9E3779B9u;
constexpr std::uint32_t kW1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo)
{
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t x)
{
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::array<std::uint32_t, 4> Rng::philox(std::array<std::uint32_t, 4> ctr,
                                         std::array<std::uint32_t, 2> key)
{
  for (int round = 0; round < 10; ++round)
  {
    if (round > 0)
    {
      key[0] += kW0;
      key[1] += kW1;
    }
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kM0, ctr[0], hi0, lo0);
    mulhilo(kM1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
  return ctr;
}

Rng::Rng(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {}

Rng Rng::split(std::uint64_t child) const
{
  return Rng(seed_, splitmix64(stream_ * 0x9E3779B97F4A7C15ull + child + 1));
}

void Rng::refill()
{
  const std::array<std::uint32_t, 4> ctr = {
    static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
    static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)};
  const std::array<std::uint32_t, 2> key = {static_cast<std::uint32_t>(seed_),
                                            static_cast<std::uint32_t>(seed_ >> 32)};
  buf_ = philox(ctr, key);
  ++block_;
  pos_ = 0;
}

std::uint32_t Rng::next_u32()
{
  if (pos_ >= 4)
  {
    refill();
  }
  return buf_[pos_++];
}

double Rng::uniform()
{
  const double a = static_cast<double>(next_u32() >> 5);
  const double b = static_cast<double>(next_u32() >> 6);
  return (a * 67108864.0 + b) * (1.0 / 9007199254740992.0);
}

int Rng::uniform_int(int lo, int hi)
{
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<int>(static_cast<std::uint64_t>(uniform() * static_cast<double>(span)) %
                               span);
}

double Rng::normal()
{
  if (has_spare_)
  {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0)
  {
    u1 = uniform();
  }
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

Vec Rng::normal_vec(Eigen::Index n)
{
  Vec v(n);
  for (Eigen::Index i = 0; i < n; ++i)
  {
    v(i) = normal();
  }
  return v;
}

Vec Rng::unit_vec(Eigen::Index n)
{
  Vec v = normal_vec(n);
  double norm = v.norm();
  while (norm < 1e-12)
  {
    v = normal_vec(n);
    norm = v.norm();
  }
  return v / norm;
}

Vec Rng::in_ball(Eigen::Index n, double radius)
{
  const double scale = radius * std::pow(uniform(), 1.0 / static_cast<double>(n));
  return scale * unit_vec(n);
}

Vec Rng::uniform_vec(Eigen::Index n, double lo, double hi)
{
  Vec v(n);
  for (Eigen::Index i = 0; i < n; ++i)
  {
    v(i) = uniform(lo, hi);
  }
  return v;
}

}  // namespace nmlab
