#include "flexkrylov/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace flexkrylov {

namespace {

constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t Splitmix64Rng::next_u64() {
  state_ += kGamma;
  return mix64(state_);
}

double Splitmix64Rng::uniform01() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Splitmix64Rng::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  // u1 in (0, 1] so the log is finite
  const double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  const double u2 = uniform01();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  have_spare_ = true;
  return radius * std::cos(angle);
}

Vector Splitmix64Rng::normal_vector(std::size_t n) {
  Vector v(n);
  for (double& x : v) x = normal();
  return v;
}

Splitmix64Rng Splitmix64Rng::fork(std::uint64_t stream) const {
  return Splitmix64Rng(mix64(state_ ^ ((stream + 1) * 0xD6E8FEB86659FD93ULL)));
}

std::vector<int> Splitmix64Rng::sample_without_replacement(int population, int count) {
  if (population < 1) throw std::invalid_argument("sample_without_replacement: empty population");
  if (count < 1 || count > population)
    throw std::invalid_argument("sample_without_replacement: count out of range");
  std::vector<int> pool(population);
  std::iota(pool.begin(), pool.end(), 0);
  // partial Fisher-Yates
  for (int i = 0; i < count; ++i) {
    const int j = i + static_cast<int>(next_u64() % static_cast<std::uint64_t>(population - i));
    std::swap(pool[i], pool[j]);
  }
  std::vector<int> out(pool.begin(), pool.begin() + count);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace flexkrylov
