#include "ugen/rng.hpp"

#include <cmath>

namespace ugen {
namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// splitmix64; the reference mixing constants.
std::uint64_t splitmix64(std::uint64_t& s) {
  s += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = s;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

Rng::Rng(std::uint64_t seed) : state_(seed ^ 0x5851f42d4c957f2dULL) {
  // Warm up so that small seeds decorrelate.
  (void)splitmix64(state_);
  (void)splitmix64(state_);
}

std::uint64_t Rng::next_u64() { return splitmix64(state_); }

double Rng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  double u2 = uniform();
  while (u1 <= 1e-300) u1 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  spare_ = r * std::sin(kTwoPi * u2);
  has_spare_ = true;
  return r * std::cos(kTwoPi * u2);
}

Cx Rng::unit_complex() {
  const double theta = kTwoPi * uniform();
  return Cx(std::cos(theta), std::sin(theta));
}

Cx Rng::gauss_complex() {
  const double re = normal();
  const double im = normal();
  return Cx(re, im);
}

std::vector<Cx> Rng::unit_sphere(int n) {
  std::vector<Cx> v(n);
  double norm2 = 0.0;
  for (int i = 0; i < n; ++i) {
    v[i] = gauss_complex();
    norm2 += abs2(v[i]);
  }
  const double inv = 1.0 / std::sqrt(norm2);
  for (auto& z : v) z *= inv;
  return v;
}

std::uint64_t Rng::child_seed(std::uint64_t salt) const {
  std::uint64_t s = state_ ^ (salt * 0x9e3779b97f4a7c15ULL);
  return splitmix64(s);
}

}  // namespace ugen
