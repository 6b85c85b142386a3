#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>

namespace levy::rng {

// Counter-based generator (Philox4x32-10). Every (seed, stream, domain)
// triple addresses a disjoint slice of the counter space, so any number of
// streams can be drawn from in parallel without coordination and a stream's
// output depends only on its key, never on program order.
struct Philox4x32 {
  static std::array<std::uint32_t, 4> block(std::uint64_t key,
                                            std::uint64_t ctr_hi,
                                            std::uint64_t ctr_lo) {
    constexpr std::uint32_t kMul0 = 0xD2511F53u;
    constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
    std::uint32_t c0 = static_cast<std::uint32_t>(ctr_lo);
    std::uint32_t c1 = static_cast<std::uint32_t>(ctr_lo >> 32);
    std::uint32_t c2 = static_cast<std::uint32_t>(ctr_hi);
    std::uint32_t c3 = static_cast<std::uint32_t>(ctr_hi >> 32);
    std::uint32_t k0 = static_cast<std::uint32_t>(key);
    std::uint32_t k1 = static_cast<std::uint32_t>(key >> 32);
    for (int round = 0; round < 10; ++round) {
      std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * c0;
      std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * c2;
      std::uint32_t n0 = static_cast<std::uint32_t>(p1 >> 32) ^ c1 ^ k0;
      std::uint32_t n1 = static_cast<std::uint32_t>(p1);
      std::uint32_t n2 = static_cast<std::uint32_t>(p0 >> 32) ^ c3 ^ k1;
      std::uint32_t n3 = static_cast<std::uint32_t>(p0);
      c0 = n0;
      c1 = n1;
      c2 = n2;
      c3 = n3;
      k0 += kWeyl0;
      k1 += kWeyl1;
    }
    return {c0, c1, c2, c3};
  }
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Domains separate independent draw purposes that share one logical stream
// (e.g. a base path and the extra jumps layered on top of it).
enum class Domain : std::uint32_t { base = 0, tilt = 1, aux = 2 };

class Stream {
 public:
  Stream(std::uint64_t seed, std::uint64_t stream_index,
         Domain domain = Domain::base)
      : key_(splitmix64(seed)),
        ctr_hi_((stream_index << 2) | static_cast<std::uint64_t>(domain)) {}

  std::uint64_t next_u64() {
    if (pos_ >= 4) {
      buf_ = Philox4x32::block(key_, ctr_hi_, block_++);
      pos_ = 0;
    }
    std::uint64_t lo = buf_[pos_];
    std::uint64_t hi = buf_[pos_ + 1];
    pos_ += 2;
    return (hi << 32) | lo;
  }

  // Strictly inside (0,1); safe under log().
  double uniform01() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform01();
    double u2 = uniform01();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  double exponential() { return -std::log(uniform01()); }

  // Exact for any mean: large means are split additively.
  std::uint64_t poisson(double mean) {
    std::uint64_t total = 0;
    while (mean > 30.0) {
      total += poisson_knuth(30.0);
      mean -= 30.0;
    }
    if (mean > 0.0) total += poisson_knuth(mean);
    return total;
  }

  // Chambers-Mallows-Stuck draw from the strictly stable law S_alpha(1, beta)
  // (Samorodnitsky-Taqqu parametrization; alpha = 2 degenerates to N(0, 2)).
  // alpha = 1 is supported only for beta = 0 (Cauchy).
  double stable(double alpha, double beta) {
    if (!(alpha > 0.0 && alpha <= 2.0))
      throw std::domain_error("stable: alpha outside (0,2]");
    double u = std::numbers::pi * (uniform01() - 0.5);
    double w = exponential();
    if (alpha == 1.0) {
      if (beta != 0.0)
        throw std::domain_error("stable: alpha=1 requires beta=0");
      return std::tan(u);
    }
    double zeta = beta * std::tan(std::numbers::pi * alpha / 2.0);
    double b = std::atan(zeta) / alpha;
    double s = std::pow(1.0 + zeta * zeta, 1.0 / (2.0 * alpha));
    return s * std::sin(alpha * (u + b)) /
           std::pow(std::cos(u), 1.0 / alpha) *
           std::pow(std::cos(u - alpha * (u + b)) / w, (1.0 - alpha) / alpha);
  }

 private:
  std::uint64_t poisson_knuth(double mean) {
    double limit = std::exp(-mean);
    std::uint64_t k = 0;
    double p = 1.0;
    do {
      ++k;
      p *= uniform01();
    } while (p > limit);
    return k - 1;
  }

  std::uint64_t key_;
  std::uint64_t ctr_hi_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buf_{};
  int pos_ = 4;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace levy::rng
