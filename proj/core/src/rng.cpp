#include "simcf/rng.hpp"

#include <cmath>
#include <numbers>

namespace simcf {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi,
                    std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

inline void philox_round(std::uint32_t ctr[4], const std::uint32_t key[2]) {
  std::uint32_t hi0, lo0, hi1, lo1;
  mulhilo(kPhiloxM0, ctr[0], hi0, lo0);
  mulhilo(kPhiloxM1, ctr[2], hi1, lo1);
  const std::uint32_t c1 = ctr[1], c3 = ctr[3];
  ctr[0] = hi1 ^ c1 ^ key[0];
  ctr[1] = lo1;
  ctr[2] = hi0 ^ c3 ^ key[1];
  ctr[3] = lo0;
}

}  // namespace

std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97f4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t trial,
                     std::string_view tag, std::uint64_t sub)
    : key_(seed),
      stream_id_(splitmix64(splitmix64(trial ^ fnv1a64(tag)) ^
                            splitmix64(sub + 0x5851F42D4C957F2Dull))) {}

RngStream::RngStream(std::uint64_t key, std::uint64_t stream_id, Raw)
    : key_(key), stream_id_(stream_id) {}

RngStream RngStream::child(std::uint64_t sub) const {
  return RngStream(
      key_, splitmix64(stream_id_ ^ splitmix64(sub + 0x2545F4914F6CDD1Dull)),
      Raw{});
}

std::array<std::uint32_t, 4> RngStream::philox4x32_10(
    const std::array<std::uint32_t, 4>& counter,
    const std::array<std::uint32_t, 2>& key_in) {
  std::uint32_t ctr[4] = {counter[0], counter[1], counter[2], counter[3]};
  std::uint32_t key[2] = {key_in[0], key_in[1]};
  for (int round = 0; round < 10; ++round) {
    philox_round(ctr, key);
    key[0] += kPhiloxW0;
    key[1] += kPhiloxW1;
  }
  return {ctr[0], ctr[1], ctr[2], ctr[3]};
}

void RngStream::refill() {
  const auto out = philox4x32_10(
      {static_cast<std::uint32_t>(block_),
       static_cast<std::uint32_t>(block_ >> 32),
       static_cast<std::uint32_t>(stream_id_),
       static_cast<std::uint32_t>(stream_id_ >> 32)},
      {static_cast<std::uint32_t>(key_),
       static_cast<std::uint32_t>(key_ >> 32)});
  out_[0] = out[0];
  out_[1] = out[1];
  out_[2] = out[2];
  out_[3] = out[3];
  out_pos_ = 0;
  ++block_;
}

std::uint64_t RngStream::next_u64() {
  if (out_pos_ > 2) refill();
  const std::uint64_t lo = out_[out_pos_];
  const std::uint64_t hi = out_[out_pos_ + 1];
  out_pos_ += 2;
  return lo | (hi << 32);
}

double RngStream::next_double() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::next_uniform(double lo, double hi) {
  return lo + (hi - lo) * next_double();
}

double RngStream::next_normal() {
  if (have_cached_normal_) {
    have_cached_normal_ = false;
    return cached_normal_;
  }
  const double u1 = 1.0 - next_double();  // in (0, 1], log is finite
  const double u2 = next_double();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  cached_normal_ = r * std::sin(theta);
  have_cached_normal_ = true;
  return r * std::cos(theta);
}

std::complex<double> RngStream::next_cnormal() {
  const double re = next_normal();
  const double im = next_normal();
  return {re / std::numbers::sqrt2, im / std::numbers::sqrt2};
}

}  // namespace simcf
