#include "riplab/random_stream.hpp"

#include <algorithm>
#include <cmath>

#include "riplab/errors.hpp"

namespace riplab {

namespace detail {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline std::array<std::uint32_t, 4> philox_round(const std::array<std::uint32_t, 4>& c,
                                                 const std::array<std::uint32_t, 2>& k) {
  const std::uint64_t p0 = std::uint64_t(kPhiloxM0) * c[0];
  const std::uint64_t p1 = std::uint64_t(kPhiloxM1) * c[2];
  return {static_cast<std::uint32_t>(p1 >> 32) ^ c[1] ^ k[0],
          static_cast<std::uint32_t>(p1),
          static_cast<std::uint32_t>(p0 >> 32) ^ c[3] ^ k[1],
          static_cast<std::uint32_t>(p0)};
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(const std::array<std::uint32_t, 4>& counter,
                                        const std::array<std::uint32_t, 2>& key) {
  std::array<std::uint32_t, 4> c = counter;
  std::array<std::uint32_t, 2> k = key;
  c = philox_round(c, k);
  for (int round = 1; round < 10; ++round) {
    k[0] += kPhiloxW0;
    k[1] += kPhiloxW1;
    c = philox_round(c, k);
  }
  return c;
}

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace detail

RandomStream::RandomStream(std::uint64_t master_seed) {
  // Two independent SplitMix64 draws form the root 128-bit id.
  std::uint64_t x = master_seed;
  id_lo_ = detail::mix64(x += 0x9E3779B97F4A7C15ull);
  id_hi_ = detail::mix64(x += 0x9E3779B97F4A7C15ull);
}

RandomStream::RandomStream(std::uint64_t id_lo, std::uint64_t id_hi)
    : id_lo_(id_lo), id_hi_(id_hi) {}

RandomStream RandomStream::child(std::uint64_t index) const {
  const std::uint64_t t = detail::mix64(id_hi_ + 0x9E3779B97F4A7C15ull * (index + 1));
  const std::uint64_t lo = detail::mix64(id_lo_ ^ t);
  const std::uint64_t hi = detail::mix64(id_hi_ + t + index);
  return RandomStream(lo, hi);
}

RandomStream RandomStream::descend(const std::vector<std::uint64_t>& indices) const {
  RandomStream s = *this;
  for (std::uint64_t i : indices) s = s.child(i);
  return s;
}

std::array<std::uint32_t, 4> RandomStream::generate_block() {
  const std::array<std::uint32_t, 4> counter = {
      static_cast<std::uint32_t>(block_counter_),
      static_cast<std::uint32_t>(block_counter_ >> 32),
      static_cast<std::uint32_t>(id_hi_),
      static_cast<std::uint32_t>(id_hi_ >> 32)};
  const std::array<std::uint32_t, 2> key = {static_cast<std::uint32_t>(id_lo_),
                                            static_cast<std::uint32_t>(id_lo_ >> 32)};
  ++block_counter_;
  return detail::philox4x32(counter, key);
}

std::uint64_t RandomStream::next_u64() {
  if (buffered_ == 0) {
    const auto block = generate_block();
    buffer_[0] = (std::uint64_t(block[1]) << 32) | block[0];
    buffer_[1] = (std::uint64_t(block[3]) << 32) | block[2];
    buffered_ = 2;
  }
  return buffer_[--buffered_];
}

double RandomStream::next_unit() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RandomStream::next_unit_open() {
  return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
}

double RandomStream::next_symmetric() {
  return 2.0 * next_unit() - 1.0;
}

double RandomStream::next_gaussian() {
  if (have_gaussian_spare_) {
    have_gaussian_spare_ = false;
    return gaussian_spare_;
  }
  const double u1 = next_unit_open();
  const double u2 = next_unit();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 6.283185307179586476925287 * u2;
  gaussian_spare_ = r * std::sin(a);
  have_gaussian_spare_ = true;
  return r * std::cos(a);
}

double RandomStream::next_exponential() {
  return -std::log(next_unit_open());
}

double RandomStream::next_sign() {
  return (next_u64() & 1u) ? 1.0 : -1.0;
}

std::uint64_t RandomStream::next_below(std::uint64_t bound) {
  if (bound == 0) throw argument_error("next_below: bound must be positive");
  if (bound == 1) return 0;
  // Masked rejection keeps the draw unbiased.
  std::uint64_t mask = bound - 1;
  mask |= mask >> 1;
  mask |= mask >> 2;
  mask |= mask >> 4;
  mask |= mask >> 8;
  mask |= mask >> 16;
  mask |= mask >> 32;
  std::uint64_t x;
  do {
    x = next_u64() & mask;
  } while (x >= bound);
  return x;
}

std::vector<int> RandomStream::sample_subset(int n, int m) {
  if (n < 1 || m < 0 || m > n)
    throw argument_error("sample_subset: need 0 <= m <= n, n >= 1");
  std::vector<int> pool(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) pool[static_cast<std::size_t>(i)] = i;
  for (int i = 0; i < m; ++i) {
    const int j = i + static_cast<int>(next_below(static_cast<std::uint64_t>(n - i)));
    std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
  }
  std::vector<int> out(pool.begin(), pool.begin() + m);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace riplab
