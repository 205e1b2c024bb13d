#include "gibbs_tv/rng.hpp"

#include "gibbs_tv/normal.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <stdexcept>
#include <string>

namespace gibbs_tv {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

// SplitMix64 / MurmurHash3 style finalizer.
constexpr std::uint64_t fmix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Increment must be odd and reasonably dense in bits.
constexpr std::uint64_t make_increment(std::uint64_t h) {
  std::uint64_t g = fmix64(h ^ 0x5851f42d4c957f2dULL) | 1ULL;
  const auto flips = std::popcount(g ^ (g >> 1));
  if (flips < 24) {
    g ^= 0xaaaaaaaaaaaaaaaaULL;
  }
  return g;
}

} // namespace

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t word) {
  return fmix64(fmix64(seed + kGolden) ^ (word + 0x632be59bd9b4e019ULL));
}

SeededStream::SeededStream(std::uint64_t master_seed, StreamLabel label) {
  std::uint64_t h = mix_seed(master_seed, static_cast<std::uint64_t>(label.purpose));
  h = mix_seed(h, label.replica);
  h = mix_seed(h, label.role);
  key_ = h;
  increment_ = make_increment(h);
}

SeededStream::result_type SeededStream::next() {
  ++counter_;
  return fmix64(key_ + counter_ * increment_);
}

double SeededStream::uniform_open() {
  return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
}

std::size_t SeededStream::uniform_index(std::size_t n) {
  if (n == 0) {
    throw std::invalid_argument("uniform_index: empty range");
  }
  const auto i = static_cast<std::size_t>(uniform_open() * static_cast<double>(n));
  return std::min(i, n - 1);
}

double SeededStream::standard_normal() { return normal_quantile(uniform_open()); }

std::uint64_t parse_seed(std::string_view text) {
  int base = 10;
  if (text.starts_with("0x") || text.starts_with("0X")) {
    text.remove_prefix(2);
    base = 16;
  }
  std::uint64_t value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value, base);
  if (ec != std::errc{} || ptr != end || text.empty()) {
    throw std::invalid_argument("invalid seed: '" + std::string(text) + "'");
  }
  return value;
}

} // namespace gibbs_tv
