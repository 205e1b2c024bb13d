#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <string_view>

namespace gibbs_tv {

/// What a random stream is used for. The numeric values enter the stream
/// key, so they must never be renumbered.
enum class StreamPurpose : std::uint32_t {
  Chain = 1,
  Degrade = 2,
  Contraction = 3,
  Certificate = 4,
  Collector = 5,
  Verify = 6,
  Coupling = 7,
  Test = 99,
};

struct StreamLabel {
  StreamPurpose purpose = StreamPurpose::Chain;
  std::uint64_t replica = 0;
  std::uint32_t role = 0;
};

/// Counter-based random stream.
///
/// The stream key and increment are derived by hashing (master seed, label),
/// and the k-th output is a 64-bit finalizer applied to key + k * increment.
/// Streams are therefore reproducible from their label alone, independent of
/// how many other streams exist or in what order replicas run.
class SeededStream {
public:
  using result_type = std::uint64_t;

  SeededStream(std::uint64_t master_seed, StreamLabel label);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() { return next(); }
  result_type next();

  /// Uniform on the open interval (0,1), 53-bit resolution.
  double uniform_open();

  /// Uniform on {0, ..., n-1} from a single uniform variate.
  std::size_t uniform_index(std::size_t n);

  /// Standard normal via inverse CDF (one variate per draw).
  double standard_normal();

  std::uint64_t counter() const { return counter_; }

private:
  std::uint64_t key_;
  std::uint64_t increment_;
  std::uint64_t counter_ = 0;
};

/// Stable 64-bit mix of a seed with extra words; used for stream derivation.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t word);

/// Parses a master seed from text (decimal or 0x-prefixed hex).
std::uint64_t parse_seed(std::string_view text);

} // namespace gibbs_tv
