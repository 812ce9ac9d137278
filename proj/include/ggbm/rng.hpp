#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace ggbm {

/// Identifies one random stream: the master seed of a run plus the index of
/// the stream inside it (Monte Carlo path i uses stream_index i).
struct SeedSpec {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_index = 0;

  SeedSpec with_stream(std::uint64_t index) const { return {master_seed, index}; }
  friend bool operator==(const SeedSpec&, const SeedSpec&) = default;
};

/// Philox4x32-10 block cipher used as a counter-based generator.
/// Key = master seed, counter words 2..3 = stream index, words 0..1 = block
/// number. Streams with different indices never share a counter value, and
/// the output depends only on (seed, index, draw number), not on the
/// platform or on which thread runs the stream.
class Philox4x32 {
 public:
  using Block = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Block encrypt(Block counter, Key key);
};

/// Sequential stream of random numbers for one SeedSpec. Satisfies
/// UniformRandomBitGenerator with 32-bit output. Not thread-safe; confine each
/// stream to one worker.
class RngStream {
 public:
  using result_type = std::uint32_t;

  explicit RngStream(SeedSpec seed);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();
  std::uint64_t next_u64();

  /// Uniform on the open interval (0, 1) with 53 random bits.
  double uniform();
  /// Standard normal by the Box-Muller transform (pairs are cached).
  double normal();
  /// Standard exponential.
  double exponential();

  const SeedSpec& seed() const { return seed_; }

 private:
  void refill();

  SeedSpec seed_;
  Philox4x32::Key key_;
  std::uint64_t block_ = 0;
  Philox4x32::Block buffer_{};
  int used_ = 4;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace ggbm
