#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace ztorch {

/// Seeded random source. A run owns one root seed; independent streams (one per
/// VNF, one for the learner, ...) are derived from (seed, stream) so the result
/// never depends on thread count or call interleaving across streams.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 1, std::uint64_t stream = 0);

  double uniform() { return uniform_(engine_); }  // [0,1)
  double normal() { return normal_(engine_); }    // N(0,1)
  std::size_t uniform_index(std::size_t n);

  std::mt19937_64& engine() noexcept { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

// Stream tags used by the library.
namespace stream {
inline constexpr std::uint64_t population = 0x9000'0000ULL;
inline constexpr std::uint64_t learner = 0xA000'0000ULL;
inline constexpr std::uint64_t vnf_base = 0x1'0000'0000ULL;  // + vnf index
}  // namespace stream

}  // namespace ztorch
