#include "ztorch/rng.hpp"

#include "ztorch/domain.hpp"

namespace ztorch {

Rng::Rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  engine_.seed(seq);
}

std::size_t Rng::uniform_index(std::size_t n) {
  if (n == 0) throw ContractViolation("uniform_index: empty range");
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
}

}  // namespace ztorch
