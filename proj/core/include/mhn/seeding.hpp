#pragma once

#include <cstdint>

namespace mhn {

// SplitMix64 finalizer. Used to derive independent per-task seeds from a
// single user seed so that fan-out order never changes results.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace mhn
