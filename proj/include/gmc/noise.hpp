#pragma once

#include <cstdint>

namespace gmc::rng {

// Counter-based generator: every draw is a pure function of (key, counter),
// so any sample of any stream can be reproduced independently of
// evaluation order.
//
//   mix64(z):   SplitMix64 finalizer
//                 z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//                 z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//                 z =  z ^ (z >> 31)
//   bits(key, c)     = mix64(key + (c + 1) * 0x9E3779B97F4A7C15)
//   uniform(key, c)  = ((bits >> 11) + 1) * 2^-53          in (0, 1]
//   gaussian(key, k) = Box-Muller on the pair p = k / 2:
//                        r = sqrt(-2 ln uniform(key, 2p))
//                        t = 2 pi uniform(key, 2p + 1)
//                        k even -> r cos t, k odd -> r sin t
//   stream_key(seed, s) = mix64(seed ^ mix64(s + 0x632BE59BD9B4E019))

std::uint64_t mix64(std::uint64_t z);
std::uint64_t stream_key(std::uint64_t seed, std::uint64_t stream);
double uniform(std::uint64_t key, std::uint64_t counter);
double gaussian(std::uint64_t key, std::uint64_t index);

}  // namespace gmc::rng
