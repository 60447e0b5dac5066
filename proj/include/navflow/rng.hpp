#pragma once

#include <cstdint>

namespace navflow {

// Counter-based substream construction: stream(master_seed, index) yields
// independent reproducible generators regardless of scheduling. The generator
// is xoshiro256** seeded through splitmix64; uniforms and Poisson draws are
// produced here rather than through std distributions so that identical seeds
// give bit-identical samples on every platform.
class RngStream {
  public:
    RngStream(std::uint64_t master_seed, std::uint64_t stream_index);

    std::uint64_t next_u64();
    double uniform01();                      // in [0,1)
    double uniform(double lo, double hi);
    double exponential();                    // rate 1
    long poisson(double mean);

  private:
    std::uint64_t s_[4];
};

std::uint64_t splitmix64_next(std::uint64_t& state);

}  // namespace navflow
