#include "stabenv/rng.hpp"

namespace stabenv {

// xorshift* variant; self-contained so draws are reproducible everywhere
std::uint64_t ParamRng::next_u64() {
    std::uint64_t x = s_;
    x ^= x >> 12;
    x ^= x << 25;
    x ^= x >> 27;
    s_ = x;
    return x * 0x2545f4914f6cdd1dull;
}

} // namespace stabenv
