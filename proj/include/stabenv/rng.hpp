#pragma once

#include "stabenv/mp.hpp"

#include <cstdint>

namespace stabenv {

// Deterministic parameter-draw generator. Uses raw mt19937_64 output mapped
// to doubles explicitly so results are identical across standard libraries.
class ParamRng {
public:
    explicit ParamRng(std::uint64_t seed) : s_(seed ? seed : 0x9e3779b97f4a7c15ull) {
        for (int i = 0; i < 8; ++i) next_u64();
    }

    std::uint64_t next_u64();

    // uniform in [0,1)
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * (1.0 / 9007199254740992.0);
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // generic complex log: moderate real part, small imaginary part, bounded
    // away from the lattice of theta zeros for |q| <= 0.5
    Cplx log_draw(double re_scale = 0.9, double im_scale = 0.45) {
        double re = uniform(-re_scale, re_scale);
        double im = uniform(0.08, im_scale);  // strictly off the real axis
        if (next_u64() & 1) im = -im;
        return Cplx(re, im);
    }

private:
    std::uint64_t s_;
};

} // namespace stabenv
