#pragma once

#include <cstdint>

#include "prokit/pro_core.hpp"
#include "prokit/rng.hpp"

namespace prokit {

struct GeneratorOptions {
    Index m = 2;
    Index terms = 3;
    std::uint64_t seed = 1;
    /// Rank of the linear term Q is drawn from [0, m] when negative,
    /// otherwise fixed to this value.
    Index linear_rank = -1;
    /// Allow one term at omega = 0 (with even-rank Q so the realization
    /// stays controllable).
    bool allow_zero_omega = false;
};

/// Random Foster form that passes validation by construction: each term is
/// built as Q_j = B_j^T B_j, R_j = B_j^T A_j B_j from a random B_j, which
/// satisfies the domination condition automatically.
FosterForm random_foster(const GeneratorOptions& opts);

}  // namespace prokit
