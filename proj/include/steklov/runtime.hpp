#pragma once

#include <functional>

namespace steklov {

inline constexpr const char* kVersion = "0.1.0";

/// Worker cap: STEKLOV_THREADS if set (≥1), else hardware concurrency,
/// clamped to [1, 16].
int thread_budget();

/// Static-partition parallel loop over [0, n); deterministic as long as
/// iterations write disjoint outputs. Runs inline when the budget is 1.
void parallel_for(int n, const std::function<void(int)>& body);

}  // namespace steklov
