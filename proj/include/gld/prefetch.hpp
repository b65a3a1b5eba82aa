#pragma once

// Read prefetch hint. Compiled out unless GLD_ENABLE_PREFETCH is defined;
// search correctness never depends on it.

namespace gld {

inline void prefetch(const void* p) noexcept {
#if defined(GLD_ENABLE_PREFETCH) && (defined(__GNUC__) || defined(__clang__))
    __builtin_prefetch(p, 0, 0);
#else
    (void)p;
#endif
}

}  // namespace gld
