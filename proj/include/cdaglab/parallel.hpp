#ifndef CDAGLAB_PARALLEL_HPP
#define CDAGLAB_PARALLEL_HPP

#include <functional>

namespace cdaglab {

/// Thread cap: CDAGLAB_THREADS when set and positive, otherwise the hardware
/// concurrency. A value of 0 also means auto.
int default_threads();

/// Runs fn(0..n-1) across up to `threads` workers (0 = auto). Work items must
/// be independent; results should be written into pre-sized slots so the
/// outcome is order-independent.
void parallel_for(int n, int threads, const std::function<void(int)>& fn);

}  // namespace cdaglab

#endif
