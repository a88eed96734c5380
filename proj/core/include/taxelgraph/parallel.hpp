#ifndef TAXELGRAPH_PARALLEL_HPP
#define TAXELGRAPH_PARALLEL_HPP

#include <functional>

namespace taxelgraph {

/// Worker count: hardware concurrency capped by the TAXEL_THREADS
/// environment variable (values < 1 mean 1).
int worker_threads();

/// Runs fn(i) for i in [0, n). Work is split across worker_threads()
/// threads; every index writes only its own slot, so results do not depend
/// on the thread count.
void parallel_for(int n, const std::function<void(int)>& fn);

} // namespace taxelgraph

#endif
