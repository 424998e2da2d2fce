#pragma once

#include "critwalk/rng.hpp"

#include <omp.h>

#include <cstddef>

namespace critwalk {

// Serial reference for the replica loop; kept alongside the OpenMP version
// so the two can be compared in tests and benchmarks.
template <class F>
void run_replicas_serial(std::size_t count, std::uint64_t master_seed, F&& f) {
    for (std::size_t i = 0; i < count; ++i) {
        Rng rng = make_rng(replica_seed(master_seed, i));
        f(i, rng);
    }
}

// OpenMP replica loop. Each replica derives its generator from
// (master_seed, index) and writes only to its own slot, so the result is
// independent of scheduling and worker count.
template <class F>
void run_replicas(std::size_t count, std::uint64_t master_seed, int workers, F&& f) {
    if (workers <= 1) {
        run_replicas_serial(count, master_seed, f);
        return;
    }
#pragma omp parallel for schedule(dynamic) num_threads(workers)
    for (long long i = 0; i < (long long)(count); ++i) {
        Rng rng = make_rng(replica_seed(master_seed, std::size_t(i)));
        f(std::size_t(i), rng);
    }
}

} // namespace critwalk
