#ifndef YULE_PARALLEL_HPP
#define YULE_PARALLEL_HPP

namespace yule {

// Number of worker threads for the OpenMP kernels. Honours the YULE_THREADS
// environment variable as a cap; returns 1 when built without OpenMP.
int max_threads();

}  // namespace yule

#endif  // YULE_PARALLEL_HPP
