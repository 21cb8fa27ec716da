#ifndef HELMADR_PARALLEL_HPP
#define HELMADR_PARALLEL_HPP

namespace helmadr
{

/// Threads used by the row-parallel kernels (spmv, residual). Defaults to the OpenMP
/// maximum capped by the HELMADR_THREADS environment variable; 1 without OpenMP.
int kernel_threads();

/// Forces single-threaded kernels; results are identical either way since each row is
/// accumulated in a fixed order, this only removes scheduling noise from timings.
void set_sequential(bool sequential);
bool sequential();

}  // namespace helmadr

#endif  // HELMADR_PARALLEL_HPP
