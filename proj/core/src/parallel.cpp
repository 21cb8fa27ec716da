#include "helmadr/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <string>

#if defined(HELMADR_HAVE_OPENMP)
#include <omp.h>
#endif

namespace helmadr
{

namespace
{

std::atomic<bool> g_sequential{false};

int env_thread_cap()
{
  const char *env = std::getenv("HELMADR_THREADS");
  if (!env || !*env)
  {
    return 0;
  }
  try
  {
    return std::max(1, std::stoi(env));
  }
  catch (...)
  {
    return 0;
  }
}

}  // namespace

int kernel_threads()
{
  if (g_sequential.load())
  {
    return 1;
  }
#if defined(HELMADR_HAVE_OPENMP)
  static const int cap = env_thread_cap();
  const int max = omp_get_max_threads();
  return cap > 0 ? std::min(cap, max) : max;
#else
  return 1;
#endif
}

void set_sequential(bool s) { g_sequential.store(s); }
bool sequential() { return g_sequential.load(); }

}  // namespace helmadr
