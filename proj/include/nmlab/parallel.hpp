#pragma once

#include <cstddef>
#include <exception>
#include <mutex>

#include <omp.h>

namespace nmlab
{

/// Kernels come in a serial reference form and an OpenMP form; both must
/// produce bit-identical results because every work item draws from its own
/// counter-based random stream and results are stored by index.
enum class Exec
{
  Serial,
  Parallel,
};

inline int max_threads() { return omp_get_max_threads(); }
inline void set_threads(int n)
{
  if (n > 0)
  {
    omp_set_num_threads(n);
  }
}

/// Runs f(i) for i in [0, n). Exceptions thrown by work items are rethrown on
/// the calling thread; with several failures the one with the lowest index wins
/// so the outcome does not depend on the schedule.
template <class F>
void parallel_for(Exec exec, std::size_t n, F&& f)
{
  if (exec == Exec::Serial || n < 2)
  {
    for (std::size_t i = 0; i < n; ++i)
    {
      f(i);
    }
    return;
  }
  std::exception_ptr first;
  std::size_t first_index = n;
  std::mutex mu;
  const long long count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 1)
  for (long long i = 0; i < count; ++i)
  {
    try
    {
      f(static_cast<std::size_t>(i));
    }
    catch (...)
    {
      std::lock_guard<std::mutex> lock(mu);
      if (static_cast<std::size_t>(i) < first_index)
      {
        first_index = static_cast<std::size_t>(i);
        first = std::current_exception();
      }
    }
  }
  if (first)
  {
    std::rethrow_exception(first);
  }
}

}  // namespace nmlab
