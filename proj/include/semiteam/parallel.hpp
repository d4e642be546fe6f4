#pragma once

#include <cstdlib>
#include <vector>

#ifdef SEMITEAM_HAVE_OPENMP
#include <omp.h>
#endif

namespace semiteam {

/// Execution mode for the scan kernels. Every kernel ships a serial
/// reference path and an OpenMP path; Auto picks OpenMP when compiled in
/// unless SEMITEAM_SERIAL=1 is set. Results are schedule-independent: the
/// merges are associative and commutative and tie sets are sorted afterward.
enum class ExecMode { Serial, OpenMP, Auto };

ExecMode resolve_exec_mode(ExecMode m);

/// Map-reduce over the index space [0, n). Fn folds one index into an
/// accumulator; Merge combines two accumulators.
template <class Acc, class Fn, class Merge>
Acc index_reduce(std::size_t n, Acc init, Fn&& fn, Merge&& merge, ExecMode mode = ExecMode::Auto) {
  mode = resolve_exec_mode(mode);
#ifdef SEMITEAM_HAVE_OPENMP
  if (mode == ExecMode::OpenMP && n > 1) {
    int threads = omp_get_max_threads();
    std::vector<Acc> partial(static_cast<std::size_t>(threads), init);
#pragma omp parallel num_threads(threads)
    {
      int tid = omp_get_thread_num();
      Acc& acc = partial[static_cast<std::size_t>(tid)];
#pragma omp for schedule(dynamic, 16)
      for (long long i = 0; i < static_cast<long long>(n); ++i)
        fn(static_cast<std::size_t>(i), acc);
    }
    Acc out = std::move(partial[0]);
    for (std::size_t t = 1; t < partial.size(); ++t) merge(out, partial[t]);
    return out;
  }
#endif
  Acc out = std::move(init);
  for (std::size_t i = 0; i < n; ++i) fn(i, out);
  return out;
}

} // namespace semiteam
