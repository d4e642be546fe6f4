#include "semiteam/parallel.hpp"

namespace semiteam {

ExecMode resolve_exec_mode(ExecMode m) {
  if (m != ExecMode::Auto) return m;
  const char* env = std::getenv("SEMITEAM_SERIAL");
  if (env && env[0] == '1') return ExecMode::Serial;
#ifdef SEMITEAM_HAVE_OPENMP
  return ExecMode::OpenMP;
#else
  return ExecMode::Serial;
#endif
}

} // namespace semiteam
