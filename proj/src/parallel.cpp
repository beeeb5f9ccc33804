#include "locklab/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace locklab {
namespace {

int default_workers() {
  if (const char* env = std::getenv("LOCKLAB_THREADS")) {
    try {
      const int v = std::stoi(env);
      if (v > 0) return v;
    } catch (const std::exception&) {
      // ignored: fall through to the machine default
    }
  }
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

std::atomic<int>& workers() {
  static std::atomic<int> value{default_workers()};
  return value;
}

}  // namespace

int worker_count() { return workers().load(std::memory_order_relaxed); }

void set_worker_count(int count) { workers().store(count > 0 ? count : 1, std::memory_order_relaxed); }

}  // namespace locklab
