#include "wdens/parallel.hpp"

#include <atomic>
#include <cstdlib>

namespace wdens {

namespace {

int initial_thread_count() {
  if (const char* env = std::getenv("WDENS_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

std::atomic<int>& thread_count_slot() {
  static std::atomic<int> count{initial_thread_count()};
  return count;
}

}  // namespace

int default_thread_count() { return thread_count_slot().load(); }

void set_default_thread_count(int n) {
  if (n > 0) thread_count_slot().store(n);
}

}  // namespace wdens
