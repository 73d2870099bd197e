#include "sqrtsum/parallel.hpp"

#include <cstdlib>

namespace sqrtsum {

int default_parallelism() {
  if (const char* env = std::getenv("SQRTSUM_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) {
      return v;
    }
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

}  // namespace sqrtsum
