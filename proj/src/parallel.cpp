#include "swelab/parallel.hpp"

#include <cstdlib>
#include <string>

namespace swelab {

int default_workers() {
  if (const char* env = std::getenv("SWE_LAB_WORKERS")) {
    try {
      const int n = std::stoi(env);
      if (n >= 1) return n;
    } catch (...) {
    }
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc ? int(hc) : 1;
}

}  // namespace swelab
