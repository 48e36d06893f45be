#include "cqmorph/parallel.hpp"

#include <cstdlib>
#include <string>

namespace cqmorph {

std::size_t max_threads() {
  if (const char* env = std::getenv("CQMORPH_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
      // Malformed values fall through to the hardware default.
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

}  // namespace cqmorph
