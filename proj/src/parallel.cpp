#include "crparallax/parallel.hpp"

#include <cstdlib>
#include <string>

namespace crparallax {

int default_workers()
{
    if (const char* env = std::getenv("CRPARALLAX_WORKERS")) {
        try {
            const int n = std::stoi(env);
            if (n >= 1) {
                return n;
            }
        } catch (const std::exception&) {
            // fall through to the hardware default
        }
    }
    return static_cast<int>(std::max(1U, std::thread::hardware_concurrency()));
}

} // namespace crparallax
