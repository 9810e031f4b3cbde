#include "aoilab/parallel.hpp"

#include <cstdlib>
#include <string>

namespace aoilab {

int env_thread_cap() {
    const char* raw = std::getenv("AOI_LAB_THREADS");
    if (raw == nullptr || *raw == '\0') return 0;
    try {
        const int v = std::stoi(raw);
        return v > 0 ? v : 1;
    } catch (...) {
        return 0;
    }
}

}  // namespace aoilab
