#include "conley/runtime.hpp"

#include <cstdlib>
#include <string>
#include <thread>

namespace conley {

int configured_thread_count() {
    if (const char* env = std::getenv("CONLEY_TRANSIT_THREADS")) {
        try {
            int n = std::stoi(env);
            if (n > 0) return n;
        } catch (...) {
        }
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

}  // namespace conley
