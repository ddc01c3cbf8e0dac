#include "qmcf/parallel.hpp"

#include <thread>

namespace qmcf {

namespace {
int g_workers = 0;  // 0 = all hardware threads
}

int hardware_threads() {
    const unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : static_cast<int>(n);
}

int worker_threads() { return g_workers == 0 ? hardware_threads() : g_workers; }

void set_worker_threads(int n) { g_workers = n < 0 ? 0 : n; }

}  // namespace qmcf
