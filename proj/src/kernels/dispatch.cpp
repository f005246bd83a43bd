#include <atomic>
#include <cstring>
#include <stdexcept>
#include <string>

#include "ellsq/kernels.hpp"

namespace ellsq::kernels {
namespace {

const Ops* detect() {
#if defined(__x86_64__)
    if (avx2_available()) return &avx2_ops();
#endif
#if defined(__aarch64__)
    return &neon_ops();
#endif
    return &scalar_ops();
}

std::atomic<const Ops*> g_active{nullptr};

const Ops* active() {
    const Ops* t = g_active.load(std::memory_order_acquire);
    if (!t) {
        t = detect();
        g_active.store(t, std::memory_order_release);
    }
    return t;
}

}  // namespace

const Ops& ops() { return *active(); }

const char* active_backend() { return active()->name; }

void force_backend(const char* name) {
    if (std::strcmp(name, "auto") == 0) {
        g_active.store(detect(), std::memory_order_release);
        return;
    }
    if (std::strcmp(name, "scalar") == 0) {
        g_active.store(&scalar_ops(), std::memory_order_release);
        return;
    }
#if defined(__x86_64__)
    if (std::strcmp(name, "avx2") == 0) {
        if (!avx2_available()) throw std::invalid_argument("avx2 not available on this cpu");
        g_active.store(&avx2_ops(), std::memory_order_release);
        return;
    }
#endif
#if defined(__aarch64__)
    if (std::strcmp(name, "neon") == 0) {
        g_active.store(&neon_ops(), std::memory_order_release);
        return;
    }
#endif
    throw std::invalid_argument(std::string("unknown kernel backend: ") + name);
}

}  // namespace ellsq::kernels
