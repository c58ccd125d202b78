#include "qv/kernels.hpp"

#include <atomic>
#include <cstdlib>

namespace qv::kernels {

const Ops* avx2_ops() {
    static const Ops* table = [] {
        const Ops* t = detail::avx2_table();
        if (t == nullptr) return static_cast<const Ops*>(nullptr);
#if defined(__x86_64__) || defined(__i386__)
        if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) return t;
#endif
        return static_cast<const Ops*>(nullptr);
    }();
    return table;
}

namespace {

const Ops* pick(std::string_view name) {
    if (name == "scalar") return &scalar_ops();
    if (name == "avx2") return avx2_ops();
    if (name == "auto" || name.empty()) {
        const Ops* v = avx2_ops();
        return v != nullptr ? v : &scalar_ops();
    }
    return nullptr;
}

std::atomic<const Ops*>& lane_slot() {
    static std::atomic<const Ops*> slot = [] {
        const char* env = std::getenv("QV_KERNEL_LANE");
        const Ops* chosen = pick(env != nullptr ? std::string_view{env} : std::string_view{});
        return chosen != nullptr ? chosen : &scalar_ops();
    }();
    return slot;
}

}  // namespace

const Ops& active() { return *lane_slot().load(std::memory_order_relaxed); }

bool set_lane(std::string_view name) {
    const Ops* chosen = pick(name);
    if (chosen == nullptr) return false;
    lane_slot().store(chosen, std::memory_order_relaxed);
    return true;
}

}  // namespace qv::kernels
