#include "finitopos/common.hpp"

#include <cstdlib>

namespace finitopos {

std::uint64_t default_budget() {
    if (const char* env = std::getenv("FINITOPOS_BUDGET")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return v;
    }
    return 1000000;
}

}  // namespace finitopos
