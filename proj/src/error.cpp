#include "uqr/error.hpp"

namespace uqr {

namespace detail {
std::atomic<bool> g_checks{false};
}

void check_failed(const char* what) { throw CheckFailure(what); }

}  // namespace uqr
