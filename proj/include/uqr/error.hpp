#pragma once

#include <atomic>
#include <stdexcept>
#include <string>

namespace uqr {

enum class Errc {
    empty_input,
    vertical_segment,
    mass_not_one,
    non_ascending_breaks,
    too_many_pieces,
    invalid_pdf,
    not_uniform,
    bad_interval,
    bounded_interval,
    unbounded_interval,
    k_out_of_range,
    tau_out_of_range,
    not_enough_elements,
    empty_set,
    parse_error,
    capability_mismatch,
};

class Error : public std::runtime_error {
  public:
    Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    Errc code() const { return code_; }

  private:
    Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

// Structural self-checks. Cheap enough to leave compiled in; gated by a runtime
// flag so measurement runs stay clean. A failed check throws CheckFailure.
struct CheckFailure : std::logic_error {
    using std::logic_error::logic_error;
};

namespace detail {
extern std::atomic<bool> g_checks;
}

inline bool checks_enabled() { return detail::g_checks.load(std::memory_order_relaxed); }
inline void set_checks_enabled(bool on) { detail::g_checks.store(on, std::memory_order_relaxed); }

void check_failed(const char* what);

inline void check(bool cond, const char* what) {
    if (checks_enabled() && !cond) check_failed(what);
}

}  // namespace uqr
