#include "memsteer/errors.hpp"

namespace memsteer {

const char* errc_name(Errc code) noexcept {
    switch (code) {
    case Errc::invalid_argument: return "invalid-argument";
    case Errc::grid_mismatch: return "grid-mismatch";
    case Errc::not_in_h10: return "not-in-H10";
    case Errc::aliasing: return "aliasing";
    case Errc::instability: return "instability";
    case Errc::ill_conditioned: return "ill-conditioned";
    case Errc::mean_zero_violation: return "mean-zero-violation";
    case Errc::internal_consistency: return "internal-consistency";
    case Errc::invalid_config: return "invalid-config";
    case Errc::io: return "io";
    }
    return "unknown";
}

} // namespace memsteer
