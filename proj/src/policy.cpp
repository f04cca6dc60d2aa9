#include "edgetwin/policy.hpp"

namespace edgetwin {

int GreedyPolicy::act(const MdpState& state, bool) {
    const ResourceVec demand{state.task_req.cpu / nominal_service_time_s_,
                             state.task_req.gpu / nominal_service_time_s_,
                             state.task_req.store / nominal_service_time_s_};
    const int count = static_cast<int>(state.server_count());
    for (int e = 0; e < count; ++e) {
        const std::size_t i = static_cast<std::size_t>(e);
        const ResourceVec used_after = state.utilized[i] + demand;
        if (used_after.fits_within(state.capacities[i])) return e;
    }
    return count - 1;
}

}  // namespace edgetwin
