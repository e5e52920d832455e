#include "hankelid/invariants.hpp"

#include <algorithm>

namespace hankelid {

std::vector<Eigen::Index> delta_sequence(const IOTrajectory& traj,
                                         const Tolerance& tol, Eigen::Index up_to) {
    if (up_to < -1 || up_to > traj.T() - 1) {
        throw InvalidDepth("delta_sequence: up_to out of range");
    }
    std::vector<Eigen::Index> delta;
    delta.push_back(traj.p());
    for (Eigen::Index k = 0; k <= up_to; ++k) {
        delta.push_back(rank(build_H(traj, k), tol) - rank(build_G(traj, k), tol));
    }
    return delta;
}

DataInvariants invariants(const IOTrajectory& traj, const Tolerance& tol) {
    DataInvariants inv;
    inv.delta.push_back(traj.p());
    // The search stops at the first zero; delta_{T-1} = 0 guarantees it ends.
    for (Eigen::Index k = 0; k <= traj.T() - 1; ++k) {
        const Eigen::Index dk =
            rank(build_H(traj, k), tol) - rank(build_G(traj, k), tol);
        inv.delta.push_back(dk);
        if (dk == 0) {
            inv.q = k;
            break;
        }
    }
    inv.l_min = inv.q;
    inv.n_min = 0;
    for (std::size_t i = 1; i < inv.delta.size(); ++i) inv.n_min += inv.delta[i];
    return inv;
}

LagBounds lag_bounds(const DataInvariants& inv, const PriorBounds& bounds) {
    if (!bounds.valid()) throw InvalidInput("lag_bounds: invalid prior bounds");
    LagBounds lb;
    lb.L_d = bounds.N_plus - inv.n_min + inv.l_min;
    lb.L_a = std::min(bounds.L_plus, lb.L_d);
    return lb;
}

}  // namespace hankelid
