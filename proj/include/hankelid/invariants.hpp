#pragma once

#include <vector>

#include "hankelid/trajectory.hpp"

namespace hankelid {

/// Data-intrinsic integers: delta_{-1}..delta_q, the first zero index q, the
/// shortest lag and the minimum state dimension any explaining system can have.
struct DataInvariants {
    std::vector<Eigen::Index> delta;  // delta[k+1] holds delta_k, from k = -1
    Eigen::Index q = 0;
    Eigen::Index l_min = 0;
    Eigen::Index n_min = 0;
};

/// Prior lower and upper bounds on the true lag and state dimension.
struct PriorBounds {
    Eigen::Index L_minus = 0;
    Eigen::Index L_plus = 0;
    Eigen::Index N_minus = 0;
    Eigen::Index N_plus = 0;

    bool valid() const {
        return 0 <= L_minus && L_minus <= L_plus && L_plus <= N_plus &&
               L_minus <= N_minus && N_minus <= N_plus;
    }
};

/// Data-derived and actual (sharpened) upper bounds on the lag.
struct LagBounds {
    Eigen::Index L_d = 0;
    Eigen::Index L_a = 0;
};

/// delta_{-1} = p; delta_k = rank H_k - rank G_k for k in [0, up_to].
std::vector<Eigen::Index> delta_sequence(const IOTrajectory& traj,
                                         const Tolerance& tol, Eigen::Index up_to);

/// q = first k with delta_k = 0; l_min = q; n_min = sum of delta_0..delta_q.
DataInvariants invariants(const IOTrajectory& traj, const Tolerance& tol = {});

/// L_d = N_plus - n_min + l_min; L_a = min(L_plus, L_d).
LagBounds lag_bounds(const DataInvariants& inv, const PriorBounds& bounds);

}  // namespace hankelid
