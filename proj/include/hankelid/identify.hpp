#pragma once

#include <vector>

#include "hankelid/invariants.hpp"
#include "hankelid/system.hpp"
#include "hankelid/trajectory.hpp"

namespace hankelid {

/// Bases R_0..R_q of the subspaces decomposing lk H_k into shifted blocks.
/// Each R_i is s_i x (i+1)(m+p), laid out as [Q_{i,0}..Q_{i,i} | P_{i,0}..P_{i,i}].
/// Tests may inject hand-picked (non-orthonormal) bases by filling this
/// struct directly; every consumer only relies on R_i annihilating H_i.
struct AnnihilatorLadder {
    Eigen::Index q = 0;
    Eigen::Index m = 0;
    Eigen::Index p = 0;
    std::vector<Mat> bases;  // R_0..R_q

    Eigen::Index s(Eigen::Index i) const { return bases[i].rows(); }

    Mat Q(Eigen::Index i, Eigen::Index j) const {
        return bases[i].middleCols(j * m, m);
    }
    Mat P(Eigen::Index i, Eigen::Index j) const {
        return bases[i].middleCols((i + 1) * m + j * p, p);
    }
    /// Pi = col(P_{0,0}, P_{1,1}, ..., P_{q,q}); p x p and nonsingular.
    Mat Pi() const;
};

struct IdentificationResult {
    IsoSystem system;
    StateTrajectory state;
    DataInvariants invariants;
    double residual = 0.0;
};

/// Build orthonormal ladder bases: S_0 complements lk G_0 x 0_p inside
/// lk H_0; S_k complements sigma(lk H_{k-1}) + (lk G_k x 0_p) inside lk H_k.
AnnihilatorLadder build_ladder(const IOTrajectory& traj, const Tolerance& tol = {});

/// Iterative state construction from the ladder; requires q >= 1.
StateTrajectory construct_state(const IOTrajectory& traj,
                                const AnnihilatorLadder& ladder,
                                const Tolerance& tol = {});

/// Identify an explaining system with n = n_min states and lag l_min.
IdentificationResult identify_minimal(const IOTrajectory& traj,
                                      const Tolerance& tol = {});

/// Identification from a caller-supplied ladder (the test hook for
/// reproducing hand-picked bases).
IdentificationResult identify_with_ladder(const IOTrajectory& traj,
                                          const AnnihilatorLadder& ladder,
                                          const Tolerance& tol = {});

}  // namespace hankelid
