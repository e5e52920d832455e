#include "hankelid/identify.hpp"

namespace hankelid {

Mat AnnihilatorLadder::Pi() const {
    Mat pi(0, p);
    for (Eigen::Index i = 0; i <= q; ++i) {
        if (s(i) == 0) continue;
        Mat next(pi.rows() + s(i), p);
        next << pi, P(i, i);
        pi = std::move(next);
    }
    return pi;
}

namespace {

// Embed lk G_k into the row coordinates of H_k by appending p zeros: the
// rows of G_k are the rows of H_k minus the trailing y_k block.
RowSubspace embed_lk_G(const RowSubspace& lkG, Eigen::Index p) {
    Mat basis = Mat::Zero(lkG.dim(), lkG.ambient_dim + p);
    basis.leftCols(lkG.ambient_dim) = lkG.basis;
    return RowSubspace{lkG.ambient_dim + p, basis};
}

}  // namespace

AnnihilatorLadder build_ladder(const IOTrajectory& traj, const Tolerance& tol) {
    const DataInvariants inv = invariants(traj, tol);
    AnnihilatorLadder ladder;
    ladder.q = inv.q;
    ladder.m = traj.m();
    ladder.p = traj.p();

    RowSubspace lkH_prev = RowSubspace::zero(0);
    for (Eigen::Index k = 0; k <= inv.q; ++k) {
        RowSubspace lkH = left_kernel(build_H(traj, k), tol);
        RowSubspace lkG = embed_lk_G(left_kernel(build_G(traj, k), tol), traj.p());
        RowSubspace inner =
            k == 0 ? lkG
                   : subspace_sum(sigma_shift(lkH_prev, traj.m(), traj.p()), lkG, tol);
        RowSubspace Sk = complement_in(inner, lkH, tol);
        if (Sk.dim() != inv.delta[k] - inv.delta[k + 1]) {
            throw InternalInvariantViolated("build_ladder: dim S_k != delta_{k-1} - delta_k");
        }
        ladder.bases.push_back(Sk.basis);
        lkH_prev = std::move(lkH);
    }
    if (rank(ladder.Pi(), tol) != traj.p()) {
        throw InternalInvariantViolated("build_ladder: Pi is singular");
    }
    return ladder;
}

StateTrajectory construct_state(const IOTrajectory& traj,
                                const AnnihilatorLadder& ladder,
                                const Tolerance& tol) {
    if (ladder.q < 1) {
        throw InvalidInput("construct_state: requires q >= 1");
    }
    const Eigen::Index T = traj.T();
    const Mat& u = traj.u();
    const Mat& y = traj.y();

    Eigen::Index n = 0;
    for (Eigen::Index i = 1; i <= ladder.q; ++i) n += i * ladder.s(i);
    Mat x(n, T + 1);

    Eigen::Index row = 0;
    for (Eigen::Index i = 1; i <= ladder.q; ++i) {
        const Eigen::Index s = ladder.s(i);
        if (s == 0) continue;
        std::vector<Mat> xi(i + 1);  // xi[k] = x^{i,k}, k in [1, i]
        for (Eigen::Index k = 1; k <= i; ++k) {
            xi[k] = Mat(s, T + 1);
            Vec x0 = Vec::Zero(s);
            for (Eigen::Index j = k; j <= i; ++j) {
                x0 += ladder.Q(i, j) * u.col(j - k) + ladder.P(i, j) * y.col(j - k);
            }
            xi[k].col(0) = x0;
        }
        xi[1].rightCols(T) = -ladder.Q(i, 0) * u - ladder.P(i, 0) * y;
        for (Eigen::Index k = 2; k <= i; ++k) {
            xi[k].rightCols(T) = xi[k - 1].leftCols(T) - ladder.Q(i, k - 1) * u -
                                 ladder.P(i, k - 1) * y;
        }
        for (Eigen::Index k = 1; k <= i; ++k) {
            x.middleRows(row, s) = xi[k];
            row += s;
        }
    }

    // rs [x_{[1,T]}; y] must lie inside rs [x_{[0,T-1]}; u].
    Mat target(n + traj.p(), T);
    target << x.rightCols(T), y;
    Mat regressor(n + traj.m(), T);
    regressor << x.leftCols(T), u;
    auto [sol, residual] = lstsq_rows(target, regressor, tol);
    (void)sol;
    if (residual > tol.residual_abs) {
        throw InternalInvariantViolated("construct_state: row-space condition violated");
    }
    return StateTrajectory{std::move(x)};
}

IdentificationResult identify_with_ladder(const IOTrajectory& traj,
                                          const AnnihilatorLadder& ladder,
                                          const Tolerance& tol) {
    const DataInvariants inv = invariants(traj, tol);
    const Eigen::Index T = traj.T();

    if (ladder.q == 0) {
        Mat P00 = ladder.P(0, 0);
        if (rank(P00, tol) != traj.p()) {
            throw InternalInvariantViolated("identify: P_{0,0} is singular");
        }
        Mat D = -pinv(P00, tol) * ladder.Q(0, 0);
        IsoSystem sys = IsoSystem::memoryless(std::move(D));
        const double residual =
            (traj.y() - sys.D() * traj.u()).cwiseAbs().maxCoeff();
        if (residual > tol.residual_abs) {
            throw IdentificationFailed("identify: memoryless model does not fit the data");
        }
        return IdentificationResult{std::move(sys),
                                    StateTrajectory{Mat(0, T + 1)}, inv, residual};
    }

    StateTrajectory state = construct_state(traj, ladder, tol);
    const Eigen::Index n = state.n();
    Mat target(n + traj.p(), T);
    target << state.x.rightCols(T), traj.y();
    Mat regressor(n + traj.m(), T);
    regressor << state.x.leftCols(T), traj.u();
    auto [M, residual] = lstsq_rows(target, regressor, tol);
    if (residual > tol.residual_abs) {
        throw IdentificationFailed("identify: system equation residual above tolerance");
    }
    IsoSystem sys(M.topLeftCorner(n, n), M.topRightCorner(n, traj.m()),
                  M.bottomLeftCorner(traj.p(), n),
                  M.bottomRightCorner(traj.p(), traj.m()));
    if (sys.n() != inv.n_min || lag(sys, tol) != inv.l_min || !is_observable(sys, tol)) {
        throw InternalInvariantViolated("identify: result violates (n_min, l_min, observable)");
    }
    return IdentificationResult{std::move(sys), std::move(state), inv, residual};
}

IdentificationResult identify_minimal(const IOTrajectory& traj, const Tolerance& tol) {
    return identify_with_ladder(traj, build_ladder(traj, tol), tol);
}

}  // namespace hankelid
