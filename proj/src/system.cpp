#include "hankelid/system.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

#include "json_util.hpp"

namespace hankelid {

IsoSystem::IsoSystem(Mat A, Mat B, Mat C, Mat D)
    : A_(std::move(A)), B_(std::move(B)), C_(std::move(C)), D_(std::move(D)) {
    const Eigen::Index n = A_.rows();
    if (A_.cols() != n || B_.rows() != n || C_.cols() != n) {
        throw InvalidShape("IsoSystem: inconsistent state dimension");
    }
    if (D_.rows() < 1 || D_.cols() < 1) {
        throw InvalidShape("IsoSystem: m and p must be at least 1");
    }
    if (B_.cols() != D_.cols() || C_.rows() != D_.rows()) {
        throw InvalidShape("IsoSystem: inconsistent input/output dimensions");
    }
    if (!A_.allFinite() || !B_.allFinite() || !C_.allFinite() || !D_.allFinite()) {
        throw InvalidInput("IsoSystem: non-finite entries");
    }
}

IsoSystem IsoSystem::memoryless(Mat D) {
    const Eigen::Index m = D.cols();
    const Eigen::Index p = D.rows();
    return IsoSystem(Mat(0, 0), Mat(0, m), Mat(p, 0), std::move(D));
}

Mat observability_matrix(const IsoSystem& sys, Eigen::Index k) {
    const Eigen::Index n = sys.n();
    const Eigen::Index p = sys.p();
    Mat Omega(0, n);
    Mat CAk = sys.C();
    for (Eigen::Index i = 0; i <= k; ++i) {
        Mat next(Omega.rows() + p, n);
        next << Omega, CAk;
        Omega = std::move(next);
        if (i < k) CAk = CAk * sys.A();
    }
    return Omega;
}

Mat controllability_matrix(const IsoSystem& sys, Eigen::Index k) {
    const Eigen::Index n = sys.n();
    const Eigen::Index m = sys.m();
    Mat Gamma(n, 0);
    Mat AkB = sys.B();
    for (Eigen::Index i = 0; i <= k; ++i) {
        Mat next(n, Gamma.cols() + m);
        next << AkB, Gamma;
        Gamma = std::move(next);
        if (i < k) AkB = sys.A() * AkB;
    }
    return Gamma;
}

Eigen::Index lag(const IsoSystem& sys, const Tolerance& tol) {
    if (sys.n() == 0) return 0;
    Eigen::Index prev = 0;
    for (Eigen::Index k = 0; k <= sys.n(); ++k) {
        const Eigen::Index cur = rank(observability_matrix(sys, k), tol);
        if (cur == prev) return k;
        prev = cur;
    }
    return sys.n();
}

LagStructure lag_structure(const IsoSystem& sys, const Tolerance& tol) {
    LagStructure ls;
    ls.rho.push_back(sys.p());
    Eigen::Index prev = 0;
    for (Eigen::Index k = 0; k <= sys.n(); ++k) {
        const Eigen::Index cur = rank(observability_matrix(sys, k), tol);
        ls.rho.push_back(cur - prev);
        prev = cur;
    }
    return ls;
}

bool is_observable(const IsoSystem& sys, const Tolerance& tol) {
    if (sys.n() == 0) return true;
    return rank(observability_matrix(sys, sys.n() - 1), tol) == sys.n();
}

bool is_controllable(const IsoSystem& sys, const Tolerance& tol) {
    if (sys.n() == 0) return true;
    return rank(controllability_matrix(sys, sys.n() - 1), tol) == sys.n();
}

namespace {

Mat toeplitz_matrix(const IsoSystem& sys, Eigen::Index k) {
    // Theta_{-1} is 0x0; Theta_k = [[Theta_{k-1}, 0], [C Gamma_{k-1}, D]].
    Mat Theta(0, 0);
    for (Eigen::Index i = 0; i <= k; ++i) {
        Mat bottom_left =
            i == 0 ? Mat(sys.p(), 0) : sys.C() * controllability_matrix(sys, i - 1);
        Mat next((i + 1) * sys.p(), (i + 1) * sys.m());
        next.setZero();
        next.topLeftCorner(i * sys.p(), i * sys.m()) = Theta;
        next.bottomLeftCorner(sys.p(), i * sys.m()) = bottom_left;
        next.bottomRightCorner(sys.p(), sys.m()) = sys.D();
        Theta = std::move(next);
    }
    return Theta;
}

}  // namespace

StructuredMatrices structured_matrices(const IsoSystem& sys, Eigen::Index k) {
    if (k < 0) throw InvalidDepth("structured_matrices: k must be nonnegative");
    const Eigen::Index n = sys.n();
    const Eigen::Index m = sys.m();
    const Eigen::Index p = sys.p();
    StructuredMatrices out;
    out.Omega = observability_matrix(sys, k);
    out.Gamma = controllability_matrix(sys, k);
    out.Theta = toeplitz_matrix(sys, k);

    out.Phi = Mat::Zero((k + 1) * (m + p), n + (k + 1) * m);
    out.Phi.block(0, n, (k + 1) * m, (k + 1) * m).setIdentity();
    out.Phi.block((k + 1) * m, 0, (k + 1) * p, n) = out.Omega;
    out.Phi.block((k + 1) * m, n, (k + 1) * p, (k + 1) * m) = out.Theta;

    Mat Omega_prev = k == 0 ? Mat(0, n) : observability_matrix(sys, k - 1);
    Mat Theta_prev = k == 0 ? Mat(0, 0) : toeplitz_matrix(sys, k - 1);
    out.Psi = Mat::Zero((k + 1) * m + k * p, n + (k + 1) * m);
    out.Psi.block(0, n, (k + 1) * m, (k + 1) * m).setIdentity();
    out.Psi.block((k + 1) * m, 0, k * p, n) = Omega_prev;
    out.Psi.block((k + 1) * m, n, k * p, k * m) = Theta_prev;
    return out;
}

SimulationResult simulate(const IsoSystem& sys, const Vec& x0, const Mat& u) {
    if (x0.size() != sys.n()) throw InvalidShape("simulate: x0 has wrong length");
    if (u.rows() != sys.m()) throw InvalidShape("simulate: u has wrong row count");
    const Eigen::Index T = u.cols();
    SimulationResult res;
    res.x = Mat(sys.n(), T + 1);
    res.y = Mat(sys.p(), T);
    if (sys.n() > 0) res.x.col(0) = x0;
    for (Eigen::Index t = 0; t < T; ++t) {
        res.y.col(t) = sys.C() * res.x.col(t) + sys.D() * u.col(t);
        res.x.col(t + 1) = sys.A() * res.x.col(t) + sys.B() * u.col(t);
    }
    return res;
}

namespace {

double state_residual(const IsoSystem& sys, const Mat& x, const IOTrajectory& traj) {
    const Eigen::Index T = traj.T();
    double r = 0.0;
    Mat dx = x.rightCols(T) - sys.A() * x.leftCols(T) - sys.B() * traj.u();
    Mat dy = traj.y() - sys.C() * x.leftCols(T) - sys.D() * traj.u();
    if (dx.size() > 0) r = std::max(r, dx.cwiseAbs().maxCoeff());
    if (dy.size() > 0) r = std::max(r, dy.cwiseAbs().maxCoeff());
    return r;
}

// Solve for an initial state by regressing the whole output record on the
// extended observability matrix, then propagate.
Mat witness_by_initial_state(const IsoSystem& sys, const IOTrajectory& traj,
                             const Tolerance& tol) {
    const Eigen::Index T = traj.T();
    StructuredMatrices sm = structured_matrices(sys, T - 1);
    Vec y_vec(T * sys.p());
    Vec u_vec(T * sys.m());
    for (Eigen::Index t = 0; t < T; ++t) {
        y_vec.segment(t * sys.p(), sys.p()) = traj.y().col(t);
        u_vec.segment(t * sys.m(), sys.m()) = traj.u().col(t);
    }
    Vec rhs = y_vec - sm.Theta * u_vec;
    Vec x0 = pinv(sm.Omega, tol) * rhs;
    return simulate(sys, x0, traj.u()).x;
}

// Solve the full stacked linear system for all state columns at once.
Mat witness_dense(const IsoSystem& sys, const IOTrajectory& traj, const Tolerance& tol) {
    const Eigen::Index n = sys.n();
    const Eigen::Index T = traj.T();
    const Eigen::Index unknowns = n * (T + 1);
    Mat A = Mat::Zero((n + sys.p()) * T, unknowns);
    Vec b = Vec::Zero((n + sys.p()) * T);
    for (Eigen::Index t = 0; t < T; ++t) {
        // x_{t+1} - A x_t = B u_t
        A.block(t * n, (t + 1) * n, n, n).setIdentity();
        A.block(t * n, t * n, n, n) -= sys.A();
        b.segment(t * n, n) = sys.B() * traj.u().col(t);
        // C x_t = y_t - D u_t
        A.block(n * T + t * sys.p(), t * n, sys.p(), n) = sys.C();
        b.segment(n * T + t * sys.p(), sys.p()) =
            traj.y().col(t) - sys.D() * traj.u().col(t);
    }
    Vec sol = pinv(A, tol) * b;
    Mat x(n, T + 1);
    for (Eigen::Index t = 0; t <= T; ++t) x.col(t) = sol.segment(t * n, n);
    return x;
}

}  // namespace

ExplainsResult explains(const IsoSystem& sys, const IOTrajectory& traj,
                        const Tolerance& tol) {
    if (sys.m() != traj.m() || sys.p() != traj.p()) {
        throw InvalidShape("explains: dimension mismatch with data");
    }
    ExplainsResult res;
    if (sys.n() == 0) {
        Mat diff = traj.y() - sys.D() * traj.u();
        res.residual = diff.cwiseAbs().maxCoeff();
        res.explains = res.residual <= tol.residual_abs;
        if (res.explains) res.witness = StateTrajectory{Mat(0, traj.T() + 1)};
        return res;
    }
    Mat x;
    if (is_observable(sys, tol)) {
        x = witness_by_initial_state(sys, traj, tol);
        if (state_residual(sys, x, traj) > tol.residual_abs) {
            x = witness_dense(sys, traj, tol);
        }
    } else {
        x = witness_dense(sys, traj, tol);
    }
    res.residual = state_residual(sys, x, traj);
    res.explains = res.residual <= tol.residual_abs;
    if (res.explains) res.witness = StateTrajectory{std::move(x)};
    return res;
}

IsomorphismResult is_isomorphic(const IsoSystem& s1, const IsoSystem& s2,
                                const Tolerance& tol) {
    if (s1.m() != s2.m() || s1.p() != s2.p()) {
        throw InvalidShape("is_isomorphic: input/output dimensions differ");
    }
    if (!is_observable(s1, tol) || !is_observable(s2, tol)) {
        throw NotObservable("is_isomorphic: both systems must be observable");
    }
    IsomorphismResult res;
    if (s1.n() != s2.n()) return res;
    if ((s1.D() - s2.D()).cwiseAbs().maxCoeff() > tol.residual_abs) return res;
    const Eigen::Index n = s1.n();
    if (n == 0) {
        res.isomorphic = true;
        res.S = Mat(0, 0);
        return res;
    }
    Mat O1 = observability_matrix(s1, n - 1);
    Mat O2 = observability_matrix(s2, n - 1);
    Mat S = pinv(O1, tol) * O2;
    if (rank(S, tol) != n) return res;
    const double r = std::max({(S * s2.A() - s1.A() * S).cwiseAbs().maxCoeff(),
                               (S * s2.B() - s1.B()).cwiseAbs().maxCoeff(),
                               (s1.C() * S - s2.C()).cwiseAbs().maxCoeff()});
    // The relation residuals scale with the coordinate change itself.
    if (r > tol.residual_abs * std::max(1.0, S.cwiseAbs().maxCoeff())) return res;
    res.isomorphic = true;
    res.S = std::move(S);
    return res;
}

IsoSystem perturb_explaining(const IsoSystem& sys, const StateTrajectory& x,
                             const PerturbationSpec& spec,
                             const IOTrajectory& traj, const Tolerance& tol) {
    const Eigen::Index n = sys.n();
    const Eigen::Index T = traj.T();
    const Eigen::Index l = lag(sys, tol);
    if (!is_observable(sys, tol) || n < l || l < 1) {
        throw InvalidPerturbation("perturb_explaining: need an observable system with n >= lag >= 1");
    }
    if (x.x.rows() != n || x.x.cols() != T + 1) {
        throw InvalidPerturbation("perturb_explaining: state has wrong shape");
    }
    if (state_residual(sys, x.x, traj) > tol.residual_abs) {
        throw InvalidPerturbation("perturb_explaining: x is not a state for the system");
    }
    const Eigen::Index d = std::min(l, T - 1);
    if (spec.xi.size() != n || spec.zeta.size() != n ||
        static_cast<Eigen::Index>(spec.etas.size()) != d + 1) {
        throw InvalidPerturbation("perturb_explaining: spec has wrong shape (need d+1 etas)");
    }
    for (const auto& eta : spec.etas) {
        if (eta.size() != sys.m()) {
            throw InvalidPerturbation("perturb_explaining: eta has wrong length");
        }
    }
    if (spec.zeta.cwiseAbs().maxCoeff() <= tol.residual_abs) {
        throw InvalidPerturbation("perturb_explaining: zeta must be nonzero");
    }
    // [xi | eta_0 .. eta_d] must annihilate J_d(x).
    RowVec w(n + (d + 1) * sys.m());
    w.head(n) = spec.xi;
    for (Eigen::Index i = 0; i <= d; ++i) {
        w.segment(n + i * sys.m(), sys.m()) = spec.etas[i];
    }
    Mat Jd = build_J(x, traj, d);
    if ((w * Jd).cwiseAbs().maxCoeff() > tol.residual_abs) {
        throw InvalidPerturbation("perturb_explaining: [xi, etas] is not in lk J_d(x)");
    }
    // C A^i zeta = 0 for i in [0, lag-2].
    Mat CAi = sys.C();
    for (Eigen::Index i = 0; i <= l - 2; ++i) {
        if ((CAi * spec.zeta).cwiseAbs().maxCoeff() > tol.residual_abs) {
            throw InvalidPerturbation("perturb_explaining: zeta violates the annihilation condition");
        }
        CAi = CAi * sys.A();
    }

    Mat A_hat = sys.A() + spec.zeta * spec.xi;
    // E_d = 0; E_{i-1} = A_hat E_i + zeta eta_i, down to E_{-1}.
    Mat E = Mat::Zero(n, sys.m());   // E_d
    Mat E0 = Mat::Zero(n, sys.m());  // becomes E_0 at i = 0
    for (Eigen::Index i = d; i >= 0; --i) {
        if (i == 0) E0 = E;
        E = A_hat * E + spec.zeta * spec.etas[i];
    }
    Mat B_hat = sys.B() + E;  // E now holds E_{-1}
    Mat D_hat = sys.D() + sys.C() * E0;
    IsoSystem out(std::move(A_hat), std::move(B_hat), sys.C(), std::move(D_hat));
    if (!explains(out, traj, tol).explains) {
        throw InternalInvariantViolated("perturb_explaining: result does not explain the data");
    }
    if (lag(out, tol) != l) {
        throw InternalInvariantViolated("perturb_explaining: lag changed");
    }
    return out;
}

IsoSystem load_system(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("json: ") + e.what());
    }
    if (!j.contains("n") || !j.contains("m") || !j.contains("p")) {
        throw FormatError("json: system needs n, m, p, A, B, C, D");
    }
    const Eigen::Index n = j["n"].get<Eigen::Index>();
    const Eigen::Index m = j["m"].get<Eigen::Index>();
    const Eigen::Index p = j["p"].get<Eigen::Index>();
    if (n == 0) {
        return IsoSystem::memoryless(detail::mat_from_json(j["D"], p, m, "D"));
    }
    return IsoSystem(detail::mat_from_json(j.value("A", nlohmann::json::array()), n, n, "A"),
                     detail::mat_from_json(j.value("B", nlohmann::json::array()), n, m, "B"),
                     detail::mat_from_json(j.value("C", nlohmann::json::array()), p, n, "C"),
                     detail::mat_from_json(j["D"], p, m, "D"));
}

std::string system_to_json(const IsoSystem& sys) {
    nlohmann::json j;
    j["n"] = sys.n();
    j["m"] = sys.m();
    j["p"] = sys.p();
    j["A"] = detail::mat_to_json(sys.A());
    j["B"] = detail::mat_to_json(sys.B());
    j["C"] = detail::mat_to_json(sys.C());
    j["D"] = detail::mat_to_json(sys.D());
    return j.dump(2);
}

void save_system(const IsoSystem& sys, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw FormatError("cannot open " + path + " for writing");
    out << system_to_json(sys) << "\n";
}

}  // namespace hankelid
