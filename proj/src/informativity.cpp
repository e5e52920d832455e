#include "hankelid/informativity.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>
#include <json.hpp>

namespace hankelid {

InformativityVerdict check_main(const IOTrajectory& traj, const PriorBounds& bounds,
                                const Tolerance& tol) {
    if (!bounds.valid()) throw InvalidInput("check_main: invalid prior bounds");
    InformativityVerdict v;
    v.invariants = invariants(traj, tol);
    const LagBounds lb = lag_bounds(v.invariants, bounds);
    v.L_d = lb.L_d;
    v.L_a = lb.L_a;
    v.lag_lb = v.invariants.l_min >= bounds.L_minus;
    v.state_lb = v.invariants.n_min >= bounds.N_minus;
    v.length = traj.T() >= v.L_a + (v.L_a + 1) * traj.m() + v.invariants.n_min;
    v.rank_cond = v.L_a >= 0 && v.L_a <= traj.T() - 1 &&
                  rank(build_H(traj, v.L_a), tol) ==
                      (v.L_a + 1) * traj.m() + v.invariants.n_min;
    v.informative = v.lag_lb && v.state_lb && v.length && v.rank_cond;
    if (v.informative) {
        v.predicted_true_lag = v.invariants.l_min;
        v.predicted_true_dim = v.invariants.n_min;
    }
    return v;
}

PELemmaVerdict check_fundamental_lemma(const IOTrajectory& traj,
                                       const PriorBounds& bounds,
                                       const Tolerance& tol) {
    if (!bounds.valid()) throw InvalidInput("check_fundamental_lemma: invalid prior bounds");
    PELemmaVerdict v;
    const DataInvariants inv = invariants(traj, tol);
    v.applicable = inv.l_min >= 1;
    const Eigen::Index order = bounds.L_plus + bounds.N_plus;
    v.length_ok = traj.T() >= order - 1 + order * traj.m();
    if (order >= 1 && order - 1 <= traj.T() - 1) {
        v.pe_ok = rank(hankel(traj.u(), order - 1), tol) == order * traj.m();
    }
    v.concluded_informative = v.applicable && v.length_ok && v.pe_ok;
    return v;
}

bool check_fixed_order(const IOTrajectory& traj, Eigen::Index l_true,
                       Eigen::Index n_true, const Tolerance& tol) {
    if (l_true < 1 || n_true < l_true) {
        throw InvalidInput("check_fixed_order: need n_true >= l_true >= 1");
    }
    if (traj.T() < l_true + (l_true + 1) * traj.m() + n_true) return false;
    return rank(build_H(traj, l_true), tol) == (l_true + 1) * traj.m() + n_true;
}

namespace {

// Deterministic cross-platform RNG: splitmix64 core with explicit
// uniform/normal transforms (the std distributions are not portable).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * uniform01(); }

    Eigen::Index uniform_int(Eigen::Index lo, Eigen::Index hi) {
        return lo + static_cast<Eigen::Index>(
                        next() % static_cast<std::uint64_t>(hi - lo + 1));
    }

    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform01();
        double u2 = uniform01();
        while (u1 <= 1e-300) u1 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * M_PI * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

    Mat uniform_mat(Eigen::Index rows, Eigen::Index cols, double a, double b) {
        Mat M(rows, cols);
        for (Eigen::Index r = 0; r < rows; ++r) {
            for (Eigen::Index c = 0; c < cols; ++c) M(r, c) = uniform(a, b);
        }
        return M;
    }

    Mat normal_mat(Eigen::Index rows, Eigen::Index cols) {
        Mat M(rows, cols);
        for (Eigen::Index r = 0; r < rows; ++r) {
            for (Eigen::Index c = 0; c < cols; ++c) M(r, c) = normal();
        }
        return M;
    }

private:
    std::uint64_t state_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

IsoSystem random_minimal_system(Rng& rng, Eigen::Index n, Eigen::Index m,
                                Eigen::Index p, const Tolerance& tol) {
    if (n == 0) return IsoSystem::memoryless(rng.uniform_mat(p, m, -1.0, 1.0));
    for (;;) {
        Mat A = rng.uniform_mat(n, n, -1.0, 1.0);
        // Rescale to spectral radius <= 1 so trajectories stay well scaled
        // over the whole record; a scalar rescale preserves observability,
        // controllability, and the lag structure.
        const double radius = A.eigenvalues().cwiseAbs().maxCoeff();
        if (radius > 1.0) A *= rng.uniform(0.3, 1.0) / radius;
        IsoSystem sys(std::move(A), rng.uniform_mat(n, m, -1.0, 1.0),
                      rng.uniform_mat(p, n, -1.0, 1.0), rng.uniform_mat(p, m, -1.0, 1.0));
        if (is_observable(sys, tol) && is_controllable(sys, tol)) return sys;
    }
}

// Best-effort constructive witness for non-informative data: perturb the
// identified minimal system along a left annihilator of J_d(x).
bool try_witness(const IdentificationResult& id, const IOTrajectory& traj,
                 const Tolerance& tol, bool& built) {
    built = false;
    const IsoSystem& sys = id.system;
    const Eigen::Index n = sys.n();
    const Eigen::Index l = id.invariants.l_min;
    if (l < 1 || n < l) return true;
    const Eigen::Index d = std::min(l, traj.T() - 1);
    RowSubspace ann = left_kernel(build_J(id.state, traj, d), tol);
    if (ann.dim() == 0) return true;
    Mat omega_prev = l >= 2 ? observability_matrix(sys, l - 2) : Mat(0, n);
    RowSubspace zeta_space = left_kernel(omega_prev.transpose(), tol);
    if (zeta_space.dim() == 0) return true;

    PerturbationSpec spec;
    RowVec w = ann.basis.row(0);
    spec.xi = w.head(n);
    for (Eigen::Index i = 0; i <= d; ++i) {
        spec.etas.push_back(w.segment(n + i * sys.m(), sys.m()));
    }
    spec.zeta = zeta_space.basis.row(0).transpose();
    built = true;
    try {
        IsoSystem other = perturb_explaining(sys, id.state, spec, traj, tol);
        return explains(other, traj, tol).explains;
    } catch (const InvalidPerturbation&) {
        built = false;
        return true;
    } catch (const InternalInvariantViolated&) {
        return false;
    }
}

void run_trial(std::uint64_t sub_seed, const HarnessCaps& caps, const Tolerance& tol,
               HarnessReport& report) {
    Rng rng(sub_seed);
    const Eigen::Index n = rng.uniform_int(0, caps.max_n);
    const Eigen::Index m = rng.uniform_int(1, caps.max_m);
    const Eigen::Index p = rng.uniform_int(1, caps.max_p);
    IsoSystem truth = random_minimal_system(rng, n, m, p, tol);
    const Eigen::Index l_true = lag(truth, tol);
    const Eigen::Index T = rng.uniform_int(std::max<Eigen::Index>(1, l_true + 1), caps.max_T);

    Mat u = rng.normal_mat(m, T);
    Vec x0 = rng.normal_mat(n, 1);
    SimulationResult sim = simulate(truth, x0, u);
    IOTrajectory traj(std::move(u), std::move(sim.y));

    const DataInvariants inv = invariants(traj, tol);
    const LagStructure rho = lag_structure(truth, tol);
    const std::vector<Eigen::Index> delta = delta_sequence(traj, tol, traj.T() - 1);
    for (Eigen::Index k = 0; k <= traj.T() - 1; ++k) {
        const Eigen::Index rho_k =
            k + 1 < static_cast<Eigen::Index>(rho.rho.size()) ? rho.rho[k + 1] : 0;
        if (rho_k < delta[k + 1]) {
            ++report.rho_vs_delta;
            break;
        }
    }
    if (traj.T() >= l_true + 1 && inv.q > l_true) ++report.lag_lower_bound;
    if (n < inv.n_min || n - inv.n_min < l_true - inv.q) ++report.dim_lower_bound;

    bool identified_ok = false;
    IdentificationResult id{IsoSystem::memoryless(Mat::Zero(p, m)),
                            StateTrajectory{Mat(0, T + 1)}, inv, 0.0};
    try {
        id = identify_minimal(traj, tol);
        identified_ok = explains(id.system, traj, tol).explains &&
                        id.system.n() == inv.n_min && lag(id.system, tol) == inv.q &&
                        is_observable(id.system, tol);
    } catch (const Error&) {
        identified_ok = false;
    }
    if (!identified_ok) {
        ++report.identify_contract;
        return;
    }

    PriorBounds bounds{0, l_true, 0, n};
    const InformativityVerdict verdict = check_main(traj, bounds, tol);
    if (verdict.informative) {
        bool ok = inv.l_min == l_true && inv.n_min == n;
        if (ok && n > 0) ok = is_isomorphic(truth, id.system, tol).isomorphic;
        if (ok && n == 0) {
            ok = (truth.D() - id.system.D()).cwiseAbs().maxCoeff() <= tol.residual_abs;
        }
        if (!ok) ++report.informative_mismatch;
    } else {
        bool built = false;
        if (!try_witness(id, traj, tol, built)) ++report.witness_failures;
        if (built) ++report.witnesses_built;
    }

    const PELemmaVerdict pe = check_fundamental_lemma(traj, bounds, tol);
    if (pe.concluded_informative && !verdict.informative) ++report.pe_implies_main;
}

}  // namespace

std::string HarnessReport::to_json() const {
    nlohmann::json j;
    j["trials"] = trials;
    j["seed"] = seed;
    j["witnesses_built"] = witnesses_built;
    j["violations"] = {{"rho_vs_delta", rho_vs_delta},
                       {"lag_lower_bound", lag_lower_bound},
                       {"dim_lower_bound", dim_lower_bound},
                       {"identify_contract", identify_contract},
                       {"informative_mismatch", informative_mismatch},
                       {"pe_implies_main", pe_implies_main},
                       {"witness_failures", witness_failures}};
    return j.dump(2);
}

HarnessReport harness(int trial_count, const HarnessCaps& caps, std::uint64_t seed,
                      const Tolerance& tol) {
    HarnessReport report;
    report.trials = trial_count;
    report.seed = seed;
    for (int t = 0; t < trial_count; ++t) {
        // One independent sub-seed per trial so parallel and serial runs agree.
        Rng mixer(seed + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(t + 1));
        run_trial(mixer.next(), caps, tol, report);
    }
    return report;
}

}  // namespace hankelid
