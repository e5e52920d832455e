#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hankelid/subspace.hpp"
#include "hankelid/trajectory.hpp"

namespace hankelid {

/// Discrete-time input-state-output realization x(t+1) = Ax + Bu, y = Cx + Du.
/// n = 0 (void A, B, C blocks) models a memoryless map y = Du.
class IsoSystem {
public:
    IsoSystem(Mat A, Mat B, Mat C, Mat D);

    /// The memoryless system with the given feedthrough.
    static IsoSystem memoryless(Mat D);

    Eigen::Index n() const { return A_.rows(); }
    Eigen::Index m() const { return D_.cols(); }
    Eigen::Index p() const { return D_.rows(); }

    const Mat& A() const { return A_; }
    const Mat& B() const { return B_; }
    const Mat& C() const { return C_; }
    const Mat& D() const { return D_; }

private:
    Mat A_, B_, C_, D_;
};

/// The sequence rho_{-1}, rho_0, ..., rho_n of observability-rank increments.
struct LagStructure {
    std::vector<Eigen::Index> rho;  // rho[k+1] holds rho_k, starting at k = -1
};

/// Inputs to the explaining-system perturbation: a left annihilator
/// [xi | eta_0 .. eta_d] of J_d(x) and a direction zeta killed by the first
/// l-1 observability rows.
struct PerturbationSpec {
    RowVec xi;                 // 1 x n
    std::vector<RowVec> etas;  // each 1 x m, indices 0..d
    Vec zeta;                  // n
};

/// Structured matrices of depth k built from one realization.
struct StructuredMatrices {
    Mat Omega;  // (k+1)p x n
    Mat Gamma;  // n x (k+1)m
    Mat Theta;  // (k+1)p x (k+1)m
    Mat Phi;    // (k+1)(m+p) x (n + (k+1)m)
    Mat Psi;    // ((k+1)m + kp) x (n + (k+1)m)
};

/// Omega_k; Omega_{-1} is the 0 x n void matrix.
Mat observability_matrix(const IsoSystem& sys, Eigen::Index k);

/// Gamma_k; Gamma_{-1} is the n x 0 void matrix.
Mat controllability_matrix(const IsoSystem& sys, Eigen::Index k);

/// Smallest k >= 0 with rank Omega_k = rank Omega_{k-1}.
Eigen::Index lag(const IsoSystem& sys, const Tolerance& tol = {});

LagStructure lag_structure(const IsoSystem& sys, const Tolerance& tol = {});

bool is_observable(const IsoSystem& sys, const Tolerance& tol = {});
bool is_controllable(const IsoSystem& sys, const Tolerance& tol = {});

StructuredMatrices structured_matrices(const IsoSystem& sys, Eigen::Index k);

struct SimulationResult {
    Mat y;  // p x T
    Mat x;  // n x (T+1)
};

SimulationResult simulate(const IsoSystem& sys, const Vec& x0, const Mat& u);

struct ExplainsResult {
    bool explains = false;
    double residual = 0.0;
    std::optional<StateTrajectory> witness;
};

/// Does some state sequence make the system reproduce the record exactly?
ExplainsResult explains(const IsoSystem& sys, const IOTrajectory& traj,
                        const Tolerance& tol = {});

struct IsomorphismResult {
    bool isomorphic = false;
    std::optional<Mat> S;  // maps system-2 coordinates to system-1 coordinates
};

/// Isomorphism test for observable systems: S A2 = A1 S, S B2 = B1,
/// C1 S = C2, D1 = D2 for a nonsingular S. Throws NotObservable otherwise.
IsomorphismResult is_isomorphic(const IsoSystem& s1, const IsoSystem& s2,
                                const Tolerance& tol = {});

/// Build a second explaining system from (sys, x, spec): A+zeta*xi, adjusted
/// B and D via the E-recursion. Validates the perturbation inputs and
/// verifies that the result still explains the trajectory.
IsoSystem perturb_explaining(const IsoSystem& sys, const StateTrajectory& x,
                             const PerturbationSpec& spec,
                             const IOTrajectory& traj, const Tolerance& tol = {});

IsoSystem load_system(const std::string& path);
void save_system(const IsoSystem& sys, const std::string& path);
std::string system_to_json(const IsoSystem& sys);

}  // namespace hankelid
