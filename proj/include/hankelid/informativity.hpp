#pragma once

#include <cstdint>
#include <string>

#include "hankelid/identify.hpp"
#include "hankelid/invariants.hpp"

namespace hankelid {

/// Outcome of the necessary-and-sufficient informativity test.
struct InformativityVerdict {
    bool informative = false;
    bool lag_lb = false;    // l_min >= L_minus
    bool state_lb = false;  // n_min >= N_minus
    bool length = false;    // T >= L_a + (L_a + 1) m + n_min
    bool rank_cond = false; // rank H_{L_a} = (L_a + 1) m + n_min
    Eigen::Index L_d = 0;
    Eigen::Index L_a = 0;
    DataInvariants invariants;
    // Populated only when informative.
    Eigen::Index predicted_true_lag = -1;
    Eigen::Index predicted_true_dim = -1;
};

/// Outcome of the persistency-of-excitation sufficient test.
struct PELemmaVerdict {
    bool applicable = false;  // proxy: l_min >= 1
    bool length_ok = false;
    bool pe_ok = false;
    bool concluded_informative = false;
};

InformativityVerdict check_main(const IOTrajectory& traj, const PriorBounds& bounds,
                                const Tolerance& tol = {});

PELemmaVerdict check_fundamental_lemma(const IOTrajectory& traj,
                                       const PriorBounds& bounds,
                                       const Tolerance& tol = {});

/// Fixed-order test: given the exact lag and state dimension, the data are
/// informative iff rank H_l = (l + 1) m + n and T is long enough.
bool check_fixed_order(const IOTrajectory& traj, Eigen::Index l_true,
                       Eigen::Index n_true, const Tolerance& tol = {});

struct HarnessCaps {
    Eigen::Index max_n = 5;
    Eigen::Index max_m = 3;
    Eigen::Index max_p = 3;
    Eigen::Index max_T = 40;
};

/// Aggregate counts of property violations over randomized trials.
struct HarnessReport {
    int trials = 0;
    std::uint64_t seed = 0;
    int rho_vs_delta = 0;          // rho_k >= delta_k failed
    int lag_lower_bound = 0;       // q <= l_true failed (with T >= l_true + 1)
    int dim_lower_bound = 0;       // n_true >= n_min or the lag gap failed
    int identify_contract = 0;     // identified system broke its contract
    int informative_mismatch = 0;  // informative but not (l,n) match + isomorphic
    int pe_implies_main = 0;       // fundamental-lemma verdict not covered by main
    int witness_failures = 0;      // non-informative witness did not explain
    int witnesses_built = 0;

    bool clean() const {
        return rho_vs_delta == 0 && lag_lower_bound == 0 && dim_lower_bound == 0 &&
               identify_contract == 0 && informative_mismatch == 0 &&
               pe_implies_main == 0 && witness_failures == 0;
    }
    std::string to_json() const;
};

/// Run seeded random trials: sample a minimal system, simulate, and check
/// the relations between its invariants and the data-derived ones.
HarnessReport harness(int trial_count, const HarnessCaps& caps, std::uint64_t seed,
                      const Tolerance& tol = {});

}  // namespace hankelid
