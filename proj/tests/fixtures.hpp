#pragma once

#include "hankelid/identify.hpp"
#include "hankelid/system.hpp"
#include "hankelid/trajectory.hpp"

// Shared golden data: a 3-state, 2-input, 2-output shift-register system and
// the length-14 record it generates from x0 = (1, 1, 0), together with the
// hand-picked annihilator basis and perturbation used in the short-record
// (T = 5) walkthrough.
namespace fixtures {

using hankelid::Mat;
using hankelid::Vec;

inline hankelid::IsoSystem true_system() {
    Mat A(3, 3), B(3, 2), C(2, 3), D(2, 2);
    A << 0, 1, 0,
         0, 0, 1,
         0, 0, 0;
    B << 1, 0,
         0, 1,
         0, 1;
    C << 1, 0, 0,
         0, 1, 0;
    D << 1, 0,
         0, 0;
    return hankelid::IsoSystem(A, B, C, D);
}

inline Vec x0() {
    Vec v(3);
    v << 1, 1, 0;
    return v;
}

inline Mat input14() {
    Mat u(2, 14);
    u << 1, 1, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 1,
         0, 0, 0, 1, 1, 1, 1, 1, 1, 1, 1, 1, 0, 0;
    return u;
}

inline Mat output14() {
    Mat y(2, 14);
    y << 2, 3, 2, 1, 0, 1, 2, 3, 3, 2, 2, 2, 3, 4,
         1, 0, 0, 0, 1, 2, 2, 2, 2, 2, 2, 2, 2, 1;
    return y;
}

inline Mat state15() {
    Mat x(3, 15);
    x << 1, 2, 1, 1, 0, 1, 2, 2, 3, 2, 2, 2, 2, 3, 2,
         1, 0, 0, 0, 1, 2, 2, 2, 2, 2, 2, 2, 2, 1, 0,
         0, 0, 0, 0, 1, 1, 1, 1, 1, 1, 1, 1, 1, 0, 0;
    return x;
}

inline hankelid::IOTrajectory record14() {
    return hankelid::IOTrajectory(input14(), output14());
}

inline hankelid::IOTrajectory record(Eigen::Index T) {
    return hankelid::prefix(record14(), T);
}

/// Hand-picked ladder for the T = 5 prefix: S_0 is trivial and S_1 is the
/// span of two integer annihilator rows [Q_{1,0} Q_{1,1} | P_{1,0} P_{1,1}].
inline hankelid::AnnihilatorLadder handpicked_ladder_T5() {
    hankelid::AnnihilatorLadder ladder;
    ladder.q = 1;
    ladder.m = 2;
    ladder.p = 2;
    ladder.bases.push_back(Mat(0, 4));
    Mat R1(2, 8);
    R1 << -3, -1, -2, 0, 1, 0, 1, 0,
           0, -1,  0, 0, 0, 0, 0, 1;
    ladder.bases.push_back(R1);
    return ladder;
}

/// The 2-state system produced from that ladder at T = 5.
inline hankelid::IsoSystem short_record_system() {
    Mat A(2, 2), B(2, 2), C(2, 2), D(2, 2);
    A << -1, 0,
          0, 0;
    B << 1, 1,
         0, 1;
    C << 1, 0,
         0, 1;
    D << 2, 0,
         0, 0;
    return hankelid::IsoSystem(A, B, C, D);
}

/// The state sequence accompanying short_record_system on the T = 5 prefix.
inline Mat short_record_state() {
    Mat x(2, 6);
    x << 0, 1, 0, 1, 0, 1,
         1, 0, 0, 0, 1, 1;
    return x;
}

/// Perturbation turning short_record_system into a second explaining system.
inline hankelid::PerturbationSpec perturbation_T5() {
    hankelid::PerturbationSpec spec;
    spec.xi = hankelid::RowVec(2);
    spec.xi << -1, -1;
    hankelid::RowVec eta0(2), eta1(2);
    eta0 << 0, 1;
    eta1 << 1, 0;
    spec.etas = {eta0, eta1};
    spec.zeta = Vec(2);
    spec.zeta << 1, 1;
    return spec;
}

/// The perturbed system the T = 5 walkthrough arrives at.
inline hankelid::IsoSystem perturbed_system() {
    Mat A(2, 2), B(2, 2), C(2, 2), D(2, 2);
    A << -2, -1,
         -1, -1;
    B << -2, 2,
         -2, 2;
    C << 1, 0,
         0, 1;
    D << 3, 0,
         1, 0;
    return hankelid::IsoSystem(A, B, C, D);
}

inline double max_abs_diff(const Mat& a, const Mat& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return 1e300;
    if (a.size() == 0) return 0.0;
    return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace fixtures
