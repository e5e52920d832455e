#pragma once

#include <string>

#include "hankelid/subspace.hpp"

namespace hankelid {

/// Finite input-output record (u, y) with m inputs, p outputs, T samples.
/// The input signal must not be identically zero.
class IOTrajectory {
public:
    IOTrajectory(Mat u, Mat y);

    Eigen::Index m() const { return u_.rows(); }
    Eigen::Index p() const { return y_.rows(); }
    Eigen::Index T() const { return u_.cols(); }

    const Mat& u() const { return u_; }
    const Mat& y() const { return y_; }

private:
    Mat u_;  // m x T
    Mat y_;  // p x T
};

/// State record with T+1 columns; n = 0 is a legal (memoryless) value.
struct StateTrajectory {
    Mat x;  // n x (T+1)

    Eigen::Index n() const { return x.rows(); }
};

/// Truncation to the first t samples.
IOTrajectory prefix(const IOTrajectory& traj, Eigen::Index t);

/// Block-Hankel matrix with depth k+1: block (r, c) is column c+r of f.
Mat hankel(const Mat& f, Eigen::Index k);

/// H_k: hankel(u, k) stacked over hankel(y, k).
Mat build_H(const IOTrajectory& traj, Eigen::Index k);

/// G_k: H_k with its final p rows removed.
Mat build_G(const IOTrajectory& traj, Eigen::Index k);

/// J_k(x): the first T-k state columns stacked over hankel(u, k).
Mat build_J(const StateTrajectory& x, const IOTrajectory& traj, Eigen::Index k);

enum class FileFormat { Csv, Json };

/// Format deduced from the extension (.json -> Json, otherwise Csv).
FileFormat format_from_path(const std::string& path);

IOTrajectory load_trajectory(const std::string& path, FileFormat format);
void save_trajectory(const IOTrajectory& traj, const std::string& path,
                     FileFormat format);

}  // namespace hankelid
