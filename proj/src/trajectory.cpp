#include "hankelid/trajectory.hpp"

#include <fstream>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "json_util.hpp"

namespace hankelid {

using detail::mat_from_json;
using detail::mat_to_json;

IOTrajectory::IOTrajectory(Mat u, Mat y) : u_(std::move(u)), y_(std::move(y)) {
    if (u_.rows() < 1 || y_.rows() < 1) {
        throw InvalidInput("IOTrajectory: m and p must be at least 1");
    }
    if (u_.cols() < 1 || u_.cols() != y_.cols()) {
        throw InvalidInput("IOTrajectory: u and y must share T >= 1 samples");
    }
    if (!u_.allFinite() || !y_.allFinite()) {
        throw InvalidInput("IOTrajectory: non-finite entries");
    }
    if (u_.cwiseAbs().maxCoeff() == 0.0) {
        throw InvalidInput("IOTrajectory: input signal is identically zero");
    }
}

IOTrajectory prefix(const IOTrajectory& traj, Eigen::Index t) {
    if (t < 1 || t > traj.T()) {
        throw InvalidInput("prefix: length out of range");
    }
    return IOTrajectory(traj.u().leftCols(t), traj.y().leftCols(t));
}

Mat hankel(const Mat& f, Eigen::Index k) {
    if (k < 0 || k > f.cols() - 1) {
        throw InvalidDepth("hankel: depth index out of range");
    }
    const Eigen::Index rows = f.rows();
    const Eigen::Index cols = f.cols() - k;
    Mat H((k + 1) * rows, cols);
    for (Eigen::Index r = 0; r <= k; ++r) {
        H.middleRows(r * rows, rows) = f.middleCols(r, cols);
    }
    return H;
}

Mat build_H(const IOTrajectory& traj, Eigen::Index k) {
    Mat Hu = hankel(traj.u(), k);
    Mat Hy = hankel(traj.y(), k);
    Mat H(Hu.rows() + Hy.rows(), Hu.cols());
    H << Hu, Hy;
    return H;
}

Mat build_G(const IOTrajectory& traj, Eigen::Index k) {
    Mat H = build_H(traj, k);
    return H.topRows(H.rows() - traj.p());
}

Mat build_J(const StateTrajectory& x, const IOTrajectory& traj, Eigen::Index k) {
    if (k < 0 || k > traj.T() - 1) {
        throw InvalidDepth("build_J: depth index out of range");
    }
    if (x.x.cols() != traj.T() + 1) {
        throw InvalidShape("build_J: state must have T+1 columns");
    }
    Mat Hu = hankel(traj.u(), k);
    Mat J(x.n() + Hu.rows(), Hu.cols());
    if (x.n() > 0) J.topRows(x.n()) = x.x.leftCols(traj.T() - k);
    J.bottomRows(Hu.rows()) = Hu;
    return J;
}

FileFormat format_from_path(const std::string& path) {
    if (path.size() >= 5 && path.substr(path.size() - 5) == ".json") {
        return FileFormat::Json;
    }
    return FileFormat::Csv;
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) out.push_back(field);
    return out;
}

IOTrajectory load_csv(std::istream& in) {
    std::string header;
    if (!std::getline(in, header)) throw FormatError("csv: empty file");
    auto cols = split_csv(header);
    if (cols.empty() || cols[0] != "t") throw FormatError("csv: header must start with t");
    Eigen::Index m = 0, p = 0;
    std::size_t i = 1;
    while (i < cols.size() && cols[i] == "u" + std::to_string(m + 1)) {
        ++m;
        ++i;
    }
    while (i < cols.size() && cols[i] == "y" + std::to_string(p + 1)) {
        ++p;
        ++i;
    }
    if (m < 1 || p < 1 || i != cols.size()) {
        throw FormatError("csv: header must be t,u1..um,y1..yp");
    }
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto fields = split_csv(line);
        if (static_cast<Eigen::Index>(fields.size()) != 1 + m + p) {
            throw FormatError("csv: wrong number of fields in row");
        }
        std::vector<double> vals;
        for (std::size_t j = 1; j < fields.size(); ++j) {
            try {
                vals.push_back(std::stod(fields[j]));
            } catch (const std::exception&) {
                throw FormatError("csv: cannot parse value '" + fields[j] + "'");
            }
        }
        rows.push_back(std::move(vals));
    }
    const Eigen::Index T = static_cast<Eigen::Index>(rows.size());
    if (T < 1) throw FormatError("csv: no samples");
    Mat u(m, T), y(p, T);
    for (Eigen::Index t = 0; t < T; ++t) {
        for (Eigen::Index r = 0; r < m; ++r) u(r, t) = rows[t][r];
        for (Eigen::Index r = 0; r < p; ++r) y(r, t) = rows[t][m + r];
    }
    return IOTrajectory(std::move(u), std::move(y));
}

IOTrajectory load_json(std::istream& in) {
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("json: ") + e.what());
    }
    if (!j.contains("m") || !j.contains("p") || !j.contains("T") ||
        !j.contains("u") || !j.contains("y")) {
        throw FormatError("json: trajectory needs m, p, T, u, y");
    }
    const Eigen::Index m = j["m"].get<Eigen::Index>();
    const Eigen::Index p = j["p"].get<Eigen::Index>();
    const Eigen::Index T = j["T"].get<Eigen::Index>();
    Mat u = mat_from_json(j["u"], m, T, "u");
    Mat y = mat_from_json(j["y"], p, T, "y");
    return IOTrajectory(std::move(u), std::move(y));
}

}  // namespace

IOTrajectory load_trajectory(const std::string& path, FileFormat format) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open " + path);
    try {
        return format == FileFormat::Csv ? load_csv(in) : load_json(in);
    } catch (const InvalidInput& e) {
        throw FormatError(std::string("invalid trajectory in ") + path + ": " + e.what());
    }
}

void save_trajectory(const IOTrajectory& traj, const std::string& path,
                     FileFormat format) {
    std::ofstream out(path);
    if (!out) throw FormatError("cannot open " + path + " for writing");
    if (format == FileFormat::Csv) {
        out << "t";
        for (Eigen::Index i = 1; i <= traj.m(); ++i) out << ",u" << i;
        for (Eigen::Index i = 1; i <= traj.p(); ++i) out << ",y" << i;
        out << "\n";
        for (Eigen::Index t = 0; t < traj.T(); ++t) {
            out << t;
            for (Eigen::Index r = 0; r < traj.m(); ++r) out << "," << traj.u()(r, t);
            for (Eigen::Index r = 0; r < traj.p(); ++r) out << "," << traj.y()(r, t);
            out << "\n";
        }
    } else {
        nlohmann::json j;
        j["m"] = traj.m();
        j["p"] = traj.p();
        j["T"] = traj.T();
        j["u"] = mat_to_json(traj.u());
        j["y"] = mat_to_json(traj.y());
        out << j.dump(2) << "\n";
    }
}

}  // namespace hankelid
