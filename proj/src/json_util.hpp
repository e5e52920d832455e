#pragma once

#include <json.hpp>

#include "hankelid/error.hpp"
#include "hankelid/subspace.hpp"

namespace hankelid::detail {

inline Mat mat_from_json(const nlohmann::json& j, Eigen::Index rows,
                         Eigen::Index cols, const char* name) {
    if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != rows) {
        throw FormatError(std::string("json: bad row count for ") + name);
    }
    Mat M(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const auto& row = j[r];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
            throw FormatError(std::string("json: bad column count for ") + name);
        }
        for (Eigen::Index c = 0; c < cols; ++c) M(r, c) = row[c].get<double>();
    }
    return M;
}

inline nlohmann::json mat_to_json(const Mat& M) {
    nlohmann::json j = nlohmann::json::array();
    for (Eigen::Index r = 0; r < M.rows(); ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index c = 0; c < M.cols(); ++c) row.push_back(M(r, c));
        j.push_back(row);
    }
    return j;
}

}  // namespace hankelid::detail
