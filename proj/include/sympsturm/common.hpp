#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace sympsturm {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

constexpr double kDefaultTol = 1e-8;

// Largest absolute entry, 0 for an empty matrix.
inline double max_abs(const Mat& M) { return M.size() ? M.cwiseAbs().maxCoeff() : 0.0; }

// Malformed input: wrong shapes, non-symplectic data, schema violations.
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Path meets the reference on a whole segment; no index is assigned.
struct DegeneratePathError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The sampling or discretization was too coarse to resolve the answer.
struct RefinementError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UnsupportedError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PreconditionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace sympsturm
