#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "mssg/distance.hpp"
#include "mssg/model.hpp"

namespace mssg {

/// Row-major m x n matrix of non-negative, finite frame distances.
class CostMatrix {
public:
    /// Throws InvalidMatrix on a zero dimension, size mismatch, or a negative/non-finite cell.
    CostMatrix(std::size_t rows, std::size_t cols, std::vector<double> cells);
    static CostMatrix from_rows(const std::vector<std::vector<double>>& rows);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    double operator()(std::size_t i, std::size_t j) const { return cells_[i * cols_ + j]; }
    const std::vector<double>& cells() const noexcept { return cells_; }

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<double> cells_;
};

/// cell(i, j) = mssg_distance(a[i], b[j], w). Throws EmptyTimeline.
CostMatrix cost_matrix(const Timeline& a, const Timeline& b, const WeightProfile& w);

struct AlignmentStep {
    std::size_t i = 0;
    std::size_t j = 0;
    double cost = 0.0;

    friend bool operator==(const AlignmentStep&, const AlignmentStep&) = default;
};

/// Monotonic, continuous warping path from (0, 0) to (m-1, n-1).
struct AlignmentPath {
    std::vector<AlignmentStep> steps;
    /// Left fold of step costs in path order.
    double total_cost = 0.0;

    std::vector<std::pair<std::size_t, std::size_t>> pairs() const;

    friend bool operator==(const AlignmentPath&, const AlignmentPath&) = default;
};

/// Checks endpoints, unit steps and the total; nullopt when valid.
std::optional<std::string> check_path(const AlignmentPath& path, std::size_t rows, std::size_t cols);

struct DtwOptions {
    /// Sakoe-Chiba style band around the scaled diagonal, in cells. Unset = unconstrained.
    std::optional<std::size_t> band;
};

/// Classic DTW with the symmetric (diagonal, vertical, horizontal) step pattern.
/// Backtracking prefers diagonal, then vertical (i-1), then horizontal (j-1).
AlignmentPath dtw_align(const CostMatrix& cost, const DtwOptions& options = {});

/// Exhaustive search over every monotonic continuous path; a test oracle.
/// Throws InstanceTooLarge when rows + cols > 24.
AlignmentPath brute_force_align(const CostMatrix& cost);

/// All j matched with row i, ascending. Throws IndexOutOfRange.
std::vector<std::size_t> warp_lookup(const AlignmentPath& path, std::size_t i);

/// Fraction of ground-truth pairs (i, j) for which the path matches column j
/// to some row within `tolerance` of i.
double path_recovery(const AlignmentPath& truth, const AlignmentPath& path, std::size_t tolerance);

}  // namespace mssg
