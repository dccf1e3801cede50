#include "mssg/dtw.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace mssg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool in_band(std::size_t i, std::size_t j, std::size_t m, std::size_t n, std::size_t band) {
    if (m == 1 || n == 1) return true;
    // |i/(m-1) - j/(n-1)| scaled to the longer side.
    const double lhs = std::abs(static_cast<double>(i) * static_cast<double>(n - 1) -
                                static_cast<double>(j) * static_cast<double>(m - 1));
    const double rhs = static_cast<double>(band) * static_cast<double>(std::max(m - 1, n - 1));
    return lhs <= rhs;
}

void enumerate(const CostMatrix& c, std::size_t i, std::size_t j, double acc, std::vector<AlignmentStep>& current,
               AlignmentPath& best) {
    acc += c(i, j);
    current.push_back({i, j, c(i, j)});
    if (i + 1 == c.rows() && j + 1 == c.cols()) {
        if (best.steps.empty() || acc < best.total_cost) best = {current, acc};
    } else {
        if (i + 1 < c.rows() && j + 1 < c.cols()) enumerate(c, i + 1, j + 1, acc, current, best);
        if (i + 1 < c.rows()) enumerate(c, i + 1, j, acc, current, best);
        if (j + 1 < c.cols()) enumerate(c, i, j + 1, acc, current, best);
    }
    current.pop_back();
}

}  // namespace

CostMatrix::CostMatrix(std::size_t rows, std::size_t cols, std::vector<double> cells)
    : rows_(rows), cols_(cols), cells_(std::move(cells)) {
    if (rows_ == 0 || cols_ == 0) throw Error(ErrorCode::InvalidMatrix, "dimensions", "matrix must be nonempty");
    if (cells_.size() != rows_ * cols_) throw Error(ErrorCode::InvalidMatrix, "cells", "size mismatch");
    for (std::size_t k = 0; k < cells_.size(); ++k) {
        if (!std::isfinite(cells_[k]) || cells_[k] < 0.0) {
            throw Error(ErrorCode::InvalidMatrix,
                        "(" + std::to_string(k / cols_) + ", " + std::to_string(k % cols_) + ")",
                        "cell must be finite and >= 0");
        }
    }
}

CostMatrix CostMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
    const std::size_t m = rows.size();
    const std::size_t n = m ? rows.front().size() : 0;
    std::vector<double> cells;
    for (const auto& r : rows) {
        if (r.size() != n) throw Error(ErrorCode::InvalidMatrix, "rows", "ragged rows");
        cells.insert(cells.end(), r.begin(), r.end());
    }
    return {m, n, std::move(cells)};
}

CostMatrix cost_matrix(const Timeline& a, const Timeline& b, const WeightProfile& w) {
    if (a.empty()) throw Error(ErrorCode::EmptyTimeline, a.id());
    if (b.empty()) throw Error(ErrorCode::EmptyTimeline, b.id());
    w.validate();
    std::vector<FeatureVector> fa, fb;
    fa.reserve(a.size());
    fb.reserve(b.size());
    for (const auto& g : a.frames()) fa.push_back(extract_features(g));
    for (const auto& g : b.frames()) fb.push_back(extract_features(g));

    std::vector<double> cells;
    cells.reserve(fa.size() * fb.size());
    for (const auto& x : fa) {
        for (const auto& y : fb) cells.push_back(feature_distance(x, y, w));
    }
    return {fa.size(), fb.size(), std::move(cells)};
}

std::vector<std::pair<std::size_t, std::size_t>> AlignmentPath::pairs() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    out.reserve(steps.size());
    for (const auto& s : steps) out.emplace_back(s.i, s.j);
    return out;
}

std::optional<std::string> check_path(const AlignmentPath& path, std::size_t rows, std::size_t cols) {
    if (path.steps.empty()) return "empty path";
    if (path.steps.front().i != 0 || path.steps.front().j != 0) return "path does not start at (0, 0)";
    if (path.steps.back().i + 1 != rows || path.steps.back().j + 1 != cols) return "path does not end at (m-1, n-1)";
    double total = 0.0;
    for (std::size_t k = 0; k < path.steps.size(); ++k) {
        total += path.steps[k].cost;
        if (k == 0) continue;
        const auto& p = path.steps[k - 1];
        const auto& s = path.steps[k];
        const std::size_t di = s.i - p.i;
        const std::size_t dj = s.j - p.j;
        if (s.i < p.i || s.j < p.j || di > 1 || dj > 1 || di + dj == 0) {
            return "invalid step at index " + std::to_string(k);
        }
    }
    if (total != path.total_cost) return "total cost does not match step costs";
    return std::nullopt;
}

AlignmentPath dtw_align(const CostMatrix& c, const DtwOptions& options) {
    const std::size_t m = c.rows();
    const std::size_t n = c.cols();
    std::vector<double> acc(m * n, kInf);
    const auto at = [&](std::size_t i, std::size_t j) -> double& { return acc[i * n + j]; };
    const auto allowed = [&](std::size_t i, std::size_t j) {
        return !options.band || in_band(i, j, m, n, *options.band);
    };

    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (!allowed(i, j)) continue;
            if (i == 0 && j == 0) {
                at(0, 0) = c(0, 0);
                continue;
            }
            double best = kInf;
            if (i > 0 && j > 0) best = std::min(best, at(i - 1, j - 1));
            if (i > 0) best = std::min(best, at(i - 1, j));
            if (j > 0) best = std::min(best, at(i, j - 1));
            if (best < kInf) at(i, j) = c(i, j) + best;
        }
    }
    if (!(at(m - 1, n - 1) < kInf)) {
        throw Error(ErrorCode::InvalidMatrix, "band", "no admissible path inside the band");
    }

    std::vector<AlignmentStep> rev;
    std::size_t i = m - 1;
    std::size_t j = n - 1;
    rev.push_back({i, j, c(i, j)});
    while (i > 0 || j > 0) {
        if (i > 0 && j > 0) {
            const double diag = at(i - 1, j - 1);
            const double up = at(i - 1, j);
            const double left = at(i, j - 1);
            if (diag <= up && diag <= left) {
                --i;
                --j;
            } else if (up <= left) {
                --i;
            } else {
                --j;
            }
        } else if (i > 0) {
            --i;
        } else {
            --j;
        }
        rev.push_back({i, j, c(i, j)});
    }

    AlignmentPath path;
    path.steps.assign(rev.rbegin(), rev.rend());
    for (const auto& s : path.steps) path.total_cost += s.cost;
    return path;
}

AlignmentPath brute_force_align(const CostMatrix& c) {
    if (c.rows() + c.cols() > 24) {
        throw Error(ErrorCode::InstanceTooLarge, std::to_string(c.rows()) + "x" + std::to_string(c.cols()),
                    "brute force requires rows + cols <= 24");
    }
    AlignmentPath best;
    std::vector<AlignmentStep> current;
    enumerate(c, 0, 0, 0.0, current, best);
    return best;
}

std::vector<std::size_t> warp_lookup(const AlignmentPath& path, std::size_t i) {
    std::vector<std::size_t> out;
    for (const auto& s : path.steps) {
        if (s.i == i) out.push_back(s.j);
    }
    if (out.empty()) throw Error(ErrorCode::IndexOutOfRange, std::to_string(i), "row not on the path");
    return out;
}

double path_recovery(const AlignmentPath& truth, const AlignmentPath& path, std::size_t tolerance) {
    if (truth.steps.empty()) return 1.0;
    std::size_t hit = 0;
    for (const auto& t : truth.steps) {
        const bool found = std::any_of(path.steps.begin(), path.steps.end(), [&](const AlignmentStep& s) {
            const std::size_t gap = s.i > t.i ? s.i - t.i : t.i - s.i;
            return s.j == t.j && gap <= tolerance;
        });
        if (found) ++hit;
    }
    return static_cast<double>(hit) / static_cast<double>(truth.steps.size());
}

}  // namespace mssg
