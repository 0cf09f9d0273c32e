#pragma once

#include "hrkl/gp.hpp"
#include "hrkl/kernel_grammar.hpp"
#include "hrkl/series.hpp"

#include <Eigen/Dense>

#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace hrkl {

/// J x K matrix of BIC values: rows are series, columns canonical kernels.
struct BicMatrix {
    std::vector<std::string> series_ids;
    std::vector<std::string> kernels;
    Eigen::MatrixXd values;

    std::size_t rows() const noexcept { return series_ids.size(); }
    std::size_t cols() const noexcept { return kernels.size(); }
};

struct SweepConfig {
    FitConfig fit;
    std::size_t workers = 1;
};

struct CellReport {
    int restarts_used = 0;
    bool failed = false;
    std::string error;
    double lml = 0.0;
    double wall_us = 0.0;
};

struct SweepResult {
    BicMatrix bic;
    std::vector<CellReport> cells;  // row-major, J x K
    std::size_t failed_cells = 0;

    const CellReport& cell(std::size_t j, std::size_t k) const { return cells[j * bic.cols() + k]; }
};

/// Fits every kernel to every series. Cell (j, k) uses a seed derived from
/// (config.fit.seed, j, k), so the result does not depend on `workers`.
/// A failed cell is recorded as its row's worst finite BIC + 10. Throws
/// SweepError when more than half of the cells fail.
SweepResult evaluate_all(const Dataset& data, std::span<const KernelExpr> kernels, const SweepConfig& config);

void write_bic_csv(const BicMatrix& b, const std::filesystem::path& path);
BicMatrix read_bic_csv(const std::filesystem::path& path);

}  // namespace hrkl
