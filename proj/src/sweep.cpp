#include "hrkl/sweep.hpp"

#include "hrkl/csv_io.hpp"
#include "hrkl/errors.hpp"
#include "hrkl/random.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

namespace hrkl {

SweepResult evaluate_all(const Dataset& data, std::span<const KernelExpr> kernels, const SweepConfig& config) {
    if (kernels.empty()) throw ValidationError("no kernels to evaluate");
    if (data.series.empty()) throw ValidationError("dataset is empty");

    const std::size_t J = data.size();
    const std::size_t K = kernels.size();
    SweepResult result;
    result.bic.series_ids = data.ids();
    for (const auto& k : kernels) result.bic.kernels.push_back(canonicalize(k));
    result.bic.values = Eigen::MatrixXd::Constant(static_cast<Eigen::Index>(J), static_cast<Eigen::Index>(K),
                                                  std::numeric_limits<double>::quiet_NaN());
    result.cells.resize(J * K);

    std::atomic<std::size_t> next{0};
    std::exception_ptr fatal;
    std::mutex fatal_mutex;

    auto work = [&] {
        for (std::size_t cell = next++; cell < J * K; cell = next++) {
            const std::size_t j = cell / K, k = cell % K;
            FitConfig cfg = config.fit;
            cfg.seed = derive_seed(config.fit.seed, {j, k});
            CellReport& report = result.cells[cell];
            const auto t0 = std::chrono::steady_clock::now();
            try {
                FittedModel m = fit(kernels[k], data.series[j], cfg);
                result.bic.values(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) = m.bic;
                report.restarts_used = m.restarts_used;
                report.lml = m.lml;
            } catch (const NumericError& e) {
                report.failed = true;
                report.error = e.what();
            } catch (...) {
                std::lock_guard lock(fatal_mutex);
                if (!fatal) fatal = std::current_exception();
                next = J * K;
            }
            report.wall_us =
                std::chrono::duration<double, std::micro>(std::chrono::steady_clock::now() - t0).count();
        }
    };

    const std::size_t workers = std::clamp<std::size_t>(config.workers, 1, J * K);
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    if (fatal) std::rethrow_exception(fatal);

    for (const auto& c : result.cells) result.failed_cells += c.failed ? 1 : 0;
    if (2 * result.failed_cells > J * K)
        throw SweepError(std::to_string(result.failed_cells) + " of " + std::to_string(J * K) +
                         " fits failed");

    if (result.failed_cells > 0) {
        auto& B = result.bic.values;
        double global_worst = -std::numeric_limits<double>::infinity();
        for (Eigen::Index i = 0; i < B.size(); ++i)
            if (std::isfinite(B.data()[i])) global_worst = std::max(global_worst, B.data()[i]);
        for (Eigen::Index j = 0; j < B.rows(); ++j) {
            double worst = -std::numeric_limits<double>::infinity();
            for (Eigen::Index k = 0; k < B.cols(); ++k)
                if (std::isfinite(B(j, k))) worst = std::max(worst, B(j, k));
            // A row with no successful fit falls back to the matrix-wide worst.
            const double sentinel = (std::isfinite(worst) ? worst : global_worst) + 10.0;
            for (Eigen::Index k = 0; k < B.cols(); ++k)
                if (!std::isfinite(B(j, k))) B(j, k) = sentinel;
        }
    }
    return result;
}

void write_bic_csv(const BicMatrix& b, const std::filesystem::path& path) {
    write_matrix_csv({b.series_ids, b.kernels, b.values}, path, "series_id");
}

BicMatrix read_bic_csv(const std::filesystem::path& path) {
    LabeledMatrix m = read_matrix_csv(path);
    BicMatrix b;
    b.series_ids = std::move(m.row_ids);
    b.values = std::move(m.values);
    // Column headers are normalized to canonical kernel strings.
    for (const auto& c : m.col_ids) b.kernels.push_back(canonicalize(parse_kernel(c)));
    return b;
}

}  // namespace hrkl
