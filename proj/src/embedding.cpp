#include "hrkl/embedding.hpp"

#include "hrkl/csv_io.hpp"
#include "hrkl/errors.hpp"

#include <algorithm>
#include <cmath>

namespace hrkl {

Embedding standardize_rows(const BicMatrix& B) {
    if (B.values.cols() < 2) throw ValidationError("embedding needs at least two kernels");
    Embedding emb;
    emb.series_ids = B.series_ids;
    emb.kernels = B.kernels;
    emb.E = Eigen::MatrixXd::Zero(B.values.rows(), B.values.cols());
    const double k = static_cast<double>(B.values.cols());
    for (Eigen::Index j = 0; j < B.values.rows(); ++j) {
        const auto row = B.values.row(j);
        const double mean = row.sum() / k;
        const double sd = std::sqrt((row.array() - mean).square().sum() / k);
        if (!(sd >= 1e-12)) {
            emb.degenerate_rows.push_back(static_cast<std::size_t>(j));
            continue;
        }
        emb.E.row(j) = (row.array() - mean) / sd;
    }
    return emb;
}

DistanceMatrix cosine_distances(const Embedding& emb) {
    const Eigen::Index J = emb.E.rows();
    DistanceMatrix d;
    d.ids = emb.series_ids;
    d.metric = Metric::Cosine;
    d.P = Eigen::MatrixXd::Zero(J, J);
    const Eigen::VectorXd norms = emb.E.rowwise().norm();
    std::vector<bool> zero(static_cast<std::size_t>(J));
    for (Eigen::Index i = 0; i < J; ++i) {
        zero[static_cast<std::size_t>(i)] = !(norms[i] > 0.0);
        if (zero[static_cast<std::size_t>(i)]) d.flagged_rows.push_back(static_cast<std::size_t>(i));
    }
    for (Eigen::Index i = 0; i < J; ++i) {
        for (Eigen::Index j = i + 1; j < J; ++j) {
            double v = 1.0;
            if (!zero[static_cast<std::size_t>(i)] && !zero[static_cast<std::size_t>(j)])
                v = std::clamp(1.0 - emb.E.row(i).dot(emb.E.row(j)) / (norms[i] * norms[j]), 0.0, 2.0);
            d.P(i, j) = d.P(j, i) = v;
        }
    }
    return d;
}

DistanceMatrix euclidean_distances(const Embedding& emb) {
    const Eigen::Index J = emb.E.rows();
    DistanceMatrix d;
    d.ids = emb.series_ids;
    d.metric = Metric::Euclidean;
    d.P = Eigen::MatrixXd::Zero(J, J);
    for (Eigen::Index i = 0; i < J; ++i)
        for (Eigen::Index j = i + 1; j < J; ++j) d.P(i, j) = d.P(j, i) = (emb.E.row(i) - emb.E.row(j)).norm();
    for (auto r : emb.degenerate_rows) d.flagged_rows.push_back(r);
    return d;
}

void write_embedding_csv(const Embedding& emb, const std::filesystem::path& path) {
    write_matrix_csv({emb.series_ids, emb.kernels, emb.E}, path, "series_id");
}

void write_distance_csv(const DistanceMatrix& d, const std::filesystem::path& path) {
    write_matrix_csv({d.ids, d.ids, d.P}, path, "series_id");
}

DistanceMatrix read_distance_csv(const std::filesystem::path& path) {
    LabeledMatrix m = read_matrix_csv(path);
    if (m.values.rows() != m.values.cols() || m.row_ids != m.col_ids)
        throw ValidationError("distance matrix must be square with matching row and column ids");
    for (Eigen::Index i = 0; i < m.values.rows(); ++i)
        for (Eigen::Index j = 0; j < m.values.cols(); ++j)
            if (m.values(i, j) < 0.0 || std::abs(m.values(i, j) - m.values(j, i)) > 1e-12)
                throw ValidationError("distance matrix must be symmetric and non-negative");
    DistanceMatrix d;
    d.ids = std::move(m.row_ids);
    d.P = std::move(m.values);
    return d;
}

}  // namespace hrkl
