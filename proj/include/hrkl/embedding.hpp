#pragma once

#include "hrkl/sweep.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace hrkl {

/// Row-standardized BIC matrix. Degenerate (constant) rows are all zero.
struct Embedding {
    std::vector<std::string> series_ids;
    std::vector<std::string> kernels;
    Eigen::MatrixXd E;
    std::vector<std::size_t> degenerate_rows;
};

enum class Metric { Euclidean, Cosine };

struct DistanceMatrix {
    std::vector<std::string> ids;
    Eigen::MatrixXd P;  // symmetric, zero diagonal
    Metric metric = Metric::Cosine;
    /// Rows whose distances were set by convention (zero embedding rows).
    std::vector<std::size_t> flagged_rows;

    std::size_t size() const noexcept { return ids.size(); }
};

/// z-scores every row with the population standard deviation; rows with
/// std < 1e-12 become zero rows. Requires at least two columns.
Embedding standardize_rows(const BicMatrix& B);

/// P[i][j] = 1 - cos(e_i, e_j), clamped to [0, 2]. A pair involving a zero
/// row gets distance 1.
DistanceMatrix cosine_distances(const Embedding& emb);

DistanceMatrix euclidean_distances(const Embedding& emb);

void write_embedding_csv(const Embedding& emb, const std::filesystem::path& path);
void write_distance_csv(const DistanceMatrix& d, const std::filesystem::path& path);
/// Reads a square matrix CSV whose column headers repeat the row ids.
DistanceMatrix read_distance_csv(const std::filesystem::path& path);

}  // namespace hrkl
