#pragma once

#include "hrkl/embedding.hpp"
#include "hrkl/sweep.hpp"

#include <Eigen/Dense>

#include <span>
#include <string>
#include <vector>

namespace hrkl {

inline constexpr int kOutlier = -1;

/// Flat clustering: labels[j] is -1 (outlier) or in [0, count).
struct ClusterLabels {
    std::vector<int> labels;
    int count = 0;

    std::vector<std::size_t> members(int cluster) const;
    std::size_t outliers() const;
};

struct Merge {
    std::size_t left;
    std::size_t right;
    double height;
    std::size_t size;
};

/// Agglomeration record. Leaves are 0..J-1; the i-th merge creates id J+i.
struct Dendrogram {
    std::size_t leaves = 0;
    std::vector<Merge> merges;
};

// ---------------------------------------------------------------- HDBSCAN

struct HdbscanOptions {
    std::size_t min_cluster_size = 3;
    std::size_t min_samples = 0;  // 0: same as min_cluster_size
};

/// HDBSCAN over a precomputed distance matrix: core distances, mutual
/// reachability, minimum spanning tree, condensed tree, excess-of-mass
/// selection. Points in no selected cluster are labeled -1. Fewer points than
/// min_cluster_size labels everything -1.
ClusterLabels hdbscan(const Eigen::MatrixXd& distances, const HdbscanOptions& options = {});

/// Distance to the min_samples-th nearest point, counting the point itself.
Eigen::VectorXd core_distances(const Eigen::MatrixXd& distances, std::size_t min_samples);

Eigen::MatrixXd mutual_reachability(const Eigen::MatrixXd& distances, std::size_t min_samples);

/// Single-linkage merges from a complete graph with the given edge weights.
/// Equal weights merge in order of the smallest (i, j) index pair.
Dendrogram single_linkage(const Eigen::MatrixXd& weights);

// ---------------------------------------------------------------- HAC

/// Single-linkage agglomerative clustering on embedding rows under `metric`.
Dendrogram hac_single_linkage(const Embedding& points, Metric metric = Metric::Euclidean);

/// Single-linkage agglomerative clustering on a precomputed distance matrix.
Dendrogram hac_single_linkage(const Eigen::MatrixXd& distances);

/// Removes the c-1 highest merges. Components are numbered in order of their
/// smallest member index.
ClusterLabels cut_dendrogram(const Dendrogram& d, std::size_t clusters);

// ---------------------------------------------------------------- selection

/// Column index minimizing the summed BIC over `members`; ties go to the
/// lexicographically smallest kernel string.
std::size_t select_cluster_kernel_index(const BicMatrix& B, std::span<const std::size_t> members);
std::string select_cluster_kernel(const BicMatrix& B, std::span<const std::size_t> members);

/// One kernel for every series (relational kernel learning).
std::string select_shared_kernel(const BicMatrix& B);

struct ClusterDescription {
    int cluster;
    std::vector<std::size_t> members;
    std::string kernel;
    std::vector<std::string> sentences;
};

/// Selected kernel and description for each cluster in `labels`, in cluster order.
std::vector<ClusterDescription> describe_clusters(const BicMatrix& B, const ClusterLabels& labels);

}  // namespace hrkl
