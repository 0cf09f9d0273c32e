#include "hrkl/clustering.hpp"

#include "hrkl/errors.hpp"
#include "hrkl/kernel_grammar.hpp"

#include <tuple>

namespace hrkl {

std::size_t select_cluster_kernel_index(const BicMatrix& B, std::span<const std::size_t> members) {
    if (members.empty()) throw ValidationError("cannot select a kernel for an empty cluster");
    if (B.cols() == 0) throw ValidationError("BIC matrix has no kernels");
    // Series are conditionally independent, so a cluster's BIC is the sum of its rows.
    Eigen::VectorXd total = Eigen::VectorXd::Zero(B.values.cols());
    for (std::size_t j : members) {
        if (j >= B.rows()) throw ValidationError("cluster member index out of range");
        total += B.values.row(static_cast<Eigen::Index>(j)).transpose();
    }
    std::size_t best = 0;
    for (std::size_t k = 1; k < B.cols(); ++k) {
        const auto kk = static_cast<Eigen::Index>(k), bb = static_cast<Eigen::Index>(best);
        if (std::tie(total[kk], B.kernels[k]) < std::tie(total[bb], B.kernels[best])) best = k;
    }
    return best;
}

std::string select_cluster_kernel(const BicMatrix& B, std::span<const std::size_t> members) {
    return B.kernels[select_cluster_kernel_index(B, members)];
}

std::string select_shared_kernel(const BicMatrix& B) {
    std::vector<std::size_t> all(B.rows());
    for (std::size_t j = 0; j < all.size(); ++j) all[j] = j;
    return select_cluster_kernel(B, all);
}

std::vector<ClusterDescription> describe_clusters(const BicMatrix& B, const ClusterLabels& labels) {
    if (labels.labels.size() != B.rows()) throw ValidationError("label count does not match BIC rows");
    std::vector<ClusterDescription> out;
    for (int c = 0; c < labels.count; ++c) {
        ClusterDescription d;
        d.cluster = c;
        d.members = labels.members(c);
        if (d.members.empty()) continue;
        d.kernel = select_cluster_kernel(B, d.members);
        d.sentences = describe(parse_kernel(d.kernel));
        out.push_back(std::move(d));
    }
    return out;
}

}  // namespace hrkl
