#include "hrkl/clustering.hpp"

#include "hrkl/errors.hpp"

#include <algorithm>
#include <numeric>
#include <tuple>

namespace hrkl {

namespace {

class DisjointSets {
public:
    explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

    std::size_t find(std::size_t a) {
        while (parent_[a] != a) a = parent_[a] = parent_[parent_[a]];
        return a;
    }

    /// Attaches b's root under a's root.
    void attach(std::size_t a, std::size_t b) { parent_[find(b)] = find(a); }

private:
    std::vector<std::size_t> parent_;
};

}  // namespace

std::vector<std::size_t> ClusterLabels::members(int cluster) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < labels.size(); ++i)
        if (labels[i] == cluster) out.push_back(i);
    return out;
}

std::size_t ClusterLabels::outliers() const {
    return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), kOutlier));
}

Dendrogram single_linkage(const Eigen::MatrixXd& weights) {
    const auto J = static_cast<std::size_t>(weights.rows());
    Dendrogram d;
    d.leaves = J;
    if (J < 2) return d;

    struct Edge {
        double w;
        std::size_t i, j;
    };
    std::vector<Edge> edges;
    edges.reserve(J * (J - 1) / 2);
    for (std::size_t i = 0; i < J; ++i)
        for (std::size_t j = i + 1; j < J; ++j)
            edges.push_back({weights(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)), i, j});
    std::sort(edges.begin(), edges.end(),
              [](const Edge& a, const Edge& b) { return std::tie(a.w, a.i, a.j) < std::tie(b.w, b.i, b.j); });

    DisjointSets sets(J);
    std::vector<std::size_t> node_of(J), size_of(J, 1);
    std::iota(node_of.begin(), node_of.end(), 0);
    for (const auto& e : edges) {
        const std::size_t a = sets.find(e.i), b = sets.find(e.j);
        if (a == b) continue;
        const std::size_t na = node_of[a], nb = node_of[b];
        const std::size_t size = size_of[a] + size_of[b];
        d.merges.push_back({std::min(na, nb), std::max(na, nb), e.w, size});
        sets.attach(a, b);
        node_of[a] = J + d.merges.size() - 1;
        size_of[a] = size;
        if (d.merges.size() == J - 1) break;
    }
    return d;
}

Dendrogram hac_single_linkage(const Eigen::MatrixXd& distances) {
    if (distances.rows() < 2) throw ValidationError("HAC needs at least two points");
    if (distances.rows() != distances.cols()) throw ValidationError("distance matrix must be square");
    return single_linkage(distances);
}

Dendrogram hac_single_linkage(const Embedding& points, Metric metric) {
    const DistanceMatrix d = metric == Metric::Cosine ? cosine_distances(points) : euclidean_distances(points);
    return hac_single_linkage(d.P);
}

ClusterLabels cut_dendrogram(const Dendrogram& d, std::size_t clusters) {
    const std::size_t J = d.leaves;
    if (clusters < 1 || clusters > J)
        throw ValidationError("cluster count " + std::to_string(clusters) + " outside [1, " + std::to_string(J) + "]");
    if (d.merges.size() + 1 != J) throw ValidationError("dendrogram is incomplete");

    // Node ids span leaves and internal merges; union them in one set forest.
    DisjointSets sets(2 * J - 1);
    for (std::size_t m = 0; m + clusters < J; ++m) {
        sets.attach(J + m, d.merges[m].left);
        sets.attach(J + m, d.merges[m].right);
    }
    ClusterLabels out;
    out.labels.assign(J, kOutlier);
    std::vector<int> label_of_root(2 * J - 1, kOutlier);
    for (std::size_t i = 0; i < J; ++i) {
        const std::size_t root = sets.find(i);
        if (label_of_root[root] == kOutlier) label_of_root[root] = out.count++;
        out.labels[i] = label_of_root[root];
    }
    return out;
}

}  // namespace hrkl
