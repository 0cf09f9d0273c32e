#include "hrkl/clustering.hpp"

#include "hrkl/errors.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <map>

namespace hrkl {

namespace {

/// One row of the condensed tree: `child` is a point (< J) or a cluster id.
struct CondensedEdge {
    std::size_t parent;
    std::size_t child;
    double lambda;
    std::size_t size;
};

struct CondensedTree {
    std::size_t points = 0;
    std::size_t root = 0;        // cluster ids start at `points`
    std::size_t clusters = 0;    // number of cluster ids issued
    std::vector<CondensedEdge> edges;
};

std::vector<std::size_t> descendants_bfs(const Dendrogram& d, std::size_t node) {
    const std::size_t J = d.leaves;
    std::vector<std::size_t> out{node};
    for (std::size_t k = 0; k < out.size(); ++k) {
        const std::size_t n = out[k];
        if (n >= J) {
            out.push_back(d.merges[n - J].left);
            out.push_back(d.merges[n - J].right);
        }
    }
    return out;
}

CondensedTree condense(const Dendrogram& d, std::size_t min_cluster_size) {
    const std::size_t J = d.leaves;
    // 1/0 would be infinite; cap so sums of lambdas stay finite.
    const double lambda_cap = 1e300 / static_cast<double>(J + 1);
    auto lambda_of = [&](double h) { return h > 1.0 / lambda_cap ? 1.0 / h : lambda_cap; };
    auto size_of = [&](std::size_t n) { return n < J ? std::size_t{1} : d.merges[n - J].size; };

    CondensedTree tree;
    tree.points = J;
    tree.root = J;
    const std::size_t top = 2 * J - 2;
    std::vector<std::size_t> relabel(2 * J - 1, 0);
    std::vector<bool> ignore(2 * J - 1, false);
    std::size_t next_label = J;
    relabel[top] = next_label++;

    auto drop_points = [&](std::size_t from, std::size_t parent_label, double lambda) {
        for (std::size_t sub : descendants_bfs(d, from)) {
            if (sub < J) tree.edges.push_back({parent_label, sub, lambda, 1});
            ignore[sub] = true;
        }
    };

    for (std::size_t node : descendants_bfs(d, top)) {
        if (node < J || ignore[node]) continue;
        const Merge& m = d.merges[node - J];
        const double lambda = lambda_of(m.height);
        const std::size_t lc = size_of(m.left), rc = size_of(m.right);
        const std::size_t parent = relabel[node];
        if (lc >= min_cluster_size && rc >= min_cluster_size) {
            relabel[m.left] = next_label++;
            tree.edges.push_back({parent, relabel[m.left], lambda, lc});
            relabel[m.right] = next_label++;
            tree.edges.push_back({parent, relabel[m.right], lambda, rc});
        } else if (lc < min_cluster_size && rc < min_cluster_size) {
            drop_points(m.left, parent, lambda);
            drop_points(m.right, parent, lambda);
        } else if (lc < min_cluster_size) {
            relabel[m.right] = parent;
            drop_points(m.left, parent, lambda);
        } else {
            relabel[m.left] = parent;
            drop_points(m.right, parent, lambda);
        }
    }
    tree.clusters = next_label - J;
    return tree;
}

}  // namespace

Eigen::VectorXd core_distances(const Eigen::MatrixXd& distances, std::size_t min_samples) {
    const Eigen::Index J = distances.rows();
    Eigen::VectorXd core(J);
    const auto k = static_cast<std::size_t>(std::clamp<Eigen::Index>(
        static_cast<Eigen::Index>(min_samples) - 1, 0, J - 1));
    std::vector<double> row(static_cast<std::size_t>(J));
    for (Eigen::Index i = 0; i < J; ++i) {
        for (Eigen::Index j = 0; j < J; ++j) row[static_cast<std::size_t>(j)] = i == j ? 0.0 : distances(i, j);
        std::nth_element(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(k), row.end());
        core[i] = row[k];
    }
    return core;
}

Eigen::MatrixXd mutual_reachability(const Eigen::MatrixXd& distances, std::size_t min_samples) {
    const Eigen::VectorXd core = core_distances(distances, min_samples);
    const Eigen::Index J = distances.rows();
    Eigen::MatrixXd mr(J, J);
    for (Eigen::Index i = 0; i < J; ++i)
        for (Eigen::Index j = 0; j < J; ++j)
            mr(i, j) = i == j ? 0.0 : std::max({distances(i, j), core[i], core[j]});
    return mr;
}

ClusterLabels hdbscan(const Eigen::MatrixXd& distances, const HdbscanOptions& options) {
    if (options.min_cluster_size < 2) throw ValidationError("min_cluster_size must be >= 2");
    if (distances.rows() != distances.cols()) throw ValidationError("distance matrix must be square");
    const auto J = static_cast<std::size_t>(distances.rows());

    ClusterLabels out;
    out.labels.assign(J, kOutlier);
    if (J < options.min_cluster_size || J < 2) return out;

    const std::size_t min_samples = options.min_samples ? options.min_samples : options.min_cluster_size;
    const Dendrogram hierarchy = single_linkage(mutual_reachability(distances, min_samples));
    const CondensedTree tree = condense(hierarchy, options.min_cluster_size);

    // Stability: sum over children of (lambda - birth lambda) * size.
    const std::size_t C = tree.clusters;
    std::vector<double> birth(C, 0.0), stability(C, 0.0);
    std::vector<std::size_t> parent_of(C, tree.root);
    std::vector<std::vector<std::size_t>> child_clusters(C);
    for (const auto& e : tree.edges) {
        if (e.child >= J) {
            birth[e.child - J] = e.lambda;
            parent_of[e.child - J] = e.parent;
            child_clusters[e.parent - J].push_back(e.child);
        }
    }
    for (const auto& e : tree.edges)
        stability[e.parent - J] += (e.lambda - birth[e.parent - J]) * static_cast<double>(e.size);

    // Excess of mass, leaves upward. The root is never selected.
    std::vector<bool> selected(C, true);
    selected[0] = false;
    for (std::size_t c = C; c-- > 1;) {
        double subtree = 0.0;
        for (std::size_t child : child_clusters[c]) subtree += stability[child - J];
        if (subtree > stability[c]) {
            selected[c] = false;
            stability[c] = subtree;
        } else {
            std::deque<std::size_t> queue(child_clusters[c].begin(), child_clusters[c].end());
            while (!queue.empty()) {
                const std::size_t s = queue.front();
                queue.pop_front();
                selected[s - J] = false;
                queue.insert(queue.end(), child_clusters[s - J].begin(), child_clusters[s - J].end());
            }
        }
    }

    // A point belongs to the nearest selected ancestor of the cluster it left.
    std::vector<std::size_t> owner(J, tree.root);
    for (const auto& e : tree.edges)
        if (e.child < J) owner[e.child] = e.parent;
    std::map<std::size_t, std::vector<std::size_t>> by_cluster;
    for (std::size_t p = 0; p < J; ++p) {
        std::size_t c = owner[p];
        while (c != tree.root && !selected[c - J]) c = parent_of[c - J];
        if (c != tree.root) by_cluster[c].push_back(p);
    }

    // Number clusters by their smallest member.
    std::vector<std::pair<std::size_t, std::size_t>> order;  // (first member, cluster id)
    for (const auto& [c, members] : by_cluster) order.emplace_back(members.front(), c);
    std::sort(order.begin(), order.end());
    for (const auto& [first, c] : order) {
        for (std::size_t p : by_cluster[c]) out.labels[p] = out.count;
        ++out.count;
    }
    return out;
}

}  // namespace hrkl
