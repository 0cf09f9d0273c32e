#include "hrkl/embedding.hpp"
#include "hrkl/errors.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <random>

using namespace hrkl;

namespace {

BicMatrix matrix(const Eigen::MatrixXd& v) {
    BicMatrix b;
    for (Eigen::Index j = 0; j < v.rows(); ++j) b.series_ids.push_back("s" + std::to_string(j));
    for (Eigen::Index k = 0; k < v.cols(); ++k) b.kernels.push_back("K" + std::to_string(k));
    b.values = v;
    return b;
}

}  // namespace

TEST_CASE("standardize_rows z-scores each row") {
    Eigen::MatrixXd v(2, 3);
    v << 1, 2, 3, 4, 4, 4;
    const Embedding e = standardize_rows(matrix(v));
    CHECK(e.E(0, 0) == doctest::Approx(-1.2247).epsilon(1e-4));
    CHECK(e.E(0, 1) == doctest::Approx(0.0));
    CHECK(e.E(0, 2) == doctest::Approx(1.2247).epsilon(1e-4));
    CHECK(e.E.row(1).isZero(0.0));
    CHECK(e.degenerate_rows == std::vector<std::size_t>{1});
    CHECK_THROWS_AS(standardize_rows(matrix(Eigen::MatrixXd::Ones(3, 1))), ValidationError);
}

TEST_CASE("standardize_rows is affine invariant per row") {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> nd;
    Eigen::MatrixXd v(5, 12), w(5, 12);
    for (Eigen::Index j = 0; j < 5; ++j) {
        const double a = std::exp(nd(rng)), c = 100 * nd(rng);
        for (Eigen::Index k = 0; k < 12; ++k) {
            v(j, k) = nd(rng);
            w(j, k) = a * v(j, k) + c;
        }
    }
    const Embedding ev = standardize_rows(matrix(v)), ew = standardize_rows(matrix(w));
    CHECK((ev.E - ew.E).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("cosine distance special cases") {
    Embedding e;
    e.series_ids = {"a", "b", "c", "d", "z"};
    e.kernels = {"K0", "K1", "K2"};
    e.E.resize(5, 3);
    e.E << 1, 0, 0,
           0, 1, 0,
           -1, 0, 0,
           2, 0, 0,
           0, 0, 0;
    e.degenerate_rows = {4};
    const DistanceMatrix d = cosine_distances(e);
    CHECK(d.P(0, 1) == doctest::Approx(1.0));
    CHECK(d.P(0, 2) == doctest::Approx(2.0));
    CHECK(d.P(0, 3) == doctest::Approx(0.0));
    CHECK(d.P(0, 4) == 1.0);
    CHECK(d.P(4, 4) == 0.0);
    CHECK(d.P == d.P.transpose());
    CHECK(d.flagged_rows == std::vector<std::size_t>{4});
    CHECK(d.P.minCoeff() >= 0.0);
    CHECK(d.P.maxCoeff() <= 2.0);
}

TEST_CASE("euclidean distances") {
    Embedding e;
    e.series_ids = {"a", "b"};
    e.kernels = {"K0", "K1"};
    e.E.resize(2, 2);
    e.E << 0, 0, 3, 4;
    const DistanceMatrix d = euclidean_distances(e);
    CHECK(d.P(0, 1) == doctest::Approx(5.0));
    CHECK(d.P(0, 0) == 0.0);
    CHECK(d.metric == Metric::Euclidean);
}

TEST_CASE("distance csv round trip and validation") {
    testutil::TempDir dir("emb");
    Eigen::MatrixXd v(3, 4);
    v << 1, 5, 2, 8, 3, 1, 4, 1, 5, 9, 2, 6;
    const Embedding e = standardize_rows(matrix(v));
    const DistanceMatrix d = cosine_distances(e);
    write_distance_csv(d, dir / "d.csv");
    const DistanceMatrix back = read_distance_csv(dir / "d.csv");
    CHECK(back.ids == d.ids);
    CHECK(back.P == d.P);
    write_embedding_csv(e, dir / "e.csv");
    CHECK(testutil::read_file(dir / "e.csv").rfind("series_id,K0,K1,K2,K3\n", 0) == 0);

    testutil::write_file(dir / "asym.csv", "series_id,a,b\na,0,1\nb,2,0\n");
    CHECK_THROWS_AS(read_distance_csv(dir / "asym.csv"), ValidationError);
    testutil::write_file(dir / "neg.csv", "series_id,a,b\na,0,-1\nb,-1,0\n");
    CHECK_THROWS_AS(read_distance_csv(dir / "neg.csv"), ValidationError);
    testutil::write_file(dir / "rect.csv", "series_id,a,b\na,0,1\n");
    CHECK_THROWS_AS(read_distance_csv(dir / "rect.csv"), ValidationError);
}
