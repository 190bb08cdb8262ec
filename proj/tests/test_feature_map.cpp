#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "eln/feature_map.hpp"

using namespace eln;

TEST_CASE("sigmoid range and fixed points") {
    CHECK(sigmoid(0.0) == 0.5);
    CHECK(sigmoid(40.0) == Catch::Approx(1.0).margin(1e-12));
    CHECK(sigmoid(-40.0) == Catch::Approx(0.0).margin(1e-12));
    Rng rng(1);
    for (int i = 0; i < 100; ++i) {
        const double s = sigmoid(rng.uniform(-30.0, 30.0));
        CHECK(s > 0.0);
        CHECK(s < 1.0);
    }
}

TEST_CASE("linear map is the identity on rows") {
    const FeatureMap fm = FeatureMap::linear(3);
    CHECK(fm.output_dim() == 3);
    Eigen::VectorXd x(3);
    x << 1.0, -2.0, 0.5;
    const Eigen::RowVectorXd h = fm.map_row(x);
    CHECK(h == x.transpose());

    Eigen::MatrixXd batch(2, 3);
    batch << 1, 2, 3, 4, 5, 6;
    CHECK(fm.design_matrix(batch) == batch);
}

TEST_CASE("random hidden layer is deterministic per seed and bounded") {
    const FeatureMap a = FeatureMap::rvflnn(4, 200, 77u);
    const FeatureMap b = FeatureMap::rvflnn(4, 200, 77u);
    const FeatureMap c = FeatureMap::rvflnn(4, 200, 78u);
    CHECK(a.weights() == b.weights());
    CHECK(a.biases() == b.biases());
    CHECK(a.weights() != c.weights());

    CHECK(a.weights().minCoeff() >= -1.0);
    CHECK(a.weights().maxCoeff() <= 1.0);
    CHECK(a.biases().minCoeff() >= 0.0);
    CHECK(a.biases().maxCoeff() <= 1.0);
    CHECK(a.output_dim() == 204);
}

TEST_CASE("direct link carries the raw input; hidden outputs stay in (0,1)") {
    const FeatureMap fm = FeatureMap::rvflnn(2, 5, 3u);
    Eigen::VectorXd x(2);
    x << -1.5, 2.0;
    const Eigen::RowVectorXd h = fm.map_row(x);
    REQUIRE(h.size() == 7);
    CHECK(h(0) == -1.5);
    CHECK(h(1) == 2.0);
    for (int k = 2; k < 7; ++k) {
        CHECK(h(k) > 0.0);
        CHECK(h(k) < 1.0);
    }
}

TEST_CASE("zero hidden weights give constant one-half activations") {
    // K = 0 degenerates to the linear map
    const FeatureMap none = FeatureMap::rvflnn(3, 0, 1u);
    Eigen::VectorXd x(3);
    x << 1.0, 2.0, 3.0;
    CHECK(none.map_row(x) == x.transpose());

    // at x = 0 the activations are sigmoid(b) regardless of W
    const FeatureMap fm = FeatureMap::rvflnn(2, 4, 9u);
    const Eigen::RowVectorXd h = fm.map_row(Eigen::VectorXd::Zero(2));
    for (int k = 0; k < 4; ++k)
        CHECK(h(2 + k) == Catch::Approx(sigmoid(fm.biases()(k))).epsilon(1e-15));
}

TEST_CASE("radial map has unit response at its anchors") {
    Eigen::MatrixXd anchors(3, 2);
    anchors << 0, 0, 1, 1, -2, 3;
    const FeatureMap fm = FeatureMap::rbf(anchors, 0.7);
    CHECK(fm.output_dim() == 3);
    for (int k = 0; k < 3; ++k) {
        const Eigen::RowVectorXd h = fm.map_row(anchors.row(k).transpose());
        CHECK(h(k) == 1.0);
        for (int j = 0; j < 3; ++j) {
            CHECK(h(j) > 0.0);
            CHECK(h(j) <= 1.0);
        }
    }
    // closed form at a known offset
    Eigen::VectorXd x(2);
    x << 0.7, 0.0;
    const double expected = std::exp(-0.49 / (2.0 * 0.49));
    CHECK(fm.map_row(x)(0) == Catch::Approx(expected).epsilon(1e-14));
}

TEST_CASE("feature map input validation") {
    const FeatureMap fm = FeatureMap::linear(2);
    Eigen::VectorXd wrong(3);
    wrong.setZero();
    CHECK_THROWS_AS(fm.map_row(wrong), std::invalid_argument);

    Eigen::VectorXd bad(2);
    bad << 1.0, std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(fm.map_row(bad), std::invalid_argument);

    CHECK_THROWS_AS(FeatureMap::rvflnn(0, 5, 1u), std::invalid_argument);
    CHECK_THROWS_AS(FeatureMap::rbf(Eigen::MatrixXd(0, 2), 1.0), std::invalid_argument);
    CHECK_THROWS_AS(FeatureMap::rbf(Eigen::MatrixXd::Zero(2, 2), 0.0), std::invalid_argument);
}
