#include <catch2/catch_amalgamated.hpp>

#include <vector>

#include "eln/itl.hpp"
#include "eln/serialize.hpp"

using namespace eln;

namespace {

void check_basis_roundtrip(const RadialBasis& b) {
    const RadialBasis back = basis_from_json(to_json(b));
    CHECK(back.kind == b.kind);
    CHECK(back.p0 == b.p0);
    CHECK(back.p1 == b.p1);
}

} // namespace

TEST_CASE("basis JSON round trips are exact per kind") {
    check_basis_roundtrip(RadialBasis::gaussian(0.123456789012345, 1.75));
    check_basis_roundtrip(RadialBasis::laplacian(-2.5, 0.3));
    check_basis_roundtrip(RadialBasis::generalized_gaussian(1.7, 0.25));
    check_basis_roundtrip(RadialBasis::risk_sensitive(2.0, 1.1));
    check_basis_roundtrip(RadialBasis::kernel_p_power(3.0, 0.9));
}

TEST_CASE("basis JSON uses stable kind names") {
    CHECK(to_json(RadialBasis::gaussian(0.0, 1.0))["kind"] == "gaussian");
    CHECK(to_json(RadialBasis::laplacian(0.0, 1.0))["kind"] == "laplacian");
    CHECK(to_json(RadialBasis::generalized_gaussian(2.0, 1.0))["kind"] ==
          "generalized_gaussian");
    CHECK(to_json(RadialBasis::risk_sensitive(1.0, 1.0))["kind"] == "risk_sensitive");
    CHECK(to_json(RadialBasis::kernel_p_power(2.0, 1.0))["kind"] == "kernel_p_power");

    nlohmann::json bad = to_json(RadialBasis::gaussian(0.0, 1.0));
    bad["kind"] = "cauchy";
    CHECK_THROWS_AS(basis_from_json(bad), std::invalid_argument);
}

TEST_CASE("model JSON round trips preserve every node bit for bit") {
    Rng rng(6);
    for (int rep = 0; rep < 20; ++rep) {
        std::vector<ElnNode> nodes;
        const int m = 1 + static_cast<int>(rng.uniform_index(8));
        for (int j = 0; j < m; ++j)
            nodes.push_back({RadialBasis::gaussian(rng.uniform(-5.0, 5.0),
                                                   rng.uniform(0.2, 4.0)),
                             rng.uniform(-2.0, 2.0)});
        const ElnModel model(std::move(nodes));
        const std::string text = to_json(model).dump();
        const ElnModel back = model_from_json(nlohmann::json::parse(text));
        REQUIRE(back.size() == model.size());
        for (std::size_t j = 0; j < model.size(); ++j) {
            CHECK(back.nodes()[j].basis.center() == model.nodes()[j].basis.center());
            CHECK(back.nodes()[j].basis.width() == model.nodes()[j].basis.width());
            CHECK(back.nodes()[j].theta == model.nodes()[j].theta);
        }
    }
}

TEST_CASE("mixed-kind models survive the round trip") {
    const ElnModel mix = combine({make_mmcc(0.7, 2.0, 0.4, 2), make_gmcc(1.5, 0.3)},
                                 {1.0, 0.5});
    const ElnModel back = model_from_json(to_json(mix));
    REQUIRE(back.size() == mix.size());
    Rng rng(7);
    for (int i = 0; i < 50; ++i) {
        const double e = rng.uniform(-6.0, 6.0);
        CHECK(back.loss(e) == mix.loss(e)); // exact, not approximate
    }
}

TEST_CASE("trained model JSON carries the full state") {
    TrainedModel tm;
    tm.map = FeatureMap::rvflnn(2, 3, 11u);
    tm.beta = Eigen::MatrixXd::Random(5, 2);
    tm.bias = Eigen::RowVectorXd::Constant(2, 0.25);
    tm.iterations_used = 7;
    tm.converged = true;
    tm.final_eln = make_mcc(1.5);

    const nlohmann::json j = to_json(tm);
    CHECK(j["feature_map"]["kind"] == "rvflnn");
    CHECK(j["feature_map"]["input_dim"] == 2);
    CHECK(j["feature_map"]["output_dim"] == 5);
    CHECK(j["feature_map"]["weights"].size() == 3);
    CHECK(j["feature_map"]["biases"].size() == 3);
    CHECK(j["beta"].size() == 5);
    CHECK(j["beta"][0].size() == 2);
    CHECK(j["beta"][4][1].get<double>() == tm.beta(4, 1));
    CHECK(j["bias"][0].get<double>() == 0.25);
    CHECK(j["iterations_used"] == 7);
    CHECK(j["converged"] == true);
    CHECK(j["final_eln"]["nodes"].size() == 1);

    TrainedModel plain;
    plain.map = FeatureMap::linear(1);
    plain.beta = Eigen::MatrixXd::Zero(1, 1);
    plain.bias = Eigen::RowVectorXd::Zero(1);
    CHECK_FALSE(to_json(plain).contains("final_eln"));

    // RBF map metadata
    TrainedModel rbf;
    rbf.map = FeatureMap::rbf(Eigen::MatrixXd::Random(4, 2), 0.8);
    rbf.beta = Eigen::MatrixXd::Zero(4, 1);
    rbf.bias = Eigen::RowVectorXd::Zero(1);
    const nlohmann::json jr = to_json(rbf);
    CHECK(jr["feature_map"]["kind"] == "rbf");
    CHECK(jr["feature_map"]["anchors"].size() == 4);
    CHECK(jr["feature_map"]["width"] == 0.8);
}
