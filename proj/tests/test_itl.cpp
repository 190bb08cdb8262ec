#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include "eln/itl.hpp"
#include "eln/random.hpp"

using namespace eln;

TEST_CASE("correntropy loss and its variable-center variant") {
    const double sigma = 1.3;
    const ElnModel mcc = make_mcc(sigma);
    REQUIRE(mcc.size() == 1);
    CHECK(mcc.nodes()[0].theta == -1.0);
    Rng rng(1);
    for (int i = 0; i < 30; ++i) {
        const double e = rng.uniform(-6.0, 6.0);
        CHECK(mcc.loss(e) == Catch::Approx(-gauss(e, sigma)).epsilon(1e-14));
    }

    const double c = -0.8;
    const ElnModel vc = make_mcc_vc(sigma, c);
    for (int i = 0; i < 30; ++i) {
        const double e = rng.uniform(-6.0, 6.0);
        CHECK(vc.loss(e) == Catch::Approx(-gauss(e - c, sigma)).epsilon(1e-14));
    }
}

TEST_CASE("generalized correntropy loss") {
    const double alpha = 1.5, lambda = 0.4;
    const ElnModel gmcc = make_gmcc(alpha, lambda);
    Rng rng(2);
    for (int i = 0; i < 30; ++i) {
        const double e = rng.uniform(-6.0, 6.0);
        CHECK(gmcc.loss(e) ==
              Catch::Approx(-std::exp(-lambda * std::pow(std::abs(e), alpha))).epsilon(1e-13));
    }
}

TEST_CASE("risk-sensitive loss") {
    const double lambda = 2.0, sigma = 1.0;
    const ElnModel krsl = make_krsl(lambda, sigma);
    Rng rng(3);
    for (int i = 0; i < 30; ++i) {
        const double e = rng.uniform(-6.0, 6.0);
        const double expected = std::exp(lambda * (1.0 - gauss(e, sigma))) / lambda;
        CHECK(krsl.loss(e) == Catch::Approx(expected).epsilon(1e-13));
    }
    CHECK(krsl.loss(0.0) < krsl.loss(3.0)); // minimum at zero error
}

TEST_CASE("kernel p-power loss") {
    const double p = 3.0, sigma = 1.0;
    const ElnModel kmpe = make_kmpe(p, sigma);
    Rng rng(4);
    for (int i = 0; i < 30; ++i) {
        const double e = rng.uniform(-6.0, 6.0);
        CHECK(kmpe.loss(e) ==
              Catch::Approx(std::pow(1.0 - gauss(e, sigma), p / 2.0)).epsilon(1e-13));
    }
}

TEST_CASE("mixture correntropy losses") {
    const double s1 = 0.8, s2 = 2.0, alpha = 0.3;
    const ElnModel t1 = make_mmcc(s1, s2, alpha, 1);
    Rng rng(5);
    for (int i = 0; i < 30; ++i) {
        const double e = rng.uniform(-6.0, 6.0);
        const double expected = -alpha * gauss(e, s1) - (1.0 - alpha) * gauss(e, s2);
        CHECK(t1.loss(e) == Catch::Approx(expected).epsilon(1e-13));
    }

    const ElnModel t2 = make_mmcc(s1, s2, alpha, 2);
    REQUIRE(t2.size() == 2);
    CHECK(t2.nodes()[1].basis.kind == BasisKind::Laplacian);
    for (int i = 0; i < 30; ++i) {
        const double e = rng.uniform(-6.0, 6.0);
        const double lap = std::exp(-std::abs(e) / s2) / (2.0 * s2);
        const double expected = -alpha * gauss(e, s1) - (1.0 - alpha) * lap;
        CHECK(t2.loss(e) == Catch::Approx(expected).epsilon(1e-13));
    }

    CHECK_THROWS_AS(make_mmcc(s1, s2, alpha, 3), std::invalid_argument);
}

TEST_CASE("entropy loss node layout") {
    const std::vector<double> errors{-1.0, 0.2, 3.0, 0.2};
    const double sigma = 0.9;
    const ElnModel mee = make_mee(errors, sigma);
    REQUIRE(mee.size() == 4);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(mee.nodes()[i].basis.center() == errors[i]);
        CHECK(mee.nodes()[i].basis.width() == Catch::Approx(std::sqrt(2.0) * sigma));
        CHECK(mee.nodes()[i].theta == Catch::Approx(-0.25));
    }
    CHECK_THROWS_AS(make_mee({}, 1.0), std::invalid_argument);
}

TEST_CASE("online quantizer examples") {
    const auto q = ovq_quantize({0.0, 0.1, 5.0}, 0.5);
    CHECK(q.codebook == std::vector<double>{0.0, 5.0});
    CHECK(q.counts == std::vector<std::size_t>{2, 1});

    // zero threshold keeps every distinct sample
    const auto all = ovq_quantize({1.0, 2.0, 3.0, 2.0}, 0.0);
    CHECK(all.codebook == std::vector<double>{1.0, 2.0, 3.0});
    CHECK(all.counts == std::vector<std::size_t>{1, 2, 1});

    // infinite threshold keeps only the first sample as center
    const auto one =
        ovq_quantize({1.0, -7.0, 4.0}, std::numeric_limits<double>::infinity());
    CHECK(one.codebook == std::vector<double>{1.0});
    CHECK(one.counts == std::vector<std::size_t>{3});

    // equidistant samples merge into the earlier center
    const auto tie = ovq_quantize({0.0, 2.0, 1.0}, 1.0);
    CHECK(tie.codebook == std::vector<double>{0.0, 2.0});
    CHECK(tie.counts == std::vector<std::size_t>{2, 1});

    CHECK_THROWS_AS(ovq_quantize({1.0}, -0.1), std::invalid_argument);
}

TEST_CASE("quantized entropy loss weights sum to minus one") {
    Rng rng(6);
    std::vector<double> errors(400);
    for (auto& e : errors) e = rng.normal(0.0, 2.0);
    const ElnModel q = make_qmee(errors, 1.0, 0.5);
    double total = 0.0;
    for (const auto& n : q.nodes()) total += n.theta;
    CHECK(total == Catch::Approx(-1.0).margin(1e-12));
    CHECK(q.size() < errors.size()); // quantization actually compresses
}

TEST_CASE("quantized entropy loss with zero threshold matches the full construction") {
    Rng rng(7);
    std::vector<double> errors(50);
    for (auto& e : errors) e = rng.normal(0.0, 1.0);
    const double w = 1.2;
    const ElnModel q = make_qmee(errors, w, 0.0);
    const ElnModel full = make_mee(errors, w / std::sqrt(2.0));
    REQUIRE(q.size() == full.size());
    auto key = [](const ElnModel& m) {
        std::vector<std::pair<double, double>> k;
        for (const auto& n : m.nodes()) k.emplace_back(n.basis.center(), n.theta);
        std::sort(k.begin(), k.end());
        return k;
    };
    const auto ka = key(q);
    const auto kb = key(full);
    for (std::size_t i = 0; i < ka.size(); ++i) {
        CHECK(ka[i].first == kb[i].first);
        CHECK(ka[i].second == Catch::Approx(kb[i].second).margin(1e-15));
        CHECK(q.nodes()[i].basis.width() == Catch::Approx(w));
    }
}

TEST_CASE("three-center entropy loss") {
    const ElnModel r = make_rmee(0.8, 4.0, 3.0, 3.0, 10.0);
    REQUIRE(r.size() == 3);
    CHECK(r.nodes()[0].basis.center() == 0.0);
    CHECK(r.nodes()[1].basis.center() == -1.0);
    CHECK(r.nodes()[2].basis.center() == 1.0);
    CHECK(r.nodes()[0].theta == Catch::Approx(-0.4));
    // equal side masses keep the loss symmetric
    Rng rng(8);
    for (int i = 0; i < 20; ++i) {
        const double e = rng.uniform(0.0, 5.0);
        CHECK(r.loss(e) == Catch::Approx(r.loss(-e)).epsilon(1e-13));
    }
    CHECK(r.bounded());
    CHECK_THROWS_AS(make_rmee(0.8, 1.0, 1.0, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("multi-kernel correntropy loss") {
    const ElnModel m = make_mmkcc({0.0, 1.0}, {1.0, 2.0}, {0.6, 0.4});
    Rng rng(9);
    for (int i = 0; i < 30; ++i) {
        const double e = rng.uniform(-6.0, 6.0);
        const double expected = -0.6 * gauss(e, 1.0) - 0.4 * gauss(e - 1.0, 2.0);
        CHECK(m.loss(e) == Catch::Approx(expected).epsilon(1e-13));
    }
    CHECK_THROWS_AS(make_mmkcc({0.0}, {1.0}, {1.0}), std::invalid_argument);
    CHECK_THROWS_AS(make_mmkcc({0.0, 1.0}, {1.0}, {0.5, 0.5}), std::invalid_argument);
}

TEST_CASE("mixture weights compose through combine") {
    const double alpha = 0.25, s1 = 0.7, s2 = 3.0;
    const ElnModel mix = make_mmcc(s1, s2, alpha, 1);
    const ElnModel composed = combine({make_mcc(s1), make_mcc(s2)}, {alpha, 1.0 - alpha});
    Rng rng(10);
    for (int i = 0; i < 30; ++i) {
        const double e = rng.uniform(-6.0, 6.0);
        CHECK(mix.loss(e) == Catch::Approx(composed.loss(e)).epsilon(1e-13));
    }
}
