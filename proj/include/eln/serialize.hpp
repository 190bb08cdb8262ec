#ifndef ELN_SERIALIZE_HPP
#define ELN_SERIALIZE_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "eln/kernels.hpp"
#include "eln/model.hpp"
#include "eln/solver.hpp"

namespace eln {

// JSON document format: {"nodes":[{"kind":..., "params":{...}, "theta":...}]}
// Round trips are lossless for finite doubles.

inline nlohmann::json to_json(const RadialBasis& b) {
    nlohmann::json j;
    switch (b.kind) {
    case BasisKind::Gaussian:
        j["kind"] = "gaussian";
        j["params"] = {{"center", b.center()}, {"width", b.width()}};
        break;
    case BasisKind::Laplacian:
        j["kind"] = "laplacian";
        j["params"] = {{"center", b.center()}, {"width", b.width()}};
        break;
    case BasisKind::GeneralizedGaussian:
        j["kind"] = "generalized_gaussian";
        j["params"] = {{"shape", b.shape()}, {"scale", b.scale()}};
        break;
    case BasisKind::RiskSensitive:
        j["kind"] = "risk_sensitive";
        j["params"] = {{"risk", b.risk()}, {"width", b.width()}};
        break;
    case BasisKind::KernelPPower:
        j["kind"] = "kernel_p_power";
        j["params"] = {{"power", b.power()}, {"width", b.width()}};
        break;
    }
    return j;
}

inline RadialBasis basis_from_json(const nlohmann::json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    const auto& p = j.at("params");
    if (kind == "gaussian")
        return RadialBasis::gaussian(p.at("center").get<double>(), p.at("width").get<double>());
    if (kind == "laplacian")
        return RadialBasis::laplacian(p.at("center").get<double>(), p.at("width").get<double>());
    if (kind == "generalized_gaussian")
        return RadialBasis::generalized_gaussian(p.at("shape").get<double>(),
                                                 p.at("scale").get<double>());
    if (kind == "risk_sensitive")
        return RadialBasis::risk_sensitive(p.at("risk").get<double>(),
                                           p.at("width").get<double>());
    if (kind == "kernel_p_power")
        return RadialBasis::kernel_p_power(p.at("power").get<double>(),
                                           p.at("width").get<double>());
    throw std::invalid_argument("unknown basis kind: " + kind);
}

inline nlohmann::json to_json(const ElnModel& m) {
    nlohmann::json nodes = nlohmann::json::array();
    for (const auto& n : m.nodes()) {
        nlohmann::json jn = to_json(n.basis);
        jn["theta"] = n.theta;
        nodes.push_back(jn);
    }
    return nlohmann::json{{"nodes", nodes}};
}

inline ElnModel model_from_json(const nlohmann::json& j) {
    std::vector<ElnNode> nodes;
    for (const auto& jn : j.at("nodes"))
        nodes.push_back({basis_from_json(jn), jn.at("theta").get<double>()});
    return ElnModel(std::move(nodes));
}

inline nlohmann::json to_json(const FeatureMap& fm) {
    nlohmann::json j;
    j["input_dim"] = fm.input_dim();
    j["output_dim"] = fm.output_dim();
    switch (fm.kind()) {
    case FeatureMap::Kind::Linear:
        j["kind"] = "linear";
        break;
    case FeatureMap::Kind::Rvflnn: {
        j["kind"] = "rvflnn";
        std::vector<std::vector<double>> w;
        for (Eigen::Index r = 0; r < fm.weights().rows(); ++r)
            w.emplace_back(fm.weights().row(r).begin(), fm.weights().row(r).end());
        j["weights"] = w;
        j["biases"] = std::vector<double>(fm.biases().begin(), fm.biases().end());
        break;
    }
    case FeatureMap::Kind::RbfMap: {
        j["kind"] = "rbf";
        std::vector<std::vector<double>> a;
        for (Eigen::Index r = 0; r < fm.anchors().rows(); ++r)
            a.emplace_back(fm.anchors().row(r).begin(), fm.anchors().row(r).end());
        j["anchors"] = a;
        j["width"] = fm.rbf_sigma();
        break;
    }
    }
    return j;
}

inline nlohmann::json to_json(const TrainedModel& tm) {
    nlohmann::json j;
    j["feature_map"] = to_json(tm.map);
    std::vector<std::vector<double>> beta;
    for (Eigen::Index r = 0; r < tm.beta.rows(); ++r)
        beta.emplace_back(tm.beta.row(r).begin(), tm.beta.row(r).end());
    j["beta"] = beta;
    j["bias"] = std::vector<double>(tm.bias.begin(), tm.bias.end());
    j["iterations_used"] = tm.iterations_used;
    j["converged"] = tm.converged;
    if (tm.final_eln) j["final_eln"] = to_json(*tm.final_eln);
    return j;
}

} // namespace eln

#endif
