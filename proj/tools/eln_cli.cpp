// Command-line front end: synthetic benchmarks, CSV regression and
// classification, loss-curve dumps, and grid-search selection.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "eln/experiments.hpp"
#include "eln/serialize.hpp"

using namespace eln;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "eln-cli 1.0.0";

struct CommonOpts {
    int noise_case = 3;
    int runs = 1;
    std::uint64_t seed = 1;
    std::string out;
    std::string format = "csv";
    std::string loss = "mse";
    std::string centers = "random";
    SynthParams params;
};

void add_model_flags(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--n", o.params.n, "training sample count");
    cmd->add_option("--m", o.params.node_count, "loss network node count");
    cmd->add_option("--sigma", o.params.sigma, "kernel / reference width");
    cmd->add_option("--gamma1", o.params.gamma1, "loss-fit ridge parameter");
    cmd->add_option("--gamma2", o.params.gamma2, "solver regularization (scaled)");
    cmd->add_option("--epsilon", o.params.epsilon, "width perturbation variance");
    cmd->add_option("--centers", o.centers, "center strategy: all|random|kmeans")
        ->check(CLI::IsMember({"all", "random", "kmeans"}));
    cmd->add_option("--seed", o.seed, "master seed");
    cmd->add_option("--out", o.out, "output file (default stdout)");
    cmd->add_option("--format", o.format, "output format")
        ->check(CLI::IsMember({"csv", "json"}));
}

CenterStrategy parse_centers(const std::string& s) {
    if (s == "all") return CenterStrategy::AllSamples;
    if (s == "random") return CenterStrategy::RandomSample;
    if (s == "kmeans") return CenterStrategy::KMeans;
    throw CLI::ValidationError("--centers", "unknown strategy: " + s);
}

std::vector<SynthMethod> parse_methods(const std::string& list) {
    if (list == "all")
        return {SynthMethod::Mse,  SynthMethod::Mcc,  SynthMethod::Mmcc,
                SynthMethod::MccVc, SynthMethod::Gmcc, SynthMethod::Krsl,
                SynthMethod::Kmpe, SynthMethod::Qmee, SynthMethod::Eln};
    std::vector<SynthMethod> out;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_method(item));
    if (out.empty()) throw std::invalid_argument("empty method list");
    return out;
}

std::string meta_line(const std::string& cmd, const CommonOpts& o) {
    std::ostringstream os;
    os << kVersion << " | cmd=" << cmd << " seed=" << o.seed << " loss=" << o.loss
       << " case=" << o.noise_case << " runs=" << o.runs << " n=" << o.params.n
       << " m=" << o.params.node_count << " sigma=" << o.params.sigma
       << " gamma1=" << o.params.gamma1 << " gamma2=" << o.params.gamma2
       << " epsilon=" << o.params.epsilon << " centers=" << o.centers;
    return os.str();
}

json meta_json(const std::string& cmd, const CommonOpts& o) {
    return json{{"tool", kVersion},       {"command", cmd},
                {"seed", o.seed},         {"loss", o.loss},
                {"case", o.noise_case},   {"runs", o.runs},
                {"n", o.params.n},        {"m", o.params.node_count},
                {"sigma", o.params.sigma},{"gamma1", o.params.gamma1},
                {"gamma2", o.params.gamma2}, {"epsilon", o.params.epsilon},
                {"centers", o.centers}};
}

void write_text(const std::string& out, const std::string& text) {
    if (out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(out);
    if (!f) throw std::runtime_error("cannot write " + out);
    f << text;
}

// errors file: header line, then numeric cells; all columns are pooled
std::vector<double> load_error_samples(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty file: " + path);
    std::vector<double> out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                out.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw std::runtime_error("malformed value '" + cell + "' in " + path);
            }
        }
    }
    if (out.empty()) throw std::runtime_error("no error samples in " + path);
    return out;
}

// ------------------------------------------------------------ subcommands

int cmd_synth_linreg(const CommonOpts& o) {
    const auto methods = parse_methods(o.loss);
    SynthParams p = o.params;
    p.centers = parse_centers(o.centers);

    struct Row {
        std::string method;
        SynthRunStats stats;
    };
    std::vector<Row> rows;
    for (SynthMethod m : methods)
        rows.push_back({method_name(m), run_synth_method(m, o.noise_case, o.runs, p, o.seed)});

    if (o.format == "json") {
        json j;
        j["meta"] = meta_json("synth-linreg", o);
        j["results"] = json::array();
        for (const auto& r : rows)
            j["results"].push_back({{"method", r.method},
                                    {"mean_rmsd", r.stats.mean_rmsd},
                                    {"std_rmsd", r.stats.std_rmsd},
                                    {"mean_seconds", r.stats.mean_seconds}});
        write_text(o.out, j.dump(2) + "\n");
    } else {
        std::ostringstream os;
        os << "# " << meta_line("synth-linreg", o) << "\n";
        os << "method,mean_rmsd,std_rmsd,mean_seconds\n";
        for (const auto& r : rows) {
            char buf[160];
            std::snprintf(buf, sizeof(buf), "%s,%.6g,%.6g,%.6g\n", r.method.c_str(),
                          r.stats.mean_rmsd, r.stats.std_rmsd, r.stats.mean_seconds);
            os << buf;
        }
        write_text(o.out, os.str());
    }
    return 0;
}

FeatureMap make_map(int input_dim, int hidden, std::uint64_t seed) {
    return hidden > 0 ? FeatureMap::rvflnn(input_dim, hidden, seed)
                      : FeatureMap::linear(input_dim);
}

int cmd_regress(const CommonOpts& o, const std::string& train_path,
                const std::string& test_path, int hidden) {
    const Dataset train_raw = load_csv(train_path);
    const Dataset test_raw = load_csv(test_path);
    if (train_raw.x.cols() != test_raw.x.cols())
        throw std::runtime_error("train/test feature dimension mismatch");

    const MinMaxScaler scaler = MinMaxScaler::fit(train_raw.x, NormalizeRange::ZeroOne);
    const Eigen::MatrixXd xtr = scaler.apply(train_raw.x);
    const Eigen::MatrixXd xte = scaler.apply(test_raw.x);

    SynthParams p = o.params;
    p.centers = parse_centers(o.centers);
    const FeatureMap fm =
        make_map(static_cast<int>(xtr.cols()), hidden, derive_seed(o.seed, 0x11));
    const TrainedModel tm = fit_synth_method(parse_method(o.loss), fm, xtr,
                                             train_raw.y.col(0), p, derive_seed(o.seed, 0x22));

    const Eigen::MatrixXd pred = tm.predict_all(xte);
    json j;
    j["meta"] = meta_json("regress", o);
    j["rmse"] = rmse(pred.col(0), test_raw.y.col(0));
    j["train_rmse"] = rmse(tm.predict_all(xtr).col(0), train_raw.y.col(0));
    j["iterations"] = tm.iterations_used;
    j["converged"] = tm.converged;
    write_text(o.out, j.dump(2) + "\n");
    return 0;
}

int cmd_classify(const CommonOpts& o, const std::string& train_path,
                 const std::string& test_path, int hidden, double label_noise) {
    const Dataset train_raw = load_csv(train_path);
    const Dataset test_raw = load_csv(test_path);
    if (train_raw.x.cols() != test_raw.x.cols())
        throw std::runtime_error("train/test feature dimension mismatch");

    auto to_labels = [](const Eigen::MatrixXd& y) {
        std::vector<int> labels(static_cast<std::size_t>(y.rows()));
        for (Eigen::Index i = 0; i < y.rows(); ++i) {
            const double v = y(i, 0);
            if (v != std::floor(v) || v < 0)
                throw std::runtime_error("labels must be non-negative integers");
            labels[static_cast<std::size_t>(i)] = static_cast<int>(v);
        }
        return labels;
    };
    std::vector<int> train_labels = to_labels(train_raw.y);
    const std::vector<int> test_labels = to_labels(test_raw.y);
    int classes = 0;
    for (int l : train_labels) classes = std::max(classes, l + 1);
    for (int l : test_labels) classes = std::max(classes, l + 1);
    if (classes < 2) throw std::runtime_error("need at least two classes");

    if (label_noise > 0.0) {
        LabelNoiseSpec spec;
        spec.epsilon = label_noise;
        spec.classes = classes;
        train_labels = apply_label_noise(train_labels, spec, derive_seed(o.seed, 0x33));
    }

    const MinMaxScaler scaler = MinMaxScaler::fit(train_raw.x, NormalizeRange::ZeroOne);
    const Eigen::MatrixXd xtr = scaler.apply(train_raw.x);
    const Eigen::MatrixXd xte = scaler.apply(test_raw.x);
    const Eigen::MatrixXd ytr = one_hot_matrix(train_labels, classes);

    SynthParams p = o.params;
    p.centers = parse_centers(o.centers);
    const FeatureMap fm =
        make_map(static_cast<int>(xtr.cols()), hidden, derive_seed(o.seed, 0x11));
    const SynthMethod method = parse_method(o.loss);

    TrainedModel tm;
    switch (method) {
    case SynthMethod::Mse:
        tm = fixed_point_fit(fm, xtr, ytr, SolverConfig::ridge(p.gamma2));
        break;
    case SynthMethod::Eln: {
        ElnFitConfig fit = make_eln_fit_config(p, derive_seed(o.seed, 0x44));
        tm = fit_eln_staged(fm, xtr, ytr, fit, p.gamma2, 1e-2, p.qmee_refits,
                            p.max_iterations);
        break;
    }
    case SynthMethod::Qmee: {
        tm = fixed_point_fit(fm, xtr, ytr, SolverConfig::ridge(1e-3));
        const Eigen::MatrixXd h = fm.design_matrix(xtr);
        for (int round = 0; round < p.qmee_refits; ++round) {
            Eigen::MatrixXd residuals = ytr - h * tm.beta;
            residuals.rowwise() -= tm.bias;
            std::vector<double> pooled(residuals.data(),
                                       residuals.data() + residuals.size());
            SolverConfig cfg = SolverConfig::fixed_eln(
                make_qmee(pooled, p.sigma, p.qmee_delta), p.gamma2, true);
            cfg.max_iterations = p.max_iterations;
            tm = fixed_point_fit(fm, xtr, ytr, cfg);
        }
        break;
    }
    default: {
        SolverConfig cfg;
        if (method == SynthMethod::Mcc)
            cfg = SolverConfig::fixed_eln(make_mcc(p.sigma), p.gamma2, true);
        else if (method == SynthMethod::Mmcc)
            cfg = SolverConfig::fixed_eln(make_mmcc(p.sigma, p.sigma2, p.alpha_mix, 1),
                                          p.gamma2, true);
        else if (method == SynthMethod::MccVc)
            cfg = SolverConfig::fixed_eln(make_mcc_vc(p.sigma, p.center), p.gamma2, true);
        else if (method == SynthMethod::Gmcc)
            cfg = SolverConfig::irls(make_gmcc(p.gmcc_alpha, p.gmcc_lambda), p.gamma2);
        else if (method == SynthMethod::Krsl)
            cfg = SolverConfig::irls(make_krsl(p.krsl_lambda, p.sigma), p.gamma2);
        else
            cfg = SolverConfig::irls(make_kmpe(p.kmpe_p, p.sigma), p.gamma2);
        cfg.max_iterations = p.max_iterations;
        tm = fixed_point_fit(fm, xtr, ytr, cfg);
        break;
    }
    }

    json j;
    j["meta"] = meta_json("classify", o);
    j["label_noise"] = label_noise;
    j["classes"] = classes;
    j["acc"] = accuracy(argmax_labels(tm.predict_all(xte)), test_labels);
    j["train_acc"] = accuracy(argmax_labels(tm.predict_all(xtr)), train_labels);
    j["iterations"] = tm.iterations_used;
    j["converged"] = tm.converged;
    write_text(o.out, j.dump(2) + "\n");
    return 0;
}

std::string render_svg(const std::vector<double>& xs, const std::vector<double>& loss,
                       const std::vector<double>& neg_kde) {
    const int w = 640, h = 400, pad = 40;
    double ymin = 1e300, ymax = -1e300;
    for (double v : loss) { ymin = std::min(ymin, v); ymax = std::max(ymax, v); }
    for (double v : neg_kde) { ymin = std::min(ymin, v); ymax = std::max(ymax, v); }
    if (ymax <= ymin) ymax = ymin + 1.0;
    const double xmin = xs.front(), xmax = xs.back();
    auto px = [&](double x) { return pad + (x - xmin) / (xmax - xmin) * (w - 2 * pad); };
    auto py = [&](double y) { return h - pad - (y - ymin) / (ymax - ymin) * (h - 2 * pad); };
    auto polyline = [&](const std::vector<double>& ys, const char* color) {
        std::ostringstream os;
        os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < xs.size(); ++i)
            os << px(xs[i]) << "," << py(ys[i]) << " ";
        os << "\"/>\n";
        return os.str();
    };
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
       << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<line x1=\"" << pad << "\" y1=\"" << h - pad << "\" x2=\"" << w - pad
       << "\" y2=\"" << h - pad << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << pad << "\" y1=\"" << pad << "\" x2=\"" << pad << "\" y2=\""
       << h - pad << "\" stroke=\"black\"/>\n";
    os << polyline(loss, "#1f77b4") << polyline(neg_kde, "#d62728");
    os << "<text x=\"" << w - pad - 170 << "\" y=\"" << pad
       << "\" fill=\"#1f77b4\" font-size=\"13\">fitted loss</text>\n";
    os << "<text x=\"" << w - pad - 170 << "\" y=\"" << pad + 18
       << "\" fill=\"#d62728\" font-size=\"13\">negated density</text>\n";
    os << "</svg>\n";
    return os.str();
}

int cmd_eln_dump(const CommonOpts& o, const std::string& errors_path, double lo, double hi,
                 int steps, const std::string& svg_path) {
    if (!(lo < hi) || steps < 2)
        throw std::runtime_error("need lo < hi and steps >= 2");
    const std::vector<double> errors = load_error_samples(errors_path);

    ElnFitConfig fit;
    fit.node_count = o.params.node_count;
    fit.sigma_ref = o.params.sigma;
    fit.epsilon = o.params.epsilon;
    fit.gamma1 = o.params.gamma1;
    fit.strategy = parse_centers(o.centers);
    fit.seed = o.seed;
    const ElnModel model = fit_eln(errors, fit);

    std::vector<double> xs, loss, neg_kde;
    const double bw = silverman_bandwidth(errors);
    for (int i = 0; i < steps; ++i) {
        const double e = lo + (hi - lo) * i / (steps - 1);
        xs.push_back(e);
        loss.push_back(model.loss(e));
        neg_kde.push_back(-kde_gauss(errors, bw, e));
    }

    if (o.format == "json") {
        json j;
        j["meta"] = meta_json("eln-dump", o);
        j["model"] = to_json(model);
        j["e"] = xs;
        j["loss"] = loss;
        write_text(o.out, j.dump(2) + "\n");
    } else {
        std::ostringstream os;
        os << "# " << meta_line("eln-dump", o) << "\n";
        os << "e,loss\n";
        for (std::size_t i = 0; i < xs.size(); ++i) {
            char buf[80];
            std::snprintf(buf, sizeof(buf), "%.12g,%.12g\n", xs[i], loss[i]);
            os << buf;
        }
        write_text(o.out, os.str());
    }
    if (!svg_path.empty()) write_text(svg_path, render_svg(xs, loss, neg_kde));
    return 0;
}

int cmd_grid_search(const CommonOpts& o, const std::string& data_path,
                    const std::string& config_path, int folds, int hidden) {
    const Dataset ds = load_csv(data_path);
    GridSearchSpec spec;
    spec.grids = load_grid_config(config_path);
    spec.folds = folds;
    spec.seed = o.seed;
    auto apply_param = [](SynthParams& p, const std::string& name, double value) {
        if (name == "sigma" || name == "mmcc_sigma1") p.sigma = value;
        else if (name == "mmcc_sigma2") p.sigma2 = value;
        else if (name == "mmcc_alpha") p.alpha_mix = value;
        else if (name == "mcc_vc_center") p.center = value;
        else if (name == "gmcc_alpha") p.gmcc_alpha = value;
        else if (name == "gmcc_lambda") p.gmcc_lambda = value;
        else if (name == "krsl_lambda") p.krsl_lambda = value;
        else if (name == "kmpe_p") p.kmpe_p = value;
        else if (name == "qmee_delta") p.qmee_delta = value;
        else if (name == "gamma1") p.gamma1 = value;
        else if (name == "gamma2") p.gamma2 = value;
        else if (name == "epsilon") p.epsilon = value;
        else throw std::runtime_error("unsupported grid parameter: " + name);
    };
    {
        SynthParams probe;
        for (const auto& [name, values] : spec.grids) apply_param(probe, name, values.front());
    }

    const SynthMethod method = parse_method(o.loss);
    const FeatureMap fm =
        make_map(static_cast<int>(ds.x.cols()), hidden, derive_seed(o.seed, 0x11));
    const CommonOpts& base = o;
    const auto result = grid_search(
        spec, ds, {},
        [&](const GridPoint& point, const Dataset& train, const Dataset& valid,
            std::uint64_t eval_seed) {
            SynthParams p = base.params;
            p.centers = parse_centers(base.centers);
            for (const auto& [name, value] : point.values) apply_param(p, name, value);
            const TrainedModel tm =
                fit_synth_method(method, fm, train.x, train.y.col(0), p, eval_seed);
            return (tm.predict_all(valid.x).col(0) - valid.y.col(0)).squaredNorm();
        });

    // CV table as CSV (to --out or stdout), best parameters as JSON on stdout
    std::ostringstream os;
    os << "# " << meta_line("grid-search", o) << "\n";
    for (const auto& [name, values] : spec.grids) {
        (void)values;
        os << name << ",";
    }
    os << "mean_sse\n";
    for (const auto& rec : result.table) {
        for (const auto& [name, value] : rec.point.values) {
            (void)name;
            os << value << ",";
        }
        os << rec.mean << "\n";
    }
    write_text(o.out, os.str());

    json best;
    best["meta"] = meta_json("grid-search", o);
    for (const auto& [name, value] : result.best.values) best["best"][name] = value;
    best["best_objective"] = result.best_objective;
    std::cout << best.dump(2) << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{std::string(kVersion) + " — trainable robust loss toolkit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    CommonOpts o;
    std::string train_path, test_path, errors_path, data_path, config_path, svg_path;
    int hidden = 200;
    double label_noise = 0.0;
    double lo = -10.0, hi = 10.0;
    int steps = 401, folds = 10;

    auto* synth = app.add_subcommand("synth-linreg", "impulsive-noise linear regression benchmark");
    synth->add_option("--case", o.noise_case, "noise case 1..4")->check(CLI::Range(1, 4));
    synth->add_option("--runs", o.runs, "seeded repetitions")->check(CLI::PositiveNumber);
    synth->add_option("--loss", o.loss, "comma-separated methods or 'all'");
    add_model_flags(synth, o);

    auto* regress = app.add_subcommand("regress", "fit a CSV regression problem");
    regress->add_option("--train", train_path, "training CSV")->required();
    regress->add_option("--test", test_path, "test CSV")->required();
    regress->add_option("--loss", o.loss, "training loss");
    regress->add_option("--hidden", hidden, "random hidden units (0 = linear)");
    add_model_flags(regress, o);

    auto* classify = app.add_subcommand("classify", "fit a CSV classification problem");
    classify->add_option("--train", train_path, "training CSV (integer label last)")->required();
    classify->add_option("--test", test_path, "test CSV")->required();
    classify->add_option("--loss", o.loss, "training loss");
    classify->add_option("--hidden", hidden, "random hidden units (0 = linear)");
    classify->add_option("--label-noise", label_noise, "training label flip rate")
        ->check(CLI::Range(0.0, 0.999));
    add_model_flags(classify, o);

    auto* dump = app.add_subcommand("eln-dump", "fit a loss to error samples and dump its curve");
    dump->add_option("--errors", errors_path, "error sample CSV (header + values)")->required();
    dump->add_option("--lo", lo, "grid lower bound");
    dump->add_option("--hi", hi, "grid upper bound");
    dump->add_option("--steps", steps, "grid point count");
    dump->add_option("--svg", svg_path, "optional SVG plot path");
    add_model_flags(dump, o);

    auto* grid = app.add_subcommand("grid-search", "k-fold CV over a parameter grid file");
    grid->add_option("--data", data_path, "dataset CSV")->required();
    grid->add_option("--grids", config_path, "grid config file")->required();
    grid->add_option("--loss", o.loss, "training loss");
    grid->add_option("--folds", folds, "CV folds")->check(CLI::Range(2, 1000));
    grid->add_option("--hidden", hidden, "random hidden units (0 = linear)");
    add_model_flags(grid, o);

    // benchmark defaults differ per subcommand
    o.params.gamma2 = 1e-2;

    CLI11_PARSE(app, argc, argv);

    try {
        if (synth->parsed()) return cmd_synth_linreg(o);
        if (regress->parsed()) return cmd_regress(o, train_path, test_path, hidden);
        if (classify->parsed())
            return cmd_classify(o, train_path, test_path, hidden, label_noise);
        if (dump->parsed()) return cmd_eln_dump(o, errors_path, lo, hi, steps, svg_path);
        if (grid->parsed()) return cmd_grid_search(o, data_path, config_path, folds, hidden);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
