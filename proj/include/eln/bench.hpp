#ifndef ELN_BENCH_HPP
#define ELN_BENCH_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "eln/kernels.hpp"
#include "eln/random.hpp"

namespace eln {

// ---------------------------------------------------------------- noise

struct GaussComponent {
    double weight;
    double mean;
    double variance;
};

// v_i = (1 - eta_i) A_i + eta_i B_i with Pr(eta_i = 1) = p_outlier.
// Variances are variances, not standard deviations.
struct NoiseSpec {
    enum class InnerKind { GaussMixture, Gauss, Uniform };

    double p_outlier = 0.0;
    InnerKind inner_kind = InnerKind::Gauss;
    std::vector<GaussComponent> mixture; // GaussMixture
    double inner_mean = 0.0;             // Gauss
    double inner_variance = 1.0;
    double lo = 0.0; // Uniform
    double hi = 1.0;
    double outlier_mean = 0.0;
    double outlier_variance = 100.0;

    void validate() const {
        if (p_outlier < 0.0 || p_outlier > 1.0)
            throw std::invalid_argument("outlier probability must be in [0,1]");
        if (!(outlier_variance > 0.0))
            throw std::invalid_argument("outlier variance must be positive");
        switch (inner_kind) {
        case InnerKind::GaussMixture: {
            if (mixture.empty()) throw std::invalid_argument("empty mixture");
            double total = 0.0;
            for (const auto& c : mixture) {
                if (!(c.weight > 0.0)) throw std::invalid_argument("mixture weight must be positive");
                if (!(c.variance > 0.0)) throw std::invalid_argument("mixture variance must be positive");
                total += c.weight;
            }
            if (std::abs(total - 1.0) > 1e-12)
                throw std::invalid_argument("mixture weights must sum to 1");
            break;
        }
        case InnerKind::Gauss:
            if (!(inner_variance > 0.0)) throw std::invalid_argument("variance must be positive");
            break;
        case InnerKind::Uniform:
            if (!(lo < hi)) throw std::invalid_argument("uniform bounds must satisfy lo < hi");
            break;
        }
    }

    // The four inner-noise cases of the linear-regression benchmark,
    // with p = 0.1 and outliers B ~ N(0, 100).
    static NoiseSpec benchmark_case(int c) {
        NoiseSpec s;
        s.p_outlier = 0.1;
        switch (c) {
        case 1:
            s.inner_kind = InnerKind::GaussMixture;
            s.mixture = {{0.5, -5.0, 0.1}, {0.5, 5.0, 0.1}};
            break;
        case 2:
            s.inner_kind = InnerKind::GaussMixture;
            s.mixture = {{1.0 / 3.0, -3.0, 0.1}, {2.0 / 3.0, 5.0, 0.1}};
            break;
        case 3:
            s.inner_kind = InnerKind::Gauss;
            s.inner_mean = 0.0;
            s.inner_variance = 0.1;
            break;
        case 4:
            s.inner_kind = InnerKind::Uniform;
            s.lo = 0.0;
            s.hi = 1.0;
            break;
        default:
            throw std::invalid_argument("noise case must be 1..4");
        }
        return s;
    }
};

inline std::vector<double> sample_noise(const NoiseSpec& spec, std::size_t n, Rng& rng) {
    spec.validate();
    std::vector<double> v(n);
    for (auto& out : v) {
        if (rng.uniform() < spec.p_outlier) {
            out = rng.normal(spec.outlier_mean, std::sqrt(spec.outlier_variance));
            continue;
        }
        switch (spec.inner_kind) {
        case NoiseSpec::InnerKind::GaussMixture: {
            double u = rng.uniform();
            const GaussComponent* pick = &spec.mixture.back();
            for (const auto& c : spec.mixture) {
                if (u < c.weight) { pick = &c; break; }
                u -= c.weight;
            }
            out = rng.normal(pick->mean, std::sqrt(pick->variance));
            break;
        }
        case NoiseSpec::InnerKind::Gauss:
            out = rng.normal(spec.inner_mean, std::sqrt(spec.inner_variance));
            break;
        case NoiseSpec::InnerKind::Uniform:
            out = rng.uniform(spec.lo, spec.hi);
            break;
        }
    }
    return v;
}

inline std::vector<double> sample_noise(const NoiseSpec& spec, std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    return sample_noise(spec, n, rng);
}

// X rows i.i.d. uniform over [-2,2]^d, y = X beta*
inline std::pair<Eigen::MatrixXd, Eigen::VectorXd>
gen_linear_problem(std::size_t n, const Eigen::VectorXd& beta_star, Rng& rng) {
    Eigen::MatrixXd x(static_cast<Eigen::Index>(n), beta_star.size());
    for (Eigen::Index i = 0; i < x.rows(); ++i)
        for (Eigen::Index j = 0; j < x.cols(); ++j) x(i, j) = rng.uniform(-2.0, 2.0);
    return {x, x * beta_star};
}

inline std::pair<Eigen::MatrixXd, Eigen::VectorXd>
gen_linear_problem(std::size_t n, const Eigen::VectorXd& beta_star, std::uint64_t seed) {
    Rng rng(seed);
    return gen_linear_problem(n, beta_star, rng);
}

// ---------------------------------------------------------------- metrics

// sqrt((1/d) ||beta_hat - beta_star||^2); dimension-agnostic form of the
// benchmark's d = 2 definition
inline double rmsd(const Eigen::VectorXd& beta_hat, const Eigen::VectorXd& beta_star) {
    if (beta_hat.size() != beta_star.size())
        throw std::invalid_argument("rmsd: dimension mismatch");
    return std::sqrt((beta_hat - beta_star).squaredNorm() /
                     static_cast<double>(beta_star.size()));
}

inline double rmse(const Eigen::VectorXd& predictions, const Eigen::VectorXd& targets) {
    if (predictions.size() != targets.size() || targets.size() == 0)
        throw std::invalid_argument("rmse: bad input sizes");
    return std::sqrt((predictions - targets).squaredNorm() /
                     static_cast<double>(targets.size()));
}

inline double accuracy(const std::vector<int>& predicted, const std::vector<int>& truth) {
    if (predicted.size() != truth.size() || truth.empty())
        throw std::invalid_argument("accuracy: bad input sizes");
    std::size_t hits = 0;
    for (std::size_t i = 0; i < truth.size(); ++i)
        if (predicted[i] == truth[i]) ++hits;
    return static_cast<double>(hits) / static_cast<double>(truth.size());
}

// ---------------------------------------------------------------- label noise

struct LabelNoiseSpec {
    double epsilon = 0.0; // flip rate
    int classes = 2;

    void validate() const {
        if (epsilon < 0.0 || epsilon >= 1.0)
            throw std::invalid_argument("label noise rate must be in [0,1)");
        if (classes < 2) throw std::invalid_argument("need at least two classes");
    }
};

// Circulant transition matrix: class i flips to (i+1) mod C with
// probability epsilon, stays put otherwise.
inline std::vector<int> apply_label_noise(const std::vector<int>& labels,
                                          const LabelNoiseSpec& spec, std::uint64_t seed) {
    spec.validate();
    Rng rng(seed);
    std::vector<int> out(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] < 0 || labels[i] >= spec.classes)
            throw std::invalid_argument("label out of range");
        out[i] = (rng.uniform() < spec.epsilon) ? (labels[i] + 1) % spec.classes : labels[i];
    }
    return out;
}

// ---------------------------------------------------------------- datasets

struct Dataset {
    Eigen::MatrixXd x;
    Eigen::MatrixXd y;

    Eigen::Index size() const { return x.rows(); }

    Dataset take(const std::vector<std::size_t>& idx) const {
        Dataset d;
        d.x.resize(static_cast<Eigen::Index>(idx.size()), x.cols());
        d.y.resize(static_cast<Eigen::Index>(idx.size()), y.cols());
        for (std::size_t i = 0; i < idx.size(); ++i) {
            d.x.row(static_cast<Eigen::Index>(i)) = x.row(static_cast<Eigen::Index>(idx[i]));
            d.y.row(static_cast<Eigen::Index>(i)) = y.row(static_cast<Eigen::Index>(idx[i]));
        }
        return d;
    }
};

// Header row, comma separated, last n_targets columns are the targets.
inline Dataset load_csv(const std::string& path, int n_targets = 1) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty CSV: " + path);
    std::vector<std::vector<double>> rows;
    std::size_t width = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                row.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw std::runtime_error("malformed CSV value '" + cell + "' in " + path);
            }
        }
        if (width == 0) width = row.size();
        if (row.size() != width) throw std::runtime_error("ragged CSV row in " + path);
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw std::runtime_error("CSV has no data rows: " + path);
    if (width <= static_cast<std::size_t>(n_targets))
        throw std::runtime_error("CSV has no feature columns: " + path);
    const std::size_t d = width - static_cast<std::size_t>(n_targets);
    Dataset ds;
    ds.x.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(d));
    ds.y.resize(static_cast<Eigen::Index>(rows.size()), n_targets);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < d; ++j)
            ds.x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
        for (int j = 0; j < n_targets; ++j)
            ds.y(static_cast<Eigen::Index>(i), j) = rows[i][d + static_cast<std::size_t>(j)];
    }
    return ds;
}

enum class NormalizeRange { ZeroOne, SymmetricOne };

// Column min-max scaler, fitted on the training portion only.
// Constant columns map to 0 in either range.
struct MinMaxScaler {
    Eigen::VectorXd lo;
    Eigen::VectorXd hi;
    NormalizeRange range = NormalizeRange::ZeroOne;

    static MinMaxScaler fit(const Eigen::MatrixXd& x, NormalizeRange range) {
        MinMaxScaler s;
        s.lo = x.colwise().minCoeff();
        s.hi = x.colwise().maxCoeff();
        s.range = range;
        return s;
    }

    Eigen::MatrixXd apply(const Eigen::MatrixXd& x) const {
        Eigen::MatrixXd out(x.rows(), x.cols());
        for (Eigen::Index j = 0; j < x.cols(); ++j) {
            const double span = hi(j) - lo(j);
            for (Eigen::Index i = 0; i < x.rows(); ++i) {
                if (span == 0.0) {
                    out(i, j) = 0.0;
                } else {
                    const double u = (x(i, j) - lo(j)) / span;
                    out(i, j) = (range == NormalizeRange::ZeroOne) ? u : 2.0 * u - 1.0;
                }
            }
        }
        return out;
    }
};

inline Eigen::VectorXd one_hot(int label, int classes) {
    if (label < 0 || label >= classes) throw std::invalid_argument("label out of range");
    Eigen::VectorXd v = Eigen::VectorXd::Zero(classes);
    v(label) = 1.0;
    return v;
}

inline Eigen::MatrixXd one_hot_matrix(const std::vector<int>& labels, int classes) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(labels.size()), classes);
    for (std::size_t i = 0; i < labels.size(); ++i)
        m(static_cast<Eigen::Index>(i), labels[i]) = 1.0;
    return m;
}

inline std::vector<int> argmax_labels(const Eigen::MatrixXd& scores) {
    std::vector<int> labels(static_cast<std::size_t>(scores.rows()));
    for (Eigen::Index i = 0; i < scores.rows(); ++i) {
        Eigen::Index best;
        scores.row(i).maxCoeff(&best);
        labels[static_cast<std::size_t>(i)] = static_cast<int>(best);
    }
    return labels;
}

inline std::pair<Dataset, Dataset> split(const Dataset& ds, double train_fraction,
                                         std::uint64_t seed) {
    if (!(train_fraction > 0.0) || !(train_fraction < 1.0))
        throw std::invalid_argument("train fraction must be in (0,1)");
    const std::size_t n = static_cast<std::size_t>(ds.size());
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    Rng rng(seed);
    for (std::size_t i = 0; i + 1 < n; ++i) std::swap(idx[i], idx[i + rng.uniform_index(n - i)]);
    const std::size_t n_train = std::max<std::size_t>(
        1, std::min(n - 1, static_cast<std::size_t>(std::llround(train_fraction * n))));
    std::vector<std::size_t> train_idx(idx.begin(), idx.begin() + static_cast<long>(n_train));
    std::vector<std::size_t> test_idx(idx.begin() + static_cast<long>(n_train), idx.end());
    return {ds.take(train_idx), ds.take(test_idx)};
}

// ---------------------------------------------------------------- KDE

inline double kde_gauss(const std::vector<double>& samples, double bandwidth, double x) {
    double acc = 0.0;
    for (double s : samples) acc += gauss(x - s, bandwidth);
    return acc / static_cast<double>(samples.size());
}

inline double silverman_bandwidth(const std::vector<double>& samples) {
    const double n = static_cast<double>(samples.size());
    double mean = std::accumulate(samples.begin(), samples.end(), 0.0) / n;
    double var = 0.0;
    for (double s : samples) var += (s - mean) * (s - mean);
    var /= std::max(1.0, n - 1.0);
    return 1.06 * std::sqrt(var) * std::pow(n, -0.2);
}

// ---------------------------------------------------------------- grid search

struct GridPoint {
    std::vector<std::pair<std::string, double>> values;

    double at(const std::string& name) const {
        for (const auto& [k, v] : values)
            if (k == name) return v;
        throw std::invalid_argument("unknown grid parameter: " + name);
    }
};

struct GridSearchSpec {
    enum class Objective { SumSquaredValidationError, ErrorRate };

    std::vector<std::pair<std::string, std::vector<double>>> grids;
    int folds = 10;
    bool stratified = false;
    Objective objective = Objective::SumSquaredValidationError;
    std::uint64_t seed = 0;

    void validate() const {
        if (folds < 2) throw std::invalid_argument("grid search needs at least 2 folds");
        if (grids.empty()) throw std::invalid_argument("empty grid");
        for (const auto& [name, candidates] : grids)
            if (candidates.empty())
                throw std::invalid_argument("empty candidate list for " + name);
    }
};

struct CvRecord {
    GridPoint point;
    std::vector<double> fold_values;
    double mean = 0.0;
};

struct GridSearchResult {
    GridPoint best;
    double best_objective = 0.0;
    std::vector<CvRecord> table;
};

// TOML-like key/value grid file: one "name = v1,v2,..." per line,
// '#' starts a comment.
inline std::vector<std::pair<std::string, std::vector<double>>>
load_grid_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::vector<std::pair<std::string, std::vector<double>>> grids;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r");
            if (a == std::string::npos) return std::string();
            const auto b = s.find_last_not_of(" \t\r");
            return s.substr(a, b - a + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        if (key.empty()) throw std::runtime_error("grid config line without key: " + line);
        std::vector<double> values;
        std::stringstream ss(line.substr(eq + 1));
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            cell = trim(cell);
            if (cell.empty()) continue;
            try {
                values.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw std::runtime_error("bad grid value '" + cell + "' for " + key);
            }
        }
        if (values.empty()) throw std::runtime_error("empty grid for " + key);
        grids.emplace_back(key, std::move(values));
    }
    return grids;
}

// evaluate(point, train, validation, eval_seed) -> objective value (lower is better)
using CvEvaluator = std::function<double(const GridPoint&, const Dataset&, const Dataset&,
                                         std::uint64_t)>;

namespace detail {

inline std::vector<std::vector<std::size_t>>
make_folds(Eigen::Index n, int folds, bool stratified, const std::vector<int>& labels,
           std::uint64_t seed) {
    std::vector<std::vector<std::size_t>> fold_idx(static_cast<std::size_t>(folds));
    Rng rng(seed);
    if (stratified) {
        if (labels.size() != static_cast<std::size_t>(n))
            throw std::invalid_argument("stratified CV needs one label per row");
        const int classes = *std::max_element(labels.begin(), labels.end()) + 1;
        std::size_t dealt = 0;
        for (int c = 0; c < classes; ++c) {
            std::vector<std::size_t> members;
            for (std::size_t i = 0; i < labels.size(); ++i)
                if (labels[i] == c) members.push_back(i);
            for (std::size_t i = 0; i + 1 < members.size(); ++i)
                std::swap(members[i], members[i + rng.uniform_index(members.size() - i)]);
            for (std::size_t i = 0; i < members.size(); ++i)
                fold_idx[(dealt + i) % static_cast<std::size_t>(folds)].push_back(members[i]);
            dealt += members.size();
        }
    } else {
        std::vector<std::size_t> idx(static_cast<std::size_t>(n));
        std::iota(idx.begin(), idx.end(), 0);
        for (std::size_t i = 0; i + 1 < idx.size(); ++i)
            std::swap(idx[i], idx[i + rng.uniform_index(idx.size() - i)]);
        for (std::size_t i = 0; i < idx.size(); ++i)
            fold_idx[i % static_cast<std::size_t>(folds)].push_back(idx[i]);
    }
    return fold_idx;
}

inline void enumerate_grid(const GridSearchSpec& spec, std::size_t dim, GridPoint& current,
                           std::vector<GridPoint>& out) {
    if (dim == spec.grids.size()) {
        out.push_back(current);
        return;
    }
    for (double v : spec.grids[dim].second) {
        current.values[dim] = {spec.grids[dim].first, v};
        enumerate_grid(spec, dim + 1, current, out);
    }
}

} // namespace detail

// k-fold CV over the cartesian product of the grids; ties go to the
// earliest grid point.
inline GridSearchResult grid_search(const GridSearchSpec& spec, const Dataset& ds,
                                    const std::vector<int>& labels, const CvEvaluator& evaluate) {
    spec.validate();
    if (ds.size() < spec.folds) throw std::invalid_argument("fewer samples than folds");

    std::vector<GridPoint> points;
    GridPoint scratch;
    scratch.values.resize(spec.grids.size());
    detail::enumerate_grid(spec, 0, scratch, points);

    const auto folds = detail::make_folds(ds.size(), spec.folds, spec.stratified, labels,
                                          spec.seed);

    GridSearchResult result;
    result.best_objective = std::numeric_limits<double>::infinity();
    for (std::size_t g = 0; g < points.size(); ++g) {
        CvRecord rec;
        rec.point = points[g];
        for (std::size_t f = 0; f < folds.size(); ++f) {
            std::vector<std::size_t> train_idx;
            for (std::size_t other = 0; other < folds.size(); ++other)
                if (other != f)
                    train_idx.insert(train_idx.end(), folds[other].begin(), folds[other].end());
            const Dataset train = ds.take(train_idx);
            const Dataset valid = ds.take(folds[f]);
            rec.fold_values.push_back(
                evaluate(points[g], train, valid, derive_seed(spec.seed, g, f)));
        }
        rec.mean = std::accumulate(rec.fold_values.begin(), rec.fold_values.end(), 0.0) /
                   static_cast<double>(rec.fold_values.size());
        if (rec.mean < result.best_objective) {
            result.best_objective = rec.mean;
            result.best = rec.point;
        }
        result.table.push_back(std::move(rec));
    }
    return result;
}

} // namespace eln

#endif
