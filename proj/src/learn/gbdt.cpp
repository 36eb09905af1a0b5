#include "tarmac/learn/gbdt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "tarmac/error.hpp"
#include "tarmac/learn/metrics.hpp"

namespace tarmac::learn {

BinMapper BinMapper::fit(const Matrix& x, int max_bins) {
    require(max_bins >= 2 && max_bins <= 256, "BinMapper: max_bins must be in [2, 256]");
    BinMapper m;
    m.edges.resize(x.cols());
    std::vector<double> col(x.rows());
    for (std::size_t f = 0; f < x.cols(); ++f) {
        for (std::size_t r = 0; r < x.rows(); ++r) col[r] = x(r, f);
        std::sort(col.begin(), col.end());
        std::vector<double> distinct(col.begin(), std::unique(col.begin(), col.end()));
        auto& e = m.edges[f];
        if (distinct.size() <= static_cast<std::size_t>(max_bins)) {
            for (std::size_t i = 0; i + 1 < distinct.size(); ++i) e.push_back(distinct[i] + (distinct[i + 1] - distinct[i]) / 2);
            continue;
        }
        const std::size_t n = col.size();
        for (int k = 1; k < max_bins; ++k) {
            std::size_t idx = static_cast<std::size_t>(k) * n / static_cast<std::size_t>(max_bins);
            // Move to the next value change so every edge separates two values.
            while (idx < n && col[idx] == col[idx - 1]) ++idx;
            if (idx >= n) break;
            const double edge = col[idx - 1] + (col[idx] - col[idx - 1]) / 2;
            if (e.empty() || edge > e.back()) e.push_back(edge);
        }
    }
    return m;
}

std::uint8_t BinMapper::bin(std::size_t feature, double value) const {
    const auto& e = edges[feature];
    return static_cast<std::uint8_t>(std::lower_bound(e.begin(), e.end(), value) - e.begin());
}

double RegressionTree::predict_row(std::span<const double> x) const {
    int i = 0;
    while (!nodes[static_cast<std::size_t>(i)].is_leaf()) {
        const TreeNode& n = nodes[static_cast<std::size_t>(i)];
        i = x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right;
    }
    return nodes[static_cast<std::size_t>(i)].value;
}

std::size_t RegressionTree::leaf_count() const {
    return static_cast<std::size_t>(std::count_if(nodes.begin(), nodes.end(), [](const TreeNode& n) { return n.is_leaf(); }));
}

double GbdtModel::predict_row(std::span<const double> x) const {
    double p = initial_prediction;
    for (const auto& t : trees) p += t.predict_row(x);
    return p;
}

std::vector<double> GbdtModel::predict(const Matrix& x) const {
    std::vector<double> out(x.rows());
    for (std::size_t r = 0; r < x.rows(); ++r) out[r] = predict_row(x.row(r));
    return out;
}

namespace {

struct Bin {
    double sum = 0.0;
    std::size_t count = 0;
};

// Histograms for one leaf, feature-major with a fixed stride.
struct Histogram {
    std::vector<Bin> bins;
};

struct Split {
    double gain = 0.0;
    int feature = -1;
    int bin = -1;
};

struct Leaf {
    int node = 0;
    std::vector<std::size_t> rows;
    Histogram hist;
    double sum = 0.0;
    Split best;
};

class TreeBuilder {
public:
    TreeBuilder(const BinMapper& mapper, const std::vector<std::vector<std::uint8_t>>& binned, const GbdtParams& p)
        : mapper_(mapper), binned_(binned), p_(p), features_(binned.size()) {}

    RegressionTree build(const std::vector<double>& residual, std::size_t n_rows) {
        residual_ = &residual;
        RegressionTree tree;
        tree.nodes.emplace_back();
        std::vector<Leaf> leaves(1);
        leaves[0].rows.resize(n_rows);
        std::iota(leaves[0].rows.begin(), leaves[0].rows.end(), 0);
        leaves[0].hist = histogram(leaves[0].rows);
        leaves[0].sum = total(leaves[0].rows);
        leaves[0].best = best_split(leaves[0]);

        while (static_cast<int>(leaves.size()) < p_.num_leaves) {
            // Best-first: highest gain, earliest leaf on ties.
            std::size_t pick = leaves.size();
            for (std::size_t i = 0; i < leaves.size(); ++i)
                if (leaves[i].best.feature >= 0 && (pick == leaves.size() || leaves[i].best.gain > leaves[pick].best.gain))
                    pick = i;
            if (pick == leaves.size()) break;

            Leaf parent = std::move(leaves[pick]);
            const Split s = parent.best;
            const std::size_t f = static_cast<std::size_t>(s.feature);
            Leaf left, right;
            for (std::size_t r : parent.rows) (binned_[f][r] <= s.bin ? left : right).rows.push_back(r);

            // Build the smaller child directly and derive the larger one.
            Leaf& small = left.rows.size() <= right.rows.size() ? left : right;
            Leaf& large = &small == &left ? right : left;
            small.hist = histogram(small.rows);
            large.hist.bins.resize(parent.hist.bins.size());
            for (std::size_t i = 0; i < parent.hist.bins.size(); ++i) {
                large.hist.bins[i].sum = parent.hist.bins[i].sum - small.hist.bins[i].sum;
                large.hist.bins[i].count = parent.hist.bins[i].count - small.hist.bins[i].count;
            }
            left.sum = total(left.rows);
            right.sum = total(right.rows);

            TreeNode& node = tree.nodes[static_cast<std::size_t>(parent.node)];
            node.feature = s.feature;
            node.threshold = mapper_.edges[f][static_cast<std::size_t>(s.bin)];
            node.gain = s.gain;
            node.left = static_cast<int>(tree.nodes.size());
            node.right = node.left + 1;
            left.node = node.left;
            right.node = node.right;
            tree.nodes.emplace_back();
            tree.nodes.emplace_back();

            left.best = best_split(left);
            right.best = best_split(right);
            leaves[pick] = std::move(left);
            leaves.insert(leaves.begin() + static_cast<std::ptrdiff_t>(pick) + 1, std::move(right));
        }

        for (const Leaf& l : leaves)
            tree.nodes[static_cast<std::size_t>(l.node)].value =
                p_.learning_rate * (l.sum / static_cast<double>(l.rows.size()));
        return tree;
    }

private:
    std::size_t stride() const { return 256; }

    double total(const std::vector<std::size_t>& rows) const {
        double s = 0.0;
        for (std::size_t r : rows) s += (*residual_)[r];
        return s;
    }

    Histogram histogram(const std::vector<std::size_t>& rows) const {
        Histogram h;
        h.bins.resize(features_ * stride());
        for (std::size_t f = 0; f < features_; ++f) {
            Bin* hb = h.bins.data() + f * stride();
            const auto& col = binned_[f];
            for (std::size_t r : rows) {
                hb[col[r]].sum += (*residual_)[r];
                ++hb[col[r]].count;
            }
        }
        return h;
    }

    Split best_split(const Leaf& leaf) const {
        Split best;
        const std::size_t n = leaf.rows.size();
        const std::size_t min_leaf = static_cast<std::size_t>(p_.min_data_in_leaf);
        if (n < 2 * min_leaf) return best;
        const double g = leaf.sum;
        const double parent_score = g * g / static_cast<double>(n);
        double sq = 0.0;
        for (std::size_t r : leaf.rows) sq += (*residual_)[r] * (*residual_)[r];
        // Gains below round-off of the leaf's sum of squares are noise.
        const double floor = 1e-12 * sq;
        for (std::size_t f = 0; f < features_; ++f) {
            const Bin* hb = leaf.hist.bins.data() + f * stride();
            const std::size_t nb = mapper_.bin_count(f);
            double gl = 0.0;
            std::size_t nl = 0;
            for (std::size_t b = 0; b + 1 < nb; ++b) {
                gl += hb[b].sum;
                nl += hb[b].count;
                if (nl < min_leaf) continue;
                const std::size_t nr = n - nl;
                if (nr < min_leaf) break;
                const double gr = g - gl;
                const double gain = gl * gl / static_cast<double>(nl) + gr * gr / static_cast<double>(nr) - parent_score;
                if (gain > floor && gain > best.gain) best = {gain, static_cast<int>(f), static_cast<int>(b)};
            }
        }
        return best;
    }

    const BinMapper& mapper_;
    const std::vector<std::vector<std::uint8_t>>& binned_;
    const GbdtParams& p_;
    std::size_t features_;
    const std::vector<double>* residual_ = nullptr;
};

double rmse_of(const std::vector<double>& pred, std::span<const double> y) { return rmse(pred, y); }

}  // namespace

GbdtModel fit_gbdt(const Matrix& x, std::span<const double> y, const GbdtParams& params, const Matrix* validation_x,
                   std::span<const double> validation_y) {
    require(x.rows() == y.size() && !y.empty(), "fit_gbdt: feature/target row mismatch or empty data");
    require(params.learning_rate > 0.0 && params.n_estimators >= 0 && params.num_leaves >= 2 &&
                params.min_data_in_leaf >= 1 && params.patience >= 1,
            "fit_gbdt: invalid parameters");
    const bool validate = validation_x != nullptr && validation_x->rows() > 0;
    if (validate) require(validation_x->rows() == validation_y.size(), "fit_gbdt: validation row mismatch");

    GbdtModel m;
    m.learning_rate = params.learning_rate;
    m.split_counts.assign(x.cols(), 0);
    const std::size_t n = y.size();
    const bool constant = std::all_of(y.begin(), y.end(), [&](double v) { return v == y[0]; });
    m.initial_prediction = constant ? y[0] : mean(y);

    std::vector<double> pred(n, m.initial_prediction);
    std::vector<double> val_pred(validate ? validation_y.size() : 0, m.initial_prediction);
    m.train_rmse.push_back(rmse_of(pred, y));
    if (validate) m.validation_rmse.push_back(rmse_of(val_pred, validation_y));
    if (constant || params.n_estimators == 0) return m;

    const BinMapper mapper = BinMapper::fit(x, params.max_bins);
    std::vector<std::vector<std::uint8_t>> binned(x.cols(), std::vector<std::uint8_t>(n));
    for (std::size_t f = 0; f < x.cols(); ++f)
        for (std::size_t r = 0; r < n; ++r) binned[f][r] = mapper.bin(f, x(r, f));

    TreeBuilder builder(mapper, binned, params);
    std::vector<double> residual(n);
    double best = validate ? m.validation_rmse[0] : 0.0;
    int best_rounds = 0;
    for (int round = 0; round < params.n_estimators; ++round) {
        for (std::size_t r = 0; r < n; ++r) residual[r] = y[r] - pred[r];
        RegressionTree tree = builder.build(residual, n);
        if (tree.nodes.size() == 1) break;  // nothing left to split
        for (std::size_t r = 0; r < n; ++r) pred[r] += tree.predict_row(x.row(r));
        m.train_rmse.push_back(rmse_of(pred, y));
        m.trees.push_back(std::move(tree));
        if (!validate) continue;
        for (std::size_t r = 0; r < val_pred.size(); ++r) val_pred[r] += m.trees.back().predict_row(validation_x->row(r));
        const double score = rmse_of(val_pred, validation_y);
        m.validation_rmse.push_back(score);
        if (score < best) {
            best = score;
            best_rounds = static_cast<int>(m.trees.size());
        } else if (static_cast<int>(m.trees.size()) - best_rounds >= params.patience) {
            break;
        }
    }
    if (validate) {
        m.trees.resize(static_cast<std::size_t>(best_rounds));
        m.train_rmse.resize(static_cast<std::size_t>(best_rounds) + 1);
        m.validation_rmse.resize(static_cast<std::size_t>(best_rounds) + 1);
    }
    m.best_rounds = static_cast<int>(m.trees.size());
    for (const auto& t : m.trees)
        for (const auto& node : t.nodes)
            if (!node.is_leaf()) ++m.split_counts[static_cast<std::size_t>(node.feature)];
    return m;
}

GbdtModel fit_gbdt(const Dataset& train, const Dataset& validation, const TrainConfig& config) {
    train.validate();
    const std::vector<double> y = train.departure_delay();
    const std::vector<double> vy = validation.size() > 0 ? validation.departure_delay() : std::vector<double>{};
    return fit_gbdt(train.features, y, config.gbdt, validation.size() > 0 ? &validation.features : nullptr, vy);
}

}  // namespace tarmac::learn
