#include "tarmac/learn/mlp.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "tarmac/error.hpp"
#include "tarmac/learn/adam.hpp"
#include "tarmac/learn/metrics.hpp"
#include "tarmac/rng.hpp"

namespace tarmac::learn {

MlpModel make_mlp(std::size_t input_dim, int hidden_layers, int hidden_width, std::size_t output_dim,
                  std::uint64_t seed) {
    std::vector<std::size_t> sizes{input_dim};
    for (int i = 0; i < hidden_layers; ++i) sizes.push_back(static_cast<std::size_t>(hidden_width));
    sizes.push_back(output_dim);
    MlpModel m;
    m.stack = DenseStack(sizes);
    m.params.assign(m.stack.parameter_count(), 0.0);
    Rng rng(seed);
    m.stack.initialize(m.params, rng);
    m.input = Standardizer::identity(input_dim);
    m.output = Standardizer::identity(output_dim);
    return m;
}

Matrix mlp_forward(const MlpModel& model, std::span<const double> params, const Matrix& x) {
    std::vector<Matrix> acts;
    model.stack.forward(params, x, acts);
    return std::move(acts.back());
}

double mlp_loss_gradient(const MlpModel& model, std::span<const double> params, const Matrix& x, const Matrix& y,
                         std::span<double> grad) {
    require(x.rows() == y.rows() && x.rows() > 0, "mlp_loss_gradient: batch mismatch");
    std::vector<Matrix> acts;
    model.stack.forward(params, x, acts);
    const Matrix& out = acts.back();
    const double inv_b = 1.0 / static_cast<double>(x.rows());
    Matrix d_out(out.rows(), out.cols());
    double loss = 0.0;
    for (std::size_t s = 0; s < out.rows(); ++s)
        for (std::size_t c = 0; c < out.cols(); ++c) {
            const double e = out(s, c) - y(s, c);
            loss += e * e;
            d_out(s, c) = 2.0 * e * inv_b;
        }
    model.stack.backward(params, acts, d_out, grad);
    return loss * inv_b;
}

Matrix predict_mlp(const MlpModel& model, const Matrix& features) {
    const Matrix x = model.input.transform(features);
    Matrix out(features.rows(), model.stack.output_dim());
    constexpr std::size_t kChunk = 256;
    for (std::size_t start = 0; start < x.rows(); start += kChunk) {
        const std::size_t end = std::min(x.rows(), start + kChunk);
        Matrix chunk(0, x.cols());
        for (std::size_t r = start; r < end; ++r) chunk.append_row(x.row(r));
        const Matrix y = mlp_forward(model, model.params, chunk);
        for (std::size_t r = start; r < end; ++r) model.output.inverse_row(y.row(r - start), out.row(r));
    }
    return out;
}

namespace {

Matrix gather(const Matrix& m, std::span<const std::size_t> rows) {
    Matrix out(0, m.cols());
    for (std::size_t r : rows) out.append_row(m.row(r));
    return out;
}

}  // namespace

MlpModel fit_mlp(const Dataset& train, const Dataset& validation, const TrainConfig& config, FitReport* report) {
    config.validate();
    train.validate();
    require(train.size() > 0, "fit_mlp: empty training set");
    const MlpParams& p = config.mlp;

    MlpModel model = make_mlp(train.features.cols(), p.n_layer, p.n_node, train.targets.cols(), config.seed);
    model.input = Standardizer::fit(train.features);
    model.output = config.standardize_targets ? Standardizer::fit(train.targets)
                                              : Standardizer::identity(train.targets.cols());
    const Matrix x = model.input.transform(train.features);
    const Matrix y = model.output.transform(train.targets);
    // Constant target columns train toward 0 in network space.
    const std::vector<double> val_truth = validation.size() > 0 ? validation.departure_delay() : std::vector<double>{};

    Adam adam(model.params.size(), AdamOptions{p.learning_rate});
    Rng rng(derive_seed(config.seed, 1));
    std::vector<std::size_t> order(train.size());
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> grad(model.params.size());

    FitReport rep;
    std::vector<double> best_params = model.params;
    double best = std::numeric_limits<double>::infinity();
    int since_best = 0;
    const std::size_t bs = static_cast<std::size_t>(p.batch_size);
    for (int epoch = 0; epoch < p.n_epoch; ++epoch) {
        rng.shuffle(std::span<std::size_t>(order));
        double epoch_loss = 0.0;
        std::size_t batches = 0;
        for (std::size_t start = 0; start < order.size(); start += bs) {
            const std::span<const std::size_t> rows(order.data() + start, std::min(bs, order.size() - start));
            const Matrix xb = gather(x, rows);
            const Matrix yb = gather(y, rows);
            std::fill(grad.begin(), grad.end(), 0.0);
            const double loss = mlp_loss_gradient(model, model.params, xb, yb, grad);
            if (!std::isfinite(loss))
                throw FitError("fit_mlp: non-finite loss at epoch " + std::to_string(epoch) + ", batch starting at " +
                               std::to_string(start) + " (learning rate " + std::to_string(p.learning_rate) + ")");
            adam.step(model.params, grad);
            epoch_loss += loss;
            ++batches;
        }
        rep.train_loss_curve.push_back(epoch_loss / static_cast<double>(batches));
        rep.epochs_run = epoch + 1;
        if (validation.size() == 0) continue;

        const Matrix pred = predict_mlp(model, validation.features);
        std::vector<double> dep(pred.rows());
        for (std::size_t r = 0; r < pred.rows(); ++r) dep[r] = pred(r, LabelVector::kDepartureDelay);
        const double score = rmse(dep, val_truth);
        rep.validation_curve.push_back(score);
        if (score < best) {
            best = score;
            best_params = model.params;
            rep.best_epoch = epoch;
            since_best = 0;
        } else if (++since_best >= p.patience) {
            break;
        }
    }
    if (validation.size() > 0) {
        model.params = best_params;
        rep.best_validation_rmse = best;
    } else {
        rep.best_epoch = rep.epochs_run - 1;
    }
    if (report) *report = std::move(rep);
    return model;
}

}  // namespace tarmac::learn
