#include "tarmac/learn/trajcnn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "tarmac/error.hpp"
#include "tarmac/learn/adam.hpp"
#include "tarmac/learn/metrics.hpp"
#include "tarmac/rng.hpp"

namespace tarmac::learn {

namespace {

constexpr std::size_t kKernel = 3;

}  // namespace

TrajCnnNet::TrajCnnNet(int conv_blocks, int filters, std::size_t feature_dim, int fc_layers, int fc_width,
                       std::size_t output_dim)
    : conv_blocks_(conv_blocks), filters_(filters), feature_dim_(feature_dim) {
    require(conv_blocks >= 1 && filters >= 1 && fc_layers >= 1 && fc_width >= 1, "TrajCnnNet: bad architecture");
    spatial_.push_back(kGridSize);
    conv_offsets_.push_back(0);
    for (int b = 0; b < conv_blocks; ++b) {
        const std::size_t s = spatial_.back();
        require(s >= 2, "TrajCnnNet: too many pooling stages for a 28x28 input");
        spatial_.push_back(s / 2);
        const std::size_t n_w = static_cast<std::size_t>(filters) * in_channels(b) * kKernel * kKernel;
        conv_offsets_.push_back(conv_offsets_.back() + n_w + static_cast<std::size_t>(filters));
    }
    if (conv_blocks >= 2) require(spatial_[1] == 14 && spatial_[2] == 7, "TrajCnnNet: shape chain must be 28->14->7");
    std::vector<std::size_t> sizes{flattened_dim() + feature_dim};
    for (int i = 0; i < fc_layers; ++i) sizes.push_back(static_cast<std::size_t>(fc_width));
    sizes.push_back(output_dim);
    head_ = DenseStack(sizes);
}

std::size_t TrajCnnNet::flattened_dim() const {
    const std::size_t s = spatial_.back();
    return static_cast<std::size_t>(filters_) * s * s;
}

void TrajCnnNet::initialize(std::span<double> params, std::uint64_t seed) const {
    require(params.size() == parameter_count(), "TrajCnnNet::initialize: size mismatch");
    Rng rng(seed);
    for (int b = 0; b < conv_blocks_; ++b) {
        const std::size_t fan_in = in_channels(b) * kKernel * kKernel;
        const std::size_t fan_out = static_cast<std::size_t>(filters_) * kKernel * kKernel;
        const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
        const std::size_t n_w = static_cast<std::size_t>(filters_) * fan_in;
        for (std::size_t i = 0; i < n_w; ++i) params[conv_offset(b) + i] = rng.uniform(-limit, limit);
        for (std::size_t i = 0; i < static_cast<std::size_t>(filters_); ++i) params[conv_offset(b) + n_w + i] = 0.0;
    }
    head_.initialize(params.subspan(conv_parameter_count()), rng);
}

std::vector<double> TrajCnnNet::conv_block_output(std::span<const double> params, int block,
                                                  std::span<const double> in) const {
    const std::size_t s = spatial(block);
    const std::size_t c_in = in_channels(block);
    const std::size_t f_out = static_cast<std::size_t>(filters_);
    require(in.size() == c_in * s * s, "conv_block_output: input size mismatch");
    const double* w = params.data() + conv_offset(block);
    const double* bias = w + f_out * c_in * kKernel * kKernel;
    std::vector<double> out(f_out * s * s);
    for (std::size_t f = 0; f < f_out; ++f) {
        double* o = out.data() + f * s * s;
        std::fill(o, o + s * s, bias[f]);
        for (std::size_t c = 0; c < c_in; ++c) {
            const double* src = in.data() + c * s * s;
            const double* k = w + (f * c_in + c) * kKernel * kKernel;
            for (std::size_t dr = 0; dr < kKernel; ++dr)
                for (std::size_t dc = 0; dc < kKernel; ++dc) {
                    const double kv = k[dr * kKernel + dc];
                    if (kv == 0.0) continue;
                    // Output (r, col) reads input (r + dr - 1, col + dc - 1).
                    const std::size_t r0 = dr == 0 ? 1 : 0;
                    const std::size_t r1 = dr == 2 ? s - 1 : s;
                    const std::size_t c0 = dc == 0 ? 1 : 0;
                    const std::size_t c1 = dc == 2 ? s - 1 : s;
                    for (std::size_t r = r0; r < r1; ++r) {
                        const double* srow = src + (r + dr - 1) * s;
                        double* orow = o + r * s;
                        for (std::size_t col = c0; col < c1; ++col) orow[col] += kv * srow[col + dc - 1];
                    }
                }
        }
    }
    return out;
}

std::vector<double> TrajCnnNet::conv_forward(std::span<const double> params, std::span<const double> image,
                                             ConvTrace* trace) const {
    require(image.size() == kImageValues, "TrajCnnNet::conv_forward: image must be 28x28x3");
    // [row][col][channel] -> [channel][row][col]
    std::vector<double> x(kImageValues);
    const std::size_t area = kGridSize * kGridSize;
    for (std::size_t p = 0; p < area; ++p)
        for (std::size_t c = 0; c < kImageChannels; ++c) x[c * area + p] = image[p * kImageChannels + c];

    if (trace) {
        trace->inputs.clear();
        trace->activated.clear();
        trace->argmax.clear();
    }
    for (int b = 0; b < conv_blocks_; ++b) {
        const std::size_t s = spatial(b);
        const std::size_t t = spatial(b + 1);
        std::vector<double> act = conv_block_output(params, b, x);
        for (double& v : act) v = v > 0.0 ? v : 0.0;
        const std::size_t f_out = static_cast<std::size_t>(filters_);
        std::vector<double> pooled(f_out * t * t);
        std::vector<std::uint32_t> arg(pooled.size());
        for (std::size_t f = 0; f < f_out; ++f)
            for (std::size_t r = 0; r < t; ++r)
                for (std::size_t c = 0; c < t; ++c) {
                    std::size_t best = f * s * s + (2 * r) * s + 2 * c;
                    for (std::size_t dr = 0; dr < 2; ++dr)
                        for (std::size_t dc = 0; dc < 2; ++dc) {
                            const std::size_t idx = f * s * s + (2 * r + dr) * s + 2 * c + dc;
                            if (act[idx] > act[best]) best = idx;
                        }
                    pooled[f * t * t + r * t + c] = act[best];
                    arg[f * t * t + r * t + c] = static_cast<std::uint32_t>(best);
                }
        if (trace) {
            trace->inputs.push_back(std::move(x));
            trace->activated.push_back(std::move(act));
            trace->argmax.push_back(std::move(arg));
        }
        x = std::move(pooled);
    }
    return x;
}

void TrajCnnNet::conv_backward(std::span<const double> params, const ConvTrace& trace, std::span<const double> d_flat,
                               std::span<double> grad) const {
    require(d_flat.size() == flattened_dim(), "TrajCnnNet::conv_backward: gradient size mismatch");
    std::vector<double> d_pooled(d_flat.begin(), d_flat.end());
    const std::size_t f_out = static_cast<std::size_t>(filters_);
    for (int b = conv_blocks_; b-- > 0;) {
        const std::size_t s = spatial(b);
        const std::size_t c_in = in_channels(b);
        const auto& act = trace.activated[static_cast<std::size_t>(b)];
        const auto& arg = trace.argmax[static_cast<std::size_t>(b)];
        const auto& in = trace.inputs[static_cast<std::size_t>(b)];

        std::vector<double> d_act(f_out * s * s, 0.0);
        for (std::size_t i = 0; i < d_pooled.size(); ++i)
            if (act[arg[i]] > 0.0) d_act[arg[i]] += d_pooled[i];

        const double* w = params.data() + conv_offset(b);
        double* gw = grad.data() + conv_offset(b);
        double* gb = gw + f_out * c_in * kKernel * kKernel;
        std::vector<double> d_in(c_in * s * s, 0.0);
        for (std::size_t f = 0; f < f_out; ++f) {
            const double* d = d_act.data() + f * s * s;
            double sum = 0.0;
            for (std::size_t i = 0; i < s * s; ++i) sum += d[i];
            gb[f] += sum;
            for (std::size_t c = 0; c < c_in; ++c) {
                const double* src = in.data() + c * s * s;
                double* dsrc = d_in.data() + c * s * s;
                const std::size_t k_base = (f * c_in + c) * kKernel * kKernel;
                for (std::size_t dr = 0; dr < kKernel; ++dr)
                    for (std::size_t dc = 0; dc < kKernel; ++dc) {
                        const std::size_t r0 = dr == 0 ? 1 : 0;
                        const std::size_t r1 = dr == 2 ? s - 1 : s;
                        const std::size_t c0 = dc == 0 ? 1 : 0;
                        const std::size_t c1 = dc == 2 ? s - 1 : s;
                        const double kv = w[k_base + dr * kKernel + dc];
                        double gk = 0.0;
                        for (std::size_t r = r0; r < r1; ++r) {
                            const double* srow = src + (r + dr - 1) * s;
                            double* drow = dsrc + (r + dr - 1) * s;
                            const double* grow = d + r * s;
                            for (std::size_t col = c0; col < c1; ++col) {
                                gk += grow[col] * srow[col + dc - 1];
                                drow[col + dc - 1] += grow[col] * kv;
                            }
                        }
                        gw[k_base + dr * kKernel + dc] += gk;
                    }
            }
        }
        d_pooled = std::move(d_in);
    }
}

TrajCnnModel make_trajcnn(std::size_t feature_dim, const TrajCnnParams& p, std::size_t output_dim,
                          std::uint64_t seed) {
    TrajCnnModel m;
    m.net = TrajCnnNet(p.n_conv_layer, p.n_conv, feature_dim, p.n_fc_layer, p.n_fc, output_dim);
    m.params.assign(m.net.parameter_count(), 0.0);
    m.net.initialize(m.params, seed);
    m.input = Standardizer::identity(feature_dim);
    m.output = Standardizer::identity(output_dim);
    return m;
}

namespace {

Matrix head_input(const TrajCnnNet& net, std::span<const double> params, const std::vector<const TrajImage*>& images,
                  const Matrix& x, std::vector<TrajCnnNet::ConvTrace>* traces) {
    require(images.size() == x.rows(), "TrajCNN: image/feature row mismatch");
    require(x.cols() == net.feature_dim(), "TrajCNN: feature width mismatch");
    const std::size_t flat = net.flattened_dim();
    Matrix in(x.rows(), flat + x.cols());
    if (traces) traces->resize(x.rows());
    for (std::size_t s = 0; s < x.rows(); ++s) {
        const auto conv = net.conv_forward(params, images[s]->values, traces ? &(*traces)[s] : nullptr);
        auto row = in.row(s);
        std::copy(conv.begin(), conv.end(), row.begin());
        std::copy(x.row(s).begin(), x.row(s).end(), row.begin() + static_cast<std::ptrdiff_t>(flat));
    }
    return in;
}

}  // namespace

Matrix trajcnn_forward(const TrajCnnModel& model, std::span<const double> params,
                       const std::vector<const TrajImage*>& images, const Matrix& x) {
    const Matrix in = head_input(model.net, params, images, x, nullptr);
    std::vector<Matrix> acts;
    model.net.head().forward(params.subspan(model.net.conv_parameter_count()), in, acts);
    return std::move(acts.back());
}

double trajcnn_loss_gradient(const TrajCnnModel& model, std::span<const double> params,
                             const std::vector<const TrajImage*>& images, const Matrix& x, const Matrix& y,
                             std::span<double> grad) {
    require(x.rows() == y.rows() && x.rows() > 0, "trajcnn_loss_gradient: batch mismatch");
    require(grad.size() == model.net.parameter_count(), "trajcnn_loss_gradient: gradient size mismatch");
    const TrajCnnNet& net = model.net;
    std::vector<TrajCnnNet::ConvTrace> traces;
    const Matrix in = head_input(net, params, images, x, &traces);
    const auto head_params = params.subspan(net.conv_parameter_count());
    const auto head_grad = grad.subspan(net.conv_parameter_count());
    std::vector<Matrix> acts;
    net.head().forward(head_params, in, acts);
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
    const Matrix d_in = net.head().backward(head_params, acts, d_out, head_grad);
    const std::size_t flat = net.flattened_dim();
    for (std::size_t s = 0; s < x.rows(); ++s)
        net.conv_backward(params, traces[s], d_in.row(s).first(flat), grad);
    return loss * inv_b;
}

Matrix predict_trajcnn(const TrajCnnModel& model, const std::vector<TrajImage>& images, const Matrix& features) {
    require(images.size() == features.rows(), "predict_trajcnn: image/feature row mismatch");
    const Matrix x = model.input.transform(features);
    Matrix out(features.rows(), model.net.output_dim());
    constexpr std::size_t kChunk = 256;
    for (std::size_t start = 0; start < x.rows(); start += kChunk) {
        const std::size_t end = std::min(x.rows(), start + kChunk);
        Matrix chunk(0, x.cols());
        std::vector<const TrajImage*> imgs;
        for (std::size_t r = start; r < end; ++r) {
            chunk.append_row(x.row(r));
            imgs.push_back(&images[r]);
        }
        const Matrix y = trajcnn_forward(model, model.params, imgs, chunk);
        for (std::size_t r = start; r < end; ++r) model.output.inverse_row(y.row(r - start), out.row(r));
    }
    return out;
}

TrajCnnModel fit_trajcnn(const Dataset& train, const Dataset& validation, const TrainConfig& config,
                         FitReport* report) {
    config.validate();
    train.validate();
    require(train.size() > 0, "fit_trajcnn: empty training set");
    require(train.has_images(), "fit_trajcnn: training set has no images");
    require(validation.size() == 0 || validation.has_images(), "fit_trajcnn: validation set has no images");
    const TrajCnnParams& p = config.trajcnn;

    TrajCnnModel model = make_trajcnn(train.features.cols(), p, train.targets.cols(), config.seed);
    model.input = Standardizer::fit(train.features);
    model.output = config.standardize_targets ? Standardizer::fit(train.targets)
                                              : Standardizer::identity(train.targets.cols());
    const Matrix x = model.input.transform(train.features);
    const Matrix y = model.output.transform(train.targets);
    const std::vector<double> val_truth = validation.size() > 0 ? validation.departure_delay() : std::vector<double>{};

    Adam adam(model.params.size(), AdamOptions{p.learning_rate});
    Rng rng(derive_seed(config.seed, 2));
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
            const std::size_t end = std::min(order.size(), start + bs);
            Matrix xb(0, x.cols()), yb(0, y.cols());
            std::vector<const TrajImage*> imgs;
            for (std::size_t k = start; k < end; ++k) {
                xb.append_row(x.row(order[k]));
                yb.append_row(y.row(order[k]));
                imgs.push_back(&train.images[order[k]]);
            }
            std::fill(grad.begin(), grad.end(), 0.0);
            const double loss = trajcnn_loss_gradient(model, model.params, imgs, xb, yb, grad);
            if (!std::isfinite(loss))
                throw FitError("fit_trajcnn: non-finite loss at epoch " + std::to_string(epoch) + ", batch starting at " +
                               std::to_string(start) + " (learning rate " + std::to_string(p.learning_rate) + ")");
            adam.step(model.params, grad);
            epoch_loss += loss;
            ++batches;
        }
        rep.train_loss_curve.push_back(epoch_loss / static_cast<double>(batches));
        rep.epochs_run = epoch + 1;
        if (validation.size() == 0) continue;

        const Matrix pred = predict_trajcnn(model, validation.images, validation.features);
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
