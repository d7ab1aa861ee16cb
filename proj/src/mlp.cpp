#include "dsokr/mlp.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "dsokr/rng.hpp"

namespace dsokr {

const char* activation_name(Activation a) {
    switch (a) {
        case Activation::ReLU: return "relu";
        case Activation::Tanh: return "tanh";
        case Activation::Identity: return "identity";
    }
    return "?";
}

Activation activation_from_name(const std::string& name) {
    for (Activation a : {Activation::ReLU, Activation::Tanh, Activation::Identity})
        if (name == activation_name(a)) return a;
    throw std::invalid_argument("unknown activation: " + name);
}

MLPRegressor MLPRegressor::init(const std::vector<int>& layer_dims, Activation activation,
                                std::uint64_t seed) {
    if (layer_dims.size() < 2) throw std::invalid_argument("MLP needs at least input and output dims");
    for (int d : layer_dims)
        if (d <= 0) throw std::invalid_argument("MLP layer dims must be positive");
    MLPRegressor m;
    m.activation = activation;
    m.seed = seed;
    Rng rng(seed);
    for (std::size_t l = 0; l + 1 < layer_dims.size(); ++l) {
        const int fan_in = layer_dims[l], fan_out = layer_dims[l + 1];
        const double bound = std::sqrt(6.0 / (fan_in + fan_out));
        Eigen::MatrixXd w(fan_out, fan_in);
        for (int i = 0; i < fan_out; ++i)
            for (int j = 0; j < fan_in; ++j) w(i, j) = bound * (2.0 * rng.uniform() - 1.0);
        m.weights.push_back(std::move(w));
        m.biases.push_back(Eigen::VectorXd::Zero(fan_out));
    }
    return m;
}

std::vector<int> MLPRegressor::layer_dims() const {
    std::vector<int> dims{input_dim()};
    for (const auto& w : weights) dims.push_back(static_cast<int>(w.rows()));
    return dims;
}

std::size_t MLPRegressor::parameter_count() const {
    std::size_t n = 0;
    for (const auto& w : weights) n += static_cast<std::size_t>(w.size());
    for (const auto& b : biases) n += static_cast<std::size_t>(b.size());
    return n;
}

namespace {

Eigen::MatrixXd activate(const Eigen::MatrixXd& z, Activation a) {
    switch (a) {
        case Activation::ReLU: return z.cwiseMax(0.0);
        case Activation::Tanh: return z.array().tanh();
        case Activation::Identity: return z;
    }
    return z;
}

Eigen::MatrixXd activate_grad(const Eigen::MatrixXd& z, Activation a) {
    switch (a) {
        case Activation::ReLU:
            return (z.array() > 0.0).cast<double>();
        case Activation::Tanh:
            return 1.0 - z.array().tanh().square();
        case Activation::Identity:
            return Eigen::MatrixXd::Ones(z.rows(), z.cols());
    }
    return Eigen::MatrixXd::Ones(z.rows(), z.cols());
}

// pre-activations per layer; samples are columns internally
struct ForwardCache {
    std::vector<Eigen::MatrixXd> pre;   // z_l = W_l a_{l-1} + b_l
    std::vector<Eigen::MatrixXd> post;  // a_l (post[0] = input)
};

Eigen::MatrixXd forward_cols(const MLPRegressor& m, const Eigen::MatrixXd& x_cols,
                             ForwardCache* cache) {
    Eigen::MatrixXd a = x_cols;
    if (cache) cache->post.push_back(a);
    const std::size_t last = m.weights.size() - 1;
    for (std::size_t l = 0; l < m.weights.size(); ++l) {
        Eigen::MatrixXd z = (m.weights[l] * a).colwise() + m.biases[l];
        a = (l == last) ? z : activate(z, m.activation);
        if (cache) {
            cache->pre.push_back(std::move(z));
            cache->post.push_back(a);
        }
    }
    return a;
}

}  // namespace

Eigen::VectorXd MLPRegressor::forward(const Eigen::VectorXd& x) const {
    if (x.size() != input_dim()) throw std::invalid_argument("forward: input dimension mismatch");
    return forward_cols(*this, x, nullptr).col(0);
}

Eigen::MatrixXd MLPRegressor::forward_batch(const Eigen::MatrixXd& x) const {
    if (x.cols() != input_dim()) throw std::invalid_argument("forward_batch: input dimension mismatch");
    return forward_cols(*this, x.transpose(), nullptr).transpose();
}

double mse_loss(const MLPRegressor& model, const Eigen::MatrixXd& x, const Eigen::MatrixXd& targets) {
    const Eigen::MatrixXd pred = model.forward_batch(x);
    if (pred.rows() != targets.rows() || pred.cols() != targets.cols())
        throw std::invalid_argument("mse_loss: target shape mismatch");
    return (pred - targets).squaredNorm() / static_cast<double>(targets.size());
}

double mse_loss_and_gradients(const MLPRegressor& model, const Eigen::MatrixXd& x,
                              const Eigen::MatrixXd& targets,
                              std::vector<Eigen::MatrixXd>& grad_w,
                              std::vector<Eigen::VectorXd>& grad_b) {
    const std::size_t layers = model.weights.size();
    ForwardCache cache;
    const Eigen::MatrixXd pred = forward_cols(model, x.transpose(), &cache);
    const Eigen::MatrixXd diff = pred - targets.transpose();
    const double scale = 2.0 / static_cast<double>(targets.size());
    grad_w.resize(layers);
    grad_b.resize(layers);
    Eigen::MatrixXd delta = scale * diff;  // dL/dz at output (no final activation)
    for (std::size_t l = layers; l-- > 0;) {
        grad_w[l] = delta * cache.post[l].transpose();
        grad_b[l] = delta.rowwise().sum();
        if (l > 0)
            delta = (model.weights[l].transpose() * delta)
                        .cwiseProduct(activate_grad(cache.pre[l - 1], model.activation));
    }
    return diff.squaredNorm() / static_cast<double>(targets.size());
}

void TrainConfig::validate() const {
    if (learning_rate <= 0.0 || batch_size <= 0 || max_epochs <= 0 || patience <= 0)
        throw std::invalid_argument("TrainConfig fields must be positive");
    if (patience > max_epochs) throw std::invalid_argument("patience must not exceed max_epochs");
    if (!(beta1 > 0.0 && beta1 < 1.0 && beta2 > 0.0 && beta2 < 1.0 && epsilon > 0.0))
        throw std::invalid_argument("invalid Adam parameters");
}

TrainResult train(MLPRegressor model, const Eigen::MatrixXd& x, const Eigen::MatrixXd& targets,
                  const Eigen::MatrixXd& val_x, const Eigen::MatrixXd& val_targets,
                  const TrainConfig& cfg) {
    cfg.validate();
    if (x.rows() != targets.rows()) throw std::invalid_argument("train: row count mismatch");
    if (targets.cols() != model.output_dim())
        throw std::invalid_argument("train: target width does not match model output");
    const int n = static_cast<int>(x.rows());
    const std::size_t layers = model.weights.size();

    std::vector<Eigen::MatrixXd> mw(layers), vw(layers);
    std::vector<Eigen::VectorXd> mb(layers), vb(layers);
    for (std::size_t l = 0; l < layers; ++l) {
        mw[l] = Eigen::MatrixXd::Zero(model.weights[l].rows(), model.weights[l].cols());
        vw[l] = mw[l];
        mb[l] = Eigen::VectorXd::Zero(model.biases[l].size());
        vb[l] = mb[l];
    }

    TrainResult result;
    result.best_val_mse = std::numeric_limits<double>::infinity();
    Rng shuffle_rng(cfg.seed);
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;

    long step = 0;
    int since_best = 0;
    std::vector<Eigen::MatrixXd> gw;
    std::vector<Eigen::VectorXd> gb;
    for (int epoch = 0; epoch < cfg.max_epochs; ++epoch) {
        // seeded Fisher-Yates shuffle per epoch
        for (int i = n - 1; i > 0; --i) std::swap(order[i], order[shuffle_rng.below(i + 1)]);
        for (int start = 0; start < n; start += cfg.batch_size) {
            const int b = std::min(cfg.batch_size, n - start);
            Eigen::MatrixXd bx(b, x.cols()), bt(b, targets.cols());
            for (int i = 0; i < b; ++i) {
                bx.row(i) = x.row(order[start + i]);
                bt.row(i) = targets.row(order[start + i]);
            }
            const double loss = mse_loss_and_gradients(model, bx, bt, gw, gb);
            if (!std::isfinite(loss))
                throw std::runtime_error("training diverged: non-finite loss at epoch " +
                                         std::to_string(epoch) + " (reduce the learning rate)");
            ++step;
            const double c1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(step));
            const double c2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(step));
            for (std::size_t l = 0; l < layers; ++l) {
                mw[l] = cfg.beta1 * mw[l] + (1.0 - cfg.beta1) * gw[l];
                vw[l] = cfg.beta2 * vw[l] + (1.0 - cfg.beta2) * gw[l].cwiseProduct(gw[l]);
                model.weights[l].array() -=
                    cfg.learning_rate * (mw[l].array() / c1) / ((vw[l].array() / c2).sqrt() + cfg.epsilon);
                mb[l] = cfg.beta1 * mb[l] + (1.0 - cfg.beta1) * gb[l];
                vb[l] = cfg.beta2 * vb[l] + (1.0 - cfg.beta2) * gb[l].cwiseProduct(gb[l]);
                model.biases[l].array() -=
                    cfg.learning_rate * (mb[l].array() / c1) / ((vb[l].array() / c2).sqrt() + cfg.epsilon);
            }
        }
        const double train_mse = mse_loss(model, x, targets);
        const double val_mse = val_x.rows() > 0 ? mse_loss(model, val_x, val_targets) : train_mse;
        if (!std::isfinite(train_mse) || !std::isfinite(val_mse))
            throw std::runtime_error("training diverged: non-finite epoch loss");
        result.history.push_back({epoch, train_mse, val_mse});
        if (val_mse < result.best_val_mse) {
            result.best_val_mse = val_mse;
            result.best_epoch = epoch;
            result.model = model;
            since_best = 0;
        } else if (++since_best >= cfg.patience) {
            break;
        }
    }
    if (result.best_epoch < 0) result.model = std::move(model);
    return result;
}

}  // namespace dsokr
