#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

namespace dsokr {

enum class Activation { ReLU, Tanh, Identity };

const char* activation_name(Activation a);
Activation activation_from_name(const std::string& name);

// Input network g_W. layer_dims = {d_X, hidden..., p}; {d_X, p} is a
// single-layer perceptron. The final layer is affine with no activation.
struct MLPRegressor {
    std::vector<Eigen::MatrixXd> weights;  // layer l: out x in
    std::vector<Eigen::VectorXd> biases;
    Activation activation = Activation::ReLU;
    std::uint64_t seed = 0;

    static MLPRegressor init(const std::vector<int>& layer_dims, Activation activation,
                             std::uint64_t seed);

    std::vector<int> layer_dims() const;
    int input_dim() const { return static_cast<int>(weights.front().cols()); }
    int output_dim() const { return static_cast<int>(weights.back().rows()); }
    std::size_t parameter_count() const;

    Eigen::VectorXd forward(const Eigen::VectorXd& x) const;
    // rows = samples
    Eigen::MatrixXd forward_batch(const Eigen::MatrixXd& x) const;
};

struct TrainConfig {
    double learning_rate = 1e-3;
    int batch_size = 32;
    int max_epochs = 200;
    int patience = 20;  // epochs without validation improvement
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    std::uint64_t seed = 0;

    void validate() const;
};

struct EpochStats {
    int epoch;
    double train_mse;
    double val_mse;
};

struct TrainResult {
    MLPRegressor model;  // snapshot at the best validation epoch
    std::vector<EpochStats> history;
    int best_epoch = -1;
    double best_val_mse = 0.0;
};

// Mean over samples and output coordinates of the squared error, plus
// gradients for every weight and bias.
double mse_loss_and_gradients(const MLPRegressor& model, const Eigen::MatrixXd& x,
                              const Eigen::MatrixXd& targets,
                              std::vector<Eigen::MatrixXd>& grad_w,
                              std::vector<Eigen::VectorXd>& grad_b);

double mse_loss(const MLPRegressor& model, const Eigen::MatrixXd& x, const Eigen::MatrixXd& targets);

// Minibatch Adam on the surrogate MSE with a seeded per-epoch shuffle and
// early stopping on validation MSE. Throws std::runtime_error if the loss
// becomes non-finite.
TrainResult train(MLPRegressor model, const Eigen::MatrixXd& x, const Eigen::MatrixXd& targets,
                  const Eigen::MatrixXd& val_x, const Eigen::MatrixXd& val_targets,
                  const TrainConfig& cfg);

}  // namespace dsokr
