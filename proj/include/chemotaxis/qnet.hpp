#pragma once

#include "chemotaxis/random.hpp"

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace chemotaxis {

enum class Activation { Tanh, Identity };

std::string activation_name(Activation a);
Activation activation_from_name(const std::string& name);

/// Dense layer, weights stored row-major as (outputs x inputs).
struct DenseLayer {
    std::size_t inputs = 0;
    std::size_t outputs = 0;
    std::vector<double> weights;
    std::vector<double> biases;
    Activation activation = Activation::Tanh;

    double& weight(std::size_t out, std::size_t in) { return weights[out * inputs + in]; }
    double weight(std::size_t out, std::size_t in) const { return weights[out * inputs + in]; }

    bool operator==(const DenseLayer&) const = default;
};

/// Feed-forward Q-network: tanh hidden layers, linear output layer.
class QNetwork {
public:
    QNetwork() = default;
    // layer_sizes = {input, hidden..., output}; all parameters start at zero.
    explicit QNetwork(const std::vector<std::size_t>& layer_sizes);

    static QNetwork make(std::size_t input_dim, std::size_t hidden_layers, std::size_t hidden_nodes,
                         std::size_t actions = 2);

    // Glorot-uniform weights, zero biases.
    void init_glorot(Rng& rng);

    std::vector<double> forward(std::span<const double> input) const;

    std::vector<std::size_t> layer_sizes() const;
    std::size_t input_dim() const { return layers_.empty() ? 0 : layers_.front().inputs; }
    std::size_t output_dim() const { return layers_.empty() ? 0 : layers_.back().outputs; }
    std::size_t parameter_count() const;

    std::vector<DenseLayer>& layers() { return layers_; }
    const std::vector<DenseLayer>& layers() const { return layers_; }

    bool all_finite() const;

    friend bool operator==(const QNetwork&, const QNetwork&) = default;

private:
    std::vector<DenseLayer> layers_;
};

/// Parameter-shaped gradient buffer (same layout as the network).
struct Gradients {
    std::vector<std::vector<double>> weights;
    std::vector<std::vector<double>> biases;

    explicit Gradients(const QNetwork& net);
    void zero();
};

// Adds (dq/dtheta)^T * output_grad at `input` into grads.
void backpropagate(const QNetwork& net, std::span<const double> input,
                   std::span<const double> output_grad, Gradients& grads);

struct AdamConfig {
    double learning_rate = 0.01;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

class AdamOptimizer {
public:
    AdamOptimizer(const QNetwork& net, AdamConfig config = {});

    void step(QNetwork& net, const Gradients& grads);

    double learning_rate() const { return config_.learning_rate; }
    void set_learning_rate(double lr) { config_.learning_rate = lr; }
    long long steps_taken() const { return t_; }

private:
    AdamConfig config_;
    Gradients m_;
    Gradients v_;
    long long t_ = 0;
};

struct Experience {
    std::vector<double> state;
    int action = 0;
    double reward = 0.0;
    std::vector<double> next_state;

    friend bool operator==(const Experience&, const Experience&) = default;
};

double q_target(double reward, std::span<const double> next_q, double gamma);

// Mean squared TD error over the batch on the taken actions; targets are
// computed with the current parameters before the update and held fixed.
double batch_loss(const QNetwork& net, std::span<const Experience> batch, double gamma);

// One optimizer step on the batch. Returns the pre-step loss; throws
// TrainingFault on a non-finite loss or parameters.
double train_minibatch(QNetwork& net, AdamOptimizer& optimizer, std::span<const Experience> batch,
                       double gamma);

// Gradient of batch_loss with the targets held constant.
Gradients loss_gradient(const QNetwork& net, std::span<const Experience> batch, double gamma,
                        double* loss = nullptr);

/// Versioned text persistence. Numbers are written with 17 significant
/// digits so a load reproduces every parameter exactly.
void save_network(const QNetwork& net, std::ostream& out);
QNetwork load_network(std::istream& in);
void save_network(const QNetwork& net, const std::string& path);
QNetwork load_network(const std::string& path);

}  // namespace chemotaxis
