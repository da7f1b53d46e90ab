#include "chemotaxis/qnet.hpp"

#include "chemotaxis/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace chemotaxis {

namespace {

constexpr const char* kFormatTag = "chemotaxis-qnet";
constexpr int kFormatVersion = 1;

double activate(Activation a, double z) { return a == Activation::Tanh ? std::tanh(z) : z; }

// derivative expressed through the activation output y
double activate_grad(Activation a, double y) { return a == Activation::Tanh ? 1.0 - y * y : 1.0; }

void check_input(const QNetwork& net, std::span<const double> input) {
    if (input.size() != net.input_dim()) {
        throw std::invalid_argument("network input has dimension " + std::to_string(input.size()) +
                                    ", expected " + std::to_string(net.input_dim()));
    }
}

// Activations of every layer, acts[0] = input.
std::vector<std::vector<double>> forward_trace(const QNetwork& net, std::span<const double> input) {
    std::vector<std::vector<double>> acts;
    acts.reserve(net.layers().size() + 1);
    acts.emplace_back(input.begin(), input.end());
    for (const DenseLayer& layer : net.layers()) {
        const std::vector<double>& x = acts.back();
        std::vector<double> y(layer.outputs);
        for (std::size_t o = 0; o < layer.outputs; ++o) {
            const double* row = layer.weights.data() + o * layer.inputs;
            double z = layer.biases[o];
            for (std::size_t i = 0; i < layer.inputs; ++i) z += row[i] * x[i];
            y[o] = activate(layer.activation, z);
        }
        acts.push_back(std::move(y));
    }
    return acts;
}

}  // namespace

std::string activation_name(Activation a) { return a == Activation::Tanh ? "tanh" : "identity"; }

Activation activation_from_name(const std::string& name) {
    if (name == "tanh") return Activation::Tanh;
    if (name == "identity") return Activation::Identity;
    throw IoError("unknown activation '" + name + "'");
}

QNetwork::QNetwork(const std::vector<std::size_t>& layer_sizes) {
    if (layer_sizes.size() < 2) throw std::invalid_argument("network needs at least two layer sizes");
    for (std::size_t n : layer_sizes) {
        if (n == 0) throw std::invalid_argument("layer sizes must be positive");
    }
    for (std::size_t l = 0; l + 1 < layer_sizes.size(); ++l) {
        DenseLayer layer;
        layer.inputs = layer_sizes[l];
        layer.outputs = layer_sizes[l + 1];
        layer.weights.assign(layer.inputs * layer.outputs, 0.0);
        layer.biases.assign(layer.outputs, 0.0);
        layer.activation = (l + 2 == layer_sizes.size()) ? Activation::Identity : Activation::Tanh;
        layers_.push_back(std::move(layer));
    }
}

QNetwork QNetwork::make(std::size_t input_dim, std::size_t hidden_layers, std::size_t hidden_nodes,
                        std::size_t actions) {
    std::vector<std::size_t> sizes{input_dim};
    sizes.insert(sizes.end(), hidden_layers, hidden_nodes);
    sizes.push_back(actions);
    return QNetwork(sizes);
}

void QNetwork::init_glorot(Rng& rng) {
    for (DenseLayer& layer : layers_) {
        const double limit = std::sqrt(6.0 / static_cast<double>(layer.inputs + layer.outputs));
        for (double& w : layer.weights) w = rng.uniform(-limit, limit);
        std::fill(layer.biases.begin(), layer.biases.end(), 0.0);
    }
}

std::vector<double> QNetwork::forward(std::span<const double> input) const {
    check_input(*this, input);
    return std::move(forward_trace(*this, input).back());
}

std::vector<std::size_t> QNetwork::layer_sizes() const {
    std::vector<std::size_t> sizes;
    if (layers_.empty()) return sizes;
    sizes.push_back(layers_.front().inputs);
    for (const DenseLayer& layer : layers_) sizes.push_back(layer.outputs);
    return sizes;
}

std::size_t QNetwork::parameter_count() const {
    std::size_t n = 0;
    for (const DenseLayer& layer : layers_) n += layer.weights.size() + layer.biases.size();
    return n;
}

bool QNetwork::all_finite() const {
    auto finite = [](double v) { return std::isfinite(v); };
    return std::all_of(layers_.begin(), layers_.end(), [&](const DenseLayer& layer) {
        return std::all_of(layer.weights.begin(), layer.weights.end(), finite) &&
               std::all_of(layer.biases.begin(), layer.biases.end(), finite);
    });
}

Gradients::Gradients(const QNetwork& net) {
    for (const DenseLayer& layer : net.layers()) {
        weights.emplace_back(layer.weights.size(), 0.0);
        biases.emplace_back(layer.biases.size(), 0.0);
    }
}

void Gradients::zero() {
    for (auto& w : weights) std::fill(w.begin(), w.end(), 0.0);
    for (auto& b : biases) std::fill(b.begin(), b.end(), 0.0);
}

void backpropagate(const QNetwork& net, std::span<const double> input,
                   std::span<const double> output_grad, Gradients& grads) {
    check_input(net, input);
    if (output_grad.size() != net.output_dim()) {
        throw std::invalid_argument("output gradient dimension mismatch");
    }
    const auto acts = forward_trace(net, input);
    const auto& layers = net.layers();

    // delta = dL/dz for the current layer
    std::vector<double> delta(output_grad.begin(), output_grad.end());
    for (std::size_t l = layers.size(); l-- > 0;) {
        const DenseLayer& layer = layers[l];
        const std::vector<double>& y = acts[l + 1];
        const std::vector<double>& x = acts[l];
        for (std::size_t o = 0; o < layer.outputs; ++o) delta[o] *= activate_grad(layer.activation, y[o]);

        std::vector<double>& gw = grads.weights[l];
        std::vector<double>& gb = grads.biases[l];
        for (std::size_t o = 0; o < layer.outputs; ++o) {
            const double d = delta[o];
            if (d == 0.0) continue;
            gb[o] += d;
            double* row = gw.data() + o * layer.inputs;
            for (std::size_t i = 0; i < layer.inputs; ++i) row[i] += d * x[i];
        }
        if (l == 0) break;

        std::vector<double> prev(layer.inputs, 0.0);
        for (std::size_t o = 0; o < layer.outputs; ++o) {
            const double d = delta[o];
            if (d == 0.0) continue;
            const double* row = layer.weights.data() + o * layer.inputs;
            for (std::size_t i = 0; i < layer.inputs; ++i) prev[i] += d * row[i];
        }
        delta = std::move(prev);
    }
}

AdamOptimizer::AdamOptimizer(const QNetwork& net, AdamConfig config)
    : config_(config), m_(net), v_(net) {}

void AdamOptimizer::step(QNetwork& net, const Gradients& grads) {
    ++t_;
    const double b1 = config_.beta1;
    const double b2 = config_.beta2;
    const double corr1 = 1.0 - std::pow(b1, static_cast<double>(t_));
    const double corr2 = 1.0 - std::pow(b2, static_cast<double>(t_));
    const double lr = config_.learning_rate;
    const double eps = config_.epsilon;

    auto update = [&](std::vector<double>& param, const std::vector<double>& g, std::vector<double>& m,
                      std::vector<double>& v) {
        for (std::size_t i = 0; i < param.size(); ++i) {
            m[i] = b1 * m[i] + (1.0 - b1) * g[i];
            v[i] = b2 * v[i] + (1.0 - b2) * g[i] * g[i];
            const double m_hat = m[i] / corr1;
            const double v_hat = v[i] / corr2;
            param[i] -= lr * m_hat / (std::sqrt(v_hat) + eps);
        }
    };

    auto& layers = net.layers();
    for (std::size_t l = 0; l < layers.size(); ++l) {
        update(layers[l].weights, grads.weights[l], m_.weights[l], v_.weights[l]);
        update(layers[l].biases, grads.biases[l], m_.biases[l], v_.biases[l]);
    }
}

double q_target(double reward, std::span<const double> next_q, double gamma) {
    if (next_q.empty()) throw std::invalid_argument("q_target needs at least one Q-value");
    return reward + gamma * *std::max_element(next_q.begin(), next_q.end());
}

namespace {

std::vector<double> batch_targets(const QNetwork& net, std::span<const Experience> batch, double gamma) {
    std::vector<double> targets;
    targets.reserve(batch.size());
    for (const Experience& e : batch) {
        if (e.state.size() != e.next_state.size()) {
            throw std::invalid_argument("experience state and next state differ in dimension");
        }
        targets.push_back(q_target(e.reward, net.forward(e.next_state), gamma));
    }
    return targets;
}

}  // namespace

double batch_loss(const QNetwork& net, std::span<const Experience> batch, double gamma) {
    if (batch.empty()) throw std::invalid_argument("empty minibatch");
    const std::vector<double> targets = batch_targets(net, batch, gamma);
    double loss = 0.0;
    for (std::size_t b = 0; b < batch.size(); ++b) {
        const double residual = net.forward(batch[b].state)[static_cast<std::size_t>(batch[b].action)] -
                                targets[b];
        loss += residual * residual;
    }
    return loss / static_cast<double>(batch.size());
}

Gradients loss_gradient(const QNetwork& net, std::span<const Experience> batch, double gamma,
                        double* loss) {
    if (batch.empty()) throw std::invalid_argument("empty minibatch");
    const std::vector<double> targets = batch_targets(net, batch, gamma);
    const double scale = 2.0 / static_cast<double>(batch.size());

    Gradients grads(net);
    std::vector<double> output_grad(net.output_dim(), 0.0);
    double total = 0.0;
    for (std::size_t b = 0; b < batch.size(); ++b) {
        const Experience& e = batch[b];
        if (e.action < 0 || static_cast<std::size_t>(e.action) >= net.output_dim()) {
            throw std::invalid_argument("experience action index out of range");
        }
        const auto a = static_cast<std::size_t>(e.action);
        const double residual = net.forward(e.state)[a] - targets[b];
        total += residual * residual;

        std::fill(output_grad.begin(), output_grad.end(), 0.0);
        output_grad[a] = scale * residual;
        backpropagate(net, e.state, output_grad, grads);
    }
    if (loss != nullptr) *loss = total / static_cast<double>(batch.size());
    return grads;
}

double train_minibatch(QNetwork& net, AdamOptimizer& optimizer, std::span<const Experience> batch,
                       double gamma) {
    double loss = 0.0;
    const Gradients grads = loss_gradient(net, batch, gamma, &loss);
    if (!std::isfinite(loss)) throw TrainingFault("non-finite training loss");
    optimizer.step(net, grads);
    if (!net.all_finite()) throw TrainingFault("network parameters became non-finite");
    return loss;
}

void save_network(const QNetwork& net, std::ostream& out) {
    out << kFormatTag << ' ' << kFormatVersion << '\n';
    const auto sizes = net.layer_sizes();
    out << "layers " << sizes.size();
    for (std::size_t n : sizes) out << ' ' << n;
    out << '\n';
    out << "activations";
    for (const DenseLayer& layer : net.layers()) out << ' ' << activation_name(layer.activation);
    out << '\n';

    out << std::setprecision(std::numeric_limits<double>::max_digits10);
    for (std::size_t l = 0; l < net.layers().size(); ++l) {
        const DenseLayer& layer = net.layers()[l];
        out << "weights " << l << ' ' << layer.outputs << ' ' << layer.inputs << '\n';
        for (std::size_t o = 0; o < layer.outputs; ++o) {
            for (std::size_t i = 0; i < layer.inputs; ++i) {
                out << (i == 0 ? "" : " ") << layer.weight(o, i);
            }
            out << '\n';
        }
        out << "biases " << l << ' ' << layer.outputs << '\n';
        for (std::size_t o = 0; o < layer.outputs; ++o) out << (o == 0 ? "" : " ") << layer.biases[o];
        out << '\n';
    }
    out << "end\n";
    if (!out) throw IoError("failed writing network");
}

namespace {

void expect_word(std::istream& in, const std::string& word) {
    std::string got;
    if (!(in >> got) || got != word) {
        throw IoError("corrupt network file: expected '" + word + "', got '" + got + "'");
    }
}

template <typename T>
T read_value(std::istream& in, const char* what) {
    std::string token;
    if (!(in >> token)) throw IoError(std::string("corrupt network file: missing ") + what);
    std::istringstream parse(token);
    T value{};
    if constexpr (std::is_floating_point_v<T>) {
        char* end = nullptr;
        value = std::strtod(token.c_str(), &end);
        if (end == token.c_str() || *end != '\0') {
            throw IoError(std::string("corrupt network file: bad ") + what + " '" + token + "'");
        }
    } else {
        if (!(parse >> value) || !parse.eof()) {
            throw IoError(std::string("corrupt network file: bad ") + what + " '" + token + "'");
        }
    }
    return value;
}

}  // namespace

QNetwork load_network(std::istream& in) {
    expect_word(in, kFormatTag);
    const int version = read_value<int>(in, "format version");
    if (version != kFormatVersion) {
        throw IoError("unsupported network format version " + std::to_string(version));
    }
    expect_word(in, "layers");
    const auto count = read_value<std::size_t>(in, "layer count");
    if (count < 2 || count > 64) throw IoError("corrupt network file: implausible layer count");
    std::vector<std::size_t> sizes(count);
    for (auto& n : sizes) {
        n = read_value<std::size_t>(in, "layer size");
        if (n == 0 || n > 1'000'000) throw IoError("corrupt network file: implausible layer size");
    }
    QNetwork net(sizes);

    expect_word(in, "activations");
    for (DenseLayer& layer : net.layers()) {
        layer.activation = activation_from_name(read_value<std::string>(in, "activation"));
    }
    for (std::size_t l = 0; l < net.layers().size(); ++l) {
        DenseLayer& layer = net.layers()[l];
        expect_word(in, "weights");
        if (read_value<std::size_t>(in, "layer index") != l ||
            read_value<std::size_t>(in, "rows") != layer.outputs ||
            read_value<std::size_t>(in, "cols") != layer.inputs) {
            throw IoError("corrupt network file: weight block header mismatch at layer " +
                          std::to_string(l));
        }
        for (double& w : layer.weights) w = read_value<double>(in, "weight");
        expect_word(in, "biases");
        if (read_value<std::size_t>(in, "layer index") != l ||
            read_value<std::size_t>(in, "rows") != layer.outputs) {
            throw IoError("corrupt network file: bias block header mismatch at layer " +
                          std::to_string(l));
        }
        for (double& b : layer.biases) b = read_value<double>(in, "bias");
    }
    expect_word(in, "end");
    if (!net.all_finite()) throw IoError("corrupt network file: non-finite parameter");
    return net;
}

void save_network(const QNetwork& net, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    save_network(net, out);
}

QNetwork load_network(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open network file '" + path + "'");
    return load_network(in);
}

}  // namespace chemotaxis
