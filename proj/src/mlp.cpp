#include "romrl/mlp.hpp"

#include <cmath>
#include <stdexcept>

namespace romrl {

Mlp::Mlp(std::vector<int> sizes) : sizes_(std::move(sizes)) {
    if (sizes_.size() < 2) throw std::invalid_argument("Mlp: need at least two layer sizes");
    for (int s : sizes_)
        if (s < 1) throw std::invalid_argument("Mlp: layer sizes must be positive");
    int total = 0;
    offsets_.resize(layer_count());
    for (int l = 0; l < layer_count(); ++l) {
        offsets_[l] = total;
        total += sizes_[l] * sizes_[l + 1] + sizes_[l + 1];
    }
    params_ = Eigen::VectorXd::Zero(total);
}

Mlp Mlp::glorot(std::vector<int> sizes, RandomStream& rng) {
    Mlp net(std::move(sizes));
    for (int l = 0; l < net.layer_count(); ++l) {
        const int in = net.sizes_[l], out = net.sizes_[l + 1];
        const double limit = std::sqrt(6.0 / (in + out));
        for (int i = 0; i < in * out; ++i)
            net.params_[net.weight_offset(l) + i] = rng.uniform(-limit, limit);
        // biases stay zero
    }
    return net;
}

void Mlp::set_output_layer(double weight_scale, double bias_value) {
    const int last = layer_count() - 1;
    const int n_weights = sizes_[last] * sizes_[last + 1];
    params_.segment(weight_offset(last), n_weights) *= weight_scale;
    params_.segment(bias_offset(last), sizes_[last + 1]).setConstant(bias_value);
}

Eigen::VectorXd Mlp::forward(const Eigen::Ref<const Eigen::VectorXd>& x) const {
    Workspace ws;
    return forward(x, ws);
}

Eigen::VectorXd Mlp::forward(const Eigen::Ref<const Eigen::VectorXd>& x, Workspace& ws) const {
    if (x.size() != input_dim()) throw std::invalid_argument("Mlp: input size mismatch");
    ws.act.assign(1, x);
    Eigen::VectorXd a = x;
    for (int l = 0; l < layer_count(); ++l) {
        const int in = sizes_[l], out = sizes_[l + 1];
        Eigen::Map<const Eigen::MatrixXd> w(params_.data() + weight_offset(l), out, in);
        Eigen::Map<const Eigen::VectorXd> b(params_.data() + bias_offset(l), out);
        a = w * a + b;
        if (l + 1 < layer_count()) a = a.array().tanh();
        ws.act.push_back(a);
    }
    return a;
}

void Mlp::backward(const Workspace& ws, const Eigen::Ref<const Eigen::VectorXd>& dl_dout,
                   Eigen::Ref<Eigen::VectorXd> grad) const {
    if (static_cast<int>(ws.act.size()) != layer_count() + 1)
        throw std::invalid_argument("Mlp: workspace does not match a forward pass");
    if (grad.size() != n_params()) throw std::invalid_argument("Mlp: grad size mismatch");

    Eigen::VectorXd delta = dl_dout;  // output layer is linear
    for (int l = layer_count() - 1; l >= 0; --l) {
        const int in = sizes_[l], out = sizes_[l + 1];
        Eigen::Map<Eigen::MatrixXd> gw(grad.data() + weight_offset(l), out, in);
        Eigen::Map<Eigen::VectorXd> gb(grad.data() + bias_offset(l), out);
        gw.noalias() += delta * ws.act[l].transpose();
        gb += delta;
        if (l > 0) {
            Eigen::Map<const Eigen::MatrixXd> w(params_.data() + weight_offset(l), out, in);
            // tanh'(z) = 1 - tanh(z)^2, read off the cached activation
            delta = (w.transpose() * delta).cwiseProduct(
                (1.0 - ws.act[l].array().square()).matrix());
        }
    }
}

void Adam::step(Eigen::Ref<Eigen::VectorXd> params,
                const Eigen::Ref<const Eigen::VectorXd>& grad, double lr) {
    if (params.size() != m_.size() || grad.size() != m_.size())
        throw std::invalid_argument("Adam: size mismatch");
    ++t_;
    m_ = beta1_ * m_ + (1.0 - beta1_) * grad;
    v_ = beta2_ * v_ + (1.0 - beta2_) * grad.cwiseProduct(grad);
    const double c1 = 1.0 - std::pow(beta1_, t_);
    const double c2 = 1.0 - std::pow(beta2_, t_);
    params -= (lr * (m_ / c1).array() / ((v_ / c2).array().sqrt() + epsilon_)).matrix();
}

}  // namespace romrl
