/// @file mlp.hpp
/// Dense tanh network over a flat parameter vector, with hand-written
/// backpropagation. Small enough that no ML framework is warranted, and the
/// flat layout makes finite-difference checks and checkpointing direct.

#pragma once

#include <Eigen/Dense>
#include <vector>

#include "romrl/rng.hpp"

namespace romrl {

/// Layers: tanh on every hidden layer, linear output.
/// Parameter layout per layer: W (out x in, column-major), then b.
class Mlp {
public:
    explicit Mlp(std::vector<int> sizes);

    static Mlp glorot(std::vector<int> sizes, RandomStream& rng);

    const std::vector<int>& sizes() const { return sizes_; }
    int input_dim() const { return sizes_.front(); }
    int output_dim() const { return sizes_.back(); }
    int n_params() const { return static_cast<int>(params_.size()); }
    Eigen::VectorXd& params() { return params_; }
    const Eigen::VectorXd& params() const { return params_; }

    struct Workspace {
        std::vector<Eigen::VectorXd> act;  // activations, act[0] is the input
    };

    Eigen::VectorXd forward(const Eigen::Ref<const Eigen::VectorXd>& x) const;
    Eigen::VectorXd forward(const Eigen::Ref<const Eigen::VectorXd>& x, Workspace& ws) const;

    /// Rescale the output layer's weights and pin its biases. Used for the
    /// small policy-head initialization.
    void set_output_layer(double weight_scale, double bias_value);

    /// Accumulate dLoss/dparams into grad given dLoss/doutput for the forward
    /// pass recorded in ws. grad must have n_params() entries; it is added to,
    /// not overwritten, so minibatch gradients can be summed in place.
    void backward(const Workspace& ws, const Eigen::Ref<const Eigen::VectorXd>& dl_dout,
                  Eigen::Ref<Eigen::VectorXd> grad) const;

private:
    int layer_count() const { return static_cast<int>(sizes_.size()) - 1; }
    int weight_offset(int layer) const { return offsets_[layer]; }
    int bias_offset(int layer) const {
        return offsets_[layer] + sizes_[layer] * sizes_[layer + 1];
    }

    std::vector<int> sizes_;
    std::vector<int> offsets_;
    Eigen::VectorXd params_;
};

/// Adam with bias correction; elementwise over one flat parameter vector.
class Adam {
public:
    Adam(int n, double beta1 = 0.9, double beta2 = 0.999, double epsilon = 1e-8)
        : m_(Eigen::VectorXd::Zero(n)), v_(Eigen::VectorXd::Zero(n)),
          beta1_(beta1), beta2_(beta2), epsilon_(epsilon) {}

    void step(Eigen::Ref<Eigen::VectorXd> params, const Eigen::Ref<const Eigen::VectorXd>& grad,
              double lr);

private:
    Eigen::VectorXd m_, v_;
    double beta1_, beta2_, epsilon_;
    int t_ = 0;
};

}  // namespace romrl
