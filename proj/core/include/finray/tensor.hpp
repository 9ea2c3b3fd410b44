#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace finray {

struct TensorData {
    std::vector<int> shape;
    std::vector<double> v;
    std::vector<double> g;
    bool requires_grad = false;
};

// Value-semantics handle onto a shared value/gradient buffer. Parameters are
// created once with requires_grad and reused across tapes; intermediates are
// created by tape ops.
class Tensor {
public:
    Tensor() = default;

    static Tensor zeros(std::vector<int> shape, bool requires_grad = false);
    static Tensor from(std::vector<int> shape, std::vector<double> values,
                       bool requires_grad = false);
    static Tensor scalar(double v, bool requires_grad = false);

    bool defined() const { return static_cast<bool>(d_); }
    const std::vector<int>& shape() const { return d_->shape; }
    std::int64_t numel() const { return static_cast<std::int64_t>(d_->v.size()); }
    std::vector<double>& values() { return d_->v; }
    const std::vector<double>& values() const { return d_->v; }
    std::vector<double>& grad() { return d_->g; }
    const std::vector<double>& grad() const { return d_->g; }
    bool requires_grad() const { return d_->requires_grad; }

    std::shared_ptr<TensorData> data() const { return d_; }

private:
    explicit Tensor(std::shared_ptr<TensorData> d) : d_(std::move(d)) {}
    std::shared_ptr<TensorData> d_;
    friend class Tape;
};

std::string shape_str(const std::vector<int>& s);

// Records primitive applications in execution order (which is topological by
// construction). A tape and its tensors belong to one worker at a time.
class Tape {
public:
    Tensor conv2d(const Tensor& x, const Tensor& kernel, int stride, int pad);
    Tensor conv2d(const Tensor& x, const Tensor& kernel, const Tensor& bias, int stride, int pad);
    Tensor relu(const Tensor& x);
    Tensor maxpool2d(const Tensor& x, int window);
    Tensor maxpool2d(const Tensor& x, int window, int stride, int pad);
    Tensor dense(const Tensor& x, const Tensor& w, const Tensor& b);
    Tensor add(const Tensor& x, const Tensor& y);
    Tensor scale(const Tensor& x, double c);
    Tensor concat_channels(const std::vector<Tensor>& xs);
    Tensor slice_channels(const Tensor& x, int c0, int c1);
    Tensor global_avg_pool(const Tensor& x);
    Tensor flatten(const Tensor& x);
    Tensor softmax_cross_entropy(const Tensor& logits, int label);
    Tensor mse(const Tensor& pred, const Tensor& target);

    // Elementwise escape hatch; lets tests register deliberately wrong
    // backward rules against grad_check.
    Tensor custom_unary(const Tensor& x, const std::function<double(double)>& f,
                        const std::function<double(double)>& df);

    std::size_t size() const { return nodes_.size(); }
    bool empty() const { return nodes_.empty(); }

    struct Node {
        std::vector<std::shared_ptr<TensorData>> inputs;
        std::shared_ptr<TensorData> out;
        std::function<void()> back;
    };
    const std::vector<Node>& nodes() const { return nodes_; }

private:
    Tensor make_out(std::vector<int> shape);
    void record(std::vector<std::shared_ptr<TensorData>> inputs, const Tensor& out,
                std::function<void()> back);
    std::vector<Node> nodes_;
};

// Populates grads of every tensor touched by the tape with d(loss)/d(tensor);
// tensors off the path to the loss end up with zero grad.
void backward(Tape& tape, const Tensor& loss);

struct GradCheckReport {
    double max_rel_error = 0.0;
    bool pass = false;
};

using GradFn = std::function<Tensor(Tape&, std::vector<Tensor>&)>;

// Central-difference check of backward() for a function composed of tape
// primitives. Relative error uses |a-b| / max(1e-8, |a|+|b|).
GradCheckReport grad_check(const GradFn& fn, const std::vector<std::vector<int>>& input_shapes,
                           double eps = 1e-4, double tol = 1e-3, std::uint64_t seed = 0);

} // namespace finray
