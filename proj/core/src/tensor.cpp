#include "finray/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "finray/errors.hpp"
#include "finray/rng.hpp"

namespace finray {

namespace {

std::int64_t prod(const std::vector<int>& shape) {
    std::int64_t n = 1;
    for (int d : shape) n *= d;
    return n;
}

int ceil_div(int a, int b) { return a >= 0 ? (a + b - 1) / b : -((-a) / b); }
int floor_div(int a, int b) { return a >= 0 ? a / b : -((-a + b - 1) / b); }

void require(bool cond, const std::string& msg) {
    if (!cond) throw ShapeError(msg);
}

} // namespace

std::string shape_str(const std::vector<int>& s) {
    std::string out = "[";
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(s[i]);
    }
    return out + "]";
}

Tensor Tensor::zeros(std::vector<int> shape, bool requires_grad) {
    for (int d : shape)
        if (d < 1) throw ShapeError("Tensor::zeros: nonpositive dim in " + shape_str(shape));
    auto d = std::make_shared<TensorData>();
    d->v.assign(static_cast<std::size_t>(prod(shape)), 0.0);
    d->shape = std::move(shape);
    d->requires_grad = requires_grad;
    return Tensor(std::move(d));
}

Tensor Tensor::from(std::vector<int> shape, std::vector<double> values, bool requires_grad) {
    if (static_cast<std::int64_t>(values.size()) != prod(shape))
        throw ShapeError("Tensor::from: " + std::to_string(values.size()) +
                         " values do not fill shape " + shape_str(shape));
    auto d = std::make_shared<TensorData>();
    d->shape = std::move(shape);
    d->v = std::move(values);
    d->requires_grad = requires_grad;
    return Tensor(std::move(d));
}

Tensor Tensor::scalar(double v, bool requires_grad) { return from({1}, {v}, requires_grad); }

Tensor Tape::make_out(std::vector<int> shape) { return Tensor::zeros(std::move(shape)); }

void Tape::record(std::vector<std::shared_ptr<TensorData>> inputs, const Tensor& out,
                  std::function<void()> back) {
    nodes_.push_back(Node{std::move(inputs), out.data(), std::move(back)});
}

Tensor Tape::conv2d(const Tensor& x, const Tensor& kernel, int stride, int pad) {
    return conv2d(x, kernel, Tensor(), stride, pad);
}

Tensor Tape::conv2d(const Tensor& x, const Tensor& kernel, const Tensor& bias, int stride,
                    int pad) {
    require(x.shape().size() == 3, "conv2d: input must be [C,H,W], got " + shape_str(x.shape()));
    require(kernel.shape().size() == 4,
            "conv2d: kernel must be [Cout,Cin,kh,kw], got " + shape_str(kernel.shape()));
    if (stride < 1) throw InvalidArgument("conv2d: stride must be >= 1");
    if (pad < 0) throw InvalidArgument("conv2d: pad must be >= 0");
    const int ci_n = x.shape()[0], h = x.shape()[1], w = x.shape()[2];
    const int co_n = kernel.shape()[0], kh = kernel.shape()[2], kw = kernel.shape()[3];
    require(kernel.shape()[1] == ci_n, "conv2d: channel mismatch between input " +
                                           shape_str(x.shape()) + " and kernel " +
                                           shape_str(kernel.shape()));
    if (bias.defined())
        require(bias.shape() == std::vector<int>{co_n},
                "conv2d: bias " + shape_str(bias.shape()) + " does not match kernel " +
                    shape_str(kernel.shape()));
    const int oh = (h + 2 * pad - kh) / stride + 1;
    const int ow = (w + 2 * pad - kw) / stride + 1;
    require(oh >= 1 && ow >= 1, "conv2d: kernel " + shape_str(kernel.shape()) +
                                    " larger than padded input " + shape_str(x.shape()));

    Tensor out = make_out({co_n, oh, ow});
    auto xd = x.data();
    auto kd = kernel.data();
    auto bd = bias.defined() ? bias.data() : nullptr;
    auto od = out.data();

    const double* xv = xd->v.data();
    const double* kv = kd->v.data();
    double* ov = od->v.data();

    if (bd)
        for (int co = 0; co < co_n; ++co)
            std::fill(ov + static_cast<std::size_t>(co) * oh * ow,
                      ov + static_cast<std::size_t>(co + 1) * oh * ow, bd->v[co]);

    for (int co = 0; co < co_n; ++co) {
        for (int ci = 0; ci < ci_n; ++ci) {
            for (int ky = 0; ky < kh; ++ky) {
                for (int kx = 0; kx < kw; ++kx) {
                    const double wgt =
                        kv[((static_cast<std::size_t>(co) * ci_n + ci) * kh + ky) * kw + kx];
                    const int oy_lo = std::max(0, ceil_div(pad - ky, stride));
                    const int oy_hi = std::min(oh - 1, floor_div(h - 1 - ky + pad, stride));
                    const int ox_lo = std::max(0, ceil_div(pad - kx, stride));
                    const int ox_hi = std::min(ow - 1, floor_div(w - 1 - kx + pad, stride));
                    for (int oy = oy_lo; oy <= oy_hi; ++oy) {
                        const int iy = oy * stride + ky - pad;
                        const double* xrow = xv + (static_cast<std::size_t>(ci) * h + iy) * w;
                        double* orow = ov + (static_cast<std::size_t>(co) * oh + oy) * ow;
                        for (int ox = ox_lo; ox <= ox_hi; ++ox)
                            orow[ox] += wgt * xrow[ox * stride + kx - pad];
                    }
                }
            }
        }
    }

    std::vector<std::shared_ptr<TensorData>> ins{xd, kd};
    if (bd) ins.push_back(bd);
    record(ins, out, [xd, kd, bd, od, ci_n, h, w, co_n, kh, kw, oh, ow, stride, pad]() {
        const double* gv = od->g.data();
        const double* xv = xd->v.data();
        const double* kv = kd->v.data();
        double* gx = xd->g.data();
        double* gk = kd->g.data();
        for (int co = 0; co < co_n; ++co) {
            for (int ci = 0; ci < ci_n; ++ci) {
                for (int ky = 0; ky < kh; ++ky) {
                    for (int kx = 0; kx < kw; ++kx) {
                        const std::size_t kidx =
                            ((static_cast<std::size_t>(co) * ci_n + ci) * kh + ky) * kw + kx;
                        const double wgt = kv[kidx];
                        double wacc = 0.0;
                        const int oy_lo = std::max(0, ceil_div(pad - ky, stride));
                        const int oy_hi = std::min(oh - 1, floor_div(h - 1 - ky + pad, stride));
                        const int ox_lo = std::max(0, ceil_div(pad - kx, stride));
                        const int ox_hi = std::min(ow - 1, floor_div(w - 1 - kx + pad, stride));
                        for (int oy = oy_lo; oy <= oy_hi; ++oy) {
                            const int iy = oy * stride + ky - pad;
                            const double* grow = gv + (static_cast<std::size_t>(co) * oh + oy) * ow;
                            const double* xrow = xv + (static_cast<std::size_t>(ci) * h + iy) * w;
                            double* gxrow = gx + (static_cast<std::size_t>(ci) * h + iy) * w;
                            for (int ox = ox_lo; ox <= ox_hi; ++ox) {
                                const int ix = ox * stride + kx - pad;
                                gxrow[ix] += wgt * grow[ox];
                                wacc += grow[ox] * xrow[ix];
                            }
                        }
                        gk[kidx] += wacc;
                    }
                }
            }
        }
        if (bd) {
            double* gb = bd->g.data();
            for (int co = 0; co < co_n; ++co) {
                double acc = 0.0;
                const double* grow = gv + static_cast<std::size_t>(co) * oh * ow;
                for (int i = 0; i < oh * ow; ++i) acc += grow[i];
                gb[co] += acc;
            }
        }
    });
    return out;
}

Tensor Tape::relu(const Tensor& x) {
    Tensor out = make_out(x.shape());
    auto xd = x.data();
    auto od = out.data();
    for (std::size_t i = 0; i < xd->v.size(); ++i) od->v[i] = xd->v[i] > 0.0 ? xd->v[i] : 0.0;
    record({xd}, out, [xd, od]() {
        for (std::size_t i = 0; i < xd->v.size(); ++i)
            if (xd->v[i] > 0.0) xd->g[i] += od->g[i];
    });
    return out;
}

Tensor Tape::maxpool2d(const Tensor& x, int window) { return maxpool2d(x, window, window, 0); }

Tensor Tape::maxpool2d(const Tensor& x, int window, int stride, int pad) {
    require(x.shape().size() == 3, "maxpool2d: input must be [C,H,W], got " + shape_str(x.shape()));
    if (window < 1 || stride < 1 || pad < 0) throw InvalidArgument("maxpool2d: bad window/stride/pad");
    const int cn = x.shape()[0], h = x.shape()[1], w = x.shape()[2];
    const int oh = (h + 2 * pad - window) / stride + 1;
    const int ow = (w + 2 * pad - window) / stride + 1;
    require(oh >= 1 && ow >= 1, "maxpool2d: window too large for input " + shape_str(x.shape()));

    Tensor out = make_out({cn, oh, ow});
    auto xd = x.data();
    auto od = out.data();
    auto argmax = std::make_shared<std::vector<std::int64_t>>(od->v.size(), -1);
    for (int c = 0; c < cn; ++c)
        for (int oy = 0; oy < oh; ++oy)
            for (int ox = 0; ox < ow; ++ox) {
                double best = -1e300;
                std::int64_t best_idx = -1;
                for (int ky = 0; ky < window; ++ky)
                    for (int kx = 0; kx < window; ++kx) {
                        const int iy = oy * stride + ky - pad;
                        const int ix = ox * stride + kx - pad;
                        if (iy < 0 || iy >= h || ix < 0 || ix >= w) continue;
                        const std::int64_t idx = (static_cast<std::int64_t>(c) * h + iy) * w + ix;
                        if (xd->v[idx] > best) {
                            best = xd->v[idx];
                            best_idx = idx;
                        }
                    }
                const std::int64_t oidx = (static_cast<std::int64_t>(c) * oh + oy) * ow + ox;
                od->v[oidx] = best_idx >= 0 ? best : 0.0;
                (*argmax)[oidx] = best_idx;
            }
    record({xd}, out, [xd, od, argmax]() {
        for (std::size_t i = 0; i < od->v.size(); ++i)
            if ((*argmax)[i] >= 0) xd->g[(*argmax)[i]] += od->g[i];
    });
    return out;
}

Tensor Tape::dense(const Tensor& x, const Tensor& w, const Tensor& b) {
    require(x.shape().size() == 1, "dense: input must be rank-1, got " + shape_str(x.shape()));
    require(w.shape().size() == 2, "dense: weight must be [out,in], got " + shape_str(w.shape()));
    const int n_in = x.shape()[0];
    const int n_out = w.shape()[0];
    require(w.shape()[1] == n_in, "dense: weight " + shape_str(w.shape()) +
                                      " incompatible with input " + shape_str(x.shape()));
    require(b.shape() == std::vector<int>{n_out},
            "dense: bias " + shape_str(b.shape()) + " incompatible with weight " +
                shape_str(w.shape()));

    Tensor out = make_out({n_out});
    auto xd = x.data();
    auto wd = w.data();
    auto bd = b.data();
    auto od = out.data();
    for (int i = 0; i < n_out; ++i) {
        double acc = bd->v[i];
        const double* wrow = wd->v.data() + static_cast<std::size_t>(i) * n_in;
        for (int j = 0; j < n_in; ++j) acc += wrow[j] * xd->v[j];
        od->v[i] = acc;
    }
    record({xd, wd, bd}, out, [xd, wd, bd, od, n_in, n_out]() {
        for (int i = 0; i < n_out; ++i) {
            const double gi = od->g[i];
            const double* wrow = wd->v.data() + static_cast<std::size_t>(i) * n_in;
            double* gwrow = wd->g.data() + static_cast<std::size_t>(i) * n_in;
            for (int j = 0; j < n_in; ++j) {
                xd->g[j] += gi * wrow[j];
                gwrow[j] += gi * xd->v[j];
            }
            bd->g[i] += gi;
        }
    });
    return out;
}

Tensor Tape::add(const Tensor& x, const Tensor& y) {
    require(x.shape() == y.shape(), "add: shape mismatch " + shape_str(x.shape()) + " vs " +
                                        shape_str(y.shape()));
    Tensor out = make_out(x.shape());
    auto xd = x.data();
    auto yd = y.data();
    auto od = out.data();
    for (std::size_t i = 0; i < xd->v.size(); ++i) od->v[i] = xd->v[i] + yd->v[i];
    record({xd, yd}, out, [xd, yd, od]() {
        for (std::size_t i = 0; i < od->g.size(); ++i) {
            xd->g[i] += od->g[i];
            yd->g[i] += od->g[i];
        }
    });
    return out;
}

Tensor Tape::scale(const Tensor& x, double c) {
    Tensor out = make_out(x.shape());
    auto xd = x.data();
    auto od = out.data();
    for (std::size_t i = 0; i < xd->v.size(); ++i) od->v[i] = c * xd->v[i];
    record({xd}, out, [xd, od, c]() {
        for (std::size_t i = 0; i < od->g.size(); ++i) xd->g[i] += c * od->g[i];
    });
    return out;
}

Tensor Tape::concat_channels(const std::vector<Tensor>& xs) {
    if (xs.empty()) throw InvalidArgument("concat_channels: no inputs");
    for (const Tensor& t : xs)
        require(t.shape().size() == 3,
                "concat_channels: inputs must be [C,H,W], got " + shape_str(t.shape()));
    const int h = xs[0].shape()[1], w = xs[0].shape()[2];
    int total_c = 0;
    for (const Tensor& t : xs) {
        require(t.shape()[1] == h && t.shape()[2] == w,
                "concat_channels: spatial mismatch " + shape_str(xs[0].shape()) + " vs " +
                    shape_str(t.shape()));
        total_c += t.shape()[0];
    }
    Tensor out = make_out({total_c, h, w});
    auto od = out.data();
    std::vector<std::shared_ptr<TensorData>> ins;
    std::size_t off = 0;
    for (const Tensor& t : xs) {
        auto td = t.data();
        std::copy(td->v.begin(), td->v.end(), od->v.begin() + off);
        off += td->v.size();
        ins.push_back(td);
    }
    record(ins, out, [ins, od]() {
        std::size_t off = 0;
        for (const auto& td : ins) {
            for (std::size_t i = 0; i < td->v.size(); ++i) td->g[i] += od->g[off + i];
            off += td->v.size();
        }
    });
    return out;
}

Tensor Tape::slice_channels(const Tensor& x, int c0, int c1) {
    require(x.shape().size() == 3,
            "slice_channels: input must be [C,H,W], got " + shape_str(x.shape()));
    const int cn = x.shape()[0], h = x.shape()[1], w = x.shape()[2];
    if (c0 < 0 || c1 > cn || c0 >= c1)
        throw InvalidArgument("slice_channels: bad channel range [" + std::to_string(c0) + "," +
                              std::to_string(c1) + ") for " + shape_str(x.shape()));
    Tensor out = make_out({c1 - c0, h, w});
    auto xd = x.data();
    auto od = out.data();
    const std::size_t plane = static_cast<std::size_t>(h) * w;
    std::copy(xd->v.begin() + c0 * plane, xd->v.begin() + c1 * plane, od->v.begin());
    record({xd}, out, [xd, od, c0, plane]() {
        for (std::size_t i = 0; i < od->g.size(); ++i) xd->g[c0 * plane + i] += od->g[i];
    });
    return out;
}

Tensor Tape::global_avg_pool(const Tensor& x) {
    require(x.shape().size() == 3,
            "global_avg_pool: input must be [C,H,W], got " + shape_str(x.shape()));
    const int cn = x.shape()[0];
    const std::size_t plane = static_cast<std::size_t>(x.shape()[1]) * x.shape()[2];
    Tensor out = make_out({cn});
    auto xd = x.data();
    auto od = out.data();
    for (int c = 0; c < cn; ++c) {
        double acc = 0.0;
        for (std::size_t i = 0; i < plane; ++i) acc += xd->v[c * plane + i];
        od->v[c] = acc / static_cast<double>(plane);
    }
    record({xd}, out, [xd, od, cn, plane]() {
        for (int c = 0; c < cn; ++c) {
            const double gi = od->g[c] / static_cast<double>(plane);
            for (std::size_t i = 0; i < plane; ++i) xd->g[c * plane + i] += gi;
        }
    });
    return out;
}

Tensor Tape::flatten(const Tensor& x) {
    Tensor out = make_out({static_cast<int>(x.numel())});
    auto xd = x.data();
    auto od = out.data();
    od->v = xd->v;
    record({xd}, out, [xd, od]() {
        for (std::size_t i = 0; i < od->g.size(); ++i) xd->g[i] += od->g[i];
    });
    return out;
}

Tensor Tape::softmax_cross_entropy(const Tensor& logits, int label) {
    require(logits.shape().size() == 1,
            "softmax_cross_entropy: logits must be rank-1, got " + shape_str(logits.shape()));
    const int k = logits.shape()[0];
    if (label < 0 || label >= k)
        throw InvalidArgument("softmax_cross_entropy: label " + std::to_string(label) +
                              " out of range for " + shape_str(logits.shape()));
    auto xd = logits.data();
    double m = xd->v[0];
    for (double v : xd->v) m = std::max(m, v);
    double sum = 0.0;
    for (double v : xd->v) sum += std::exp(v - m);
    const double lse = m + std::log(sum);
    Tensor out = Tensor::scalar(lse - xd->v[label]);
    auto od = out.data();
    record({xd}, out, [xd, od, label, m, sum]() {
        const double g = od->g[0];
        for (std::size_t i = 0; i < xd->v.size(); ++i) {
            const double p = std::exp(xd->v[i] - m) / sum;
            xd->g[i] += g * (p - (static_cast<int>(i) == label ? 1.0 : 0.0));
        }
    });
    return out;
}

Tensor Tape::mse(const Tensor& pred, const Tensor& target) {
    require(pred.shape() == target.shape(), "mse: shape mismatch " + shape_str(pred.shape()) +
                                                " vs " + shape_str(target.shape()));
    auto pd = pred.data();
    auto td = target.data();
    const std::size_t n = pd->v.size();
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = pd->v[i] - td->v[i];
        acc += d * d;
    }
    Tensor out = Tensor::scalar(acc / static_cast<double>(n));
    auto od = out.data();
    record({pd, td}, out, [pd, td, od, n]() {
        const double g = od->g[0] * 2.0 / static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double d = pd->v[i] - td->v[i];
            pd->g[i] += g * d;
            td->g[i] -= g * d;
        }
    });
    return out;
}

Tensor Tape::custom_unary(const Tensor& x, const std::function<double(double)>& f,
                          const std::function<double(double)>& df) {
    Tensor out = make_out(x.shape());
    auto xd = x.data();
    auto od = out.data();
    for (std::size_t i = 0; i < xd->v.size(); ++i) od->v[i] = f(xd->v[i]);
    record({xd}, out, [xd, od, df]() {
        for (std::size_t i = 0; i < od->g.size(); ++i) xd->g[i] += df(xd->v[i]) * od->g[i];
    });
    return out;
}

void backward(Tape& tape, const Tensor& loss) {
    if (tape.empty()) throw InvalidArgument("backward: empty tape");
    if (!loss.defined() || loss.numel() != 1)
        throw InvalidArgument("backward: loss must be a scalar tensor");

    std::unordered_set<TensorData*> seen;
    for (const auto& node : tape.nodes()) {
        for (const auto& in : node.inputs) seen.insert(in.get());
        seen.insert(node.out.get());
    }
    seen.insert(loss.data().get());
    for (TensorData* d : seen) d->g.assign(d->v.size(), 0.0);

    loss.data()->g[0] = 1.0;
    const auto& nodes = tape.nodes();
    for (auto it = nodes.rbegin(); it != nodes.rend(); ++it) it->back();
}

GradCheckReport grad_check(const GradFn& fn, const std::vector<std::vector<int>>& input_shapes,
                           double eps, double tol, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<Tensor> inputs;
    inputs.reserve(input_shapes.size());
    for (const auto& shape : input_shapes) {
        Tensor t = Tensor::zeros(shape, true);
        for (double& v : t.values()) v = rng.normal(0.0, 1.0);
        inputs.push_back(t);
    }

    auto eval = [&](std::vector<Tensor>& ins) {
        Tape tape;
        Tensor loss = fn(tape, ins);
        if (loss.numel() != 1) throw InvalidArgument("grad_check: fn must produce a scalar");
        return loss;
    };

    std::vector<Tensor> work = inputs;
    {
        Tape tape;
        Tensor loss = fn(tape, work);
        backward(tape, loss);
    }

    GradCheckReport report;
    for (std::size_t t = 0; t < work.size(); ++t) {
        for (std::size_t i = 0; i < work[t].values().size(); ++i) {
            const double orig = work[t].values()[i];
            work[t].values()[i] = orig + eps;
            const double lp = eval(work).values()[0];
            work[t].values()[i] = orig - eps;
            const double lm = eval(work).values()[0];
            work[t].values()[i] = orig;
            const double fd = (lp - lm) / (2.0 * eps);
            const double an = work[t].grad()[i];
            const double rel = std::abs(an - fd) / std::max(1e-8, std::abs(an) + std::abs(fd));
            report.max_rel_error = std::max(report.max_rel_error, rel);
        }
    }
    report.pass = report.max_rel_error <= tol;
    return report;
}

} // namespace finray
