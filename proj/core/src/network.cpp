#include "finray/network.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "finray/config.hpp"
#include "finray/errors.hpp"
#include "finray/rng.hpp"

namespace finray {

const char* arch_token(Arch a) {
    switch (a) {
        case Arch::Cnn3: return "cnn3";
        case Arch::Cnn5: return "cnn5";
        case Arch::MicroResNet: return "micro_resnet";
        case Arch::MicroInception: return "micro_inception";
        case Arch::SvmPoly: return "svm_poly";
        case Arch::SvmRbf: return "svm_rbf";
        case Arch::Knn: return "knn";
    }
    return "?";
}

Arch arch_from_token(const std::string& t) {
    if (t == "cnn3") return Arch::Cnn3;
    if (t == "cnn5") return Arch::Cnn5;
    if (t == "micro_resnet") return Arch::MicroResNet;
    if (t == "micro_inception") return Arch::MicroInception;
    if (t == "svm_poly") return Arch::SvmPoly;
    if (t == "svm_rbf") return Arch::SvmRbf;
    if (t == "knn") return Arch::Knn;
    throw InvalidArgument("unknown architecture: " + t);
}

const char* arch_display_name(Arch a) {
    switch (a) {
        case Arch::Cnn3: return "3-layer CNN";
        case Arch::Cnn5: return "5-layer CNN";
        case Arch::MicroResNet: return "Micro-ResNet";
        case Arch::MicroInception: return "Micro-Inception";
        case Arch::SvmPoly: return "SVM (poly)";
        case Arch::SvmRbf: return "SVM (rbf)";
        case Arch::Knn: return "KNN";
    }
    return "?";
}

const char* head_token(Head h) {
    return h == Head::Classify4 ? "classify4" : "regress_pos_force";
}

Head head_from_token(const std::string& t) {
    if (t == "classify4") return Head::Classify4;
    if (t == "regress_pos_force") return Head::RegressPosForce;
    throw InvalidArgument("unknown head: " + t);
}

bool is_network_arch(Arch a) {
    return a == Arch::Cnn3 || a == Arch::Cnn5 || a == Arch::MicroResNet ||
           a == Arch::MicroInception;
}

double ModelSpec::hyper_or(const std::string& key, double def) const {
    auto it = hyper.find(key);
    return it == hyper.end() ? def : it->second;
}

void ModelSpec::validate() const {
    if (!is_network_arch(arch) && head != Head::Classify4)
        throw InvalidArgument(std::string("model spec: ") + arch_token(arch) +
                              " supports only the classify4 head");
    if (input_h < 8 || input_w < 8) throw InvalidArgument("model spec: input size must be >= 8");
}

namespace {

struct Builder {
    Network net;
    Rng rng;
    int c, h, w;

    Builder(const ModelSpec& spec, int in_c, int in_h, int in_w)
        : rng(mix_seed(spec.seed, 0xba5e)), c(in_c), h(in_h), w(in_w) {
        net.spec = spec;
        net.in_c = in_c;
        net.in_h = in_h;
        net.in_w = in_w;
    }

    int add_conv_params(int cout, int kh, int kw) {
        // He-normal over fan-in
        const double std = std::sqrt(2.0 / (c * kh * kw));
        Tensor wt = Tensor::zeros({cout, c, kh, kw}, true);
        for (double& v : wt.values()) v = rng.normal(0.0, std);
        net.params.push_back(wt);
        net.params.push_back(Tensor::zeros({cout}, true));
        return static_cast<int>(net.params.size()) - 2;
    }

    void conv(int cout, int k, int stride, int pad, bool relu) {
        int idx = add_conv_params(cout, k, k);
        net.layers.push_back(Network::Conv{idx, idx + 1, stride, pad, relu});
        h = (h + 2 * pad - k) / stride + 1;
        w = (w + 2 * pad - k) / stride + 1;
        c = cout;
    }

    void pool(int window, int stride, int pad) {
        net.layers.push_back(Network::Pool{window, stride, pad});
        h = (h + 2 * pad - window) / stride + 1;
        w = (w + 2 * pad - window) / stride + 1;
    }

    void res_block(const std::string& name) {
        int w1 = add_conv_params(c, 3, 3);
        int w2 = add_conv_params(c, 3, 3);
        net.layers.push_back(Network::ResBlock{w1, w1 + 1, w2, w2 + 1, name});
    }

    void inception(int c1, int c3, int c5, int cp, const std::string& name) {
        int w1 = add_conv_params(c1, 1, 1);
        Network::Inception l{};
        l.w1 = w1;
        l.b1 = w1 + 1;
        int w3 = add_conv_params(c3, 3, 3);
        l.w3 = w3;
        l.b3 = w3 + 1;
        int w5 = add_conv_params(c5, 5, 5);
        l.w5 = w5;
        l.b5 = w5 + 1;
        int wp = add_conv_params(cp, 1, 1);
        l.wp = wp;
        l.bp = wp + 1;
        l.name = name;
        net.layers.push_back(l);
        c = c1 + c3 + c5 + cp;
    }

    void gap() {
        net.layers.push_back(Network::Gap{});
        h = w = 1;
    }

    void flatten() {
        net.layers.push_back(Network::FlattenL{});
        c = c * h * w;
        h = w = 1;
    }

    void dense(int n_out, bool relu) {
        const double std = std::sqrt(2.0 / c);
        Tensor wt = Tensor::zeros({n_out, c}, true);
        for (double& v : wt.values()) v = rng.normal(0.0, std);
        net.params.push_back(wt);
        net.params.push_back(Tensor::zeros({n_out}, true));
        int idx = static_cast<int>(net.params.size()) - 2;
        net.layers.push_back(Network::DenseL{idx, idx + 1, relu});
        c = n_out;
    }
};

int scaled(int base, double mult) { return std::max(2, static_cast<int>(std::lround(base * mult))); }

} // namespace

Network build_network(const ModelSpec& spec, int in_c, int in_h, int in_w) {
    spec.validate();
    if (!is_network_arch(spec.arch))
        throw InvalidArgument(std::string("build_network: ") + arch_token(spec.arch) +
                              " is not a network architecture");
    Builder b(spec, in_c, in_h, in_w);
    const int head_dim = spec.head == Head::Classify4 ? 4 : 2;
    const double wm = spec.hyper_or("width_mult", 1.0);

    switch (spec.arch) {
        case Arch::Cnn3:
            b.conv(scaled(8, wm), 3, 1, 1, true);
            b.pool(2, 2, 0);
            b.conv(scaled(16, wm), 3, 1, 1, true);
            b.pool(2, 2, 0);
            b.flatten();
            b.dense(head_dim, false);
            break;
        case Arch::Cnn5:
            b.conv(scaled(8, wm), 3, 1, 1, true);
            b.pool(2, 2, 0);
            b.conv(scaled(16, wm), 3, 1, 1, true);
            b.pool(2, 2, 0);
            b.conv(scaled(24, wm), 3, 1, 1, true);
            b.pool(2, 2, 0);
            b.conv(scaled(32, wm), 3, 1, 1, true);
            b.pool(2, 2, 0);
            b.flatten();
            b.dense(head_dim, false);
            break;
        case Arch::MicroResNet:
            b.conv(scaled(16, wm), 3, 2, 1, true);
            b.pool(2, 2, 0);
            b.res_block("res1");
            b.res_block("res2");
            b.res_block("res3");
            b.gap();
            b.dense(head_dim, false);
            break;
        case Arch::MicroInception:
            b.conv(scaled(12, wm), 3, 2, 1, true);
            b.pool(2, 2, 0);
            b.inception(scaled(6, wm), scaled(8, wm), scaled(4, wm), scaled(4, wm), "incept1");
            b.inception(scaled(6, wm), scaled(8, wm), scaled(4, wm), scaled(4, wm), "incept2");
            b.gap();
            b.dense(head_dim, false);
            break;
        default:
            break;
    }
    return b.net;
}

Tensor Network::forward(Tape& tape, const Tensor& x, std::map<std::string, Tensor>* trace) const {
    Tensor t = x;
    for (const Layer& layer : layers) {
        if (const auto* l = std::get_if<Conv>(&layer)) {
            t = tape.conv2d(t, params[l->w], params[l->b], l->stride, l->pad);
            if (l->relu) t = tape.relu(t);
        } else if (const auto* l = std::get_if<Pool>(&layer)) {
            t = tape.maxpool2d(t, l->window, l->stride, l->pad);
        } else if (const auto* l = std::get_if<ResBlock>(&layer)) {
            Tensor r = tape.relu(tape.conv2d(t, params[l->w1], params[l->b1], 1, 1));
            r = tape.conv2d(r, params[l->w2], params[l->b2], 1, 1);
            t = tape.relu(tape.add(t, r));
            if (trace) (*trace)[l->name] = t;
        } else if (const auto* l = std::get_if<Inception>(&layer)) {
            Tensor b1 = tape.relu(tape.conv2d(t, params[l->w1], params[l->b1], 1, 0));
            Tensor b3 = tape.relu(tape.conv2d(t, params[l->w3], params[l->b3], 1, 1));
            Tensor b5 = tape.relu(tape.conv2d(t, params[l->w5], params[l->b5], 1, 2));
            Tensor bp = tape.relu(
                tape.conv2d(tape.maxpool2d(t, 3, 1, 1), params[l->wp], params[l->bp], 1, 0));
            if (trace) {
                (*trace)[l->name + ".b1x1"] = b1;
                (*trace)[l->name + ".b3x3"] = b3;
                (*trace)[l->name + ".b5x5"] = b5;
                (*trace)[l->name + ".bpool"] = bp;
            }
            t = tape.concat_channels({b1, b3, b5, bp});
        } else if (std::get_if<Gap>(&layer)) {
            t = tape.global_avg_pool(t);
        } else if (std::get_if<FlattenL>(&layer)) {
            t = tape.flatten(t);
        } else if (const auto* l = std::get_if<DenseL>(&layer)) {
            t = tape.dense(t, params[l->w], params[l->b]);
            if (l->relu) t = tape.relu(t);
        }
    }
    return t;
}

int Network::output_dim() const { return spec.head == Head::Classify4 ? 4 : 2; }

std::pair<double, double> denormalize_regression(double y_pos, double y_force) {
    return {10.0 + 40.0 * y_pos, 25.0 * y_force};
}

std::pair<double, double> normalize_regression(double position_mm, double force_n) {
    return {(position_mm - 10.0) / 40.0, force_n / 25.0};
}

Tensor image_to_tensor(const TactileImage& img, int h, int w) {
    TactileImage in = (img.h == h && img.w == w) ? img : downsample_area(img, h, w);
    Tensor t = Tensor::zeros({3, h, w});
    auto& v = t.values();
    for (int ch = 0; ch < 3; ++ch)
        for (int r = 0; r < h; ++r)
            for (int c = 0; c < w; ++c)
                v[(static_cast<std::size_t>(ch) * h + r) * w + c] = in.at(r, c, ch);
    return t;
}

Prediction net_predict(const Network& net, const Tensor& input) {
    if (input.shape() != std::vector<int>{net.in_c, net.in_h, net.in_w})
        throw ShapeError("net_predict: input " + shape_str(input.shape()) +
                         " does not match network input " +
                         shape_str({net.in_c, net.in_h, net.in_w}));
    Tape tape;
    Tensor out = net.forward(tape, input);
    Prediction p;
    if (net.spec.head == Head::Classify4) {
        for (int i = 0; i < 4; ++i) p.logits[i] = out.values()[i];
        p.class_index = static_cast<int>(
            std::max_element(out.values().begin(), out.values().end()) - out.values().begin());
    } else {
        auto [pos, force] = denormalize_regression(out.values()[0], out.values()[1]);
        p.position_mm = pos;
        p.force_n = force;
    }
    return p;
}

Prediction net_predict(const Network& net, const TactileImage& img) {
    return net_predict(net, image_to_tensor(img, net.in_h, net.in_w));
}

void spec_to_checkpoint_header(const ModelSpec& spec, Checkpoint& ck) {
    ck.arch = arch_token(spec.arch);
    ck.head = head_token(spec.head);
    for (const auto& [k, v] : spec.hyper) ck.hyper[k] = format_double(v);
    ck.hyper["seed"] = std::to_string(spec.seed);
    ck.hyper["input_h"] = std::to_string(spec.input_h);
    ck.hyper["input_w"] = std::to_string(spec.input_w);
}

ModelSpec spec_from_checkpoint(const Checkpoint& ck) {
    ModelSpec spec;
    spec.arch = arch_from_token(ck.arch);
    spec.head = head_from_token(ck.head);
    for (const auto& [k, v] : ck.hyper) {
        if (k == "seed" || k == "input_h" || k == "input_w") continue;
        spec.hyper[k] = std::strtod(v.c_str(), nullptr);
    }
    spec.seed = static_cast<std::uint64_t>(std::strtoull(ck.hyper_str("seed", "0").c_str(), nullptr, 10));
    spec.input_h = static_cast<int>(ck.hyper_double("input_h", 64));
    spec.input_w = static_cast<int>(ck.hyper_double("input_w", 64));
    return spec;
}

Checkpoint network_to_checkpoint(const Network& net) {
    Checkpoint ck;
    spec_to_checkpoint_header(net.spec, ck);
    for (const Tensor& p : net.params) {
        Blob b;
        for (int d : p.shape()) b.dims.push_back(static_cast<std::uint32_t>(d));
        b.data = p.values();
        ck.blobs.push_back(std::move(b));
    }
    return ck;
}

Network network_from_checkpoint(const Checkpoint& ck) {
    ModelSpec spec = spec_from_checkpoint(ck);
    Network net = build_network(spec, 3, spec.input_h, spec.input_w);
    if (ck.blobs.size() != net.params.size())
        throw DataError("checkpoint: expected " + std::to_string(net.params.size()) +
                        " parameter blobs, got " + std::to_string(ck.blobs.size()));
    for (std::size_t i = 0; i < ck.blobs.size(); ++i) {
        const Blob& b = ck.blobs[i];
        std::vector<int> dims(b.dims.begin(), b.dims.end());
        if (dims != net.params[i].shape())
            throw DataError("checkpoint: blob " + std::to_string(i) + " shape " + shape_str(dims) +
                            " does not match parameter " + shape_str(net.params[i].shape()));
        net.params[i].values() = b.data;
    }
    return net;
}

} // namespace finray
