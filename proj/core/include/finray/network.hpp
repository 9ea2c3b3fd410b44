#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "finray/checkpoint.hpp"
#include "finray/image.hpp"
#include "finray/tensor.hpp"

namespace finray {

enum class Arch { Cnn3, Cnn5, MicroResNet, MicroInception, SvmPoly, SvmRbf, Knn };
enum class Head { Classify4, RegressPosForce };

const char* arch_token(Arch a);
Arch arch_from_token(const std::string& t);
const char* arch_display_name(Arch a);
const char* head_token(Head h);
Head head_from_token(const std::string& t);
bool is_network_arch(Arch a);

struct ModelSpec {
    Arch arch = Arch::Cnn3;
    Head head = Head::Classify4;
    std::map<std::string, double> hyper; // k; C, gamma, degree, coef0; width_mult
    std::uint64_t seed = 0;
    int input_h = 64;
    int input_w = 64;

    double hyper_or(const std::string& key, double def) const;
    // SVM/KNN combine only with Classify4.
    void validate() const;
};

// Feed-forward net as a flat layer list over the tape primitives. Parameter
// order is fixed by construction, which keeps checkpoints positional.
struct Network {
    struct Conv {
        int w, b;
        int stride, pad;
        bool relu;
    };
    struct Pool {
        int window, stride, pad;
    };
    struct ResBlock {
        int w1, b1, w2, b2;
        std::string name;
    };
    struct Inception {
        int w1, b1, w3, b3, w5, b5, wp, bp;
        std::string name;
    };
    struct Gap {};
    struct FlattenL {};
    struct DenseL {
        int w, b;
        bool relu;
    };
    using Layer = std::variant<Conv, Pool, ResBlock, Inception, Gap, FlattenL, DenseL>;

    ModelSpec spec;
    int in_c = 3, in_h = 0, in_w = 0;
    std::vector<Layer> layers;
    std::vector<Tensor> params;

    // trace, when given, collects named intermediate activations
    // (inception branches are "<block>.b1x1" / ".b3x3" / ".b5x5" / ".bpool")
    Tensor forward(Tape& tape, const Tensor& x,
                   std::map<std::string, Tensor>* trace = nullptr) const;

    int output_dim() const;
};

Network build_network(const ModelSpec& spec, int in_c, int in_h, int in_w);

// [0,1]-normalized regression outputs <-> physical units.
std::pair<double, double> denormalize_regression(double y_pos, double y_force);
std::pair<double, double> normalize_regression(double position_mm, double force_n);

struct Prediction {
    std::array<double, 4> logits{};
    int class_index = -1;
    double position_mm = 0.0;
    double force_n = 0.0;
};

Tensor image_to_tensor(const TactileImage& img, int h, int w);
Prediction net_predict(const Network& net, const TactileImage& img);
Prediction net_predict(const Network& net, const Tensor& input);

Checkpoint network_to_checkpoint(const Network& net);
Network network_from_checkpoint(const Checkpoint& ck);

ModelSpec spec_from_checkpoint(const Checkpoint& ck);
void spec_to_checkpoint_header(const ModelSpec& spec, Checkpoint& ck);

} // namespace finray
