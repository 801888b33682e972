#ifndef SBM_DNN_HPP
#define SBM_DNN_HPP

#include <span>
#include <string>
#include <vector>

#include "sbm/events.hpp"

namespace sbm {

// Raised by load_network with a 1-based line number.
class NetworkParseError : public ModelError {
public:
    NetworkParseError(int line, const std::string& what)
        : ModelError("line " + std::to_string(line) + ": " + what), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

enum class Activation { Relu, Linear };

struct Layer {
    int in = 0;
    int out = 0;
    std::vector<double> weights; // row-major, row r = weights into output neuron r
    std::vector<double> bias;    // size out; zeros when absent from the file
    Activation activation = Activation::Linear;
};

// A layered feedforward network with relu hidden layers and a linear output
// layer. Immutable; evaluation is a pure function.
class Network {
public:
    explicit Network(std::vector<Layer> layers);

    int input_size() const { return layers_.front().in; }
    int output_size() const { return layers_.back().out; }
    const std::vector<Layer>& layers() const { return layers_; }

private:
    std::vector<Layer> layers_;
};

// One network evaluation: the input, the raw output scores, and the output
// indices sorted by descending score (ties broken by ascending index).
struct Evaluation {
    std::vector<double> input;
    std::vector<double> raw_outputs;
    std::vector<int> ranking;
};

// Weight-file format, whitespace separated, `#` comments:
//   network <num_layers>
//   layer <in> <out> <relu|linear>
//   w <out*in reals>
//   b <out reals>          (optional; absent means zeros)
Network load_network(const std::string& text);

Evaluation evaluate(const Network& net, std::span<const double> input);

std::vector<int> rank_outputs(const Network& net, std::span<const double> input);

inline double relu(double x) { return x > 0.0 ? x : 0.0; }

} // namespace sbm

#endif
