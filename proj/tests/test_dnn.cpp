#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "sbm/dnn.hpp"

using namespace sbm;

namespace {

// Independent reference evaluation: explicit per-edge accumulation.
std::vector<double> oracle_eval(const Network& net, std::vector<double> x)
{
    for (const Layer& layer : net.layers()) {
        std::vector<double> y(static_cast<std::size_t>(layer.out), 0.0);
        for (int r = 0; r < layer.out; ++r) {
            double acc = layer.bias.empty() ? 0.0 : layer.bias[static_cast<std::size_t>(r)];
            for (int c = 0; c < layer.in; ++c)
                acc += layer.weights[static_cast<std::size_t>(r * layer.in + c)] *
                       x[static_cast<std::size_t>(c)];
            if (layer.activation == Activation::Relu && acc < 0.0)
                acc = 0.0;
            y[static_cast<std::size_t>(r)] = acc;
        }
        x = std::move(y);
    }
    return x;
}

Network random_network(std::mt19937_64& rng)
{
    std::uniform_int_distribution<int> nlayers(1, 4);
    std::uniform_int_distribution<int> width(1, 8);
    std::uniform_real_distribution<double> w(-2.0, 2.0);
    const int n = nlayers(rng);
    int in = width(rng);
    std::vector<Layer> layers;
    for (int l = 0; l < n; ++l) {
        Layer layer;
        layer.in = in;
        layer.out = width(rng);
        layer.activation = l + 1 < n ? Activation::Relu : Activation::Linear;
        for (int i = 0; i < layer.in * layer.out; ++i)
            layer.weights.push_back(w(rng));
        for (int i = 0; i < layer.out; ++i)
            layer.bias.push_back(w(rng));
        in = layer.out;
        layers.push_back(std::move(layer));
    }
    return Network(std::move(layers));
}

} // namespace

TEST_CASE("running example values are exact")
{
    Network net = fx::running_example_network();

    Evaluation a = evaluate(net, std::vector<double>{1.0, 0.0});
    CHECK(a.raw_outputs == std::vector<double>{1.0, 0.0});
    CHECK(a.ranking == std::vector<int>{0, 1});

    Evaluation b = evaluate(net, std::vector<double>{0.0, 1.0});
    CHECK(b.raw_outputs == std::vector<double>{0.0, 3.0});
    CHECK(b.ranking == std::vector<int>{1, 0});

    Evaluation c = evaluate(net, std::vector<double>{2.0, 1.0});
    CHECK(c.raw_outputs == std::vector<double>{1.0, 3.0});
    CHECK(c.ranking == std::vector<int>{1, 0});
}

TEST_CASE("relu basics")
{
    CHECK(relu(-1.5) == 0.0);
    CHECK(relu(0.0) == 0.0);
    CHECK(relu(2.5) == 2.5);
}

TEST_CASE("network construction validates shapes")
{
    Layer a{2, 3, std::vector<double>(6, 0.0), std::vector<double>(3, 0.0),
            Activation::Relu};
    Layer bad{4, 2, std::vector<double>(8, 0.0), std::vector<double>(2, 0.0),
              Activation::Linear};
    CHECK_THROWS_AS(Network({a, bad}), ModelError);

    Layer wrong_weights{2, 2, std::vector<double>(3, 0.0), {}, Activation::Linear};
    CHECK_THROWS_AS(Network({wrong_weights}), ModelError);

    CHECK_THROWS_AS(Network({}), ModelError);
}

TEST_CASE("weight file parsing")
{
    const std::string text =
        "# comment\n"
        "network 2\n"
        "layer 2 3 relu\n"
        "w 1 -1  -2 0  0 3\n"
        "b 0 0 0\n"
        "layer 3 2 linear\n"
        "w 1 -2 0  0 1 1\n";
    Network net = load_network(text);
    CHECK(net.input_size() == 2);
    CHECK(net.output_size() == 2);
    Evaluation e = evaluate(net, std::vector<double>{2.0, 1.0});
    CHECK(e.raw_outputs == std::vector<double>{1.0, 3.0});

    CHECK_THROWS_AS(load_network("network 1\nlayer 2 2 tanh\nw 1 0 0 1\n"),
                    NetworkParseError);
    CHECK_THROWS_AS(load_network("layer 2 2 relu\n"), NetworkParseError);
    try {
        load_network("network 1\nlayer 2 2 linear\nw 1 0 0\n");
        FAIL("expected parse error");
    } catch (const NetworkParseError& err) {
        CHECK(err.line() == 3);
    }
}

TEST_CASE("random networks match the per-edge oracle")
{
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> xs(-3.0, 3.0);
    for (int iter = 0; iter < 100; ++iter) {
        Network net = random_network(rng);
        std::vector<double> x(static_cast<std::size_t>(net.input_size()));
        for (double& v : x)
            v = xs(rng);
        std::vector<double> expected = oracle_eval(net, x);
        Evaluation got = evaluate(net, x);
        REQUIRE(got.raw_outputs.size() == expected.size());
        for (std::size_t i = 0; i < expected.size(); ++i)
            CHECK(got.raw_outputs[i] == doctest::Approx(expected[i]).epsilon(1e-12));
        // ranking sorts scores descending, ties by ascending index
        for (std::size_t i = 0; i + 1 < got.ranking.size(); ++i) {
            double hi = got.raw_outputs[static_cast<std::size_t>(got.ranking[i])];
            double lo = got.raw_outputs[static_cast<std::size_t>(got.ranking[i + 1])];
            CHECK(hi >= lo);
            if (hi == lo)
                CHECK(got.ranking[i] < got.ranking[i + 1]);
        }
    }
}

TEST_CASE("ranking tie-break is the ascending index")
{
    Layer layer{1, 3, {0.0, 0.0, 0.0}, {1.0, 1.0, 1.0}, Activation::Linear};
    Network net({layer});
    CHECK(rank_outputs(net, std::vector<double>{5.0}) == std::vector<int>{0, 1, 2});
}
