#include "sbm/dnn.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace sbm {

Network::Network(std::vector<Layer> layers) : layers_(std::move(layers))
{
    if (layers_.empty())
        throw ModelError("network needs at least one layer");
    for (std::size_t i = 0; i < layers_.size(); ++i) {
        const Layer& l = layers_[i];
        if (l.in <= 0 || l.out <= 0)
            throw ModelError("layer dimensions must be positive");
        if (l.weights.size() != static_cast<std::size_t>(l.in) * l.out)
            throw ModelError("layer weight count does not match dimensions");
        if (l.bias.size() != static_cast<std::size_t>(l.out))
            throw ModelError("layer bias count does not match dimensions");
        if (i + 1 < layers_.size() && l.out != layers_[i + 1].in)
            throw ModelError("adjacent layer dimensions disagree");
    }
    if (layers_.back().activation != Activation::Linear)
        throw ModelError("output layer must be linear");
}

namespace {

// Strips a trailing `#` comment and splits a line into tokens.
std::vector<std::string> tokenize(const std::string& line)
{
    std::string body = line;
    if (auto pos = body.find('#'); pos != std::string::npos)
        body.erase(pos);
    std::istringstream ss(body);
    std::vector<std::string> toks;
    std::string t;
    while (ss >> t)
        toks.push_back(t);
    return toks;
}

double parse_real(const std::string& tok, int line)
{
    std::size_t used = 0;
    double v;
    try {
        v = std::stod(tok, &used);
    } catch (const std::exception&) {
        throw NetworkParseError(line, "malformed number '" + tok + "'");
    }
    if (used != tok.size())
        throw NetworkParseError(line, "malformed number '" + tok + "'");
    return v;
}

long parse_count(const std::string& tok, int line)
{
    std::size_t used = 0;
    long v;
    try {
        v = std::stol(tok, &used);
    } catch (const std::exception&) {
        throw NetworkParseError(line, "malformed count '" + tok + "'");
    }
    if (used != tok.size() || v <= 0)
        throw NetworkParseError(line, "expected positive count, got '" + tok + "'");
    return v;
}

} // namespace

Network load_network(const std::string& text)
{
    std::istringstream in(text);
    std::string line;
    int lineno = 0;

    // Collect non-empty token lines with their line numbers.
    std::vector<std::pair<int, std::vector<std::string>>> rows;
    while (std::getline(in, line)) {
        ++lineno;
        auto toks = tokenize(line);
        if (!toks.empty())
            rows.emplace_back(lineno, std::move(toks));
    }

    std::size_t pos = 0;
    auto need = [&](const char* what) -> std::pair<int, std::vector<std::string>>& {
        if (pos >= rows.size())
            throw NetworkParseError(lineno, std::string("unexpected end of file, expected ") + what);
        return rows[pos];
    };

    auto& header = need("'network <n>'");
    if (header.second.size() != 2 || header.second[0] != "network")
        throw NetworkParseError(header.first, "expected 'network <num_layers>'");
    long num_layers = parse_count(header.second[1], header.first);
    ++pos;

    std::vector<Layer> layers;
    for (long li = 0; li < num_layers; ++li) {
        auto& lhead = need("'layer <in> <out> <activation>'");
        if (lhead.second.size() != 4 || lhead.second[0] != "layer")
            throw NetworkParseError(lhead.first, "expected 'layer <in> <out> <relu|linear>'");
        Layer layer;
        layer.in = static_cast<int>(parse_count(lhead.second[1], lhead.first));
        layer.out = static_cast<int>(parse_count(lhead.second[2], lhead.first));
        if (lhead.second[3] == "relu")
            layer.activation = Activation::Relu;
        else if (lhead.second[3] == "linear")
            layer.activation = Activation::Linear;
        else
            throw NetworkParseError(lhead.first, "unknown activation '" + lhead.second[3] + "'");
        ++pos;

        auto& wrow = need("'w ...'");
        if (wrow.second.empty() || wrow.second[0] != "w")
            throw NetworkParseError(wrow.first, "expected weight line 'w ...'");
        const std::size_t want = static_cast<std::size_t>(layer.in) * layer.out;
        if (wrow.second.size() - 1 != want)
            throw NetworkParseError(wrow.first, "expected " + std::to_string(want) +
                                                    " weights, got " +
                                                    std::to_string(wrow.second.size() - 1));
        for (std::size_t i = 1; i < wrow.second.size(); ++i)
            layer.weights.push_back(parse_real(wrow.second[i], wrow.first));
        ++pos;

        layer.bias.assign(static_cast<std::size_t>(layer.out), 0.0);
        if (pos < rows.size() && !rows[pos].second.empty() && rows[pos].second[0] == "b") {
            auto& brow = rows[pos];
            if (brow.second.size() - 1 != static_cast<std::size_t>(layer.out))
                throw NetworkParseError(brow.first, "expected " + std::to_string(layer.out) +
                                                        " biases, got " +
                                                        std::to_string(brow.second.size() - 1));
            for (std::size_t i = 1; i < brow.second.size(); ++i)
                layer.bias[i - 1] = parse_real(brow.second[i], brow.first);
            ++pos;
        }
        layers.push_back(std::move(layer));
    }
    if (pos != rows.size())
        throw NetworkParseError(rows[pos].first, "trailing content after last layer");

    try {
        return Network(std::move(layers));
    } catch (const ModelError& e) {
        throw NetworkParseError(lineno, e.what());
    }
}

Evaluation evaluate(const Network& net, std::span<const double> input)
{
    if (static_cast<int>(input.size()) != net.input_size())
        throw ModelError("evaluate: expected " + std::to_string(net.input_size()) +
                         " inputs, got " + std::to_string(input.size()));

    Evaluation ev;
    ev.input.assign(input.begin(), input.end());
    std::vector<double> cur = ev.input;
    for (const Layer& l : net.layers()) {
        std::vector<double> next(static_cast<std::size_t>(l.out));
        for (int r = 0; r < l.out; ++r) {
            double s = l.bias[static_cast<std::size_t>(r)];
            const double* w = &l.weights[static_cast<std::size_t>(r) * l.in];
            for (int c = 0; c < l.in; ++c)
                s += w[c] * cur[static_cast<std::size_t>(c)];
            next[static_cast<std::size_t>(r)] = l.activation == Activation::Relu ? relu(s) : s;
        }
        cur = std::move(next);
    }
    ev.raw_outputs = std::move(cur);

    ev.ranking.resize(ev.raw_outputs.size());
    std::iota(ev.ranking.begin(), ev.ranking.end(), 0);
    std::stable_sort(ev.ranking.begin(), ev.ranking.end(), [&](int a, int b) {
        return ev.raw_outputs[static_cast<std::size_t>(a)] >
               ev.raw_outputs[static_cast<std::size_t>(b)];
    });
    return ev;
}

std::vector<int> rank_outputs(const Network& net, std::span<const double> input)
{
    return evaluate(net, input).ranking;
}

} // namespace sbm
