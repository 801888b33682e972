#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "sbm/builder.hpp"
#include "sbm/demos.hpp"
#include "sbm/verify.hpp"

namespace {

std::string read_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw sbm::ModelError("cannot open " + path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

sbm::Model load_model(const std::string& path)
{
    sbm::ModelDocument doc = sbm::parse_model(read_file(path));
    std::string base = std::filesystem::path(path).parent_path().string();
    if (base.empty())
        base = ".";
    return sbm::build_model(doc, base);
}

void emit(const std::string& text, const std::string& trace_path)
{
    std::cout << text;
    if (!trace_path.empty()) {
        std::ofstream out(trace_path);
        if (!out)
            throw sbm::ModelError("cannot write " + trace_path);
        out << text;
    }
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"scenario-based model runner and deadlock verifier"};
    app.require_subcommand(1);

    std::string model_path, trace_path, alphabet_path, mode = "concrete",
                strategy = "lex", demo_name;
    int steps = 100, depth = 0, window = 10;
    std::uint64_t seed = 0;

    CLI::App* run_cmd = app.add_subcommand("run", "execute a model");
    run_cmd->add_option("model", model_path, "model file")->required();
    run_cmd->add_option("--steps", steps, "event budget");
    run_cmd->add_option("--seed", seed, "random strategy seed");
    run_cmd->add_option("--strategy", strategy, "lex|random")
        ->check(CLI::IsMember({"lex", "random"}));
    run_cmd->add_option("--trace", trace_path, "also write the trace here");

    CLI::App* verify_cmd = app.add_subcommand("verify", "bounded deadlock search");
    verify_cmd->add_option("model", model_path, "model file")->required();
    verify_cmd->add_option("--alphabet", alphabet_path, "input alphabet file")->required();
    verify_cmd->add_option("--depth", depth, "search depth (>= 1)")->required();
    verify_cmd->add_option("--mode", mode, "concrete|blackbox")
        ->check(CLI::IsMember({"concrete", "blackbox"}));
    verify_cmd->add_option("--trace", trace_path, "also write the result here");

    CLI::App* demo_cmd = app.add_subcommand("demo", "built-in case studies");
    demo_cmd->add_option("name", demo_name, "watertap|scheduler|congestion")
        ->required()
        ->check(CLI::IsMember({"watertap", "scheduler", "congestion"}));
    demo_cmd->add_option("--steps", steps, "events (watertap) or rounds");
    demo_cmd->add_option("--seed", seed, "arrival stream seed (scheduler)");
    demo_cmd->add_option("--window", window, "steady-state window (congestion)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? 0 : 1;
    }

    try {
        if (*run_cmd) {
            sbm::Model model = load_model(model_path);
            sbm::ModelInstance instance(std::move(model), seed,
                                        strategy == "random"
                                            ? sbm::Strategy::SeededRandom
                                            : sbm::Strategy::Lexicographic);
            sbm::RunReason reason = sbm::run(instance, steps);
            emit(sbm::render_trace(instance.trace, reason), trace_path);
            return reason == sbm::RunReason::Deadlock ? 2 : 0;
        }
        if (*verify_cmd) {
            if (depth < 1) {
                std::cerr << "error: --depth must be >= 1\n";
                return 1;
            }
            sbm::Model model = load_model(model_path);
            sbm::InputAlphabet alphabet{sbm::parse_value_tuples(read_file(alphabet_path))};
            sbm::Verdict verdict = sbm::check_deadlock_freedom(
                model, alphabet,
                mode == "blackbox" ? sbm::VerifyMode::Blackbox
                                   : sbm::VerifyMode::Concrete,
                depth);
            if (verdict.safe) {
                emit("deadlock-free up to depth " + std::to_string(verdict.depth) + "\n",
                     trace_path);
                return 0;
            }
            std::string out = sbm::render_counterexample(verdict);
            std::vector<std::vector<sbm::Value>> inputs;
            for (const sbm::Event& e : verdict.inputs)
                inputs.push_back(e.values());
            sbm::ReplayResult replayed = sbm::replay(model, inputs);
            out += "#replay: " + std::string(sbm::reason_name(replayed.reason));
            if (replayed.reason == sbm::RunReason::Deadlock)
                out += " at step " + std::to_string(replayed.deadlock_step);
            out += "\n";
            emit(out, trace_path);
            return 3;
        }
        if (demo_name == "watertap") {
            std::cout << sbm::demo_watertap_trace(steps);
        } else if (demo_name == "scheduler") {
            sbm::SchedulerReport r = sbm::demo_scheduler(seed, steps);
            std::cout << "rounds " << r.rounds << "\n"
                      << "unguarded invalid " << r.invalid_unguarded
                      << (r.deadlock_unguarded ? " (deadlocked)" : "") << "\n"
                      << "guarded invalid " << r.invalid_guarded
                      << (r.deadlock_guarded ? " (deadlocked)" : "") << "\n";
        } else {
            sbm::CongestionReport r = sbm::demo_congestion(window, steps);
            for (std::size_t i = 0; i < r.picks.size(); ++i)
                std::cout << i + 1 << " " << r.picks[i] << "\n";
            std::cout << "first forced round " << r.first_forced_round << "\n";
        }
        return 0;
    } catch (const sbm::ModelError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
