// chemotaxis: train and evaluate curvature-steering swimmers.
//
//   chemotaxis train    [options]   -> weights.txt, training_curve.csv
//   chemotaxis evaluate [options]   -> per-cell trajectory/centerline CSVs, summary.csv
//   chemotaxis compare  [options]   -> compare.csv (qnet, greedy, swinging on paired spawns)
//   chemotaxis baseline [options]   -> evaluate with the greedy or swinging policy
//   chemotaxis config   [options]   -> print the resolved configuration

#include "commands.hpp"

#include "chemotaxis/errors.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <vector>

using namespace chemotaxis;

namespace {

struct Flags {
    std::string config_path;
    std::optional<long long> seed;
    std::optional<std::string> out_dir;
    std::optional<int> epochs;
    std::optional<int> n_t;
    std::optional<double> t_life;
    std::optional<std::string> policy;
    std::optional<std::string> flow;
    bool flow_aware = false;
    bool adaptive_speed = false;
    std::optional<std::string> field;
    std::optional<int> cells;
    std::optional<std::string> weights;
    std::optional<int> threads;
    std::vector<std::string> settings;
};

void add_common(CLI::App* cmd, Flags& f) {
    cmd->add_option("--config", f.config_path, "key = value configuration file");
    cmd->add_option("--seed", f.seed, "run seed");
    cmd->add_option("--out-dir", f.out_dir, "output directory");
    cmd->add_option("--epochs", f.epochs, "training epochs");
    cmd->add_option("--n-t", f.n_t, "perception window length (2, 4 or 8)");
    cmd->add_option("--t-life", f.t_life, "evaluation lifespan");
    cmd->add_option("--policy", f.policy, "qnet | greedy | swinging");
    cmd->add_option("--flow", f.flow, "none | tg");
    cmd->add_flag("--flow-aware", f.flow_aware, "feed flow samples to the network");
    cmd->add_flag("--adaptive-speed", f.adaptive_speed, "speed v1 on kappa1, v2 on kappa2");
    cmd->add_option("--field", f.field, "linear | radial");
    cmd->add_option("--cells", f.cells, "evaluation cohort size");
    cmd->add_option("--weights", f.weights, "network weight file");
    cmd->add_option("--threads", f.threads, "evaluation worker threads");
    cmd->add_option("--set", f.settings, "extra key=value setting (repeatable)");
}

Overrides collect(const Flags& f) {
    Overrides o;
    if (f.seed) o.emplace_back("seed", std::to_string(*f.seed));
    if (f.out_dir) o.emplace_back("out_dir", *f.out_dir);
    if (f.epochs) o.emplace_back("epochs", std::to_string(*f.epochs));
    if (f.n_t) o.emplace_back("n_t", std::to_string(*f.n_t));
    if (f.t_life) o.emplace_back("t_life", format_number(*f.t_life));
    if (f.policy) o.emplace_back("policy", *f.policy);
    if (f.flow) o.emplace_back("flow", *f.flow);
    if (f.flow_aware) o.emplace_back("flow_aware", "true");
    if (f.adaptive_speed) o.emplace_back("adaptive_speed", "true");
    if (f.field) o.emplace_back("field", *f.field);
    if (f.cells) o.emplace_back("cells", std::to_string(*f.cells));
    if (f.weights) o.emplace_back("weights", *f.weights);
    if (f.threads) o.emplace_back("threads", std::to_string(*f.threads));
    for (const std::string& s : f.settings) {
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + s + "'");
        o.emplace_back(s.substr(0, eq), s.substr(eq + 1));
    }
    return o;
}

RunConfig resolve(const Flags& f) {
    const Overrides o = collect(f);
    return f.config_path.empty() ? parse_config("", o) : load_config(f.config_path, o);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Self-learned chemotaxis of curvature-steering swimmers"};
    app.require_subcommand(1);

    Flags flags;
    auto* train = app.add_subcommand("train", "train a Q-network");
    auto* evaluate = app.add_subcommand("evaluate", "evaluate a policy over a cohort of cells");
    auto* compare = app.add_subcommand("compare", "paired cohorts: qnet, greedy and swinging");
    auto* baseline = app.add_subcommand("baseline", "evaluate the greedy (default) or swinging baseline");
    auto* show = app.add_subcommand("config", "print the resolved configuration");
    for (auto* cmd : {train, evaluate, compare, baseline, show}) add_common(cmd, flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return cli::kConfigError;
    }

    return cli::guarded(std::cerr, [&] {
        RunConfig config = resolve(flags);
        if (train->parsed()) {
            cli::cmd_train(config, std::cout);
        } else if (evaluate->parsed()) {
            cli::cmd_evaluate(config, std::cout);
        } else if (compare->parsed()) {
            cli::cmd_compare(config, std::cout);
        } else if (baseline->parsed()) {
            if (!flags.policy) config.policy = PolicyKind::Greedy;
            if (config.policy == PolicyKind::QNet) throw ConfigError("baseline: policy must be greedy or swinging");
            cli::cmd_evaluate(config, std::cout);
        } else {
            std::cout << format_config(config);
        }
    });
}
