#include "commands.hpp"

#include "chemotaxis/errors.hpp"

#include <cstdio>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace chemotaxis::cli {

namespace {

std::string join(const std::string& dir, const std::string& name) {
    return (std::filesystem::path(dir) / name).string();
}

std::string cell_name(int cell) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "cell_%03d", cell);
    return buf;
}

Policy make_policy(PolicyKind kind, const QNetwork* net) {
    switch (kind) {
        case PolicyKind::QNet: return QNetPolicy{net, 0.0};
        case PolicyKind::Greedy: return GreedyPolicy{};
        case PolicyKind::Swinging: return SwingingPolicy{};
    }
    return GreedyPolicy{};
}

void report_cohort(std::ostream& log, const std::string& label, const CohortResult& cohort) {
    std::size_t reached = 0;
    for (const auto& ep : cohort.episodes) reached += ep.termination == Termination::ReachedSource;
    log << std::left << std::setw(10) << label << " cells=" << cohort.gains.size()
        << " mean_gain=" << format_number(cohort.mean) << " variance=" << format_number(cohort.variance);
    if (reached > 0) log << " reached_source=" << reached;
    log << '\n';
}

}  // namespace

QNetwork load_checked_weights(const RunConfig& config) {
    if (config.weights.empty()) throw ConfigError("weights: a weight file is required for the qnet policy");
    QNetwork net = load_network(config.weights);
    const std::size_t expected = input_dimension(config.n_t, config.flow_aware);
    if (net.input_dim() != expected) {
        throw ConfigError("weights: network input dimension " + std::to_string(net.input_dim()) +
                          " does not match the configured input dimension " + std::to_string(expected) +
                          " (n_t=" + std::to_string(config.n_t) +
                          (config.flow_aware ? ", flow-aware)" : ", flow-blind)"));
    }
    if (net.output_dim() != 2) throw IoError("weights: network must have exactly two outputs");
    return net;
}

void cmd_train(const RunConfig& config, std::ostream& log) {
    if (config.resolved_epochs() <= 0) throw ConfigError("nothing to train: epochs must be positive");
    const TrainingSchedule schedule = config.training_schedule();
    const EpisodeConfig episode = config.training_episode();

    const int report_every = std::max(1, schedule.epochs / 10);
    const TrainingResult trained = train_agent(schedule, episode, config.seed, [&](const EpochRecord& r) {
        if ((r.epoch + 1) % report_every == 0) {
            log << "epoch " << r.epoch + 1 << '/' << schedule.epochs << " gain=" << format_number(r.gain)
                << " loss=" << format_number(r.mean_loss) << " epsilon=" << format_number(r.epsilon) << '\n';
        }
    });

    std::ostringstream weights;
    save_network(trained.net, weights);
    const std::string weights_path = join(config.out_dir, "weights.txt");
    write_file(weights_path, weights.str());

    std::ostringstream curve;
    write_curve_csv(curve, trained.curve);
    const std::string curve_path = join(config.out_dir, "training_curve.csv");
    write_file(curve_path, curve.str());

    write_file(join(config.out_dir, "train_config.txt"), format_config(config));

    std::vector<double> gains;
    for (const auto& r : trained.curve) gains.push_back(r.gain);
    const std::size_t window = std::min<std::size_t>(100, gains.size());
    const std::vector<double> head(gains.begin(), gains.begin() + static_cast<long>(window));
    const std::vector<double> tail(gains.end() - static_cast<long>(window), gains.end());
    log << "trained " << schedule.epochs << " epochs, input dimension " << trained.net.input_dim()
        << ", hidden " << schedule.hidden_layers << 'x' << schedule.hidden_nodes << '\n'
        << "first-" << window << " mean gain " << format_number(mean_of(head)) << ", last-" << window
        << " mean gain " << format_number(mean_of(tail)) << ", final epsilon "
        << format_number(trained.final_epsilon) << '\n'
        << "wrote " << weights_path << " and " << curve_path << '\n';
}

void cmd_evaluate(const RunConfig& config, std::ostream& log) {
    QNetwork net;
    if (config.policy == PolicyKind::QNet) net = load_checked_weights(config);
    const EpisodeConfig episode = config.evaluation_episode();
    const CohortResult cohort =
        evaluate_cohort(make_policy(config.policy, &net), episode, config.cells, config.seed, config.threads);

    const std::string dir = join(config.out_dir, "evaluate_" + policy_name(config.policy));
    for (std::size_t i = 0; i < cohort.episodes.size(); ++i) {
        const std::string base = join(dir, cell_name(static_cast<int>(i)));
        std::ostringstream traj;
        write_trajectory_csv(traj, cohort.episodes[i]);
        write_file(base + "_trajectory.csv", traj.str());
        std::ostringstream center;
        write_centerline_csv(center, cohort.episodes[i], episode.dt);
        write_file(base + "_centerline.csv", center.str());
    }
    std::ostringstream summary;
    write_summary_csv(summary, cohort);
    write_file(join(dir, "summary.csv"), summary.str());

    report_cohort(log, policy_name(config.policy), cohort);
    log << "wrote " << cohort.episodes.size() << " cells to " << dir << '\n';
}

void cmd_compare(const RunConfig& config, std::ostream& log) {
    const EpisodeConfig episode = config.evaluation_episode();
    ComparisonTable table;

    QNetwork net;
    const bool with_net = !config.weights.empty();
    if (with_net) {
        net = load_checked_weights(config);
        const CohortResult drl = evaluate_cohort(QNetPolicy{&net, 0.0}, episode, config.cells, config.seed,
                                                 config.threads);
        table.qnet = drl.gains;
        report_cohort(log, "qnet", drl);
    }
    const CohortResult greedy = evaluate_cohort(GreedyPolicy{}, episode, config.cells, config.seed, config.threads);
    table.greedy = greedy.gains;
    report_cohort(log, "greedy", greedy);
    const CohortResult swinging =
        evaluate_cohort(SwingingPolicy{}, episode, config.cells, config.seed, config.threads);
    table.swinging = swinging.gains;
    report_cohort(log, "swinging", swinging);

    if (with_net) {
        log << "qnet mean " << (mean_of(table.qnet) > greedy.mean ? "exceeds" : "does not exceed")
            << " greedy mean\n";
    }

    std::ostringstream csv;
    write_comparison_csv(csv, table);
    const std::string path = join(config.out_dir, "compare.csv");
    write_file(path, csv.str());
    log << "wrote " << path << '\n';
}

int guarded(std::ostream& err, const std::function<void()>& body) {
    try {
        body();
        return kOk;
    } catch (const ConfigError& e) {
        err << "configuration error: " << e.what() << '\n';
        return kConfigError;
    } catch (const IoError& e) {
        err << "i/o error: " << e.what() << '\n';
        return kIoError;
    } catch (const TrainingFault& e) {
        err << "fault: " << e.what() << '\n';
        return kFault;
    } catch (const std::exception& e) {
        err << "fault: " << e.what() << '\n';
        return kFault;
    }
}

}  // namespace chemotaxis::cli
