#pragma once

#include "chemotaxis/config.hpp"
#include "chemotaxis/export.hpp"

#include <functional>
#include <iosfwd>
#include <string>

namespace chemotaxis::cli {

enum ExitStatus : int {
    kOk = 0,
    kConfigError = 2,
    kIoError = 3,
    kFault = 4,
};

// Each command writes its files under config.out_dir and a short report to
// `log`. Errors propagate as ConfigError / IoError / TrainingFault.
void cmd_train(const RunConfig& config, std::ostream& log);
void cmd_evaluate(const RunConfig& config, std::ostream& log);
void cmd_compare(const RunConfig& config, std::ostream& log);

// Loads config.weights and checks its input size against the configuration.
QNetwork load_checked_weights(const RunConfig& config);

// Runs `body` and maps exceptions to exit statuses, printing the diagnostic.
int guarded(std::ostream& err, const std::function<void()>& body);

}  // namespace chemotaxis::cli
