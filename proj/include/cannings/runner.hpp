#ifndef CANNINGS_RUNNER_HPP
#define CANNINGS_RUNNER_HPP

#include <optional>
#include <string>
#include <vector>

#include "cannings/scenario.hpp"

namespace cannings {

struct RunOverrides {
    std::optional<uint64_t> seed;
    std::optional<int64_t> replicates;
    std::optional<int64_t> horizon;
    std::optional<int64_t> cap;
    std::optional<std::string> mode;  // simulate: forward | backward | gw
    std::optional<std::vector<int>> n_grid;
    std::optional<std::vector<double>> t_grid;
};

// Dispatches a subcommand, writes the CSV and its manifest. Returns the
// process exit code: 0 ok, 1 validation/domain error, 2 cap error. Error
// text goes to `error_out` when given.
int run_command(const std::string& subcommand, const std::string& config_path,
                const std::string& out_path, const RunOverrides& overrides,
                std::string* error_out = nullptr);

std::vector<std::string> known_subcommands();

}  // namespace cannings

#endif
