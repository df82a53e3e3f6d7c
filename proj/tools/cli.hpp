#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

namespace CLI {
class App;
}

namespace rankskew::cli {

/// Values bound to the command-line flags of every subcommand.
struct CliState {
    // shared
    std::string out_dir = ".";
    std::uint64_t seed = 0;
    unsigned threads = 0;

    // series input
    std::string input;
    std::string kind = "return";
    std::string period = "daily";
    std::string label;
    std::string rate_file;
    std::string benchmark;
    bool risk_managed = false;
    bool monthly = false;
    std::size_t bootstrap = 1000;

    // synth
    std::string dist;
    double nu_plus = 5.0;
    double nu_minus = 3.5;
    double zeta3 = 0.0;
    double kurt = 0.0;
    std::size_t n = 0;

    // fig10
    std::vector<double> nu_plus_grid{3.2, 3.5, 4.0, 5.0, 7.0, 10.0};

    // portfolios
    std::string returns_file;
    std::string signal_file;
    std::string spot_file;
    std::string rates_file;
    std::size_t buckets = 10;
    std::string rebalance = "monthly";

    // analysis
    bool reference = false;
    std::size_t window = 252;
    std::size_t step = 21;
    std::vector<std::string> series_files;
    std::vector<std::string> exclude;
};

/// The full command tree; every option carries a description.
std::unique_ptr<CLI::App> build_app(CliState& state);

/// Parses and runs one invocation. Returns 0 on success, 2 on a usage error
/// and 1 on a data or validation error; files written by a failed run are
/// removed.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rankskew::cli
