#ifndef PSTS_CLI_HPP
#define PSTS_CLI_HPP

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace psts::cli {

enum Exit : int { kOk = 0, kUsage = 1, kInvalid = 2 };

struct RunConfig {
    std::string command; // balance | simulate | sweep | crossover | cost
    std::optional<std::string> topology;
    std::optional<std::string> tasks;
    std::optional<std::string> gen;
    std::optional<std::string> shape;
    std::optional<double> p;
    std::optional<double> q;
    std::uint64_t seed = 1;
    std::optional<std::string> out;
    std::string format = "csv"; // csv | plan
    std::string policy = "on-arrival:0.1";
    std::vector<std::size_t> nodes; // sweep, crossover and cost without a topology
    std::vector<std::string> shapes{"hypercube", "line"};
    std::string mode = "backlog"; // crossover instance family
};

// Throws ValidationError on bad input and std::invalid_argument on usage errors.
int run(const RunConfig& config, std::ostream& out);

// Parses argv, runs, and maps errors to exit codes with a message on `err`.
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace psts::cli

#endif
