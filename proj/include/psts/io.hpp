#ifndef PSTS_IO_HPP
#define PSTS_IO_HPP

// Line-oriented text formats and CSV output.

#include "psts/cost_model.hpp"
#include "psts/scheduling.hpp"
#include "psts/simulator.hpp"
#include "psts/task.hpp"
#include "psts/topology.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace psts::io {

// packetbits <w> | node <id> <tau> | link <a> <b> <bandwidth>; '#' comments.
// A bandwidth of "inf" gives a link with no transfer cost.
ClusterGraph parse_topology(std::string_view text);
std::string serialize_topology(const ClusterGraph& graph);

// task <id> <origin> <beta> <mu> <arrival>
std::vector<TaskSpec> parse_tasks(std::string_view text);
std::string serialize_tasks(const std::vector<TaskSpec>& tasks);

// Tasks at their origins; throws ValidationError naming unknown origins.
std::vector<PlacedTask> place(const ClusterGraph& graph, const std::vector<TaskSpec>& tasks);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

// move <task> <src> <dst> lines, then the summary trailer.
std::string format_plan(const ClusterGraph& graph, const scheduling::MigrationPlan& plan);

// node,tau,load rows.
std::string format_loads(const ClusterGraph& graph, const std::vector<Units>& loads);

std::string format_number(double v);

extern const char* const kReportHeader;

std::string report_row(const sim::SimulationReport& report, std::optional<double> speedup,
                       std::optional<double> crossover);

std::string format_cost_table(const cost::OptimalityReport& report);

} // namespace psts::io

#endif
