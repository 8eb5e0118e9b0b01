#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "conekit/batteries.hpp"
#include "conekit/kkt.hpp"
#include "conekit/penalty.hpp"
#include "conekit/problem.hpp"

namespace conekit {

// Cone in JSON form: {"type":"zero","dim":2}, {"type":"psd","order":3},
// {"type":"product","parts":[...]}.
Cone cone_from_json(const nlohmann::json& j);
nlohmann::ordered_json cone_to_json(const Cone& k);

// Compact descriptor used on the command line: "zero:2", "nonpos:1",
// "lorentz:3", "psd:2" (matrix order, not vector length),
// "product(zero:1,nonpos:2)". Round-trips through cone_descriptor.
Cone parse_cone_descriptor(const std::string& text);
std::string cone_descriptor(const Cone& k);

Problem problem_from_json(const nlohmann::json& j);
Problem load_problem(const std::string& path);

// Comma-separated list of numbers, e.g. "-1,0,2.5".
Vec parse_number_list(const std::string& text);

std::string format_double(double v);  // %.17g

nlohmann::ordered_json kkt_to_json(const KktReport& r);
nlohmann::ordered_json regularity_to_json(const RegularityReport& r);
nlohmann::ordered_json solve_to_json(const SolveResult& r);
nlohmann::ordered_json replay_to_json(const ReplayResult& r);
nlohmann::ordered_json cone_battery_to_json(const ConeBatteryReport& r);
nlohmann::ordered_json penalty_grad_to_json(const PenaltyGradReport& r);
nlohmann::ordered_json grad_battery_to_json(const GradBatteryReport& r);

// CSV with one row per outer iterate, then "<path>.json" with the full
// iterate vectors (x and lambda) alongside it.
void write_trace_csv(const std::string& path, const std::vector<IterateRecord>& trace);
void write_trace_sidecar(const std::string& csv_path,
                         const std::vector<IterateRecord>& trace);

}  // namespace conekit
