#pragma once

#include "vcz/cz_decomposition.hpp"
#include "vcz/generator.hpp"
#include "vcz/timegrid.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace vcz::cli {

using nlohmann::json;
namespace fs = std::filesystem;

/// Bad input or configuration; maps to exit code 2.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Real number: decimal, "inf", or a fraction "a/b".
double parse_real(const std::string& text, const std::string& what);
std::vector<double> parse_real_list(const std::string& text, const std::string& what);
std::vector<std::int64_t> parse_int_list(const std::string& text, const std::string& what);
/// "a..b" (inclusive) or a single integer.
std::pair<std::uint64_t, std::uint64_t> parse_seed_range(const std::string& text);

/// Sidecar of a step-function CSV: same path with the extension replaced by ".meta".
fs::path meta_path(const fs::path& csv);

/// CSV `cell_index,t_left,t_right,v_0,...` plus the key=value sidecar (n_min, N, m, r).
/// Without a sidecar the grid is inferred from the rows and r defaults to 2.
StepFunction read_step_function(const fs::path& csv);
void write_step_function(const StepFunction& f, const fs::path& csv);

/// key=value generator config: m, bc, Lambda, a, b, c, a_random_seed, coefficients (a companion
/// CSV with columns a,b,c; a has one row per midpoint, b and c one per node and may be blank
/// past the last node).
GeneratorSpec read_generator_spec(const fs::path& cfg);
void write_generator_spec(const GeneratorSpec& spec, const fs::path& cfg);

json to_json(const StepFunction& f);
StepFunction step_function_from_json(const json& j);
json to_json(const GeneratorSpec& spec);
json to_json(const DyadicCube& q);
json to_json(const PropertyReport& report);
/// Doubles as JSON numbers, with infinities spelled as strings.
json number(double v);
double number_from_json(const json& j);

void write_json(const json& j, const fs::path& path);
json read_json(const fs::path& path);

std::string fmt(double v);

} // namespace vcz::cli
