#include "io.hpp"

#include "vcz/dyadic.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

namespace vcz::cli {

namespace {

std::string trim(const std::string& s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) {
        out.push_back(trim(item));
    }
    if (!s.empty() && s.back() == sep) {
        out.emplace_back();
    }
    return out;
}

std::ifstream open_input(const fs::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw UsageError("cannot open " + path.string());
    }
    return in;
}

std::ofstream open_output(const fs::path& path)
{
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path());
    }
    std::ofstream out(path);
    if (!out) {
        throw UsageError("cannot write " + path.string());
    }
    return out;
}

std::map<std::string, std::string> read_key_values(const fs::path& path)
{
    auto in = open_input(path);
    std::map<std::string, std::string> out;
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        const auto hash = line.find('#');
        line = trim(line.substr(0, hash));
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw UsageError(path.string() + ":" + std::to_string(number) + ": expected key=value");
        }
        out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return out;
}

std::int64_t parse_integer(const std::string& text, const std::string& what)
{
    std::size_t used = 0;
    long long v = 0;
    try {
        v = std::stoll(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != text.size() || text.empty()) {
        throw UsageError("invalid integer '" + text + "' for " + what);
    }
    return v;
}

} // namespace

std::string fmt(double v)
{
    return format_double(v);
}

double parse_real(const std::string& raw, const std::string& what)
{
    const std::string text = trim(raw);
    if (text == "inf" || text == "Inf" || text == "infinity") {
        return kInfinity;
    }
    const auto slash = text.find('/');
    if (slash != std::string::npos) {
        const double den = parse_real(text.substr(slash + 1), what);
        if (den == 0.0 || !std::isfinite(den)) {
            throw UsageError("invalid fraction '" + text + "' for " + what);
        }
        return parse_real(text.substr(0, slash), what) / den;
    }
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != text.size() || text.empty() || std::isnan(v)) {
        throw UsageError("invalid number '" + text + "' for " + what);
    }
    return v;
}

std::vector<double> parse_real_list(const std::string& text, const std::string& what)
{
    std::vector<double> out;
    for (const auto& item : split(text, ',')) {
        out.push_back(parse_real(item, what));
    }
    if (out.empty()) {
        throw UsageError("empty list for " + what);
    }
    return out;
}

std::vector<std::int64_t> parse_int_list(const std::string& text, const std::string& what)
{
    std::vector<std::int64_t> out;
    for (const auto& item : split(text, ',')) {
        out.push_back(parse_integer(item, what));
    }
    if (out.empty()) {
        throw UsageError("empty list for " + what);
    }
    return out;
}

std::pair<std::uint64_t, std::uint64_t> parse_seed_range(const std::string& text)
{
    const auto dots = text.find("..");
    const std::string lo = dots == std::string::npos ? text : text.substr(0, dots);
    const std::string hi = dots == std::string::npos ? text : text.substr(dots + 2);
    const auto a = parse_integer(trim(lo), "--seeds");
    const auto b = parse_integer(trim(hi), "--seeds");
    if (a < 0 || b < a) {
        throw UsageError("invalid seed range '" + text + "' for --seeds");
    }
    return {static_cast<std::uint64_t>(a), static_cast<std::uint64_t>(b)};
}

fs::path meta_path(const fs::path& csv)
{
    fs::path out = csv;
    out.replace_extension(".meta");
    return out;
}

StepFunction read_step_function(const fs::path& csv)
{
    auto in = open_input(csv);
    std::string line;
    if (!std::getline(in, line)) {
        throw UsageError(csv.string() + ": empty file");
    }
    const auto header = split(trim(line), ',');
    if (header.size() < 4 || header[0] != "cell_index" || header[1] != "t_left" || header[2] != "t_right") {
        throw UsageError(csv.string() + ": expected header cell_index,t_left,t_right,v_0,...");
    }
    const auto m = static_cast<int>(header.size() - 3);
    for (int a = 0; a < m; ++a) {
        if (header[static_cast<std::size_t>(3 + a)] != "v_" + std::to_string(a)) {
            throw UsageError(csv.string() + ": unexpected column " + header[static_cast<std::size_t>(3 + a)]);
        }
    }
    std::vector<std::vector<double>> rows;
    double width = 0.0;
    int number = 1;
    while (std::getline(in, line)) {
        ++number;
        if (trim(line).empty()) {
            continue;
        }
        const auto cols = split(trim(line), ',');
        const std::string where = csv.string() + ":" + std::to_string(number);
        if (cols.size() != header.size()) {
            throw UsageError(where + ": expected " + std::to_string(header.size()) + " columns");
        }
        const auto index = parse_integer(cols[0], where);
        if (index != static_cast<std::int64_t>(rows.size())) {
            throw UsageError(where + ": cell indices must run 0, 1, 2, ...");
        }
        const double left = parse_real(cols[1], where);
        const double right = parse_real(cols[2], where);
        if (rows.empty()) {
            width = right - left;
        }
        std::vector<double> values;
        for (int a = 0; a < m; ++a) {
            values.push_back(parse_real(cols[static_cast<std::size_t>(3 + a)], where));
            if (!std::isfinite(values.back())) {
                throw UsageError(where + ": values must be finite");
            }
        }
        rows.push_back(std::move(values));
    }
    if (rows.empty()) {
        throw UsageError(csv.string() + ": no cells");
    }

    int level = 0;
    double r = 2.0;
    const auto meta = meta_path(csv);
    if (fs::exists(meta)) {
        const auto kv = read_key_values(meta);
        for (const auto& [key, value] : kv) {
            if (key != "n_min" && key != "N" && key != "m" && key != "r") {
                throw UsageError(meta.string() + ": unknown key '" + key + "'");
            }
        }
        auto get = [&](const char* key) {
            const auto it = kv.find(key);
            if (it == kv.end()) {
                throw UsageError(meta.string() + ": missing key " + key);
            }
            return it->second;
        };
        level = static_cast<int>(parse_integer(get("n_min"), "n_min"));
        if (parse_integer(get("N"), "N") != static_cast<std::int64_t>(rows.size())) {
            throw UsageError(meta.string() + ": N does not match the number of CSV rows");
        }
        if (parse_integer(get("m"), "m") != m) {
            throw UsageError(meta.string() + ": m does not match the number of value columns");
        }
        r = parse_real(get("r"), "r");
    } else {
        int exponent = 0;
        const double mantissa = std::frexp(width, &exponent);
        if (mantissa != 0.5) {
            throw UsageError(csv.string() + ": cell width is not a power of two and no .meta sidecar exists");
        }
        level = exponent - 1;
    }
    const TimeGrid grid(level, static_cast<std::int64_t>(rows.size()));
    Eigen::MatrixXd samples(m, static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (int a = 0; a < m; ++a) {
            samples(a, static_cast<Eigen::Index>(i)) = rows[i][static_cast<std::size_t>(a)];
        }
    }
    try {
        return StepFunction(grid, SpatialSpace(m, r), std::move(samples));
    } catch (const std::invalid_argument& e) {
        throw UsageError(csv.string() + ": " + e.what());
    }
}

void write_step_function(const StepFunction& f, const fs::path& csv)
{
    auto out = open_output(csv);
    out << "cell_index,t_left,t_right";
    for (int a = 0; a < f.dimension(); ++a) {
        out << ",v_" << a;
    }
    out << '\n';
    for (std::int64_t i = 0; i < f.cells(); ++i) {
        out << i << ',' << fmt(f.grid().left(i)) << ',' << fmt(f.grid().right(i));
        for (int a = 0; a < f.dimension(); ++a) {
            out << ',' << fmt(f.samples()(a, static_cast<Eigen::Index>(i)));
        }
        out << '\n';
    }
    auto meta = open_output(meta_path(csv));
    meta << "n_min=" << f.grid().level() << "\nN=" << f.cells() << "\nm=" << f.dimension()
         << "\nr=" << (std::isinf(f.space().exponent()) ? std::string("inf") : fmt(f.space().exponent())) << '\n';
}

GeneratorSpec read_generator_spec(const fs::path& cfg)
{
    const auto kv = read_key_values(cfg);
    static const char* known[] = {"m", "bc", "Lambda", "a", "b", "c", "a_random_seed", "coefficients"};
    for (const auto& [key, value] : kv) {
        if (std::find_if(std::begin(known), std::end(known), [&](const char* k) { return key == k; })
            == std::end(known)) {
            throw UsageError(cfg.string() + ": unknown key '" + key + "'");
        }
    }
    auto get = [&](const char* key) -> std::optional<std::string> {
        const auto it = kv.find(key);
        return it == kv.end() ? std::nullopt : std::optional<std::string>(it->second);
    };
    const auto m = get("m");
    if (!m) {
        throw UsageError(cfg.string() + ": missing key m");
    }
    GeneratorSpec spec;
    spec.size = static_cast<int>(parse_integer(*m, "m"));
    if (spec.size < 1) {
        throw UsageError(cfg.string() + ": m must be positive");
    }
    try {
        spec.boundary = parse_boundary_condition(get("bc").value_or("periodic"));
    } catch (const std::invalid_argument& e) {
        throw UsageError(cfg.string() + ": " + e.what());
    }
    spec.ellipticity = parse_real(get("Lambda").value_or("1"), "Lambda");
    if (!(spec.ellipticity >= 1.0) || !std::isfinite(spec.ellipticity)) {
        throw UsageError(cfg.string() + ": Lambda must be a finite number >= 1");
    }
    const double a = parse_real(get("a").value_or("1"), "a");
    spec.diffusion.assign(spec.midpoint_count(), a);
    if (const auto seed = get("a_random_seed")) {
        if (get("a")) {
            throw UsageError(cfg.string() + ": a and a_random_seed are exclusive");
        }
        const auto s = parse_integer(*seed, "a_random_seed");
        spec = GeneratorSpec::random_diffusion(spec.size, spec.boundary, spec.ellipticity,
                                               static_cast<std::uint64_t>(s));
    }
    if (const auto b = get("b")) {
        spec.coefficient_b.assign(static_cast<std::size_t>(spec.size), parse_real(*b, "b"));
    }
    if (const auto c = get("c")) {
        spec.coefficient_c.assign(static_cast<std::size_t>(spec.size), parse_real(*c, "c"));
    }
    if (const auto companion = get("coefficients")) {
        const fs::path path = fs::path(*companion).is_absolute() ? fs::path(*companion)
                                                                  : cfg.parent_path() / *companion;
        auto in = open_input(path);
        std::string line;
        std::getline(in, line);
        const auto header = split(trim(line), ',');
        std::vector<std::vector<double>> columns(header.size());
        for (const auto& name : header) {
            if (name != "a" && name != "b" && name != "c") {
                throw UsageError(path.string() + ": columns must be a subset of a,b,c");
            }
        }
        while (std::getline(in, line)) {
            if (trim(line).empty()) {
                continue;
            }
            const auto cols = split(trim(line), ',');
            for (std::size_t k = 0; k < header.size(); ++k) {
                if (k < cols.size() && !cols[k].empty()) {
                    columns[k].push_back(parse_real(cols[k], path.string() + " column " + header[k]));
                }
            }
        }
        for (std::size_t k = 0; k < header.size(); ++k) {
            if (header[k] == "a") {
                spec.diffusion = columns[k];
            } else if (header[k] == "b") {
                spec.coefficient_b = columns[k];
            } else {
                spec.coefficient_c = columns[k];
            }
        }
    }
    try {
        spec.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(cfg.string() + ": " + e.what());
    }
    return spec;
}

void write_generator_spec(const GeneratorSpec& spec, const fs::path& cfg)
{
    auto out = open_output(cfg);
    out << "m=" << spec.size << "\nbc=" << to_string(spec.boundary) << "\nLambda=" << fmt(spec.ellipticity)
        << "\ncoefficients=" << cfg.stem().string() << ".coefficients.csv\n";
    fs::path companion = cfg.parent_path() / (cfg.stem().string() + ".coefficients.csv");
    auto csv = open_output(companion);
    csv << "a,b,c\n";
    const std::size_t rows = std::max(spec.diffusion.size(), static_cast<std::size_t>(spec.size));
    for (std::size_t i = 0; i < rows; ++i) {
        if (i < spec.diffusion.size()) {
            csv << fmt(spec.diffusion[i]);
        }
        csv << ',';
        if (i < static_cast<std::size_t>(spec.size)) {
            csv << fmt(spec.coefficient_b.empty() ? 0.0 : spec.coefficient_b[i]);
        }
        csv << ',';
        if (i < static_cast<std::size_t>(spec.size)) {
            csv << fmt(spec.coefficient_c.empty() ? 0.0 : spec.coefficient_c[i]);
        }
        csv << '\n';
    }
}

json number(double v)
{
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    if (std::isnan(v)) {
        return "nan";
    }
    return v;
}

double number_from_json(const json& j)
{
    if (j.is_string()) {
        return parse_real(j.get<std::string>(), "JSON number");
    }
    return j.get<double>();
}

json to_json(const StepFunction& f)
{
    json values = json::array();
    for (std::int64_t i = 0; i < f.cells(); ++i) {
        json cell = json::array();
        for (int a = 0; a < f.dimension(); ++a) {
            cell.push_back(f.samples()(a, static_cast<Eigen::Index>(i)));
        }
        values.push_back(std::move(cell));
    }
    return {{"n_min", f.grid().level()},
            {"N", f.cells()},
            {"m", f.dimension()},
            {"r", number(f.space().exponent())},
            {"values", std::move(values)}};
}

StepFunction step_function_from_json(const json& j)
{
    const TimeGrid grid(j.at("n_min").get<int>(), j.at("N").get<std::int64_t>());
    const int m = j.at("m").get<int>();
    const auto& values = j.at("values");
    if (values.size() != static_cast<std::size_t>(grid.cells())) {
        throw UsageError("step function JSON: values do not match N");
    }
    Eigen::MatrixXd samples(m, grid.cells());
    for (std::size_t i = 0; i < values.size(); ++i) {
        for (int a = 0; a < m; ++a) {
            samples(a, static_cast<Eigen::Index>(i)) = values[i].at(static_cast<std::size_t>(a)).get<double>();
        }
    }
    return StepFunction(grid, SpatialSpace(m, number_from_json(j.at("r"))), std::move(samples));
}

json to_json(const GeneratorSpec& spec)
{
    json out{{"m", spec.size},
             {"bc", to_string(spec.boundary)},
             {"Lambda", spec.ellipticity},
             {"a", spec.diffusion}};
    if (!spec.coefficient_b.empty()) {
        out["b"] = spec.coefficient_b;
    }
    if (!spec.coefficient_c.empty()) {
        out["c"] = spec.coefficient_c;
    }
    return out;
}

json to_json(const DyadicCube& q)
{
    return {{"n", q.level()}, {"k", q.index()}, {"a", q.left()}, {"b", q.right()}, {"s_j", q.center()}};
}

json to_json(const PropertyReport& report)
{
    json checks = json::array();
    for (const auto& c : report.checks) {
        json entry{{"property", c.property}, {"passed", c.passed}, {"lhs", number(c.lhs)}, {"rhs", number(c.rhs)}};
        if (c.witness) {
            entry["witness"] = to_string(*c.witness);
        }
        if (!c.detail.empty()) {
            entry["detail"] = c.detail;
        }
        checks.push_back(std::move(entry));
    }
    return {{"passed", report.passed()}, {"checks", std::move(checks)}};
}

void write_json(const json& j, const fs::path& path)
{
    auto out = open_output(path);
    out << j.dump(2) << '\n';
}

json read_json(const fs::path& path)
{
    auto in = open_input(path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw UsageError(path.string() + ": " + e.what());
    }
}

} // namespace vcz::cli
