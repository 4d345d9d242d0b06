#include "vcz/trials.hpp"

#include "vcz/dyadic.hpp"
#include "vcz/random.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace vcz {

namespace {

Eigen::VectorXd gaussian_vector(Rng& rng, int dimension)
{
    Eigen::VectorXd v(dimension);
    for (int i = 0; i < dimension; ++i) {
        v[i] = rng.normal();
    }
    return v;
}

double parse_number(const std::string& key, const std::string& value)
{
    std::size_t used = 0;
    double out = 0.0;
    try {
        out = std::stod(value, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != value.size() || value.empty()) {
        throw std::invalid_argument("trial family: bad value '" + value + "' for " + key);
    }
    return out;
}

int parse_int(const std::string& key, const std::string& value)
{
    const double v = parse_number(key, value);
    if (v != std::floor(v) || std::abs(v) > 1e9) {
        throw std::invalid_argument("trial family: " + key + " must be an integer");
    }
    return static_cast<int>(v);
}

} // namespace

TrialKind parse_trial_kind(const std::string& text)
{
    if (text == "random-steps") {
        return TrialKind::random_steps;
    }
    if (text == "spikes") {
        return TrialKind::spikes;
    }
    if (text == "oscillatory") {
        return TrialKind::oscillatory;
    }
    if (text == "cz-adversarial") {
        return TrialKind::cz_adversarial;
    }
    throw std::invalid_argument("unknown trial family '" + text
                                + "' (random-steps|spikes|oscillatory|cz-adversarial)");
}

std::string to_string(TrialKind kind)
{
    switch (kind) {
    case TrialKind::random_steps:
        return "random-steps";
    case TrialKind::spikes:
        return "spikes";
    case TrialKind::oscillatory:
        return "oscillatory";
    case TrialKind::cz_adversarial:
        return "cz-adversarial";
    }
    return "unknown";
}

TrialFamily TrialFamily::parse(const std::string& text)
{
    TrialFamily family;
    const auto colon = text.find(':');
    family.kind = parse_trial_kind(text.substr(0, colon));
    if (colon == std::string::npos) {
        return family;
    }
    std::stringstream rest(text.substr(colon + 1));
    std::string item;
    while (std::getline(rest, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("trial family: expected key=value, got '" + item + "'");
        }
        const std::string key = item.substr(0, eq);
        const std::string value = item.substr(eq + 1);
        if (key == "count") {
            family.count = parse_int(key, value);
        } else if (key == "seed") {
            const double v = parse_number(key, value);
            if (v < 0 || v != std::floor(v)) {
                throw std::invalid_argument("trial family: seed must be a nonnegative integer");
            }
            family.seed = std::stoull(value);
        } else if (key == "amplitude") {
            family.amplitude = parse_number(key, value);
        } else if (key == "mass") {
            family.mass = parse_number(key, value);
        } else if (key == "width") {
            family.width = parse_number(key, value);
        } else if (key == "modes") {
            family.modes = parse_int(key, value);
        } else if (key == "pieces") {
            family.pieces = parse_int(key, value);
        } else {
            throw std::invalid_argument("trial family: unknown key '" + key + "'");
        }
    }
    family.validate();
    return family;
}

std::string TrialFamily::to_string() const
{
    std::ostringstream os;
    os << vcz::to_string(kind) << ":count=" << count << ",seed=" << seed;
    switch (kind) {
    case TrialKind::random_steps:
        os << ",amplitude=" << format_double(amplitude) << ",pieces=" << pieces;
        break;
    case TrialKind::spikes:
        os << ",mass=" << format_double(mass) << ",width=" << format_double(width);
        break;
    case TrialKind::oscillatory:
        os << ",amplitude=" << format_double(amplitude) << ",modes=" << modes;
        break;
    case TrialKind::cz_adversarial:
        os << ",amplitude=" << format_double(amplitude);
        break;
    }
    return os.str();
}

void TrialFamily::validate() const
{
    if (count < 1) {
        throw std::invalid_argument("trial family: count must be positive");
    }
    if (!(amplitude > 0.0) || !(mass > 0.0) || !(width >= 0.0)) {
        throw std::invalid_argument("trial family: amplitude and mass must be positive, width nonnegative");
    }
    if (modes < 1 || pieces < 1) {
        throw std::invalid_argument("trial family: modes and pieces must be positive");
    }
}

StepFunction TrialFamily::generate(int index, const TimeGrid& grid, int dimension, double r) const
{
    validate();
    Rng rng(seed, static_cast<std::uint64_t>(index));
    const SpatialSpace space(dimension, r);
    const std::int64_t n = grid.cells();
    const double horizon = grid.horizon();
    const double h = grid.cell_width();
    Eigen::MatrixXd values = Eigen::MatrixXd::Zero(dimension, n);

    switch (kind) {
    case TrialKind::random_steps: {
        Eigen::MatrixXd levels(dimension, pieces);
        for (int k = 0; k < pieces; ++k) {
            const bool zero = rng.uniform() < 0.25;
            levels.col(k) = zero ? Eigen::VectorXd::Zero(dimension) : Eigen::VectorXd(amplitude * gaussian_vector(rng, dimension));
        }
        for (std::int64_t i = 0; i < n; ++i) {
            const auto k = static_cast<int>(std::floor(grid.midpoint(i) / horizon * pieces));
            values.col(i) = levels.col(std::min(k, pieces - 1));
        }
        break;
    }
    case TrialKind::spikes: {
        const double start_time = rng.uniform(0.0, 0.5) * horizon;
        Eigen::VectorXd direction = gaussian_vector(rng, dimension);
        double norm = space.norm(direction);
        if (!(norm > 0.0)) {
            direction = Eigen::VectorXd::Unit(dimension, 0);
            norm = 1.0;
        }
        const auto span = std::max<std::int64_t>(1, std::llround((width > 0.0 ? width : h) / h));
        const std::int64_t first = std::min(static_cast<std::int64_t>(std::floor(start_time / h)), std::max<std::int64_t>(n - span, 0));
        const double height = mass / (static_cast<double>(span) * h);
        for (std::int64_t i = first; i < std::min(first + span, n); ++i) {
            values.col(i) = height / norm * direction;
        }
        break;
    }
    case TrialKind::oscillatory: {
        for (int k = 0; k < modes; ++k) {
            const auto frequency = static_cast<double>(rng.integer(1, 8));
            const double phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
            const Eigen::VectorXd vector = amplitude * gaussian_vector(rng, dimension);
            for (std::int64_t i = 0; i < n; ++i) {
                const double t = grid.midpoint(i) / horizon;
                values.col(i) += std::sin(2.0 * std::numbers::pi * frequency * t + phase) * vector;
            }
        }
        break;
    }
    case TrialKind::cz_adversarial: {
        const auto plateaus = rng.integer(1, 4);
        for (std::int64_t p = 0; p < plateaus; ++p) {
            const double length = horizon / 64.0 * static_cast<double>(rng.integer(1, 2));
            const double start = horizon / 64.0 * static_cast<double>(rng.integer(0, 62));
            const double height = amplitude * std::exp(rng.uniform(0.0, std::log(100.0)));
            const Eigen::VectorXd direction = gaussian_vector(rng, dimension);
            for (std::int64_t i = 0; i < n; ++i) {
                const double mid = grid.midpoint(i);
                if (mid > start && mid < start + length) {
                    values.col(i) += height * direction;
                }
            }
        }
        break;
    }
    }
    return StepFunction(grid, space, std::move(values));
}

} // namespace vcz
