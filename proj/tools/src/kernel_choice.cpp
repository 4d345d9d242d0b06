#include "kernel_choice.hpp"

#include <cmath>
#include <sstream>

namespace vcz::cli {

namespace {

std::pair<std::string, std::string> split_head(const std::string& text)
{
    const auto colon = text.find(':');
    if (colon == std::string::npos) {
        return {text, {}};
    }
    return {text.substr(0, colon), text.substr(colon + 1)};
}

} // namespace

KernelChoice KernelChoice::parse(const std::string& text, HeatNormalization normalization)
{
    KernelChoice out;
    out.text = text;
    const auto [family, rest] = split_head(text);
    out.family = family;
    if (family == "model") {
        if (!rest.empty()) {
            throw UsageError("--kernel model takes no parameters");
        }
    } else if (family == "power") {
        out.exponent = parse_real(rest, "--kernel power:G");
        if (!(out.exponent > 0.0) || !std::isfinite(out.exponent)) {
            throw UsageError("--kernel power:G needs a positive finite exponent");
        }
    } else if (family == "heat") {
        out.lattice.variant = normalization;
        bool have_spacing = false;
        std::stringstream ss(rest);
        std::string item;
        while (std::getline(ss, item, ',')) {
            const auto eq = item.find('=');
            if (eq == std::string::npos) {
                throw UsageError("--kernel heat expects key=value parameters, got '" + item + "'");
            }
            const auto key = item.substr(0, eq);
            const auto value = item.substr(eq + 1);
            if (key == "d") {
                out.lattice.dimension = static_cast<int>(parse_real(value, "--kernel heat:d"));
            } else if (key == "n") {
                out.lattice.points_per_axis = static_cast<int>(parse_real(value, "--kernel heat:n"));
            } else if (key == "spacing") {
                out.lattice.spacing = parse_real(value, "--kernel heat:spacing");
                have_spacing = true;
            } else {
                throw UsageError("unknown heat kernel parameter '" + key + "'");
            }
        }
        if (out.lattice.dimension < 1 || out.lattice.dimension > 3 || out.lattice.points_per_axis < 1) {
            throw UsageError("--kernel heat needs 1 <= d <= 3 and n >= 1");
        }
        if (!have_spacing) {
            out.lattice.spacing = 1.0 / out.lattice.points_per_axis;
        }
    } else if (family == "green") {
        if (rest.empty()) {
            throw UsageError("--kernel green needs a generator config path: green:spec.cfg");
        }
        out.spec_path = rest;
        out.spec = read_generator_spec(rest);
    } else {
        throw UsageError("unknown kernel '" + text + "' (expected model, power:G, heat:d=D or green:cfg)");
    }
    return out;
}

VolterraKernel KernelChoice::build(double r) const
{
    if (family == "model") {
        return model_scalar_kernel().with_exponent(r);
    }
    if (family == "power") {
        return power_scalar_kernel(exponent).with_exponent(r);
    }
    if (family == "heat") {
        return heat_volterra_kernel(lattice, r);
    }
    return greens_kernel_from_generator(*spec, r);
}

json KernelChoice::to_json() const
{
    json out{{"kernel", text}, {"family", family}};
    if (family == "power") {
        out["exponent"] = exponent;
    } else if (family == "heat") {
        out["dimension"] = lattice.dimension;
        out["points_per_axis"] = lattice.points_per_axis;
        out["spacing"] = lattice.spacing;
        out["normalization"] = lattice.variant == HeatNormalization::literal ? "literal" : "standard";
    } else if (family == "green") {
        out["spec"] = cli::to_json(*spec);
        out["spec_path"] = spec_path;
    }
    return out;
}

} // namespace vcz::cli
