#pragma once

#include "io.hpp"

#include "vcz/kernels.hpp"

#include <memory>
#include <optional>
#include <string>

namespace vcz::cli {

/// Parsed `--kernel` value: model | power:G | heat:d=D[,n=P,spacing=H] | green:path.cfg
struct KernelChoice {
    std::string text;
    std::string family; ///< model, power, heat, green
    double exponent = 1.0;
    HeatLattice lattice;
    std::optional<GeneratorSpec> spec;
    std::string spec_path;

    static KernelChoice parse(const std::string& text, HeatNormalization normalization);

    VolterraKernel build(double r = 2.0) const;
    json to_json() const;
};

} // namespace vcz::cli
