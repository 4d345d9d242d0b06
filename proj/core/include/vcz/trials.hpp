#pragma once

#include "vcz/timegrid.hpp"

#include <cstdint>
#include <string>

namespace vcz {

enum class TrialKind { random_steps, spikes, oscillatory, cz_adversarial };

TrialKind parse_trial_kind(const std::string& text);
std::string to_string(TrialKind kind);

/// Deterministic family of right-hand sides. Trial i draws from Rng(seed, i), and every kind
/// is defined in continuous time and then sampled, so a trial keeps its shape when the grid is
/// refined.
///
///  - random-steps: `pieces` equal pieces of the horizon, each zero with probability 1/4 and a
///    Gaussian vector times `amplitude` otherwise.
///  - spikes: mass `mass` on an interval of length `width` (one cell when zero) starting at a
///    uniform point of the first half of the horizon, in a random ℓ^r direction.
///  - oscillatory: `modes` sinusoids with integer frequencies 1..8 and random phases, each
///    carrying a Gaussian spatial vector times `amplitude`.
///  - cz-adversarial: one to four plateaus of length T/64 or T/32 with heights spread over two
///    decades above `amplitude`.
struct TrialFamily {
    TrialKind kind = TrialKind::oscillatory;
    std::uint64_t seed = 0;
    int count = 1;
    double amplitude = 1.0;
    double mass = 1.0;
    double width = 0.0;
    int modes = 3;
    int pieces = 16;

    /// "kind[:key=value,...]" with keys count, seed, amplitude, mass, width, modes, pieces.
    static TrialFamily parse(const std::string& text);
    std::string to_string() const;

    /// Throws std::invalid_argument for nonpositive counts or sizes.
    void validate() const;

    StepFunction generate(int index, const TimeGrid& grid, int dimension, double r) const;
};

} // namespace vcz
