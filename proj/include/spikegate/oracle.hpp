#pragma once

// Reference semantics for every logic block, written as direct formulas and
// small per-tick recurrences over spike trains. These never touch the event
// simulator; the property tests hold the simulated blocks to them exactly.

#include <stdexcept>
#include <utility>
#include <vector>

#include "spikegate/circuit.hpp"

namespace spikegate::oracle {

struct StimulusSet {
    std::vector<SpikeTrain> terminals;
    Tick horizon = 0;
};

namespace detail {

inline std::vector<char> dense(const SpikeTrain& train, Tick horizon) {
    std::vector<char> d(horizon, 0);
    for (Tick t : train) {
        if (t >= 0 && t < horizon) d[t] = 1;
    }
    return d;
}

inline std::vector<std::vector<char>> dense_all(const StimulusSet& stims) {
    std::vector<std::vector<char>> d;
    d.reserve(stims.terminals.size());
    for (const auto& t : stims.terminals) d.push_back(dense(t, stims.horizon));
    return d;
}

inline int active_count(const std::vector<std::vector<char>>& d, Tick t) {
    int k = 0;
    for (const auto& row : d) k += row[t];
    return k;
}

}  // namespace detail

// Spike at t+1 iff any terminal spiked at t.
inline SpikeTrain oracle_or(const StimulusSet& stims) {
    if (stims.terminals.empty()) {
        throw std::invalid_argument("oracle_or: needs at least one terminal");
    }
    auto d = detail::dense_all(stims);
    SpikeTrain out;
    for (Tick t = 0; t + 1 < stims.horizon; ++t) {
        if (detail::active_count(d, t) >= 1) out.push_back(t + 1);
    }
    return out;
}

// Spike at t+latency iff all n terminals spiked at t. latency is 2 for the
// classic implementation and 1 for the fast one.
inline SpikeTrain oracle_and(const StimulusSet& stims, int latency) {
    if (latency != 1 && latency != 2) {
        throw std::invalid_argument("oracle_and: latency must be 1 or 2");
    }
    const int n = static_cast<int>(stims.terminals.size());
    if (n < 2) throw std::invalid_argument("oracle_and: needs at least two terminals");
    auto d = detail::dense_all(stims);
    SpikeTrain out;
    for (Tick t = 0; t + latency < stims.horizon; ++t) {
        if (detail::active_count(d, t) == n) out.push_back(t + latency);
    }
    return out;
}

// Spike at t+2 iff exactly one terminal spiked at t.
inline SpikeTrain oracle_xor(const StimulusSet& stims) {
    if (stims.terminals.size() < 2) {
        throw std::invalid_argument("oracle_xor: needs at least two terminals");
    }
    auto d = detail::dense_all(stims);
    SpikeTrain out;
    for (Tick t = 0; t + 2 < stims.horizon; ++t) {
        if (detail::active_count(d, t) == 1) out.push_back(t + 2);
    }
    return out;
}

// Spike at t iff t >= css_first + 1 and the input was silent at t-1.
inline SpikeTrain oracle_not(const SpikeTrain& stim, Tick css_first, Tick horizon) {
    auto d = detail::dense(stim, horizon);
    SpikeTrain out;
    for (Tick t = css_first + 1; t < horizon; ++t) {
        if (t < 1 || !d[t - 1]) out.push_back(t);
    }
    return out;
}

// One-neuron memory: held iff (held + set - reset) at the previous tick >= 1.
inline SpikeTrain oracle_latch(const SpikeTrain& set_train, const SpikeTrain& reset_train,
                               Tick horizon) {
    auto set = detail::dense(set_train, horizon);
    auto reset = detail::dense(reset_train, horizon);
    SpikeTrain out;
    bool held = false;
    for (Tick t = 1; t < horizon; ++t) {
        int net = (held ? 1 : 0) + set[t - 1] - reset[t - 1];
        held = net >= 1;
        if (held) out.push_back(t);
    }
    return out;
}

// Two-neuron toggle, exactly the switch wiring as a recurrence:
//   U(t) = [X(t-1) - C(t-1) - U(t-1) >= 1]
//   C(t) = [U(t-1) + C(t-1) - X(t-1) >= 1]
inline std::pair<SpikeTrain, SpikeTrain> oracle_switch(const SpikeTrain& input, Tick horizon) {
    auto x = detail::dense(input, horizon);
    SpikeTrain u_train, c_train;
    bool u = false, c = false;
    for (Tick t = 1; t < horizon; ++t) {
        bool u_next = (x[t - 1] - (c ? 1 : 0) - (u ? 1 : 0)) >= 1;
        bool c_next = ((u ? 1 : 0) + (c ? 1 : 0) - x[t - 1]) >= 1;
        u = u_next;
        c = c_next;
        if (u) u_train.push_back(t);
        if (c) c_train.push_back(t);
    }
    return {u_train, c_train};
}

// One spike at every tick in [first_spike, horizon).
inline SpikeTrain oracle_css(Tick first_spike, Tick horizon) {
    if (first_spike < 0 || first_spike >= horizon) {
        throw std::invalid_argument("oracle_css: first_spike must lie inside the horizon");
    }
    SpikeTrain out;
    for (Tick t = first_spike; t < horizon; ++t) out.push_back(t);
    return out;
}

// Half-periods of k ticks: firing in [first+1, first+k], silent k ticks, repeat.
inline SpikeTrain oracle_oscillator(int half_period, Tick first_spike, Tick horizon) {
    if (half_period < 1) throw std::invalid_argument("oracle_oscillator: half_period >= 1");
    SpikeTrain out;
    for (Tick t = first_spike + 1; t < horizon; ++t) {
        Tick phase = (t - first_spike - 1) % (2 * half_period);
        if (phase < half_period) out.push_back(t);
    }
    return out;
}

// Rising edge at r (silence at r-1, spike at r) detected at r+2; falling edge
// at f (spike at f-1, silence at f) detected at f+3. A spike at tick 0 counts
// as a rising edge; detections landing at or past the horizon are dropped.
inline std::pair<SpikeTrain, SpikeTrain> oracle_flank(const SpikeTrain& input, Tick horizon) {
    auto x = detail::dense(input, horizon);
    SpikeTrain rise, fall;
    for (Tick t = 0; t < horizon; ++t) {
        bool prev = t > 0 && x[t - 1];
        if (x[t] && !prev && t + 2 < horizon) rise.push_back(t + 2);
        if (!x[t] && prev && t + 3 < horizon) fall.push_back(t + 3);
    }
    return {rise, fall};
}

}  // namespace spikegate::oracle
