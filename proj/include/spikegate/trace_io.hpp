#pragma once

// Deterministic trace serialization and comparison.
//
// The ASCII table is a tick header row followed by one row per signal, where
// `1` marks a spike and `.` the absence of one (a dot rather than a zero
// keeps the sparse rows readable).

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "spikegate/sim.hpp"

namespace spikegate::trace_io {

// Rows are `name |c|c|...|` with the name left-justified and padded to the
// widest name; the header row carries the tick numbers.
inline std::string render_ascii(const Trace& trace, const std::vector<std::string>& signals,
                                Tick t0, Tick t1) {
    if (!(0 <= t0 && t0 < t1 && t1 <= trace.horizon)) {
        throw std::invalid_argument("render_ascii: window must satisfy 0 <= t0 < t1 <= horizon");
    }
    size_t width = 5;  // len("t(ms)")
    for (const auto& s : signals) {
        if (!trace.spikes.count(s)) {
            throw std::invalid_argument("render_ascii: unknown signal '" + s + "'");
        }
        width = std::max(width, s.size());
    }
    auto pad = [&](const std::string& name) {
        return name + std::string(width - name.size(), ' ');
    };
    std::ostringstream os;
    os << pad("t(ms)") << " |";
    for (Tick t = t0; t < t1; ++t) os << t << "|";
    os << "\n";
    for (const auto& s : signals) {
        const SpikeTrain& train = trace.spikes.at(s);
        std::set<Tick> fired(train.begin(), train.end());
        os << pad(s) << " |";
        for (Tick t = t0; t < t1; ++t) os << (fired.count(t) ? '1' : '.') << "|";
        os << "\n";
    }
    return os.str();
}

// One `signal,tick` row per spike, sorted by (signal, tick).
inline std::string export_csv(const Trace& trace) {
    std::ostringstream os;
    for (const auto& [name, train] : trace.spikes) {
        for (Tick t : train) os << name << "," << t << "\n";
    }
    return os.str();
}

// Flat JSON object mapping each signal to its sorted tick array.
inline std::string export_json(const Trace& trace) {
    std::ostringstream os;
    os << "{";
    bool first_signal = true;
    for (const auto& [name, train] : trace.spikes) {
        if (!first_signal) os << ",";
        first_signal = false;
        os << "\"" << name << "\":[";
        for (size_t i = 0; i < train.size(); ++i) {
            if (i) os << ",";
            os << train[i];
        }
        os << "]";
    }
    os << "}";
    return os.str();
}

// `neuron,tick,v_mV` rows for every probed neuron, potentials to 6 decimals.
inline std::string export_membrane_csv(const Trace& trace) {
    if (!trace.membrane_recorded) {
        throw std::logic_error("export_membrane_csv: membrane recording was not enabled");
    }
    std::ostringstream os;
    char buf[64];
    for (const auto& [name, samples] : trace.membrane) {
        for (size_t t = 0; t < samples.size(); ++t) {
            std::snprintf(buf, sizeof(buf), "%.6f", samples[t]);
            os << name << "," << t << "," << buf << "\n";
        }
    }
    return os.str();
}

struct Mismatch {
    std::string signal;
    Tick tick = 0;         // tick in trace A's timebase
    bool in_a = false;     // spike present in A but not in shifted B
};

// Empty iff A equals B once every spike of B is shifted forward by
// latency_shift ticks. `renames` maps signals of A onto signals of B; when
// empty, signals are matched by name.
inline std::vector<Mismatch> diff(const Trace& a, const Trace& b, Tick latency_shift,
                                  const std::vector<std::pair<std::string, std::string>>&
                                      renames = {}) {
    std::vector<std::pair<std::string, std::string>> pairs = renames;
    if (pairs.empty()) {
        for (const auto& [name, train] : a.spikes) {
            if (!b.spikes.count(name)) {
                throw std::invalid_argument("diff: signal '" + name + "' missing from B");
            }
            pairs.emplace_back(name, name);
        }
    }
    std::vector<Mismatch> out;
    for (const auto& [name_a, name_b] : pairs) {
        auto it_a = a.spikes.find(name_a);
        auto it_b = b.spikes.find(name_b);
        if (it_a == a.spikes.end() || it_b == b.spikes.end()) {
            throw std::invalid_argument("diff: unknown signal pair " + name_a + "/" + name_b);
        }
        std::set<Tick> set_a(it_a->second.begin(), it_a->second.end());
        std::set<Tick> set_b;
        for (Tick t : it_b->second) set_b.insert(t + latency_shift);
        for (Tick t : set_a) {
            if (!set_b.count(t)) out.push_back({name_a, t, true});
        }
        for (Tick t : set_b) {
            if (!set_a.count(t)) out.push_back({name_a, t, false});
        }
    }
    std::sort(out.begin(), out.end(), [](const Mismatch& x, const Mismatch& y) {
        return std::tie(x.signal, x.tick, x.in_a) < std::tie(y.signal, y.tick, y.in_a);
    });
    return out;
}

}  // namespace spikegate::trace_io
