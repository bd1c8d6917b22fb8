#pragma once

// Constructors for the ten spike-based logic building blocks. Each builder
// places neurons and synapses into a CircuitGraph and returns a handle with
// the block's input terminals, output neurons, declared latency and resource
// membership.
//
// An input terminal is the block's wiring recipe for one input line: the set
// of (target neuron, weight, delay) entries an external driver is connected
// with. The recipe entries count as the block's input connections; connect()
// turns them into synapses once a driver is known.

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "spikegate/circuit.hpp"
#include "spikegate/sim.hpp"

namespace spikegate::blocks {

enum class BlockKind { Or, AndClassic, AndFast, Xor, Not, SrLatch, Switch, Css, Oscillator, Flank };

inline const char* kind_name(BlockKind k) {
    switch (k) {
        case BlockKind::Or: return "or";
        case BlockKind::AndClassic: return "and_classic";
        case BlockKind::AndFast: return "and_fast";
        case BlockKind::Xor: return "xor";
        case BlockKind::Not: return "not";
        case BlockKind::SrLatch: return "sr_latch";
        case BlockKind::Switch: return "switch";
        case BlockKind::Css: return "css";
        case BlockKind::Oscillator: return "oscillator";
        case BlockKind::Flank: return "flank";
    }
    return "?";
}

struct TerminalTarget {
    int neuron;
    int weight;
    int delay;
};

struct Terminal {
    std::string name;  // in0..in{n-1}, set, reset
    std::vector<TerminalTarget> targets;
};

struct BlockHandle {
    std::string name;
    BlockKind kind = BlockKind::Or;
    std::vector<Terminal> terminals;
    std::vector<int> output_neurons;                       // the "out" port
    std::map<std::string, std::vector<int>> output_ports;  // out (+ rise/fall)
    std::pair<int, int> latency{1, 1};                     // equal except for flank (rise, fall)
    Tick valid_from = 0;  // first tick at which input spikes behave per contract
    bool includes_css = false;

    std::vector<int> member_neurons;
    std::vector<int> member_sources;
    std::vector<int> member_synapses;

    const Terminal& terminal(const std::string& port) const {
        for (const auto& t : terminals) {
            if (t.name == port) return t;
        }
        throw std::invalid_argument("block '" + name + "' has no input terminal '" + port + "'");
    }
};

// Constant spike source: a one-shot seed source plus a self-holding latch
// neuron. The latch is the block's output endpoint and fires at every tick
// from first_spike on; the seed fires one tick earlier so the latch starts on
// time while each consumer needs just one incoming connection.
struct SharedCss {
    std::string name;
    int source = -1;  // source id
    int latch = -1;   // neuron id
    int set_synapse = -1;
    int self_synapse = -1;
    Tick first_spike = 1;
};

struct ResourceReport {
    int neurons = 0;
    int connections = 0;
    std::pair<int, int> latency{1, 1};
};

// Counts measured from what the builder actually placed: member neurons and
// sources, member synapses, and the input-terminal recipe entries.
inline ResourceReport resource_report(const BlockHandle& handle) {
    ResourceReport r;
    r.neurons = static_cast<int>(handle.member_neurons.size() + handle.member_sources.size());
    r.connections = static_cast<int>(handle.member_synapses.size());
    for (const auto& t : handle.terminals) {
        r.connections += static_cast<int>(t.targets.size());
    }
    r.latency = handle.latency;
    return r;
}

namespace detail {

inline void finish_outputs(BlockHandle& h) { h.output_ports["out"] = h.output_neurons; }

inline void absorb_css(BlockHandle& h, const SharedCss& css) {
    h.includes_css = true;
    h.member_neurons.push_back(css.latch);
    h.member_sources.push_back(css.source);
    h.member_synapses.push_back(css.set_synapse);
    h.member_synapses.push_back(css.self_synapse);
}

}  // namespace detail

// Single neuron receiving every input line; fires once per tick on any input.
inline BlockHandle build_or(CircuitGraph& c, const std::string& name, int n_inputs) {
    if (n_inputs < 1) throw std::invalid_argument("build_or: needs n >= 1 inputs");
    BlockHandle h;
    h.name = name;
    h.kind = BlockKind::Or;
    int out = c.add_neuron(name + ".out");
    h.member_neurons = {out};
    for (int k = 0; k < n_inputs; ++k) {
        h.terminals.push_back({"in" + std::to_string(k), {{out, +1, 1}}});
    }
    h.output_neurons = {out};
    h.latency = {1, 1};
    detail::finish_outputs(h);
    return h;
}

// OR neuron inhibiting the output with weight n-1 while every input line also
// excites the output directly, delayed one extra tick to meet the inhibition.
// The output only goes positive when all n inputs coincide.
inline BlockHandle build_and_classic(CircuitGraph& c, const std::string& name, int n_inputs) {
    if (n_inputs < 2) throw std::invalid_argument("build_and_classic: needs n >= 2 inputs");
    BlockHandle h;
    h.name = name;
    h.kind = BlockKind::AndClassic;
    int gate = c.add_neuron(name + ".or");
    int out = c.add_neuron(name + ".out");
    h.member_neurons = {gate, out};
    h.member_synapses = {c.add_synapse(neuron_endpoint(gate), out, -(n_inputs - 1), 1)};
    for (int k = 0; k < n_inputs; ++k) {
        h.terminals.push_back(
            {"in" + std::to_string(k), {{gate, +1, 1}, {out, +1, 2}}});
    }
    h.output_neurons = {out};
    h.latency = {2, 2};
    detail::finish_outputs(h);
    return h;
}

inline SharedCss build_css(CircuitGraph& c, const std::string& name, Tick first_spike = 1) {
    if (first_spike < 1) {
        // The latch needs its set spike delivered at first_spike and the seed
        // source therefore fires at first_spike - 1, which must exist.
        throw std::invalid_argument("build_css: first_spike must be >= 1");
    }
    SharedCss css;
    css.name = name;
    css.first_spike = first_spike;
    css.source = c.add_source(name + ".src", {first_spike - 1});
    css.latch = c.add_neuron(name + ".latch");
    css.set_synapse = c.add_synapse(source_endpoint(css.source), css.latch, +1, 1);
    css.self_synapse = c.add_synapse(neuron_endpoint(css.latch), css.latch, +1, 1);
    return css;
}

inline BlockHandle css_handle(const SharedCss& css) {
    BlockHandle h;
    h.name = css.name;
    h.kind = BlockKind::Css;
    h.member_neurons = {css.latch};
    h.member_sources = {css.source};
    h.member_synapses = {css.set_synapse, css.self_synapse};
    h.output_neurons = {css.latch};
    h.latency = {1, 1};
    h.valid_from = css.first_spike;
    detail::finish_outputs(h);
    return h;
}

// Constant inhibition of weight n-1 from the css replaces the OR stage, so
// inputs reach the output with a single 1-tick hop. Valid once the css
// inhibition is in effect (input ticks >= css first spike).
inline BlockHandle build_and_fast(CircuitGraph& c, const std::string& name, int n_inputs,
                                  const SharedCss& css) {
    if (n_inputs < 2) throw std::invalid_argument("build_and_fast: needs n >= 2 inputs");
    BlockHandle h;
    h.name = name;
    h.kind = BlockKind::AndFast;
    int out = c.add_neuron(name + ".out");
    h.member_neurons = {out};
    h.member_synapses = {
        c.add_synapse(neuron_endpoint(css.latch), out, -(n_inputs - 1), 1)};
    for (int k = 0; k < n_inputs; ++k) {
        h.terminals.push_back({"in" + std::to_string(k), {{out, +1, 1}}});
    }
    h.output_neurons = {out};
    h.latency = {1, 1};
    h.valid_from = css.first_spike;
    detail::absorb_css(h, css);
    detail::finish_outputs(h);
    return h;
}

// One neuron keeping a spike cycling through a self-excitatory loop; set
// starts the cycle, reset cancels it.
inline BlockHandle build_sr_latch(CircuitGraph& c, const std::string& name, bool with_set = true,
                                  bool with_reset = true) {
    if (!with_set && !with_reset) {
        throw std::invalid_argument("build_sr_latch: needs a set or a reset port");
    }
    BlockHandle h;
    h.name = name;
    h.kind = BlockKind::SrLatch;
    int out = c.add_neuron(name + ".out");
    h.member_neurons = {out};
    h.member_synapses = {c.add_synapse(neuron_endpoint(out), out, +1, 1)};
    if (with_set) h.terminals.push_back({"set", {{out, +1, 1}}});
    if (with_reset) h.terminals.push_back({"reset", {{out, -1, 1}}});
    h.output_neurons = {out};
    h.latency = {1, 1};
    detail::finish_outputs(h);
    return h;
}

// Toggle built from an input neuron U and a cycle neuron C. The input spike
// fires U only when no spike is held (C inhibits U), U hands the spike to C,
// and the same input spike inhibits C to release a held spike. U's
// self-inhibition suppresses back-to-back input spikes at U itself. Both
// neurons are outputs: U contributes the first spike of each held phase.
inline BlockHandle build_switch(CircuitGraph& c, const std::string& name) {
    BlockHandle h;
    h.name = name;
    h.kind = BlockKind::Switch;
    int u = c.add_neuron(name + ".u");
    int cyc = c.add_neuron(name + ".c");
    h.member_neurons = {u, cyc};
    h.member_synapses = {
        c.add_synapse(neuron_endpoint(u), cyc, +1, 1),
        c.add_synapse(neuron_endpoint(cyc), cyc, +1, 1),
        c.add_synapse(neuron_endpoint(cyc), u, -1, 1),
        c.add_synapse(neuron_endpoint(u), u, -1, 1),
    };
    h.terminals.push_back({"in0", {{u, +1, 1}, {cyc, -1, 1}}});
    h.output_neurons = {u, cyc};
    h.latency = {1, 1};
    detail::finish_outputs(h);
    return h;
}

// n input neurons, each exciting its own output neuron and inhibiting the
// other n-1, so an output fires only when its input fired alone.
inline BlockHandle build_xor(CircuitGraph& c, const std::string& name, int n_inputs) {
    if (n_inputs < 2) throw std::invalid_argument("build_xor: needs n >= 2 inputs");
    BlockHandle h;
    h.name = name;
    h.kind = BlockKind::Xor;
    std::vector<int> ins(n_inputs), outs(n_inputs);
    for (int k = 0; k < n_inputs; ++k) {
        ins[k] = c.add_neuron(name + ".i" + std::to_string(k));
    }
    for (int k = 0; k < n_inputs; ++k) {
        outs[k] = c.add_neuron(name + ".o" + std::to_string(k));
    }
    for (int k = 0; k < n_inputs; ++k) {
        h.member_neurons.push_back(ins[k]);
        h.terminals.push_back({"in" + std::to_string(k), {{ins[k], +1, 1}}});
    }
    for (int k = 0; k < n_inputs; ++k) {
        h.member_neurons.push_back(outs[k]);
        for (int j = 0; j < n_inputs; ++j) {
            h.member_synapses.push_back(
                c.add_synapse(neuron_endpoint(ins[k]), outs[j], k == j ? +1 : -1, 1));
        }
    }
    h.output_neurons = outs;
    h.latency = {2, 2};
    detail::finish_outputs(h);
    return h;
}

// The css excites the output every tick while the input line inhibits it, so
// the output fires exactly where the input was silent one tick earlier.
inline BlockHandle build_not(CircuitGraph& c, const std::string& name, const SharedCss& css) {
    BlockHandle h;
    h.name = name;
    h.kind = BlockKind::Not;
    int out = c.add_neuron(name + ".out");
    h.member_neurons = {out};
    h.member_synapses = {c.add_synapse(neuron_endpoint(css.latch), out, +1, 1)};
    h.terminals.push_back({"in0", {{out, -1, 1}}});
    h.output_neurons = {out};
    h.latency = {1, 1};
    detail::absorb_css(h, css);
    detail::finish_outputs(h);
    return h;
}

// A k-spike seed train feeds neuron A, and A and B hand the train to each
// other with delay k, producing alternating half-periods of k firing ticks
// and k silent ticks on A. Declared latency is 1 with the output low during
// the first half-period.
inline BlockHandle build_sync_oscillator(CircuitGraph& c, const std::string& name,
                                         int half_period, Tick first_spike) {
    if (half_period < 1) throw std::invalid_argument("build_sync_oscillator: half_period >= 1");
    if (first_spike < 0) throw std::invalid_argument("build_sync_oscillator: first_spike >= 0");
    BlockHandle h;
    h.name = name;
    h.kind = BlockKind::Oscillator;
    SpikeTrain seed(half_period);
    for (int i = 0; i < half_period; ++i) seed[i] = first_spike + i;
    int src = c.add_source(name + ".src", std::move(seed));
    int a = c.add_neuron(name + ".a");
    int b = c.add_neuron(name + ".b");
    h.member_sources = {src};
    h.member_neurons = {a, b};
    h.member_synapses = {
        c.add_synapse(source_endpoint(src), a, +1, 1),
        c.add_synapse(neuron_endpoint(a), b, +1, half_period),
        c.add_synapse(neuron_endpoint(b), a, +1, half_period),
    };
    h.output_neurons = {a};
    h.latency = {1, 1};
    detail::finish_outputs(h);
    return h;
}

// NOT neuron plus two 2-input classic ANDs. The rising AND matches the input
// with the inverted previous value; the falling AND matches the previous
// value (input delayed 2 extra ticks) with the inverted next one. Rising
// edges at r come out at r+2, falling edges at f at f+3.
inline BlockHandle build_flank_detector(CircuitGraph& c, const std::string& name,
                                        const SharedCss& css) {
    BlockHandle h;
    h.name = name;
    h.kind = BlockKind::Flank;
    int inv = c.add_neuron(name + ".not");
    int rise_or = c.add_neuron(name + ".rise_or");
    int rise = c.add_neuron(name + ".rise");
    int fall_or = c.add_neuron(name + ".fall_or");
    int fall = c.add_neuron(name + ".fall");
    h.member_neurons = {inv, rise_or, rise, fall_or, fall};
    h.member_synapses = {
        c.add_synapse(neuron_endpoint(css.latch), inv, +1, 1),
        // inverted value into both ANDs at their designed input delays
        c.add_synapse(neuron_endpoint(inv), rise_or, +1, 1),
        c.add_synapse(neuron_endpoint(inv), rise, +1, 2),
        c.add_synapse(neuron_endpoint(inv), fall_or, +1, 1),
        c.add_synapse(neuron_endpoint(inv), fall, +1, 2),
        // each AND's internal n-1 inhibition (n = 2)
        c.add_synapse(neuron_endpoint(rise_or), rise, -1, 1),
        c.add_synapse(neuron_endpoint(fall_or), fall, -1, 1),
    };
    // Input line: inhibits the NOT neuron, feeds the rising AND at designed
    // delays and the falling AND two ticks later.
    h.terminals.push_back({"in0",
                           {{inv, -1, 1},
                            {rise_or, +1, 1},
                            {rise, +1, 2},
                            {fall_or, +1, 3},
                            {fall, +1, 4}}});
    h.output_neurons = {rise, fall};
    h.latency = {2, 3};
    h.valid_from = css.first_spike + 1;
    detail::absorb_css(h, css);
    detail::finish_outputs(h);
    h.output_ports["rise"] = {rise};
    h.output_ports["fall"] = {fall};
    return h;
}

inline const std::vector<int>& output_port(const BlockHandle& h, const std::string& port) {
    auto it = h.output_ports.find(port.empty() ? "out" : port);
    if (it == h.output_ports.end()) {
        throw std::invalid_argument("block '" + h.name + "' has no output port '" + port + "'");
    }
    return it->second;
}

// Wire a driving endpoint into a block terminal: one synapse per recipe
// entry, with extra_delay on top of the designed delay.
inline std::vector<int> connect(CircuitGraph& c, EndpointId from, const BlockHandle& to,
                                const std::string& terminal, int extra_delay = 0) {
    if (extra_delay < 0) throw std::invalid_argument("connect: extra_delay must be >= 0");
    const Terminal& term = to.terminal(terminal);
    std::vector<int> ids;
    ids.reserve(term.targets.size());
    for (const TerminalTarget& t : term.targets) {
        ids.push_back(c.add_synapse(from, t.neuron, t.weight, t.delay + extra_delay));
    }
    return ids;
}

// Wire every output neuron of `from` into the terminal.
inline std::vector<int> connect(CircuitGraph& c, const BlockHandle& from,
                                const std::string& from_port, const BlockHandle& to,
                                const std::string& terminal, int extra_delay = 0) {
    std::vector<int> ids;
    for (int neuron : output_port(from, from_port)) {
        auto part = connect(c, neuron_endpoint(neuron), to, terminal, extra_delay);
        ids.insert(ids.end(), part.begin(), part.end());
    }
    return ids;
}

// Merged spike train of a block output port.
inline SpikeTrain output_train(const Trace& trace, const CircuitGraph& c, const BlockHandle& h,
                               const std::string& port = "out") {
    std::vector<Tick> merged;
    for (int neuron : output_port(h, port)) {
        const auto& train = trace.spikes.at(c.neurons()[neuron].name);
        merged.insert(merged.end(), train.begin(), train.end());
    }
    std::sort(merged.begin(), merged.end());
    merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
    return merged;
}

// Add the union signal (and rise/fall for flank blocks) under the block name.
inline void attach_block_signals(Trace& trace, const CircuitGraph& c, const BlockHandle& h) {
    trace.spikes[h.name] = output_train(trace, c, h);
    if (h.kind == BlockKind::Flank) {
        trace.spikes[h.name + ".rise"] = output_train(trace, c, h, "rise");
        trace.spikes[h.name + ".fall"] = output_train(trace, c, h, "fall");
    }
}

}  // namespace spikegate::blocks
