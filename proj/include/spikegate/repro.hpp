#pragma once

// The trace experiments: fixed stimuli per experiment, simulation under both
// backends, and the timing checkpoints each run must reproduce. Used by the
// `repro` CLI command and by the acceptance suite.

#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "spikegate/blocks.hpp"
#include "spikegate/oracle.hpp"
#include "spikegate/sim.hpp"
#include "spikegate/trace_io.hpp"

namespace spikegate::repro {

struct Check {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct Built {
    CircuitGraph circuit;
    std::vector<blocks::BlockHandle> handles;
    std::vector<std::string> signal_order;
    Tick horizon = 0;

    const blocks::BlockHandle& handle(std::string_view name) const {
        for (const auto& h : handles) {
            if (h.name == name) return h;
        }
        throw std::logic_error("no such handle");
    }
};

struct Result {
    std::string experiment;
    Built built;
    Trace trace_lif;
    Trace trace_abstract;
    std::vector<Check> checks;

    bool pass() const {
        for (const auto& c : checks) {
            if (!c.pass) return false;
        }
        return true;
    }
};

inline const std::vector<std::string>& experiment_names() {
    static const std::vector<std::string> names = {"and4", "xor4",  "switch",    "flank",
                                                   "css",  "latch", "oscillator"};
    return names;
}

namespace detail {

inline std::string show_train(const SpikeTrain& t) {
    std::ostringstream os;
    os << "{";
    for (size_t i = 0; i < t.size(); ++i) {
        if (i) os << ",";
        os << t[i];
    }
    os << "}";
    return os.str();
}

inline void expect_train(std::vector<Check>& checks, const std::string& name,
                         const SpikeTrain& got, const SpikeTrain& want) {
    checks.push_back({name, got == want,
                      "expected " + show_train(want) + ", got " + show_train(got)});
}

inline void expect(std::vector<Check>& checks, const std::string& name, bool pass,
                   const std::string& detail = "") {
    checks.push_back({name, pass, detail});
}

// Stimuli for the 4-input AND comparison: all four inputs coincide at tick 3,
// three at 5, two at 6 and one at 7.
inline const std::vector<SpikeTrain>& and4_stimuli() {
    static const std::vector<SpikeTrain> stims = {
        {3, 5, 6, 7}, {3, 5, 6}, {3, 5}, {3}};
    return stims;
}

inline Built build_and4(Tick horizon) {
    Built b;
    b.horizon = horizon;
    for (size_t k = 0; k < and4_stimuli().size(); ++k) {
        b.circuit.add_source("in" + std::to_string(k), and4_stimuli()[k]);
    }
    b.handles.push_back(blocks::build_and_classic(b.circuit, "gc", 4));
    blocks::SharedCss css = blocks::build_css(b.circuit, "_css", 1);
    b.handles.push_back(blocks::css_handle(css));
    b.handles.push_back(blocks::build_and_fast(b.circuit, "gf", 4, css));
    for (int k = 0; k < 4; ++k) {
        EndpointId src = *b.circuit.find("in" + std::to_string(k));
        blocks::connect(b.circuit, src, b.handle("gc"), "in" + std::to_string(k));
        blocks::connect(b.circuit, src, b.handle("gf"), "in" + std::to_string(k));
    }
    b.circuit.add_probe(b.circuit.find("gc.out")->index);
    b.circuit.add_probe(b.circuit.find("gf.out")->index);
    b.signal_order = {"in0", "in1", "in2", "in3", "gc.or", "gc.out", "gf.out", "gc", "gf"};
    return b;
}

inline Built build_xor4(Tick horizon) {
    Built b;
    b.horizon = horizon;
    SpikeTrain every, two, three, four;
    for (Tick t = 1; t <= 16; ++t) every.push_back(t);
    for (Tick t = 2; t <= 16; t += 2) two.push_back(t);
    for (Tick t = 3; t <= 16; t += 3) three.push_back(t);
    for (Tick t = 4; t <= 16; t += 4) four.push_back(t);
    b.circuit.add_source("in0", every);
    b.circuit.add_source("in1", two);
    b.circuit.add_source("in2", three);
    b.circuit.add_source("in3", four);
    b.handles.push_back(blocks::build_xor(b.circuit, "gx", 4));
    for (int k = 0; k < 4; ++k) {
        blocks::connect(b.circuit, *b.circuit.find("in" + std::to_string(k)), b.handle("gx"),
                        "in" + std::to_string(k));
    }
    b.signal_order = {"in0",   "in1",   "in2",   "in3",   "gx.i0", "gx.i1", "gx.i2",
                      "gx.i3", "gx.o0", "gx.o1", "gx.o2", "gx.o3", "gx"};
    return b;
}

inline Built build_switch(Tick horizon) {
    Built b;
    b.horizon = horizon;
    b.circuit.add_source("btn", {1, 6, 7, 8});
    b.handles.push_back(blocks::build_switch(b.circuit, "sw"));
    blocks::connect(b.circuit, *b.circuit.find("btn"), b.handle("sw"), "in0");
    b.signal_order = {"btn", "sw.u", "sw.c", "sw"};
    return b;
}

inline Built build_flank(Tick horizon) {
    Built b;
    b.horizon = horizon;
    b.handles.push_back(blocks::build_sync_oscillator(b.circuit, "clk", 4, 5));
    blocks::SharedCss css = blocks::build_css(b.circuit, "_css", 1);
    b.handles.push_back(blocks::css_handle(css));
    b.handles.push_back(blocks::build_flank_detector(b.circuit, "fd", css));
    blocks::connect(b.circuit, b.handle("clk"), "out", b.handle("fd"), "in0");
    b.signal_order = {"clk", "fd.not", "fd.rise", "fd.fall"};
    return b;
}

inline Built build_css_experiment(Tick horizon) {
    Built b;
    b.horizon = horizon;
    blocks::SharedCss css = blocks::build_css(b.circuit, "c", 1);
    b.handles.push_back(blocks::css_handle(css));
    b.signal_order = {"c.src", "c.latch", "c"};
    return b;
}

inline Built build_latch(Tick horizon) {
    Built b;
    b.horizon = horizon;
    b.circuit.add_source("s", {4});
    b.circuit.add_source("r", {9});
    b.handles.push_back(blocks::build_sr_latch(b.circuit, "m"));
    blocks::connect(b.circuit, *b.circuit.find("s"), b.handle("m"), "set");
    blocks::connect(b.circuit, *b.circuit.find("r"), b.handle("m"), "reset");
    b.signal_order = {"s", "r", "m"};
    return b;
}

inline Built build_oscillator(Tick horizon) {
    Built b;
    b.horizon = horizon;
    b.handles.push_back(blocks::build_sync_oscillator(b.circuit, "clk", 4, 1));
    b.signal_order = {"clk.src", "clk.a", "clk.b", "clk"};
    return b;
}

inline bool same_spikes(const Trace& a, const Trace& b) { return a.spikes == b.spikes; }

}  // namespace detail

inline Built build_circuit(std::string_view name, Tick horizon) {
    if (name == "and4") return detail::build_and4(horizon);
    if (name == "xor4") return detail::build_xor4(horizon);
    if (name == "switch") return detail::build_switch(horizon);
    if (name == "flank") return detail::build_flank(horizon);
    if (name == "css") return detail::build_css_experiment(horizon);
    if (name == "latch") return detail::build_latch(horizon);
    if (name == "oscillator") return detail::build_oscillator(horizon);
    throw std::invalid_argument("unknown experiment '" + std::string(name) + "'");
}

inline Tick default_horizon(std::string_view name) {
    if (name == "and4") return 10;
    if (name == "xor4") return 20;
    if (name == "switch") return 12;
    if (name == "flank") return 14;
    if (name == "css") return 10;
    if (name == "latch") return 12;
    if (name == "oscillator") return 22;
    throw std::invalid_argument("unknown experiment '" + std::string(name) + "'");
}

inline Result run_experiment(std::string_view name) {
    Result r;
    r.experiment = std::string(name);
    r.built = build_circuit(name, default_horizon(name));
    const Built& b = r.built;

    SimConfig lif_cfg{Backend::Lif, b.horizon, 0.0, true};
    SimConfig abs_cfg{Backend::Abstract, b.horizon, 0.0, false};
    r.trace_lif = run(b.circuit, lif_cfg);
    r.trace_abstract = run(b.circuit, abs_cfg);
    for (const auto& h : b.handles) {
        blocks::attach_block_signals(r.trace_lif, b.circuit, h);
        blocks::attach_block_signals(r.trace_abstract, b.circuit, h);
    }

    auto& checks = r.checks;
    detail::expect(checks, "backend equivalence (lif == abstract)",
                   detail::same_spikes(r.trace_lif, r.trace_abstract));

    const Trace& tr = r.trace_abstract;
    const Tick H = b.horizon;
    if (name == "and4") {
        oracle::StimulusSet stims{detail::and4_stimuli(), H};
        detail::expect_train(checks, "classic output matches oracle (latency 2)",
                             tr.spikes.at("gc"), oracle::oracle_and(stims, 2));
        detail::expect_train(checks, "fast output matches oracle (latency 1)",
                             tr.spikes.at("gf"), oracle::oracle_and(stims, 1));
        auto mismatches = trace_io::diff(tr, tr, 1, {{"gc", "gf"}});
        detail::expect(checks, "fast output leads classic by exactly 1 tick",
                       mismatches.empty(),
                       std::to_string(mismatches.size()) + " mismatching spikes");
        // With three of four inputs the inhibition cancels the excitation and
        // the classic output membrane sits exactly at rest at the decision
        // tick. The fast output rides on the decay residue of the constant
        // inhibition (~1e-5 mV), so its cancellation holds at trace precision.
        double v_classic = r.trace_lif.membrane.at("gc.out")[7];
        double v_fast = r.trace_lif.membrane.at("gf.out")[6];
        detail::expect(checks, "classic n-1 case leaves membrane at rest",
                       std::abs(v_classic - (-65.0)) < 1e-6, std::to_string(v_classic));
        detail::expect(checks, "fast n-1 case reaches the resting level",
                       std::abs(v_fast - (-65.0)) < 1e-3 && v_fast <= -65.0,
                       std::to_string(v_fast));
    } else if (name == "xor4") {
        oracle::StimulusSet stims;
        stims.horizon = H;
        for (int k = 0; k < 4; ++k) {
            stims.terminals.push_back(tr.spikes.at("in" + std::to_string(k)));
        }
        detail::expect_train(checks, "xor output matches oracle", tr.spikes.at("gx"),
                             oracle::oracle_xor(stims));
        bool exclusive = true;
        for (Tick t = 0; t < H; ++t) {
            int firing = 0;
            for (int k = 0; k < 4; ++k) {
                const auto& train = tr.spikes.at("gx.o" + std::to_string(k));
                firing += std::binary_search(train.begin(), train.end(), t);
            }
            exclusive &= firing <= 1;
        }
        detail::expect(checks, "at most one output neuron fires per tick", exclusive);
    } else if (name == "switch") {
        auto [u_want, c_want] = oracle::oracle_switch({1, 6, 7, 8}, H);
        detail::expect_train(checks, "input neuron matches oracle", tr.spikes.at("sw.u"),
                             u_want);
        detail::expect_train(checks, "cycle neuron matches oracle", tr.spikes.at("sw.c"),
                             c_want);
        auto fired = [&](const std::string& s, Tick t) {
            const auto& train = tr.spikes.at(s);
            return std::binary_search(train.begin(), train.end(), t);
        };
        detail::expect(checks, "U fires at 2", fired("sw.u", 2));
        detail::expect(checks, "C fires from 3", fired("sw.c", 3) && fired("sw.c", 6));
        detail::expect(checks, "C silent from 7", !fired("sw.c", 7) && !fired("sw.c", 8));
        detail::expect(checks, "U fires at 8", fired("sw.u", 8));
        detail::expect(checks, "C does not resume at 9", !fired("sw.c", 9));
    } else if (name == "flank") {
        auto [rise_want, fall_want] = oracle::oracle_flank(tr.spikes.at("clk"), H);
        detail::expect_train(checks, "rise output matches oracle", tr.spikes.at("fd.rise"),
                             rise_want);
        detail::expect_train(checks, "fall output matches oracle", tr.spikes.at("fd.fall"),
                             fall_want);
        detail::expect_train(checks, "clock high 6..9 is seen at the detector input",
                             tr.spikes.at("clk"), {6, 7, 8, 9});
        detail::expect_train(checks, "rising edge at 6 detected at 8", tr.spikes.at("fd.rise"),
                             {8});
        detail::expect_train(checks, "falling edge at 10 detected at 13",
                             tr.spikes.at("fd.fall"), {13});
    } else if (name == "css") {
        detail::expect_train(checks, "one spike every tick from 1", tr.spikes.at("c"),
                             oracle::oracle_css(1, H));
    } else if (name == "latch") {
        detail::expect_train(checks, "set at 4, reset at 9 holds ticks 5..9",
                             tr.spikes.at("m"), oracle::oracle_latch({4}, {9}, H));
    } else if (name == "oscillator") {
        detail::expect_train(checks, "half-period 4 alternation", tr.spikes.at("clk"),
                             oracle::oracle_oscillator(4, 1, H));
    }
    return r;
}

}  // namespace spikegate::repro
