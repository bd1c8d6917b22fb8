// Acceptance suite: one test and one printed PASS/FAIL line per criterion.

#include <gtest/gtest.h>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "spikegate/spikegate.hpp"

#include "ast_gen.hpp"

using namespace spikegate;

namespace {

void report(int number, const std::string& name, bool pass) {
    std::printf("ACCEPTANCE %d %-28s %s\n", number, name.c_str(), pass ? "PASS" : "FAIL");
    EXPECT_TRUE(pass) << "criterion " << number << ": " << name;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    EXPECT_TRUE(in.good()) << path;
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

// 1. Every block kind, arities 2..4 where applicable, 100 seeded stimulus
//    sets, horizon 200: simulated output equals the oracle exactly under both
//    backends, inside 30 seconds.
TEST(Acceptance, C1_OracleEquivalence) {
    auto start = std::chrono::steady_clock::now();
    long mismatches = 0;
    for (const std::string& kind : gatetest::gate_kinds()) {
        int min_arity = gatetest::arity_minimum(kind);
        std::vector<int> arities =
            min_arity < 0 ? std::vector<int>{0} : std::vector<int>{2, 3, 4};
        for (int n : arities) {
            gatetest::Report r = gatetest::run_gate_test(kind, n, 100, 20240 + n, 200);
            mismatches += r.mismatches;
            EXPECT_EQ(r.mismatches, 0)
                << kind << " n=" << n
                << (r.failures.empty() ? "" : " first: " + r.failures.front());
        }
    }
    double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                         .count();
    EXPECT_LT(seconds, 30.0);
    report(1, "oracle equivalence", mismatches == 0 && seconds < 30.0);
}

// 2. Every repro circuit gives tick-identical spike traces under both
//    backends out to horizon 1000.
TEST(Acceptance, C2_BackendEquivalence) {
    bool pass = true;
    for (const std::string& name : repro::experiment_names()) {
        repro::Built built = repro::build_circuit(name, 1000);
        Trace lif = run(built.circuit, {Backend::Lif, 1000, 0.0, false});
        Trace abs = run(built.circuit, {Backend::Abstract, 1000, 0.0, false});
        bool same = lif.spikes == abs.spikes;
        EXPECT_TRUE(same) << name;
        pass &= same;
    }
    report(2, "backend equivalence", pass);
}

// 3. Resource reports reproduce the resource table; the flank detector
//    matches its connection count (14) and latency pair, with the neuron
//    count reported as 7 including the shared css (the table lists 5).
TEST(Acceptance, C3_ResourceTable) {
    bool pass = true;
    auto check = [&](int got, int want, const char* what) {
        EXPECT_EQ(got, want) << what;
        pass &= got == want;
    };
    for (int n = 2; n <= 4; ++n) {
        CircuitGraph c1, c2, c3, c4;
        auto orr = blocks::resource_report(blocks::build_or(c1, "g", n));
        check(orr.neurons, 1, "or neurons");
        check(orr.connections, n, "or connections");
        check(orr.latency.first, 1, "or latency");
        auto ac = blocks::resource_report(blocks::build_and_classic(c2, "g", n));
        check(ac.neurons, 2, "classic and neurons");
        check(ac.connections, 2 * n + 1, "classic and connections");
        check(ac.latency.first, 2, "classic and latency");
        auto af = blocks::resource_report(
            blocks::build_and_fast(c3, "g", n, blocks::build_css(c3, "css", 1)));
        check(af.neurons, 3, "fast and neurons");
        check(af.connections, n + 3, "fast and connections");
        check(af.latency.first, 1, "fast and latency");
        auto x = blocks::resource_report(blocks::build_xor(c4, "g", n));
        check(x.neurons, 2 * n, "xor neurons");
        check(x.connections, n * n + n, "xor connections");
        check(x.latency.first, 2, "xor latency");
    }
    CircuitGraph c;
    auto latch_full = blocks::resource_report(blocks::build_sr_latch(c, "m"));
    check(latch_full.neurons, 1, "latch neurons");
    check(latch_full.connections, 3, "latch connections (set+reset)");
    auto latch_one = blocks::resource_report(blocks::build_sr_latch(c, "m1", true, false));
    check(latch_one.connections, 2, "latch connections (set only)");
    check(latch_full.latency.first, 1, "latch latency");
    auto sw = blocks::resource_report(blocks::build_switch(c, "sw"));
    check(sw.neurons, 2, "switch neurons");
    check(sw.connections, 6, "switch connections");
    check(sw.latency.first, 1, "switch latency");
    auto css = blocks::resource_report(blocks::css_handle(blocks::build_css(c, "c", 1)));
    check(css.neurons, 2, "css neurons");
    check(css.connections, 2, "css connections");
    check(css.latency.first, 1, "css latency");
    CircuitGraph c5;
    blocks::SharedCss shared = blocks::build_css(c5, "c", 1);
    auto nt = blocks::resource_report(blocks::build_not(c5, "n", shared));
    check(nt.neurons, 3, "not neurons");
    check(nt.connections, 4, "not connections");
    check(nt.latency.first, 1, "not latency");
    auto osc = blocks::resource_report(blocks::build_sync_oscillator(c5, "o", 4, 1));
    check(osc.neurons, 3, "oscillator neurons");
    check(osc.connections, 3, "oscillator connections");
    check(osc.latency.first, 1, "oscillator latency (low first half-period)");
    auto flank = blocks::resource_report(blocks::build_flank_detector(c5, "f", shared));
    check(flank.connections, 14, "flank connections");
    check(flank.latency.first, 2, "flank rise latency");
    check(flank.latency.second, 3, "flank fall latency");
    check(flank.neurons, 7, "flank neurons incl css (table lists 5)");
    report(3, "resource table", pass);
}

// 4. Classic AND answers exactly 2 ticks after coincident inputs, fast AND
//    exactly 1; their traces differ by a pure 1-tick shift; with n-1
//    coincident inputs there is no output and the classic output membrane is
//    within 1e-6 mV of rest at the decision tick.
TEST(Acceptance, C4_AndTiming) {
    repro::Result r = repro::run_experiment("and4");
    bool pass = r.pass();
    for (const auto& check : r.checks) {
        EXPECT_TRUE(check.pass) << check.name << " " << check.detail;
    }
    EXPECT_EQ(r.trace_abstract.spikes.at("gc"), SpikeTrain{5});  // inputs at 3
    EXPECT_EQ(r.trace_abstract.spikes.at("gf"), SpikeTrain{4});
    pass &= r.trace_abstract.spikes.at("gc") == SpikeTrain{5} &&
            r.trace_abstract.spikes.at("gf") == SpikeTrain{4};
    report(4, "classic/fast AND timing", pass);
}

// 5. Clock high on ticks 6..9: rise output at exactly 8 and fall output at
//    exactly 13, under both backends.
TEST(Acceptance, C5_FlankTiming) {
    repro::Built built = repro::build_circuit("flank", 14);
    bool pass = true;
    for (Backend backend : {Backend::Lif, Backend::Abstract}) {
        Trace t = run(built.circuit, {backend, 14, 0.0, false});
        blocks::attach_block_signals(t, built.circuit, built.handle("fd"));
        blocks::attach_block_signals(t, built.circuit, built.handle("clk"));
        EXPECT_EQ(t.spikes.at("clk"), (SpikeTrain{6, 7, 8, 9}));
        EXPECT_EQ(t.spikes.at("fd.rise"), SpikeTrain{8});
        EXPECT_EQ(t.spikes.at("fd.fall"), SpikeTrain{13});
        pass &= t.spikes.at("fd.rise") == SpikeTrain{8} &&
                t.spikes.at("fd.fall") == SpikeTrain{13};
    }
    report(5, "flank detector timing", pass);
}

// 6. Switch checkpoints for input {1,6,7,8}: U at 2, C from 3, C silent from
//    7, U at 8, C does not resume at 9.
TEST(Acceptance, C6_SwitchCheckpoints) {
    repro::Built built = repro::build_circuit("switch", 12);
    bool pass = true;
    for (Backend backend : {Backend::Lif, Backend::Abstract}) {
        Trace t = run(built.circuit, {backend, 12, 0.0, false});
        pass &= t.spikes.at("sw.u") == SpikeTrain{2, 8};
        pass &= t.spikes.at("sw.c") == SpikeTrain{3, 4, 5, 6};
        EXPECT_EQ(t.spikes.at("sw.u"), (SpikeTrain{2, 8}));
        EXPECT_EQ(t.spikes.at("sw.c"), (SpikeTrain{3, 4, 5, 6}));
    }
    report(6, "switch checkpoints", pass);
}

// 7. Calibration: one calibrated unit from rest fires, 0.99 units does not,
//    and k-for-k excitation/inhibition cancellation stays within 1e-6 mV of
//    rest for k in 1..5.
TEST(Acceptance, C7_Calibration) {
    const NeuronParams p = default_lif_params();
    double unit = calibrate_unit_current(p);
    NeuronState s = resting_state(p);
    bool fires = lif_tick(s, p, 1.0, 0.0, unit, 0);
    s = resting_state(p);
    bool under_fires = lif_tick(s, p, 0.99, 0.0, unit, 0);
    bool cancel_ok = true;
    for (int k = 1; k <= 5; ++k) {
        s = resting_state(p);
        bool fired = lif_tick(s, p, k, k, unit, 0);
        cancel_ok &= !fired && std::abs(s.v - p.v_rest) < 1e-6;
    }
    EXPECT_TRUE(fires);
    EXPECT_FALSE(under_fires);
    EXPECT_TRUE(cancel_ok);
    report(7, "unit calibration", fires && !under_fires && cancel_ok);
}

// 8. Parser: 1000 generated ASTs round-trip through format/parse; k injected
//    syntax errors give at least k diagnostics; the shipped netlists
//    elaborate to byte-identical circuit dumps.
TEST(Acceptance, C8_Parser) {
    bool pass = true;

    std::mt19937 rng(31337);
    for (int i = 0; i < 1000; ++i) {
        netlist::NetlistAst ast = testgen::random_ast(rng);
        netlist::ParseResult back = netlist::parse(netlist::format(ast));
        bool ok = back.ok() && back.ast == ast;
        EXPECT_TRUE(ok) << netlist::format(ast);
        pass &= ok;
    }

    const char* bad_lines[] = {"block xor q inputs=", "connect a -> ",
                               "source z spikes=[1,,2]", "run", "probe", "flub grub"};
    for (int k = 1; k <= 6; ++k) {
        std::ostringstream text;
        for (int i = 0; i < k; ++i) text << bad_lines[i] << "\n";
        text << "run 10\n";
        netlist::ParseResult r = netlist::parse(text.str());
        bool enough = static_cast<int>(r.diagnostics.size()) >= k;
        EXPECT_TRUE(enough) << "k=" << k << " got " << r.diagnostics.size();
        pass &= enough;
    }

    for (const char* name : {"and4", "xor4", "switch", "flank", "css", "latch",
                             "oscillator"}) {
        std::string path = std::string(SPIKEGATE_NETLIST_DIR) + "/" + name + ".snl";
        std::string text = read_file(path);
        netlist::ParseResult parsed = netlist::parse(text);
        bool ok = parsed.ok();
        if (ok) {
            netlist::Elaboration a = netlist::elaborate(parsed.ast);
            netlist::Elaboration b = netlist::elaborate(netlist::parse(text).ast);
            ok = a.ok() && a.circuit.dump_json() == b.circuit.dump_json();
        }
        EXPECT_TRUE(ok) << path;
        pass &= ok;
    }
    report(8, "netlist parser", pass);
}
