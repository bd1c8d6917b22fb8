#include <gtest/gtest.h>

#include <random>

#include "spikegate/netlist.hpp"

#include "ast_gen.hpp"

using namespace spikegate;
using namespace spikegate::netlist;

namespace {

const BlockStmt& as_block(const Stmt& s) { return std::get<BlockStmt>(s.node); }
const ConnectStmt& as_connect(const Stmt& s) { return std::get<ConnectStmt>(s.node); }

}  // namespace

TEST(Parse, BlockStatement) {
    ParseResult r = parse("block and_classic g inputs=4\n");
    ASSERT_TRUE(r.ok());
    ASSERT_EQ(r.ast.statements.size(), 1u);
    const BlockStmt& b = as_block(r.ast.statements[0]);
    EXPECT_EQ(b.kind, "and_classic");
    EXPECT_EQ(b.name, "g");
    EXPECT_EQ(b.inputs, 4);
}

TEST(Parse, ConnectWithDelay) {
    ParseResult r = parse("connect clk.out -> n1.in0 delay=+2\n");
    ASSERT_TRUE(r.ok());
    const ConnectStmt& c = as_connect(r.ast.statements[0]);
    EXPECT_EQ(c.src, (Endpoint{"clk", "out"}));
    EXPECT_EQ(c.dst, (Endpoint{"n1", "in0"}));
    EXPECT_EQ(c.extra_delay, 2);
}

TEST(Parse, MissingIntegerIsDiagnosed) {
    ParseResult r = parse("block xor g inputs=\n");
    EXPECT_FALSE(r.ok());
    ASSERT_EQ(r.diagnostics.size(), 1u);
    EXPECT_EQ(r.diagnostics[0].line, 1);
    EXPECT_NE(r.diagnostics[0].message.find("integer"), std::string::npos);
}

TEST(Parse, CommentsAndBlankLinesIgnored) {
    ParseResult r = parse("# a comment\n\n  \nrun 10   # trailing comment\n");
    ASSERT_TRUE(r.ok());
    ASSERT_EQ(r.ast.statements.size(), 1u);
    EXPECT_EQ(std::get<RunStmt>(r.ast.statements[0].node).horizon, 10);
}

TEST(Parse, CrlfAccepted) {
    ParseResult r = parse("source s spikes=[1,2]\r\nrun 5\r\n");
    EXPECT_TRUE(r.ok());
    EXPECT_EQ(r.ast.statements.size(), 2u);
}

TEST(Parse, RecoversAtLineBoundaries) {
    ParseResult r = parse(
        "block xor g inputs=\n"
        "connect a ->\n"
        "source s spikes=[1,,2]\n"
        "run 10\n");
    EXPECT_EQ(r.diagnostics.size(), 3u);
    ASSERT_EQ(r.ast.statements.size(), 1u);  // the run statement survives
    std::set<int> lines;
    for (const auto& d : r.diagnostics) lines.insert(d.line);
    EXPECT_EQ(lines, (std::set<int>{1, 2, 3}));
}

TEST(Format, RoundTripsTheReproNetlists) {
    const char* text =
        "source in0 spikes=[3,5,6,7]\n"
        "block and_classic gc inputs=4\n"
        "block and_fast gf inputs=4\n"
        "connect in0 -> gc.in0\n"
        "connect in0 -> gf.in0 delay=+1\n"
        "probe gc\n"
        "run 10\n";
    ParseResult first = parse(text);
    ASSERT_TRUE(first.ok());
    std::string canonical = format(first.ast);
    ParseResult second = parse(canonical);
    ASSERT_TRUE(second.ok());
    EXPECT_EQ(first.ast, second.ast);
    // canonical text is a fixpoint
    EXPECT_EQ(canonical, format(second.ast));
}

TEST(Format, RoundTripPropertyOnGeneratedAsts) {
    std::mt19937 rng(2024);
    for (int i = 0; i < 300; ++i) {
        NetlistAst ast = testgen::random_ast(rng);
        ParseResult back = parse(format(ast));
        ASSERT_TRUE(back.ok()) << format(ast);
        ASSERT_EQ(ast, back.ast) << format(ast);
    }
}

TEST(Elaborate, ClassicAndNetlistGetsTableResources) {
    ParseResult r = parse(
        "source in0 spikes=[3]\n"
        "block and_classic g inputs=4\n"
        "connect in0 -> g.in0\n"
        "run 10\n");
    ASSERT_TRUE(r.ok());
    Elaboration e = elaborate(r.ast);
    ASSERT_TRUE(e.ok());
    ASSERT_EQ(e.handles.size(), 1u);
    blocks::ResourceReport rep = blocks::resource_report(e.handles[0]);
    EXPECT_EQ(rep.neurons, 2);
    EXPECT_EQ(rep.connections, 9);
    EXPECT_EQ(e.horizon, 10);
}

TEST(Elaborate, TwoNotBlocksShareOneImplicitCss) {
    ParseResult r = parse("block not a\nblock not b\nrun 5\n");
    ASSERT_TRUE(r.ok());
    Elaboration e = elaborate(r.ast);
    ASSERT_TRUE(e.ok());
    int css_neurons = 0;
    for (const auto& n : e.circuit.neurons()) {
        css_neurons += n.name.find("_css") == 0;
    }
    int css_sources = 0;
    for (const auto& s : e.circuit.sources()) {
        css_sources += s.name.find("_css") == 0;
    }
    EXPECT_EQ(css_neurons + css_sources, 2);  // exactly one css instantiated
}

TEST(Elaborate, ExplicitCssIsShared) {
    ParseResult r = parse("block css c first=2\nblock not a\nrun 5\n");
    Elaboration e = elaborate(r.ast);
    ASSERT_TRUE(e.ok());
    for (const auto& n : e.circuit.neurons()) {
        EXPECT_EQ(n.name.find("_css"), std::string::npos);
    }
}

TEST(Elaborate, PortOutOfRangeDiagnosed) {
    ParseResult r = parse(
        "source s spikes=[1]\n"
        "block xor g inputs=4\n"
        "connect s -> g.in9\n"
        "run 5\n");
    Elaboration e = elaborate(r.ast);
    EXPECT_FALSE(e.ok());
    bool found = false;
    for (const auto& d : e.diagnostics) {
        found |= d.message.find("port out of range") != std::string::npos;
    }
    EXPECT_TRUE(found);
}

TEST(Elaborate, SemanticErrorsAreDiagnosedNotThrown) {
    ParseResult r = parse(
        "block nonsense g\n"
        "block or g2 inputs=0\n"
        "source s spikes=[3,2]\n"
        "connect nowhere -> g2.in0\n"
        "block or g2 inputs=1\n"
        "run 0\n"
        "run 10\nrun 11\n");
    Elaboration e = elaborate(r.ast);
    EXPECT_FALSE(e.ok());
    EXPECT_GE(e.diagnostics.size(), 6u);
}

TEST(Elaborate, DeterministicCircuitDumps) {
    const char* text =
        "block oscillator clk half_period=4 first=5\n"
        "block flank fd\n"
        "connect clk -> fd.in0\n"
        "run 14\n";
    ParseResult r = parse(text);
    ASSERT_TRUE(r.ok());
    Elaboration a = elaborate(r.ast);
    Elaboration b = elaborate(parse(text).ast);
    ASSERT_TRUE(a.ok());
    EXPECT_EQ(a.circuit.dump_json(), b.circuit.dump_json());
}

TEST(Elaborate, ProbeResolvesToOutputNeurons) {
    ParseResult r = parse(
        "block switch sw\n"
        "probe sw\n"
        "run 5\n");
    Elaboration e = elaborate(r.ast);
    ASSERT_TRUE(e.ok());
    EXPECT_EQ(e.circuit.probes().size(), 2u);  // both switch neurons are outputs
}

TEST(Elaborate, ProbingASourceIsAnError) {
    ParseResult r = parse("source s spikes=[1]\nprobe s\nrun 5\n");
    Elaboration e = elaborate(r.ast);
    EXPECT_FALSE(e.ok());
}

// Parsing and elaborating arbitrary byte soup must produce diagnostics, never
// a crash.
TEST(Parse, FuzzedInputNeverPanics) {
    std::mt19937 rng(555);
    const std::string alphabet =
        "abcdefghijklmnopqrstuvwxyz0123456789 \t\n\r#[],.=->+_";
    for (int i = 0; i < 400; ++i) {
        std::string text;
        int len = static_cast<int>(rng() % 160);
        for (int j = 0; j < len; ++j) {
            if (rng() % 20 == 0) {
                text += static_cast<char>(rng() % 256);  // occasional raw byte
            } else {
                text += alphabet[rng() % alphabet.size()];
            }
        }
        ParseResult r = parse(text);
        Elaboration e = elaborate(r.ast);
        (void)e;
    }
    SUCCEED();
}

TEST(Parse, DuplicateAndUnknownParametersDiagnosed) {
    EXPECT_FALSE(parse("block xor g inputs=2 inputs=3\n").ok());
    EXPECT_FALSE(parse("block xor g wibble=2\n").ok());
}

// Full path through the language: a flank detector's rise port setting an SR
// latch, with an extra connection delay.
TEST(Elaborate, FlankRisePortDrivesALatch) {
    ParseResult r = parse(
        "source clk spikes=[6,7,8,9]\n"
        "block flank fd\n"
        "block sr_latch m\n"
        "connect clk -> fd.in0\n"
        "connect fd.rise -> m.set delay=+1\n"
        "run 16\n");
    ASSERT_TRUE(r.ok());
    Elaboration e = elaborate(r.ast);
    ASSERT_TRUE(e.ok());
    Trace t = run(e.circuit, {Backend::Abstract, *e.horizon, 0.0, false});
    attach_signals(t, e);
    EXPECT_EQ(t.spikes.at("fd.rise"), SpikeTrain{8});
    // rise at 8, +1 designed +1 extra: the latch holds from 10 on
    EXPECT_EQ(t.spikes.at("m"), (SpikeTrain{10, 11, 12, 13, 14, 15}));
}
