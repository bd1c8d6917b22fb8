// spikegate CLI: run .snl netlists, reproduce the block experiments, fuzz
// gates against their oracles, inspect resources and print the calibrated
// unit current.
//
// Exit codes: 0 success/PASS, 1 simulation or verification failure (including
// netlist diagnostics), 2 usage error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "spikegate/spikegate.hpp"

namespace {

using namespace spikegate;

int print_diagnostics(const std::vector<netlist::Diagnostic>& diags) {
    int errors = 0;
    for (const auto& d : diags) {
        std::cerr << d.to_string() << "\n";
        errors += d.severity == netlist::Diagnostic::Severity::Error;
    }
    return errors;
}

bool read_file(const std::string& path, std::string& out) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return false;
    std::ostringstream ss;
    ss << in.rdbuf();
    out = ss.str();
    return true;
}

bool write_output(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return true;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        std::cerr << "cannot write '" << path << "'\n";
        return false;
    }
    out << text;
    return true;
}

std::string latency_string(const blocks::BlockHandle& h) {
    if (h.latency.first == h.latency.second) return std::to_string(h.latency.first);
    return std::to_string(h.latency.first) + "/" + std::to_string(h.latency.second);
}

int cmd_run(const std::string& file, int until, const std::string& backend,
            const std::string& format, const std::string& out_path, bool membrane) {
    std::string text;
    if (!read_file(file, text)) {
        std::cerr << "cannot read '" << file << "'\n";
        return 2;
    }
    netlist::ParseResult parsed = netlist::parse(text);
    if (print_diagnostics(parsed.diagnostics) > 0) return 1;
    netlist::Elaboration elab = netlist::elaborate(parsed.ast);
    if (print_diagnostics(elab.diagnostics) > 0) return 1;

    Tick horizon = until > 0 ? until : elab.horizon.value_or(0);
    if (horizon < 1) {
        std::cerr << "no run statement in '" << file << "'; pass --until T\n";
        return 2;
    }

    SimConfig cfg;
    cfg.backend = backend == "lif" ? Backend::Lif : Backend::Abstract;
    cfg.horizon = horizon;
    cfg.record_membrane = membrane;
    if (membrane && cfg.backend != Backend::Lif) {
        std::cerr << "warning: membrane recording needs --backend lif; ignoring\n";
    }
    if (membrane && cfg.backend == Backend::Lif && elab.circuit.probes().empty()) {
        std::cerr << "warning: --membrane without probe statements records nothing\n";
    }

    Trace trace = run(elab.circuit, cfg);
    netlist::attach_signals(trace, elab);

    std::string rendered;
    if (format == "csv") {
        rendered = trace_io::export_csv(trace);
    } else if (format == "json") {
        rendered = trace_io::export_json(trace) + "\n";
    } else {
        rendered = trace_io::render_ascii(trace, netlist::default_signal_order(elab), 0,
                                          horizon);
    }
    if (!write_output(out_path, rendered)) return 1;

    if (trace.membrane_recorded && !trace.membrane.empty()) {
        std::string mem = trace_io::export_membrane_csv(trace);
        if (out_path.empty()) {
            std::cout << "\n" << mem;
        } else if (!write_output(out_path + ".membrane.csv", mem)) {
            return 1;
        }
    }
    return 0;
}

int cmd_repro(const std::string& experiment) {
    repro::Result result = repro::run_experiment(experiment);
    std::cout << trace_io::render_ascii(result.trace_lif, result.built.signal_order, 0,
                                        result.built.horizon);
    for (const auto& check : result.checks) {
        std::cout << (check.pass ? "  [PASS] " : "  [FAIL] ") << check.name;
        if (!check.pass && !check.detail.empty()) std::cout << " -- " << check.detail;
        std::cout << "\n";
    }
    std::cout << "repro " << experiment << ": " << (result.pass() ? "PASS" : "FAIL") << "\n";
    return result.pass() ? 0 : 1;
}

int cmd_gate_test(const std::string& kind, int inputs, int trials, std::uint32_t seed,
                  int horizon) {
    gatetest::Report report;
    try {
        report = gatetest::run_gate_test(kind, inputs, trials, seed, horizon);
    } catch (const std::invalid_argument& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }
    std::cout << "gate-test kind=" << report.kind;
    if (gatetest::arity_minimum(kind) >= 0) std::cout << " inputs=" << report.n_inputs;
    std::cout << " trials=" << report.trials << " seed=" << report.seed
              << " horizon=" << report.horizon << "\n";
    for (const auto& f : report.failures) std::cout << "  " << f << "\n";
    std::cout << "mismatches: " << report.mismatches << "\n";
    return report.mismatches == 0 ? 0 : 1;
}

int cmd_check(const std::string& file, bool dump) {
    std::string text;
    if (!read_file(file, text)) {
        std::cerr << "cannot read '" << file << "'\n";
        return 2;
    }
    netlist::ParseResult parsed = netlist::parse(text);
    if (print_diagnostics(parsed.diagnostics) > 0) return 1;
    netlist::Elaboration elab = netlist::elaborate(parsed.ast);
    if (print_diagnostics(elab.diagnostics) > 0) return 1;

    for (const auto& h : elab.handles) {
        blocks::ResourceReport r = blocks::resource_report(h);
        std::cout << blocks::kind_name(h.kind) << " " << h.name << ": " << r.neurons
                  << " neurons, " << r.connections << " connections, latency "
                  << latency_string(h) << "\n";
        if (h.kind == blocks::BlockKind::Flank) {
            std::cout << "  note: " << r.neurons - 2
                      << " neurons excluding the shared constant spike source (the resource"
                         " table lists 5)\n";
        }
    }
    auto issues = elab.circuit.validate();
    for (const auto& issue : issues) {
        std::cerr << issue.where << ": " << issue.message << "\n";
    }
    if (dump) std::cout << elab.circuit.dump_json() << "\n";
    return issues.empty() ? 0 : 1;
}

int cmd_calibrate() {
    double unit = calibrate_unit_current(default_lif_params());
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9g", unit);
    std::cout << "unit_current: " << buf << " nA\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"spike-based logic gate simulator"};
    app.require_subcommand(1);

    std::string file, backend = "abstract", format = "ascii", out_path, experiment, kind;
    int until = 0, inputs = 2, trials = 100, horizon = 200;
    bool membrane = false, dump = false;
    std::uint32_t seed = 12345;
    if (const char* env = std::getenv("SPIKEGATE_SEED")) {
        seed = static_cast<std::uint32_t>(std::strtoul(env, nullptr, 10));
    }

    CLI::App* run_cmd = app.add_subcommand("run", "simulate a netlist and print its trace");
    run_cmd->add_option("file", file, "netlist (.snl) file")->required();
    run_cmd->add_option("--until", until, "simulate this many ticks (overrides run statement)")
        ->check(CLI::Range(1, 1000000000));
    run_cmd->add_option("--backend", backend, "lif or abstract")
        ->check(CLI::IsMember({"lif", "abstract"}));
    run_cmd->add_option("--format", format, "ascii, csv or json")
        ->check(CLI::IsMember({"ascii", "csv", "json"}));
    run_cmd->add_option("--out", out_path, "write the trace to this path");
    run_cmd->add_flag("--membrane", membrane, "record membrane potentials of probed neurons");

    CLI::App* repro_cmd =
        app.add_subcommand("repro", "rebuild an experiment, verify it and print its trace");
    repro_cmd->add_option("experiment", experiment, "and4, xor4, switch, flank, css, latch or oscillator")
        ->required()
        ->check(CLI::IsMember(repro::experiment_names()));

    CLI::App* gate_cmd =
        app.add_subcommand("gate-test", "random-stimulus equivalence against the oracle");
    gate_cmd->add_option("kind", kind, "block kind")->required();
    gate_cmd->add_option("--inputs", inputs, "input count for or/and/xor kinds");
    gate_cmd->add_option("--trials", trials, "number of stimulus sets")
        ->check(CLI::Range(1, 1000000));
    gate_cmd->add_option("--seed", seed, "random seed (default from SPIKEGATE_SEED)");
    gate_cmd->add_option("--horizon", horizon, "ticks per trial")
        ->check(CLI::Range(2, 1000000));

    CLI::App* check_cmd =
        app.add_subcommand("check", "parse and validate a netlist, print block resources");
    check_cmd->add_option("file", file, "netlist (.snl) file")->required();
    check_cmd->add_flag("--dump", dump, "print the canonical circuit JSON");

    CLI::App* cal_cmd =
        app.add_subcommand("calibrate", "print the calibrated unit current (nA)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (run_cmd->parsed()) return cmd_run(file, until, backend, format, out_path, membrane);
        if (repro_cmd->parsed()) return cmd_repro(experiment);
        if (gate_cmd->parsed()) return cmd_gate_test(kind, inputs, trials, seed, horizon);
        if (check_cmd->parsed()) return cmd_check(file, dump);
        if (cal_cmd->parsed()) return cmd_calibrate();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
