#pragma once

// Textual circuit description language (.snl).
//
//   source ID spikes=[int,...]
//   block KIND ID [inputs=N] [half_period=K] [first=T]
//   connect EP -> EP [delay=+D]
//   probe EP
//   run T
//
// EP is ID or ID.port; input ports are in0..in{n-1} plus set/reset on the SR
// latch, output ports are out plus rise/fall on the flank detector. `#`
// starts a comment running to the end of the line; statements are one per
// line and whitespace-insensitive within a line. A parse error skips to the
// next line, so independent errors yield independent diagnostics.

#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "spikegate/blocks.hpp"
#include "spikegate/circuit.hpp"

namespace spikegate::netlist {

struct Diagnostic {
    enum class Severity { Error, Warning };
    Severity severity = Severity::Error;
    int line = 0;
    int column = 0;
    std::string message;
    std::string lexeme;

    std::string to_string() const {
        std::ostringstream os;
        os << "line " << line << ":" << column << ": "
           << (severity == Severity::Error ? "error" : "warning") << ": " << message;
        if (!lexeme.empty()) os << " (near '" << lexeme << "')";
        return os.str();
    }
};

struct Endpoint {
    std::string id;
    std::string port;  // empty when unqualified
    bool operator==(const Endpoint&) const = default;

    std::string to_string() const { return port.empty() ? id : id + "." + port; }
};

struct SourceStmt {
    std::string name;
    std::vector<int> spikes;
    bool operator==(const SourceStmt&) const = default;
};

struct BlockStmt {
    std::string kind;
    std::string name;
    std::optional<int> inputs;
    std::optional<int> half_period;
    std::optional<int> first;
    bool operator==(const BlockStmt&) const = default;
};

struct ConnectStmt {
    Endpoint src;
    Endpoint dst;
    int extra_delay = 0;
    bool operator==(const ConnectStmt&) const = default;
};

struct ProbeStmt {
    Endpoint target;
    bool operator==(const ProbeStmt&) const = default;
};

struct RunStmt {
    int horizon = 0;
    bool operator==(const RunStmt&) const = default;
};

struct Stmt {
    int line = 0;  // not part of structural equality
    std::variant<SourceStmt, BlockStmt, ConnectStmt, ProbeStmt, RunStmt> node;
};

inline bool operator==(const Stmt& a, const Stmt& b) { return a.node == b.node; }

struct NetlistAst {
    std::vector<Stmt> statements;
    bool operator==(const NetlistAst& other) const { return statements == other.statements; }
};

struct ParseResult {
    NetlistAst ast;
    std::vector<Diagnostic> diagnostics;
    bool ok() const {
        for (const auto& d : diagnostics) {
            if (d.severity == Diagnostic::Severity::Error) return false;
        }
        return true;
    }
};

namespace detail {

struct Token {
    enum class Kind { Ident, Int, Punct, End };
    Kind kind = Kind::End;
    std::string text;
    int column = 0;
    long long value = 0;  // for Int
};

// Tokenize one logical line (comment already stripped).
inline bool lex_line(std::string_view text, int line_no, std::vector<Token>& out,
                     Diagnostic& error) {
    out.clear();
    size_t i = 0;
    while (i < text.size()) {
        char ch = text[i];
        if (ch == ' ' || ch == '\t' || ch == '\r') {
            ++i;
            continue;
        }
        int col = static_cast<int>(i) + 1;
        if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
            size_t j = i;
            while (j < text.size() &&
                   (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) {
                ++j;
            }
            out.push_back({Token::Kind::Ident, std::string(text.substr(i, j - i)), col, 0});
            i = j;
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(ch)) ||
            ((ch == '-' || ch == '+') && i + 1 < text.size() &&
             std::isdigit(static_cast<unsigned char>(text[i + 1])))) {
            size_t j = i + 1;
            while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
            std::string lit(text.substr(i, j - i));
            long long v = 0;
            try {
                v = std::stoll(lit);
            } catch (const std::exception&) {
                error = {Diagnostic::Severity::Error, line_no, col, "integer out of range", lit};
                return false;
            }
            if (v > 1'000'000'000LL || v < -1'000'000'000LL) {
                error = {Diagnostic::Severity::Error, line_no, col, "integer out of range", lit};
                return false;
            }
            out.push_back({Token::Kind::Int, lit, col, v});
            i = j;
            continue;
        }
        if (ch == '-' && i + 1 < text.size() && text[i + 1] == '>') {
            out.push_back({Token::Kind::Punct, "->", col, 0});
            i += 2;
            continue;
        }
        if (ch == '=' || ch == '[' || ch == ']' || ch == ',' || ch == '.' || ch == '+') {
            out.push_back({Token::Kind::Punct, std::string(1, ch), col, 0});
            ++i;
            continue;
        }
        error = {Diagnostic::Severity::Error, line_no, col, "unexpected character",
                 std::string(1, ch)};
        return false;
    }
    int end_col = static_cast<int>(text.size()) + 1;
    out.push_back({Token::Kind::End, "", end_col, 0});
    return true;
}

class LineParser {
public:
    LineParser(const std::vector<Token>& tokens, int line) : tokens_(tokens), line_(line) {}

    const Token& peek() const { return tokens_[pos_]; }
    const Token& advance() { return tokens_[pos_ == tokens_.size() - 1 ? pos_ : pos_++]; }
    bool at_end() const { return peek().kind == Token::Kind::End; }

    bool accept_punct(const std::string& p) {
        if (peek().kind == Token::Kind::Punct && peek().text == p) {
            advance();
            return true;
        }
        return false;
    }

    std::string expect_ident(const char* what) {
        if (peek().kind != Token::Kind::Ident) fail(std::string("expected ") + what);
        return advance().text;
    }

    int expect_int(const char* what) {
        if (peek().kind != Token::Kind::Int) fail(std::string("expected ") + what);
        return static_cast<int>(advance().value);
    }

    void expect_punct(const std::string& p) {
        if (!accept_punct(p)) fail("expected '" + p + "'");
    }

    void expect_end() {
        if (!at_end()) fail("unexpected trailing input");
    }

    Endpoint expect_endpoint() {
        Endpoint ep;
        ep.id = expect_ident("an endpoint name");
        if (accept_punct(".")) ep.port = expect_ident("a port name");
        return ep;
    }

    [[noreturn]] void fail(const std::string& message) const {
        throw Diagnostic{Diagnostic::Severity::Error, line_, peek().column, message,
                         peek().text};
    }

private:
    const std::vector<Token>& tokens_;
    int line_;
    size_t pos_ = 0;
};

inline Stmt parse_statement(LineParser& p, int line) {
    Stmt stmt;
    stmt.line = line;
    std::string head = p.expect_ident("a statement keyword");
    if (head == "source") {
        SourceStmt s;
        s.name = p.expect_ident("a source name");
        std::string key = p.expect_ident("'spikes'");
        if (key != "spikes") p.fail("expected 'spikes'");
        p.expect_punct("=");
        p.expect_punct("[");
        if (!p.accept_punct("]")) {
            s.spikes.push_back(p.expect_int("a spike tick"));
            while (p.accept_punct(",")) s.spikes.push_back(p.expect_int("a spike tick"));
            p.expect_punct("]");
        }
        p.expect_end();
        stmt.node = std::move(s);
    } else if (head == "block") {
        BlockStmt b;
        b.kind = p.expect_ident("a block kind");
        b.name = p.expect_ident("a block name");
        while (!p.at_end()) {
            std::string key = p.expect_ident("a parameter name");
            p.expect_punct("=");
            int value = p.expect_int("an integer parameter value");
            std::optional<int>* slot = nullptr;
            if (key == "inputs") slot = &b.inputs;
            else if (key == "half_period") slot = &b.half_period;
            else if (key == "first") slot = &b.first;
            else p.fail("unknown block parameter '" + key + "'");
            if (slot->has_value()) p.fail("duplicate parameter '" + key + "'");
            *slot = value;
        }
        stmt.node = std::move(b);
    } else if (head == "connect") {
        ConnectStmt c;
        c.src = p.expect_endpoint();
        p.expect_punct("->");
        c.dst = p.expect_endpoint();
        if (!p.at_end()) {
            std::string key = p.expect_ident("'delay'");
            if (key != "delay") p.fail("expected 'delay'");
            p.expect_punct("=");
            p.accept_punct("+");  // canonical form writes delay=+D
            c.extra_delay = p.expect_int("a delay value");
            p.expect_end();
        }
        stmt.node = std::move(c);
    } else if (head == "probe") {
        ProbeStmt pr;
        pr.target = p.expect_endpoint();
        p.expect_end();
        stmt.node = std::move(pr);
    } else if (head == "run") {
        RunStmt r;
        r.horizon = p.expect_int("a horizon");
        p.expect_end();
        stmt.node = std::move(r);
    } else {
        p.fail("unknown statement '" + head + "'");
    }
    return stmt;
}

}  // namespace detail

inline ParseResult parse(std::string_view text) {
    ParseResult result;
    int line_no = 0;
    size_t pos = 0;
    while (pos <= text.size()) {
        size_t eol = text.find('\n', pos);
        std::string_view line =
            text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
        ++line_no;
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;

        if (size_t hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        bool blank = true;
        for (char ch : line) {
            if (ch != ' ' && ch != '\t' && ch != '\r') blank = false;
        }
        if (blank) continue;

        std::vector<detail::Token> tokens;
        Diagnostic lex_error;
        if (!detail::lex_line(line, line_no, tokens, lex_error)) {
            result.diagnostics.push_back(lex_error);
            continue;
        }
        detail::LineParser p(tokens, line_no);
        try {
            result.ast.statements.push_back(detail::parse_statement(p, line_no));
        } catch (const Diagnostic& d) {
            result.diagnostics.push_back(d);
        }
    }
    return result;
}

// Canonical text; parse(format(ast)) is structurally equal to ast. Comments
// are not part of the AST, so formatting strips them.
inline std::string format(const NetlistAst& ast) {
    std::ostringstream os;
    for (const Stmt& stmt : ast.statements) {
        if (const auto* s = std::get_if<SourceStmt>(&stmt.node)) {
            os << "source " << s->name << " spikes=[";
            for (size_t i = 0; i < s->spikes.size(); ++i) {
                if (i) os << ",";
                os << s->spikes[i];
            }
            os << "]";
        } else if (const auto* b = std::get_if<BlockStmt>(&stmt.node)) {
            os << "block " << b->kind << " " << b->name;
            if (b->inputs) os << " inputs=" << *b->inputs;
            if (b->half_period) os << " half_period=" << *b->half_period;
            if (b->first) os << " first=" << *b->first;
        } else if (const auto* c = std::get_if<ConnectStmt>(&stmt.node)) {
            os << "connect " << c->src.to_string() << " -> " << c->dst.to_string();
            if (c->extra_delay != 0) os << " delay=+" << c->extra_delay;
        } else if (const auto* pr = std::get_if<ProbeStmt>(&stmt.node)) {
            os << "probe " << pr->target.to_string();
        } else if (const auto* r = std::get_if<RunStmt>(&stmt.node)) {
            os << "run " << r->horizon;
        }
        os << "\n";
    }
    return os.str();
}

struct Elaboration {
    CircuitGraph circuit;
    std::vector<blocks::BlockHandle> handles;  // creation order
    std::map<std::string, int> handle_index;
    std::vector<std::string> source_names;  // declaration order
    std::optional<Tick> horizon;
    std::vector<Diagnostic> diagnostics;

    bool ok() const {
        for (const auto& d : diagnostics) {
            if (d.severity == Diagnostic::Severity::Error) return false;
        }
        return true;
    }

    const blocks::BlockHandle* handle(const std::string& name) const {
        auto it = handle_index.find(name);
        return it == handle_index.end() ? nullptr : &handles[it->second];
    }
};

namespace detail {

class Elaborator {
public:
    explicit Elaborator(const NetlistAst& ast) : ast_(ast) {}

    Elaboration run() {
        for (const Stmt& stmt : ast_.statements) {
            line_ = stmt.line;
            std::visit([&](const auto& node) { handle_stmt(node); }, stmt.node);
        }
        return std::move(out_);
    }

private:
    void error(const std::string& message, const std::string& lexeme = "") {
        out_.diagnostics.push_back(
            {Diagnostic::Severity::Error, line_, 1, message, lexeme});
    }

    bool declare(const std::string& name) {
        if (declared_.count(name)) {
            error("duplicate name '" + name + "'");
            return false;
        }
        declared_.insert(name);
        return true;
    }

    void handle_stmt(const SourceStmt& s) {
        if (!declare(s.name)) return;
        try {
            out_.circuit.add_source(s.name, s.spikes);
            out_.source_names.push_back(s.name);
        } catch (const std::exception& e) {
            error(e.what(), s.name);
        }
    }

    // The first css declared (or implicitly created) is shared by every
    // not/and_fast/flank block that follows.
    const blocks::SharedCss& shared_css() {
        if (!shared_css_) {
            blocks::SharedCss css = blocks::build_css(out_.circuit, "_css", 1);
            add_handle(blocks::css_handle(css));
            shared_css_ = std::move(css);
        }
        return *shared_css_;
    }

    void add_handle(blocks::BlockHandle handle) {
        out_.handle_index[handle.name] = static_cast<int>(out_.handles.size());
        out_.handles.push_back(std::move(handle));
    }

    void handle_stmt(const BlockStmt& b) {
        if (!declare(b.name)) return;
        auto need_inputs = [&](int min) -> std::optional<int> {
            if (!b.inputs) {
                error("block kind '" + b.kind + "' requires inputs=N", b.name);
                return std::nullopt;
            }
            if (*b.inputs < min) {
                error("block kind '" + b.kind + "' needs at least " + std::to_string(min) +
                          " inputs",
                      b.name);
                return std::nullopt;
            }
            return b.inputs;
        };
        auto reject_param = [&](const std::optional<int>& p, const char* key) {
            if (p) error("block kind '" + b.kind + "' does not take " + key, b.name);
            return !p.has_value();
        };
        try {
            if (b.kind == "or") {
                if (!reject_param(b.half_period, "half_period") ||
                    !reject_param(b.first, "first"))
                    return;
                if (auto n = need_inputs(1)) {
                    add_handle(blocks::build_or(out_.circuit, b.name, *n));
                }
            } else if (b.kind == "and_classic") {
                if (!reject_param(b.half_period, "half_period") ||
                    !reject_param(b.first, "first"))
                    return;
                if (auto n = need_inputs(2)) {
                    add_handle(blocks::build_and_classic(out_.circuit, b.name, *n));
                }
            } else if (b.kind == "and_fast") {
                if (!reject_param(b.half_period, "half_period") ||
                    !reject_param(b.first, "first"))
                    return;
                if (auto n = need_inputs(2)) {
                    add_handle(blocks::build_and_fast(out_.circuit, b.name, *n, shared_css()));
                }
            } else if (b.kind == "xor") {
                if (!reject_param(b.half_period, "half_period") ||
                    !reject_param(b.first, "first"))
                    return;
                if (auto n = need_inputs(2)) {
                    add_handle(blocks::build_xor(out_.circuit, b.name, *n));
                }
            } else if (b.kind == "not") {
                if (!reject_param(b.inputs, "inputs") ||
                    !reject_param(b.half_period, "half_period") ||
                    !reject_param(b.first, "first"))
                    return;
                add_handle(blocks::build_not(out_.circuit, b.name, shared_css()));
            } else if (b.kind == "sr_latch") {
                if (!reject_param(b.inputs, "inputs") ||
                    !reject_param(b.half_period, "half_period") ||
                    !reject_param(b.first, "first"))
                    return;
                add_handle(blocks::build_sr_latch(out_.circuit, b.name));
            } else if (b.kind == "switch") {
                if (!reject_param(b.inputs, "inputs") ||
                    !reject_param(b.half_period, "half_period") ||
                    !reject_param(b.first, "first"))
                    return;
                add_handle(blocks::build_switch(out_.circuit, b.name));
            } else if (b.kind == "css") {
                if (!reject_param(b.inputs, "inputs") ||
                    !reject_param(b.half_period, "half_period"))
                    return;
                blocks::SharedCss css =
                    blocks::build_css(out_.circuit, b.name, b.first.value_or(1));
                add_handle(blocks::css_handle(css));
                if (!shared_css_) shared_css_ = std::move(css);
            } else if (b.kind == "oscillator") {
                if (!reject_param(b.inputs, "inputs")) return;
                if (!b.half_period) {
                    error("block kind 'oscillator' requires half_period=K", b.name);
                    return;
                }
                add_handle(blocks::build_sync_oscillator(out_.circuit, b.name, *b.half_period,
                                                         b.first.value_or(1)));
            } else if (b.kind == "flank") {
                if (!reject_param(b.inputs, "inputs") ||
                    !reject_param(b.half_period, "half_period") ||
                    !reject_param(b.first, "first"))
                    return;
                add_handle(blocks::build_flank_detector(out_.circuit, b.name, shared_css()));
            } else {
                error("unknown block kind '" + b.kind + "'", b.name);
            }
        } catch (const std::exception& e) {
            error(e.what(), b.name);
        }
    }

    void handle_stmt(const ConnectStmt& c) {
        if (c.extra_delay < 0) {
            error("connection delay must be >= 0", c.src.to_string());
            return;
        }
        const blocks::BlockHandle* dst = out_.handle(c.dst.id);
        if (!dst) {
            if (out_.circuit.find(c.dst.id)) {
                error("cannot connect into a source", c.dst.to_string());
            } else {
                error("unknown destination '" + c.dst.id + "'", c.dst.to_string());
            }
            return;
        }
        std::string terminal = c.dst.port;
        if (terminal.empty()) {
            if (dst->terminals.size() != 1) {
                error("destination block '" + dst->name + "' needs an explicit input port",
                      c.dst.to_string());
                return;
            }
            terminal = dst->terminals.front().name;
        }
        bool has_terminal = false;
        for (const auto& t : dst->terminals) has_terminal |= t.name == terminal;
        if (!has_terminal) {
            error("port out of range: '" + terminal + "' on block '" + dst->name + "' (" +
                      std::to_string(dst->terminals.size()) + " input terminals)",
                  c.dst.to_string());
            return;
        }
        try {
            if (const blocks::BlockHandle* src = out_.handle(c.src.id)) {
                blocks::connect(out_.circuit, *src, c.src.port.empty() ? "out" : c.src.port,
                                *dst, terminal, c.extra_delay);
            } else if (auto ep = out_.circuit.find(c.src.id);
                       ep && ep->kind == EndpointId::Kind::Source) {
                if (!c.src.port.empty() && c.src.port != "out") {
                    error("sources have no port '" + c.src.port + "'", c.src.to_string());
                    return;
                }
                blocks::connect(out_.circuit, *ep, *dst, terminal, c.extra_delay);
            } else {
                error("unknown signal source '" + c.src.id + "'", c.src.to_string());
            }
        } catch (const std::exception& e) {
            error(e.what(), c.src.to_string());
        }
    }

    void handle_stmt(const ProbeStmt& p) {
        if (const blocks::BlockHandle* h = out_.handle(p.target.id)) {
            try {
                for (int neuron :
                     blocks::output_port(*h, p.target.port.empty() ? "out" : p.target.port)) {
                    out_.circuit.add_probe(neuron);
                }
            } catch (const std::exception& e) {
                error(e.what(), p.target.to_string());
            }
            return;
        }
        if (out_.circuit.find(p.target.id)) {
            error("sources have no membrane to probe", p.target.to_string());
            return;
        }
        error("unknown probe target '" + p.target.id + "'", p.target.to_string());
    }

    void handle_stmt(const RunStmt& r) {
        if (out_.horizon) {
            error("duplicate run statement");
            return;
        }
        if (r.horizon < 1) {
            error("run horizon must be >= 1");
            return;
        }
        out_.horizon = r.horizon;
    }

    const NetlistAst& ast_;
    Elaboration out_;
    std::optional<blocks::SharedCss> shared_css_;
    std::set<std::string> declared_;
    int line_ = 0;
};

}  // namespace detail

inline Elaboration elaborate(const NetlistAst& ast) { return detail::Elaborator(ast).run(); }

// Union signals for every elaborated block, added after a run.
inline void attach_signals(Trace& trace, const Elaboration& elab) {
    for (const auto& h : elab.handles) {
        blocks::attach_block_signals(trace, elab.circuit, h);
    }
}

// Default signal order for rendering: sources as declared, then every neuron
// in creation order, then the block union signals.
inline std::vector<std::string> default_signal_order(const Elaboration& elab) {
    std::vector<std::string> order = elab.source_names;
    for (const auto& n : elab.circuit.neurons()) order.push_back(n.name);
    for (const auto& h : elab.handles) order.push_back(h.name);
    return order;
}

}  // namespace spikegate::netlist
