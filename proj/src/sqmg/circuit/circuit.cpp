// Copyright 2026 The SQMG Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "sqmg/circuit/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sqmg/common/error.hpp"

namespace sqmg {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

ClassicalPredicate ClassicalPredicate::slot_equals(ClassicalSlot slot, std::uint8_t bit) {
    ClassicalPredicate p;
    p.form = Form::kSlotEquals;
    p.slots = {slot};
    p.bit = bit ? 1 : 0;
    return p;
}

ClassicalPredicate ClassicalPredicate::non_zero(std::vector<ClassicalSlot> slots) {
    ClassicalPredicate p;
    p.form = Form::kNonZero;
    p.slots = std::move(slots);
    return p;
}

ClassicalPredicate ClassicalPredicate::both(ClassicalPredicate lhs, ClassicalPredicate rhs) {
    ClassicalPredicate p;
    p.form = Form::kAnd;
    p.operands.push_back(std::move(lhs));
    p.operands.push_back(std::move(rhs));
    return p;
}

bool ClassicalPredicate::evaluate(std::span<const std::uint8_t> bits) const {
    switch (form) {
        case Form::kSlotEquals:
            return bits[slots.front()] == bit;
        case Form::kNonZero:
            return std::any_of(slots.begin(), slots.end(), [&](ClassicalSlot s) { return bits[s] != 0; });
        case Form::kAnd:
            return std::all_of(operands.begin(), operands.end(),
                               [&](const ClassicalPredicate& p) { return p.evaluate(bits); });
    }
    return false;
}

void ClassicalPredicate::collect_slots(std::vector<ClassicalSlot>& out) const {
    for (ClassicalSlot s : slots) {
        if (std::find(out.begin(), out.end(), s) == out.end()) {
            out.push_back(s);
        }
    }
    for (const auto& op : operands) {
        op.collect_slots(out);
    }
}

bool ConditionedGroup::operator==(const ConditionedGroup& other) const {
    return condition == other.condition && body == other.body;
}

RealMatrix2 ry_matrix(double theta) {
    require(std::isfinite(theta), ErrorCode::kInvalidArgument, "ry_matrix: non-finite angle");
    const double c = std::cos(theta / 2);
    const double s = std::sin(theta / 2);
    return {c, -s, s, c};
}

// ---------------------------------------------------------------------------
// Validation

namespace {

class Validator {
   public:
    explicit Validator(const Circuit& c) : circuit_(c), written_(c.n_classical_slots(), false), used_(c.n_params(), false) {}

    ValidationReport run() {
        walk(circuit_.gates(), "");
        for (std::uint32_t p = 0; p < circuit_.n_params(); ++p) {
            if (!used_[p]) {
                report_.violations.push_back("param slot unused: " + std::to_string(p));
            }
        }
        return std::move(report_);
    }

   private:
    void check_qubit(Qubit q, const std::string& where) {
        if (q >= circuit_.n_qubits()) {
            report_.violations.push_back("qubit index out of range: " + std::to_string(q) + where);
        }
    }
    void check_param(ParamSlot p, const std::string& where) {
        if (p >= circuit_.n_params()) {
            report_.violations.push_back("param slot out of range: " + std::to_string(p) + where);
        } else {
            used_[p] = true;
        }
    }
    void check_distinct(Qubit a, Qubit b, const std::string& where) {
        if (a == b) {
            report_.violations.push_back("control equals target: " + std::to_string(a) + where);
        }
    }

    void walk(const std::vector<Gate>& gates, const std::string& scope) {
        for (std::size_t i = 0; i < gates.size(); ++i) {
            const std::string where = " (gate " + scope + std::to_string(i) + ")";
            std::visit(Overloaded{
                           [&](const RyGate& g) {
                               check_qubit(g.target, where);
                               check_param(g.param, where);
                           },
                           [&](const ControlledRyGate& g) {
                               check_qubit(g.control, where);
                               check_qubit(g.target, where);
                               check_distinct(g.control, g.target, where);
                               check_param(g.param, where);
                           },
                           [&](const CnotGate& g) {
                               check_qubit(g.control, where);
                               check_qubit(g.target, where);
                               check_distinct(g.control, g.target, where);
                           },
                           [&](const PauliXGate& g) { check_qubit(g.target, where); },
                           [&](const MeasureGate& g) {
                               check_qubit(g.target, where);
                               if (g.slot >= circuit_.n_classical_slots()) {
                                   report_.violations.push_back("classical slot out of range: " +
                                                                std::to_string(g.slot) + where);
                               } else {
                                   written_[g.slot] = true;
                               }
                           },
                           [&](const ResetGate& g) { check_qubit(g.target, where); },
                           [&](const PresenceRyGate& g) {
                               check_qubit(g.target, where);
                               check_param(g.param, where);
                               for (const auto& reg : g.registers) {
                                   if (reg.empty()) {
                                       report_.violations.push_back("empty presence register" + where);
                                   }
                                   for (Qubit q : reg) {
                                       check_qubit(q, where);
                                       check_distinct(q, g.target, where);
                                   }
                               }
                           },
                           [&](const ConditionedGroup& g) {
                               std::vector<ClassicalSlot> read;
                               g.condition.collect_slots(read);
                               for (ClassicalSlot s : read) {
                                   if (s >= circuit_.n_classical_slots()) {
                                       report_.violations.push_back("classical slot out of range: " +
                                                                    std::to_string(s) + where);
                                   } else if (!written_[s]) {
                                       report_.violations.push_back("unwritten classical slot: " +
                                                                    std::to_string(s) + where);
                                   }
                               }
                               check_group_controls(g, where);
                               walk(g.body, scope + std::to_string(i) + ".");
                           },
                       },
                       gates[i].op);
        }
    }

    void check_group_controls(const ConditionedGroup& group, const std::string& where) {
        std::vector<Qubit> controls;
        std::vector<Qubit> measured;
        for (const Gate& g : group.body) {
            if (const auto* cry = std::get_if<ControlledRyGate>(&g.op)) {
                controls.push_back(cry->control);
            } else if (const auto* cx = std::get_if<CnotGate>(&g.op)) {
                controls.push_back(cx->control);
            } else if (const auto* pry = std::get_if<PresenceRyGate>(&g.op)) {
                for (const auto& reg : pry->registers) {
                    controls.insert(controls.end(), reg.begin(), reg.end());
                }
            } else if (const auto* m = std::get_if<MeasureGate>(&g.op)) {
                measured.push_back(m->target);
            }
        }
        for (Qubit q : measured) {
            if (std::find(controls.begin(), controls.end(), q) != controls.end()) {
                report_.violations.push_back("measure on control qubit inside group: " + std::to_string(q) + where);
            }
        }
    }

    const Circuit& circuit_;
    std::vector<bool> written_;
    std::vector<bool> used_;
    ValidationReport report_;
};

}  // namespace

ValidationReport validate_circuit(const Circuit& circuit) { return Validator(circuit).run(); }

// ---------------------------------------------------------------------------
// Stats

namespace {

struct DepthTracker {
    std::vector<std::uint64_t> qubit_level;
    std::vector<std::uint64_t> slot_level;
    CircuitStats stats;

    void visit(const std::vector<Gate>& gates, std::uint64_t floor) {
        for (const Gate& gate : gates) {
            std::visit(Overloaded{
                           [&](const RyGate& g) { place({g.target}, {}, floor, false); },
                           [&](const ControlledRyGate& g) { place({g.control, g.target}, {}, floor, true); },
                           [&](const CnotGate& g) { place({g.control, g.target}, {}, floor, true); },
                           [&](const PauliXGate& g) { place({g.target}, {}, floor, false); },
                           [&](const MeasureGate& g) {
                               ++stats.measure_count;
                               place({g.target}, {g.slot}, floor, false);
                           },
                           [&](const ResetGate& g) { place({g.target}, {}, floor, false); },
                           [&](const PresenceRyGate& g) {
                               std::vector<Qubit> qs{g.target};
                               for (const auto& reg : g.registers) {
                                   qs.insert(qs.end(), reg.begin(), reg.end());
                               }
                               place(qs, {}, floor, true);
                           },
                           [&](const ConditionedGroup& g) {
                               std::vector<ClassicalSlot> read;
                               g.condition.collect_slots(read);
                               std::uint64_t inner = floor;
                               for (ClassicalSlot s : read) {
                                   inner = std::max(inner, slot_level[s]);
                               }
                               visit(g.body, inner);
                           },
                       },
                       gate.op);
        }
    }

    void place(const std::vector<Qubit>& qubits, const std::vector<ClassicalSlot>& slots, std::uint64_t floor,
               bool multi) {
        ++stats.gate_count;
        if (multi) {
            ++stats.two_qubit_gate_count;
        }
        std::uint64_t level = floor;
        for (Qubit q : qubits) {
            level = std::max(level, qubit_level[q]);
        }
        for (ClassicalSlot s : slots) {
            level = std::max(level, slot_level[s]);
        }
        ++level;
        for (Qubit q : qubits) {
            qubit_level[q] = level;
        }
        for (ClassicalSlot s : slots) {
            slot_level[s] = level;
        }
        stats.depth = std::max(stats.depth, level);
    }
};

}  // namespace

CircuitStats circuit_stats(const Circuit& circuit) {
    DepthTracker t{std::vector<std::uint64_t>(circuit.n_qubits(), 0),
                   std::vector<std::uint64_t>(circuit.n_classical_slots(), 0), {}};
    t.visit(circuit.gates(), 0);
    return t.stats;
}

// ---------------------------------------------------------------------------
// Text form

namespace {

void write_predicate(std::ostream& out, const ClassicalPredicate& p) {
    switch (p.form) {
        case ClassicalPredicate::Form::kSlotEquals:
            out << 'c' << p.slots.front() << '=' << int(p.bit);
            break;
        case ClassicalPredicate::Form::kNonZero:
            out << "nz(";
            for (std::size_t i = 0; i < p.slots.size(); ++i) {
                out << (i ? " c" : "c") << p.slots[i];
            }
            out << ')';
            break;
        case ClassicalPredicate::Form::kAnd:
            out << '(';
            write_predicate(out, p.operands[0]);
            out << " & ";
            write_predicate(out, p.operands[1]);
            out << ')';
            break;
    }
}

void write_gates(std::ostream& out, const std::vector<Gate>& gates, int indent) {
    const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    for (const Gate& gate : gates) {
        out << pad;
        std::visit(Overloaded{
                       [&](const RyGate& g) { out << "ry " << g.target << " p" << g.param << '\n'; },
                       [&](const ControlledRyGate& g) {
                           out << "cry " << g.control << ' ' << g.target << " p" << g.param << '\n';
                       },
                       [&](const CnotGate& g) { out << "cx " << g.control << ' ' << g.target << '\n'; },
                       [&](const PauliXGate& g) { out << "x " << g.target << '\n'; },
                       [&](const MeasureGate& g) { out << "measure " << g.target << " c" << g.slot << '\n'; },
                       [&](const ResetGate& g) { out << "reset " << g.target << '\n'; },
                       [&](const PresenceRyGate& g) {
                           out << "pry " << g.target << " p" << g.param;
                           for (const auto& reg : g.registers) {
                               out << " [";
                               for (std::size_t i = 0; i < reg.size(); ++i) {
                                   out << (i ? " " : "") << reg[i];
                               }
                               out << ']';
                           }
                           out << '\n';
                       },
                       [&](const ConditionedGroup& g) {
                           out << "if ";
                           write_predicate(out, g.condition);
                           out << " {\n";
                           write_gates(out, g.body, indent + 1);
                           out << pad << "}\n";
                       },
                   },
                   gate.op);
    }
}

/// Character-level reader over the whole text; the grammar is small enough
/// that a tokenizer would add nothing.
class TextReader {
   public:
    explicit TextReader(const std::string& text) : text_(text) {}

    Circuit parse() {
        expect_word("SQMG-CIRCUIT");
        const auto version = read_uint();
        if (version != 1) {
            fail(ErrorCode::kFormat, "circuit text: unsupported version " + std::to_string(version));
        }
        expect_word("qubits");
        const auto nq = static_cast<std::uint32_t>(read_uint());
        expect_word("params");
        const auto np = static_cast<std::uint32_t>(read_uint());
        expect_word("cslots");
        const auto nc = static_cast<std::uint32_t>(read_uint());
        Circuit c(nq, np, nc);
        for (Gate& g : read_block(false)) {
            c.append(std::move(g));
        }
        return c;
    }

   private:
    std::vector<Gate> read_block(bool nested) {
        std::vector<Gate> gates;
        while (true) {
            skip_space();
            if (at_end()) {
                if (nested) {
                    error("unterminated group");
                }
                return gates;
            }
            if (peek() == '}') {
                if (!nested) {
                    error("unexpected '}'");
                }
                ++pos_;
                return gates;
            }
            const std::string op = read_word();
            if (op == "ry") {
                const auto q = read_u32();
                gates.emplace_back(RyGate{q, read_prefixed('p')});
            } else if (op == "cry") {
                const auto c = read_u32();
                const auto t = read_u32();
                gates.emplace_back(ControlledRyGate{c, t, read_prefixed('p')});
            } else if (op == "cx") {
                const auto c = read_u32();
                gates.emplace_back(CnotGate{c, read_u32()});
            } else if (op == "x") {
                gates.emplace_back(PauliXGate{read_u32()});
            } else if (op == "measure") {
                const auto q = read_u32();
                gates.emplace_back(MeasureGate{q, read_prefixed('c')});
            } else if (op == "reset") {
                gates.emplace_back(ResetGate{read_u32()});
            } else if (op == "pry") {
                PresenceRyGate g{{}, read_u32(), 0};
                g.param = read_prefixed('p');
                skip_inline_space();
                while (!at_end() && peek() == '[') {
                    ++pos_;
                    std::vector<Qubit> reg;
                    skip_space();
                    while (peek() != ']') {
                        reg.push_back(read_u32());
                        skip_space();
                    }
                    ++pos_;
                    g.registers.push_back(std::move(reg));
                    skip_inline_space();
                }
                gates.emplace_back(std::move(g));
            } else if (op == "if") {
                ConditionedGroup g;
                g.condition = read_predicate();
                skip_space();
                expect_char('{');
                g.body = read_block(true);
                gates.emplace_back(std::move(g));
            } else {
                error("unknown opcode '" + op + "'");
            }
        }
    }

    ClassicalPredicate read_predicate() {
        skip_space();
        if (peek() == '(') {
            ++pos_;
            ClassicalPredicate lhs = read_predicate();
            skip_space();
            expect_char('&');
            ClassicalPredicate rhs = read_predicate();
            skip_space();
            expect_char(')');
            return ClassicalPredicate::both(std::move(lhs), std::move(rhs));
        }
        if (text_.compare(pos_, 3, "nz(") == 0) {
            pos_ += 3;
            std::vector<ClassicalSlot> slots;
            skip_space();
            while (peek() != ')') {
                slots.push_back(read_prefixed('c'));
                skip_space();
            }
            ++pos_;
            return ClassicalPredicate::non_zero(std::move(slots));
        }
        const auto slot = read_prefixed('c');
        expect_char('=');
        const auto bit = read_uint();
        if (bit > 1) {
            error("predicate bit must be 0 or 1");
        }
        return ClassicalPredicate::slot_equals(slot, static_cast<std::uint8_t>(bit));
    }

    bool at_end() const { return pos_ >= text_.size(); }
    char peek() const {
        if (at_end()) {
            fail(ErrorCode::kFormat, "circuit text: unexpected end of input");
        }
        return text_[pos_];
    }
    void skip_space() {
        while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
    }
    void skip_inline_space() {
        while (!at_end() && (text_[pos_] == ' ' || text_[pos_] == '\t')) {
            ++pos_;
        }
    }
    std::string read_word() {
        skip_space();
        const std::size_t start = pos_;
        while (!at_end() && !std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
        return text_.substr(start, pos_ - start);
    }
    void expect_word(const std::string& w) {
        if (read_word() != w) {
            error("expected '" + w + "'");
        }
    }
    void expect_char(char c) {
        if (peek() != c) {
            error(std::string("expected '") + c + "'");
        }
        ++pos_;
    }
    std::uint64_t read_uint() {
        skip_space();
        const std::size_t start = pos_;
        std::uint64_t v = 0;
        while (!at_end() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            v = v * 10 + static_cast<std::uint64_t>(text_[pos_] - '0');
            ++pos_;
        }
        if (pos_ == start) {
            error("expected an unsigned integer");
        }
        return v;
    }
    std::uint32_t read_u32() {
        const auto v = read_uint();
        if (v > UINT32_MAX) {
            error("index too large");
        }
        return static_cast<std::uint32_t>(v);
    }
    std::uint32_t read_prefixed(char prefix) {
        skip_space();
        expect_char(prefix);
        return read_u32();
    }
    [[noreturn]] void error(const std::string& what) const {
        const auto line = 1 + std::count(text_.begin(), text_.begin() + static_cast<std::ptrdiff_t>(std::min(pos_, text_.size())), '\n');
        fail(ErrorCode::kFormat, "circuit text line " + std::to_string(line) + ": " + what);
    }

    const std::string& text_;
    std::size_t pos_ = 0;
};

}  // namespace

std::string circuit_to_text(const Circuit& circuit) {
    std::ostringstream out;
    out << "SQMG-CIRCUIT 1\n";
    out << "qubits " << circuit.n_qubits() << " params " << circuit.n_params() << " cslots "
        << circuit.n_classical_slots() << '\n';
    write_gates(out, circuit.gates(), 0);
    return out.str();
}

Circuit circuit_from_text(const std::string& text) { return TextReader(text).parse(); }

}  // namespace sqmg
