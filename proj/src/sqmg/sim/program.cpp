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

#include "sqmg/sim/program.hpp"

namespace sqmg {

Program::Program(const Circuit& circuit) : n_qubits_(circuit.n_qubits()), n_slots_(circuit.n_classical_slots()) {
    emit(circuit.gates());
    prefix_end_ = static_cast<std::uint32_t>(code_.size());
    for (std::uint32_t i = 0; i < code_.size(); ++i) {
        if (code_[i].kind != Instruction::Kind::kUnitary) {
            prefix_end_ = i;
            break;
        }
    }
}

void Program::emit(const std::vector<Gate>& gates) {
    for (const Gate& g : gates) {
        Instruction ins;
        if (const auto* m = std::get_if<MeasureGate>(&g.op)) {
            ins.kind = Instruction::Kind::kMeasure;
            ins.qubit = m->target;
            ins.slot = m->slot;
            code_.push_back(ins);
        } else if (const auto* r = std::get_if<ResetGate>(&g.op)) {
            ins.kind = Instruction::Kind::kReset;
            ins.qubit = r->target;
            code_.push_back(ins);
        } else if (const auto* grp = std::get_if<ConditionedGroup>(&g.op)) {
            ins.kind = Instruction::Kind::kJumpUnless;
            ins.condition = &grp->condition;
            const auto at = code_.size();
            code_.push_back(ins);
            emit(grp->body);
            code_[at].jump_to = static_cast<std::uint32_t>(code_.size());
        } else {
            ins.kind = Instruction::Kind::kUnitary;
            ins.gate = &g;
            code_.push_back(ins);
        }
    }
}

}  // namespace sqmg
