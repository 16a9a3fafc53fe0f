// One quantum and one classical run on the same instance, with their energy ledgers.
#include "qenergy/qenergy.hpp"

#include <cstdio>

namespace {
void show(const char* label, const qenergy::ledger::FrameworkRun& run, double beta) {
    const auto& l = run.ledger;
    std::printf("%s\n", label);
    std::printf("  answer %d after %zu queries, W = %llu qubits\n", run.outcome.a, run.outcome.m_used,
                static_cast<unsigned long long>(l.shape.w));
    std::printf("  total work      %.3f\n", l.total_w());
    std::printf("  erasure heat    %.3f\n", l.q_e);
    std::printf("  control heat    %.3f\n", l.q_e_prime);
    std::printf("  residual        %.3e\n", l.conservation_residual());
    std::printf("  entropy floor   %.3f\n", qenergy::ledger::theorem4_lower(run.outcome, beta));
}
}  // namespace

int main() {
    using namespace qenergy;
    Rng rng(2024);
    const auto inst = simon::sample_instance(4, 1, rng);
    ledger::CostModel cost;
    cost.e_ctrl = 0.1;
    cost.c_ctrl_env = 0.0;  // leave out the erasure control so the other terms are visible

    Rng qrng(1), crng(2);
    show("quantum", ledger::run_framework(inst, {ledger::Algorithm::quantum, 0, 0}, cost, qrng), cost.beta);
    show("classical", ledger::run_framework(inst, {ledger::Algorithm::classical, 0, 0}, cost, crng), cost.beta);

    std::printf("\nclassical lower bound at 300 K (joules)\n");
    for (const auto& row : ledger::table1({300.0}, {50, 100, 150}))
        std::printf("  n = %3u  %.2e\n", row.n, row.joules);
}
