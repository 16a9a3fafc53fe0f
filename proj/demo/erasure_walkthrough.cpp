// Erase a random qubit and compare the heat with the Landauer limit.
#include "qenergy/qenergy.hpp"

#include <cstdio>

int main() {
    using namespace qenergy;
    landauer::ErasureConfig cfg{1.0, 0.01, 0.1, 2};
    Rng rng(7);
    const auto rho = random_mixed_state(2, rng);

    const auto steps = landauer::required_steps(cfg);
    const auto plan = landauer::build_plan(rho, cfg, steps);
    const auto rep = landauer::execute(plan, cfg);

    std::printf("steps            %zu\n", steps);
    std::printf("entropy drop     %.6f nats\n", rep.delta_s);
    std::printf("beta * heat      %.6f\n", cfg.beta * rep.heat);
    std::printf("excess           %.6f (budget %.3f)\n", rep.excess, cfg.eta);
    std::printf("final infidelity %.6f\n", rep.final_infidelity);
    std::printf("env energy       %.3f (bound %.3f)\n", rep.max_env_energy,
                landauer::prop2_energy_bound(cfg, steps));

    // a cheap schedule: few steps, loose budget
    const landauer::ErasureConfig loose{1.0, 0.5, 1.0, 2};
    const auto short_rep = landauer::execute(landauer::build_plan(rho, loose, 3), loose);
    std::printf("\nthree steps: excess %.4f, generic bound %.4f\n", short_rep.excess,
                landauer::generic_excess_bound(loose, 3));
}
