#pragma once

#include "qenergy/parallel.hpp"
#include "qenergy/quantum.hpp"

#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace qenergy::landauer {

struct ErasureConfig {
    double beta = 1.0;
    double epsilon = 0.01;
    double eta = 0.1;
    std::size_t dim = 2;

    void validate() const {
        if (!(beta > 0.0) || !std::isfinite(beta)) throw ValidationError("beta must be positive");
        if (!(epsilon > 0.0 && epsilon <= 0.5)) throw ValidationError("epsilon must lie in (0, 1/2]");
        if (!(eta > 0.0 && eta <= 1.0)) throw ValidationError("eta must lie in (0, 1]");
        if (dim < 2) throw ValidationError("dimension must be at least 2");
    }
};

inline std::size_t required_steps(const ErasureConfig& cfg) {
    cfg.validate();
    constexpr double e = std::numbers::e;
    const double dm1 = static_cast<double>(cfg.dim - 1);
    const double t = ((e + 1.0) / (e * cfg.eta)) * std::log((e + 1.0) * dm1 * dm1 / (cfg.epsilon * cfg.eta));
    return static_cast<std::size_t>(std::ceil(t));
}

// Excess guaranteed for an arbitrary step count T.
inline double generic_excess_bound(const ErasureConfig& cfg, std::size_t steps) {
    cfg.validate();
    const double dm1 = static_cast<double>(cfg.dim - 1);
    const double t = static_cast<double>(steps);
    return std::log(std::numbers::e * dm1 * dm1 * t / cfg.epsilon) / t;
}

inline double prop2_energy_bound(const ErasureConfig& cfg, std::size_t steps) {
    cfg.validate();
    if (steps < 2) throw std::invalid_argument("at least two steps required");
    const double t = static_cast<double>(steps);
    const double dm1 = static_cast<double>(cfg.dim - 1);
    return (t / cfg.beta) * (std::log(dm1 / cfg.epsilon) + 1.0) -
           (1.0 / cfg.beta) * (0.5 * std::log(2.0 * std::numbers::pi * t) + 1.0 / (12.0 * t + 1.0));
}

inline DensityOperator target_final_state(std::size_t dim, const ErasureConfig& cfg) {
    cfg.validate();
    if (dim != cfg.dim) throw std::invalid_argument("state dimension does not match config");
    std::vector<double> p(dim, cfg.epsilon / static_cast<double>(dim - 1));
    p[0] = 1.0 - cfg.epsilon;
    return DensityOperator::from_diagonal(p);
}

inline DensityOperator target_final_state(const DensityOperator& rho, const ErasureConfig& cfg) {
    return target_final_state(rho.dim(), cfg);
}

struct ErasurePlan {
    std::size_t steps = 0;
    double beta = 1.0;
    std::vector<DensityOperator> path_states;  // t = 0..T
    std::vector<Hamiltonian> env_hamiltonians; // t = 1..T, stored at index t-1
    std::vector<ComplexMatrix> path_logs;      // ln rho[u_t], t = 1..T, index t-1
};

inline ErasurePlan build_plan(const DensityOperator& rho, const ErasureConfig& cfg, std::size_t steps) {
    cfg.validate();
    if (steps < 2) throw std::invalid_argument("at least two steps required");
    if (rho.dim() != cfg.dim) throw std::invalid_argument("state dimension does not match config");
    const DensityOperator target = target_final_state(rho, cfg);
    const double t_total = static_cast<double>(steps);
    const double eig_floor = cfg.epsilon / (static_cast<double>(cfg.dim - 1) * t_total);

    ErasurePlan plan;
    plan.steps = steps;
    plan.beta = cfg.beta;
    plan.path_states.reserve(steps + 1);
    plan.path_states.push_back(rho);
    const ComplexMatrix diff = target.matrix() - rho.matrix();
    for (std::size_t t = 1; t <= steps; ++t) {
        const double u = static_cast<double>(t) / t_total;
        DensityOperator rt = t == steps ? target : DensityOperator(rho.matrix() + u * diff);
        // Mixing with the full-rank target keeps the smallest eigenvalue at least t*eig_floor.
        if (rt.min_eigenvalue() < 0.5 * static_cast<double>(t) * eig_floor)
            throw std::runtime_error("path state is singular below the log floor");
        ComplexMatrix lg = matrix_logarithm(rt, 0.5 * eig_floor);
        plan.env_hamiltonians.emplace_back(ComplexMatrix(-lg / cfg.beta));
        plan.path_logs.push_back(std::move(lg));
        plan.path_states.push_back(std::move(rt));
    }
    return plan;
}

struct ErasureReport {
    std::size_t steps = 0;
    double heat = 0.0;        // Q_E
    double delta_s = 0.0;     // S(input) - S(final), nats
    double excess = 0.0;      // beta*Q_E - delta_s
    double final_infidelity = 0.0;
    double max_env_energy = 0.0;  // sum_t ||H_E^(t)||
    std::vector<double> step_terms;  // tr[(rho_t - rho_{t-1}) ln rho_t], t = 1..T
    DensityOperator final_state = DensityOperator::maximally_mixed(2);
};

namespace detail {
inline ErasureReport run(const ErasurePlan& plan, const DensityOperator& input) {
    if (plan.steps == 0 || plan.path_states.size() != plan.steps + 1)
        throw std::invalid_argument("malformed plan");
    if (input.dim() != plan.path_states[0].dim()) throw std::invalid_argument("input dimension mismatch");
    ErasureReport r;
    r.steps = plan.steps;
    double beta_q = 0.0;
    for (std::size_t t = 1; t <= plan.steps; ++t) {
        const ComplexMatrix& before = t == 1 ? input.matrix() : plan.path_states[t - 1].matrix();
        const double term = ((plan.path_states[t].matrix() - before) * plan.path_logs[t - 1]).trace().real();
        r.step_terms.push_back(term);
        beta_q += term;
        r.max_env_energy += plan.env_hamiltonians[t - 1].norm();
    }
    r.final_state = plan.path_states.back();
    r.heat = beta_q / plan.beta;
    r.delta_s = von_neumann_entropy(input) - von_neumann_entropy(r.final_state);
    r.excess = beta_q - r.delta_s;
    r.final_infidelity = 1.0 - fidelity_to_pure(r.final_state, 0);
    return r;
}
}  // namespace detail

inline ErasureReport execute(const ErasurePlan& plan, const ErasureConfig& cfg) {
    cfg.validate();
    return detail::run(plan, plan.path_states.front());
}

// Runs a plan built for one input on a different actual input. The swap schedule and
// environment are fixed in advance, so only the first step sees the actual state.
inline ErasureReport execute_on(const ErasurePlan& plan, const DensityOperator& actual, const ErasureConfig& cfg) {
    cfg.validate();
    return detail::run(plan, actual);
}

// Direct simulation of the T swaps on system (x) environment for qubits. The environment
// starts in the Gibbs states of H_E^(t), computed from the Hamiltonians themselves.
struct SwapSimulation {
    double heat = 0.0;
    DensityOperator final_state = DensityOperator::maximally_mixed(2);
};

inline SwapSimulation simulate_swaps(const ErasurePlan& plan, const DensityOperator& input) {
    const std::size_t t_steps = plan.steps;
    if (input.dim() != 2 || plan.path_states[0].dim() != 2)
        throw std::invalid_argument("swap simulation supports qubits only");
    if (t_steps > 6) throw std::invalid_argument("swap simulation limited to T <= 6");

    std::vector<ComplexMatrix> gibbs;
    for (const auto& h : plan.env_hamiltonians) {
        auto sp = hermitian_spectrum(h.matrix());
        RealVector w = sp.values.unaryExpr([&](double e) { return std::exp(-plan.beta * e); });
        w /= w.sum();
        gibbs.push_back(sp.vectors * w.cast<cplx>().asDiagonal() * sp.vectors.adjoint());
    }
    ComplexMatrix joint = input.matrix();
    for (const auto& g : gibbs) joint = kron(joint, g);

    const std::size_t n = t_steps + 1;
    const std::size_t dim = std::size_t{1} << n;
    // qubit 0 (system) is the most significant bit
    auto swap_perm = [&](std::size_t e) {
        std::vector<std::size_t> p(dim);
        const std::size_t bs = n - 1, be = n - 1 - e;
        for (std::size_t i = 0; i < dim; ++i) {
            const std::size_t a = (i >> bs) & 1u, b = (i >> be) & 1u;
            std::size_t j = i & ~((std::size_t{1} << bs) | (std::size_t{1} << be));
            j |= (b << bs) | (a << be);
            p[i] = j;
        }
        return p;
    };
    for (std::size_t t = 1; t <= t_steps; ++t) {
        const auto p = swap_perm(t);
        ComplexMatrix next(dim, dim);
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = 0; j < dim; ++j) next(p[i], p[j]) = joint(i, j);
        joint = std::move(next);
    }
    const std::vector<std::size_t> dims(n, 2);
    SwapSimulation out;
    for (std::size_t t = 1; t <= t_steps; ++t) {
        const ComplexMatrix env_after = partial_trace_matrix(joint, dims, {t});
        out.heat += (plan.env_hamiltonians[t - 1].matrix() * (env_after - gibbs[t - 1])).trace().real();
    }
    out.final_state = DensityOperator(partial_trace_matrix(joint, dims, {0}));
    return out;
}

struct RegisterReport {
    std::vector<ErasureReport> per_qubit;
    double heat = 0.0;
    double delta_s = 0.0;
    double excess = 0.0;
    double max_final_infidelity = 0.0;
    double env_energy = 0.0;
};

inline RegisterReport aggregate(std::vector<ErasureReport> reports) {
    RegisterReport out;
    for (const auto& r : reports) {
        out.heat += r.heat;
        out.delta_s += r.delta_s;
        out.excess += r.excess;
        out.max_final_infidelity = std::max(out.max_final_infidelity, r.final_infidelity);
        out.env_energy += r.max_env_energy;
    }
    out.per_qubit = std::move(reports);
    return out;
}

// Erases each qubit separately with a plan built for its own state.
inline RegisterReport erase_register(const std::vector<DensityOperator>& rhos, const ErasureConfig& cfg,
                                     std::size_t workers = 1) {
    cfg.validate();
    if (cfg.dim != 2) throw ValidationError("register erasure works on qubits");
    for (const auto& r : rhos)
        if (r.dim() != 2) throw ValidationError("register entry is not a qubit");
    const std::size_t steps = required_steps(cfg);
    return aggregate(parallel_map(
        rhos.size(), [&](std::size_t i) { return execute(build_plan(rhos[i], cfg, steps), cfg); }, workers));
}

// Erases each qubit with one shared plan built for `design`, as an eraser that does not
// see the register contents would.
inline RegisterReport erase_register_fixed(const std::vector<DensityOperator>& rhos, const DensityOperator& design,
                                           const ErasureConfig& cfg) {
    cfg.validate();
    if (cfg.dim != 2 || design.dim() != 2) throw ValidationError("register erasure works on qubits");
    const ErasurePlan plan = build_plan(design, cfg, required_steps(cfg));
    std::vector<ErasureReport> reports;
    reports.reserve(rhos.size());
    for (const auto& r : rhos) {
        if (r.dim() != 2) throw ValidationError("register entry is not a qubit");
        reports.push_back(execute_on(plan, r, cfg));
    }
    return aggregate(std::move(reports));
}

}  // namespace qenergy::landauer
