#pragma once

#include "qenergy/landauer.hpp"
#include "qenergy/simon.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace qenergy::ledger {

using simon::SimonInstance;
using simon::word;

struct CostModel {
    double e_qubit = 1.0;     // gap of every qubit Hamiltonian diag(0, e_qubit)
    double e_ctrl = 1.0;      // control energy per qubit per unit depth
    double c_ctrl_env = 1.0;  // erasure control: c * (T / beta) * ln(1/epsilon) per qubit per depth
    double beta = 1.0;
    double eta = 0.1;
    double epsilon = 0.01;
    unsigned d_swap = 3;

    void validate() const {
        if (!(e_qubit > 0.0) || !std::isfinite(e_qubit)) throw ValidationError("e_qubit must be positive");
        if (!(e_ctrl >= 0.0) || !std::isfinite(e_ctrl)) throw ValidationError("e_ctrl must be nonnegative");
        if (!(c_ctrl_env >= 0.0) || !std::isfinite(c_ctrl_env))
            throw ValidationError("c_ctrl_env must be nonnegative");
        if (d_swap == 0) throw ValidationError("d_swap must be positive");
        erasure().validate();
    }

    landauer::ErasureConfig erasure() const { return {beta, epsilon, eta, 2}; }
    std::size_t erasure_steps() const { return landauer::required_steps(erasure()); }
};

struct CircuitShape {
    unsigned n = 0;
    std::uint64_t w = 0;
    std::uint64_t m = 0;
    std::vector<std::uint64_t> depths;  // D_1 .. D_{M+1}
    std::uint64_t d_erase = 0;

    void validate() const {
        if (w < 2ull * n) throw ValidationError("width must be at least 2n");
        if (depths.size() != m + 1) throw ValidationError("need M+1 gate depths");
    }
    double gate_depth() const {
        return static_cast<double>(std::accumulate(depths.begin(), depths.end(), std::uint64_t{0}));
    }
    double total_depth(unsigned d_swap) const {
        return gate_depth() + static_cast<double>(2 * m + 1) * d_swap + static_cast<double>(d_erase);
    }
};

// W = 2nM qubits, M = n+12 queries, unit-depth layers between queries and an n^3
// post-processing layer.
inline CircuitShape simon_shape(unsigned n, const CostModel& cost) {
    if (n < 1) throw ValidationError("n must be positive");
    CircuitShape s;
    s.n = n;
    s.m = n + 12;
    s.w = 2ull * n * s.m;
    s.depths.assign(s.m + 1, 1);
    s.depths.back() = std::uint64_t{n} * n * n;
    s.d_erase = cost.erasure_steps() * cost.d_swap;
    return s;
}

struct BoundConstants {
    double c1 = 1.0;
    double c2 = 1.0;
    double c3 = 1.0;
    double p = 2.0;  // exponent of ln(1/(epsilon eta)) on the erasure term
    double q = 2.0;  // polylog exponent of the fault-tolerance overhead (placeholder)
};

namespace detail {
inline double log_term(const CostModel& cost) {
    const double l = std::log(1.0 / (cost.epsilon * cost.eta));
    if (!(l > 0.0)) throw ValidationError("epsilon * eta must be below 1");
    return l;
}
}  // namespace detail

inline double theorem2_upper(const CircuitShape& shape, const CostModel& cost, const BoundConstants& k = {}) {
    shape.validate();
    cost.validate();
    const double w = static_cast<double>(shape.w);
    const double s = shape.gate_depth() + k.c2 * static_cast<double>(shape.m);
    const double erase = (cost.e_qubit + k.c3 / (cost.beta * cost.eta)) * (w / cost.eta) *
                         std::pow(detail::log_term(cost), k.p);
    return k.c1 * cost.e_qubit * w * s + erase;
}

// Fault-tolerant version: width and depth both pick up the (ln WD)^q overhead.
inline double theorem3_upper(const CircuitShape& shape, const CostModel& cost, const BoundConstants& k = {}) {
    shape.validate();
    cost.validate();
    const double w = static_cast<double>(shape.w);
    const double s = shape.gate_depth() + k.c2 * static_cast<double>(shape.m);
    const double x = s + 1.0 / cost.eta;
    const double polylog = std::pow(std::max(1.0, std::log(w * shape.total_depth(cost.d_swap))), k.q);
    const double gates = k.c1 * cost.e_qubit * w * x * s;
    const double erase = (cost.e_qubit + k.c3 / (cost.beta * cost.eta)) * (w * x / cost.eta) *
                         std::pow(detail::log_term(cost), k.p);
    return (gates + erase) * polylog;
}

// Constants for which theorem2_upper dominates the ledger produced by run_framework under
// `cost`. c1 and c2 absorb gate and query control, c3 the per-qubit erasure budget.
inline BoundConstants dominating_constants(const CostModel& cost, double p = 2.0) {
    cost.validate();
    BoundConstants k;
    k.p = p;
    k.c1 = 1.0 + cost.e_ctrl / cost.e_qubit;
    k.c2 = 4.0 * cost.d_swap;
    const double t = static_cast<double>(cost.erasure_steps());
    const double d_erase = t * cost.d_swap;
    const double per_qubit = cost.epsilon * cost.e_qubit + 2.0 * cost.e_ctrl * cost.d_swap +
                             (cost.e_ctrl + cost.c_ctrl_env * (t / cost.beta) * std::log(1.0 / cost.epsilon)) *
                                 d_erase +
                             (std::numbers::ln2 + cost.eta + std::log((t + 1.0) / (t - 1.0))) / cost.beta;
    const double need = per_qubit * cost.eta / std::pow(detail::log_term(cost), p) - cost.e_qubit;
    k.c3 = std::max(1.0, need * cost.beta * cost.eta);
    return k;
}

// ln(2^n! / (2^n - m)!) as a log-sum.
inline double log_falling_factorial(unsigned n, std::uint64_t m) {
    const double size = std::exp2(n);
    if (static_cast<double>(m) > size) throw std::invalid_argument("m exceeds 2^n");
    double s = 0.0;
    for (std::uint64_t j = 0; j < m; ++j) s += std::log(size - static_cast<double>(j));
    return s;
}

struct Lemma2Result {
    std::uint64_t m = 0;
    double exact = 0.0;
    double floor = 0.0;
};

inline Lemma2Result lemma2_stirling(unsigned n, double delta) {
    if (!(delta > 0.0 && delta <= 1.0 / 6.0)) throw ValidationError("delta must lie in (0, 1/6]");
    if (n < 1 || n > 62) throw ValidationError("n out of range");
    Lemma2Result r;
    r.m = simon::m_lower(n, {delta, 1.0 / 3.0});
    if (static_cast<double>(r.m) > std::exp2(n)) throw ValidationError("M exceeds 2^n");
    r.exact = log_falling_factorial(n, r.m);
    r.floor = std::sqrt(2.0 * delta / (1.0 + delta)) * std::exp2(0.5 * n) * (n * std::numbers::ln2 - 1.0) - 1.0;
    if (r.exact < r.floor) throw std::logic_error("log-sum fell below the closed-form floor");
    return r;
}

inline double prop4_floor(unsigned n, std::uint64_t m) { return 0.5 * log_falling_factorial(n, m); }

// Entropy of the output sequence seen by m distinct queries to a uniformly random
// permutation, by enumerating every permutation. The distribution does not depend on which
// distinct inputs are queried, so the first m inputs stand in for the random strategy.
inline double prop4_bruteforce(unsigned n, std::uint64_t m) {
    if (n < 1 || n > 3) throw ValidationError("brute force limited to n <= 3");
    const std::size_t size = std::size_t{1} << n;
    if (m > size) throw ValidationError("m exceeds 2^n");
    std::vector<unsigned> perm(size);
    std::iota(perm.begin(), perm.end(), 0u);
    std::map<std::uint64_t, std::uint64_t> counts;
    std::uint64_t total = 0;
    do {
        std::uint64_t key = 0;
        for (std::uint64_t j = 0; j < m; ++j) key = key * size + perm[j];
        ++counts[key];
        ++total;
    } while (std::next_permutation(perm.begin(), perm.end()));
    double h = 0.0;
    for (const auto& [key, c] : counts) {
        const double p = static_cast<double>(c) / static_cast<double>(total);
        h -= p * std::log(p);
    }
    return h;
}

inline double corollary2_lower(unsigned n, double beta, double delta) {
    if (n < 1) throw ValidationError("n must be positive");
    if (!(beta > 0.0)) throw ValidationError("beta must be positive");
    if (!(delta > 0.0 && delta < 1.0 / 6.0)) throw ValidationError("delta must lie in (0, 1/6)");
    const double factor = (1.0 - 6.0 * delta) / (6.0 - 12.0 * delta);
    const double inner =
        std::sqrt(2.0 * delta / (1.0 + delta)) * std::exp2(0.5 * n) * (n * std::numbers::ln2 - 1.0) - 1.0;
    return (factor * inner - std::numbers::ln2) / beta;
}

// Closed form at the optimal delta = 2 - sqrt(15)/2.
inline double corollary2_lower(unsigned n, double beta) {
    if (n < 1) throw ValidationError("n must be positive");
    if (!(beta > 0.0)) throw ValidationError("beta must be positive");
    const double r15 = std::sqrt(15.0);
    const double factor = (3.0 * r15 - 11.0) / (6.0 * r15 - 18.0);
    const double inner = std::sqrt((8.0 - 2.0 * r15) / (6.0 - r15)) * std::exp2(0.5 * n) *
                             (n * std::numbers::ln2 - 1.0) -
                         1.0;
    return (factor * inner - std::numbers::ln2) / beta;
}

enum class KbMode { codata, paper };

inline double boltzmann(KbMode mode) { return mode == KbMode::paper ? 1e-23 : 1.380649e-23; }
inline std::string to_string(KbMode mode) { return mode == KbMode::paper ? "paper" : "codata"; }
inline KbMode parse_kb_mode(const std::string& s) {
    if (s == "paper") return KbMode::paper;
    if (s == "codata") return KbMode::codata;
    throw ValidationError("unknown k_B mode: " + s);
}

struct Table1Row {
    unsigned n;
    double temp_k;
    KbMode mode;
    double joules;
};

inline std::vector<Table1Row> table1(const std::vector<double>& temps_kelvin, const std::vector<unsigned>& ns,
                                     KbMode mode = KbMode::codata) {
    std::vector<Table1Row> rows;
    for (double t : temps_kelvin) {
        if (!(t > 0.0)) throw ValidationError("temperature must be positive");
        for (unsigned n : ns) rows.push_back({n, t, mode, corollary2_lower(n, 1.0 / (boltzmann(mode) * t))});
    }
    return rows;
}

// ---- framework runs ----

enum class Algorithm { trivial, quantum, classical };

inline std::string to_string(Algorithm a) {
    switch (a) {
        case Algorithm::trivial: return "trivial";
        case Algorithm::quantum: return "quantum";
        case Algorithm::classical: return "classical";
    }
    return "?";
}

struct AlgorithmSpec {
    Algorithm kind = Algorithm::quantum;
    std::size_t rounds = 0;  // quantum; 0 means n + 10
    std::size_t m = 0;       // classical; 0 means the capped query count for failure 1/3
};

struct EnergyLedger {
    CircuitShape shape;
    double e_qubit = 0.0, beta = 0.0, eta = 0.0, epsilon = 0.0;
    std::size_t erasure_steps = 0;

    std::vector<double> delta_e_gates;  // Delta E^(U_k), k = 1..M+1
    std::vector<double> delta_e_in;     // Delta E^(in,k), k = 1..M
    double delta_e_out = 0.0;
    double delta_e_erase = 0.0;

    std::vector<double> ctrl_gates;  // E_ctrl^(U_k)
    std::vector<double> ctrl_in;     // E_ctrl^(in,k)
    double ctrl_out = 0.0;
    double ctrl_erase = 0.0;

    double q_e = 0.0;        // erasure heat
    double q_e_prime = 0.0;  // dissipated control energy
    double erasure_delta_s = 0.0;
    double erasure_excess = 0.0;

    double ctrl_total() const { return q_e_prime; }
    double sum_gates() const { return std::accumulate(delta_e_gates.begin(), delta_e_gates.end(), 0.0); }
    double sum_in() const { return std::accumulate(delta_e_in.begin(), delta_e_in.end(), 0.0); }

    // Work of every gate class including erasure (W_gates).
    double w_gates() const {
        double w = 0.0;
        for (std::size_t k = 0; k < delta_e_gates.size(); ++k) w += delta_e_gates[k] + ctrl_gates[k];
        w += std::accumulate(ctrl_in.begin(), ctrl_in.end(), 0.0);
        w += ctrl_out;
        w += delta_e_erase + ctrl_erase + q_e;
        return w;
    }
    double total_w() const { return w_gates() + sum_in() - delta_e_out; }
    double conservation_residual() const { return sum_gates() + sum_in() - delta_e_out + delta_e_erase; }
};

struct RunOutcome {
    int a = 0;
    double p_a[2] = {1.0, 0.0};
    double s_c = 0.0;          // S(C) before erasure
    double s_c_given_a = 0.0;  // S(C|a)
    std::size_t m_used = 0;
};

inline double theorem4_lower(const RunOutcome& outcome, double beta) {
    if (!(beta > 0.0)) throw ValidationError("beta must be positive");
    if (outcome.s_c_given_a < -1e-12) throw ValidationError("conditional entropy must be nonnegative");
    return std::max(0.0, outcome.s_c_given_a) / beta;
}

// Populations and energy changes of the Fourier-twice blocks when the rounds run one
// after another, each on a fresh 2n-qubit register. Block qubit j < n is input bit j,
// qubit n + j is output bit j.
struct RoundLedger {
    std::vector<double> delta_e_gates;  // U_1 .. U_{rounds+1}, Hadamard layers only
    std::vector<double> delta_e_in;     // one per round
    std::vector<double> populations;    // P(qubit = 1) after the last layer, block by block
    double block_entropy = 0.0;         // Shannon entropy of the dephased block
};

inline RoundLedger quantum_round_ledger(const simon::FourierTwice& ft, const SimonInstance& inst,
                                        std::size_t rounds, double e_qubit) {
    const unsigned n = inst.n;
    const std::size_t size = std::size_t{1} << n;
    const auto& amp = ft.amplitudes();

    std::vector<double> final_pop(2 * n, 0.0);
    double block_h = 0.0;
    for (std::size_t x = 0; x < size; ++x)
        for (std::size_t z = 0; z < size; ++z) {
            const double p = std::norm(amp[x * size + z]);
            if (p <= 0.0) continue;
            block_h -= p * std::log(p);
            for (unsigned j = 0; j < n; ++j) {
                if ((x >> j) & 1u) final_pop[j] += p;
                if ((z >> j) & 1u) final_pop[n + j] += p;
            }
        }
    // after the first layer the input bits are uniform; the query fills the output bits
    std::vector<double> out_pop(n, 0.0);
    for (std::size_t x = 0; x < size; ++x)
        for (unsigned j = 0; j < n; ++j)
            if ((inst.table[x] >> j) & 1u) out_pop[j] += 1.0 / static_cast<double>(size);

    const double first = e_qubit * 0.5 * n;
    const double query = e_qubit * std::accumulate(out_pop.begin(), out_pop.end(), 0.0);
    double second = 0.0;
    for (unsigned j = 0; j < n; ++j) second += e_qubit * (final_pop[j] - 0.5);

    RoundLedger r;
    r.block_entropy = block_h;
    r.delta_e_in.assign(rounds, query);
    r.delta_e_gates.push_back(first);
    for (std::size_t k = 1; k < rounds; ++k) r.delta_e_gates.push_back(second + first);
    r.delta_e_gates.push_back(second);
    for (std::size_t k = 0; k < rounds; ++k) r.populations.insert(r.populations.end(), final_pop.begin(), final_pop.end());
    return r;
}

// Probability that the quantum solver answers 1, exact over the sampled strings. Tracks
// the distribution of the spanned subspace, whose canonical basis fixes the candidate.
inline double quantum_answer_probability(const simon::FourierTwice& ft, const SimonInstance& inst,
                                         std::size_t rounds) {
    const auto& py = ft.input_marginal();
    std::map<std::vector<word>, double> dist{{{}, 1.0}};
    for (std::size_t k = 0; k < rounds; ++k) {
        std::map<std::vector<word>, double> next;
        for (const auto& [basis, p] : dist) {
            for (std::size_t y = 0; y < py.size(); ++y) {
                if (py[y] == 0.0) continue;
                auto v = basis;
                v.push_back(static_cast<word>(y));
                next[gf2::rref(v, inst.n)] += p * py[y];
            }
        }
        dist = std::move(next);
    }
    double p1 = 0.0;
    for (const auto& [basis, p] : dist) {
        const auto cand = gf2::kernel_vector(basis, inst.n);
        if (cand && inst(0) == inst(*cand)) p1 += p;
    }
    return std::min(1.0, p1);
}

namespace detail {
inline double popcount_energy(word v, double e_qubit) { return e_qubit * std::popcount(v); }

inline void push_bits(std::vector<double>& pops, word x, word y, unsigned n) {
    for (unsigned j = 0; j < n; ++j) pops.push_back(static_cast<double>((x >> j) & 1u));
    for (unsigned j = 0; j < n; ++j) pops.push_back(static_cast<double>((y >> j) & 1u));
}

inline double entropy2(double p1) { return binary_entropy(std::clamp(p1, 0.0, 1.0)); }
}  // namespace detail

struct FrameworkRun {
    EnergyLedger ledger;
    RunOutcome outcome;
};

// Executes one run of `spec` on `inst` inside the thermodynamic framework: one answer qubit
// on top of the 2n-qubit query blocks, control charged per CostModel, and every computer
// qubit reset by a swap schedule designed for the maximally mixed qubit.
inline FrameworkRun run_framework(const SimonInstance& inst, const AlgorithmSpec& spec, const CostModel& cost,
                                  Rng& rng) {
    cost.validate();
    inst.validate();
    const unsigned n = inst.n;
    const double eq = cost.e_qubit;

    FrameworkRun run;
    EnergyLedger& L = run.ledger;
    RunOutcome& out = run.outcome;
    std::vector<double> pops;  // P(qubit = 1) just before the output swap, blocks then answer
    std::vector<std::uint64_t> depths;

    if (spec.kind == Algorithm::trivial) {
        pops.assign(2 * n, 0.0);
        depths = {0};
        L.delta_e_gates = {0.0};
        out.a = 0;
        out.m_used = 0;
    } else if (spec.kind == Algorithm::quantum) {
        if (n > 6) throw ValidationError("framework quantum runs limited to n <= 6");
        const std::size_t rounds = spec.rounds ? spec.rounds : simon::default_rounds(n);
        const simon::FourierTwice ft(inst);
        const auto res = simon::quantum_solve(inst, rounds, rng, &ft);
        const auto rl = quantum_round_ledger(ft, inst, rounds, eq);
        pops = rl.populations;
        L.delta_e_gates = rl.delta_e_gates;
        L.delta_e_in = rl.delta_e_in;
        depths.assign(rounds, 1);
        const std::uint64_t post = 1 + std::uint64_t{n} * n * n;  // last Hadamards, then solve for s
        if (res.candidate) {
            const word c = *res.candidate;
            depths.push_back(post);  // the first check input is 0, nothing to prepare
            L.delta_e_in.push_back(detail::popcount_energy(inst(0), eq));
            depths.push_back(1);
            L.delta_e_gates.push_back(detail::popcount_energy(c, eq));
            L.delta_e_in.push_back(detail::popcount_energy(inst(c), eq));
            detail::push_bits(pops, 0, inst(0), n);
            detail::push_bits(pops, c, inst(c), n);
            depths.push_back(n);  // compare the two outputs into the answer qubit
            L.delta_e_gates.push_back(eq * res.a);
        } else {
            depths.push_back(post);  // full rank: answer 0 without checking
        }
        out.a = res.a;
        out.m_used = res.m_used;
        const double p1 = quantum_answer_probability(ft, inst, rounds);
        out.p_a[1] = p1;
        out.p_a[0] = 1.0 - p1;
        out.s_c = static_cast<double>(rounds) * rl.block_entropy;
        out.s_c_given_a = std::max(0.0, out.s_c - detail::entropy2(p1));
    } else {
        const std::size_t size = inst.domain();
        const std::size_t m = spec.m ? spec.m : simon::prop3_queries_capped(n, {});
        if (m > size) throw ValidationError("m exceeds 2^n");
        const auto res = simon::classical_solve(inst, m, rng);
        for (const auto& q : res.log.queries()) {
            L.delta_e_gates.push_back(detail::popcount_energy(q.x, eq));
            L.delta_e_in.push_back(detail::popcount_energy(q.y, eq));
            detail::push_bits(pops, q.x, q.y, n);
        }
        depths.assign(m, 1);
        depths.push_back(std::uint64_t{m} * n);  // pairwise comparison sweep
        L.delta_e_gates.push_back(eq * res.a);
        out.a = res.a;
        out.m_used = m;
        double p1 = 0.0;
        if (inst.b == 1) {
            double none = 1.0;
            const double sz = static_cast<double>(size);
            for (std::size_t j = 0; j < m; ++j) none *= std::max(0.0, (sz - 2.0 * j) / (sz - j));
            p1 = 1.0 - none;
        }
        out.p_a[1] = p1;
        out.p_a[0] = 1.0 - p1;
        out.s_c = log_falling_factorial(n, m);
        out.s_c_given_a = std::max(0.0, out.s_c - detail::entropy2(p1));
    }

    pops.push_back(0.0);  // answer qubit, emptied by the output swap
    L.delta_e_out = eq * out.a;

    L.shape.n = n;
    L.shape.w = pops.size();
    L.shape.m = L.delta_e_in.size();
    L.shape.depths = depths;
    L.erasure_steps = cost.erasure_steps();
    L.shape.d_erase = L.erasure_steps * cost.d_swap;
    L.shape.validate();
    L.e_qubit = eq;
    L.beta = cost.beta;
    L.eta = cost.eta;
    L.epsilon = cost.epsilon;

    const double w = static_cast<double>(L.shape.w);
    for (auto d : depths) L.ctrl_gates.push_back(cost.e_ctrl * w * static_cast<double>(d));
    L.ctrl_in.assign(L.shape.m, cost.e_ctrl * (w + 2.0 * n) * 2.0 * cost.d_swap);
    L.ctrl_out = cost.e_ctrl * (w + 1.0) * cost.d_swap;
    const double t = static_cast<double>(L.erasure_steps);
    L.ctrl_erase = (cost.e_ctrl + cost.c_ctrl_env * (t / cost.beta) * std::log(1.0 / cost.epsilon)) * w *
                   static_cast<double>(L.shape.d_erase);

    std::vector<DensityOperator> marginals;
    marginals.reserve(pops.size());
    double before = 0.0;
    for (double p : pops) {
        before += eq * p;
        marginals.push_back(DensityOperator::from_diagonal({1.0 - p, p}));
    }
    const auto erased =
        landauer::erase_register_fixed(marginals, DensityOperator::maximally_mixed(2), cost.erasure());
    double after = 0.0;
    for (const auto& r : erased.per_qubit) after += eq * r.final_state.population(1);
    L.delta_e_erase = after - before;
    L.q_e = erased.heat;
    L.erasure_delta_s = erased.delta_s;
    L.erasure_excess = erased.excess;
    L.q_e_prime = std::accumulate(L.ctrl_gates.begin(), L.ctrl_gates.end(), 0.0) +
                  std::accumulate(L.ctrl_in.begin(), L.ctrl_in.end(), 0.0) + L.ctrl_out + L.ctrl_erase;
    return run;
}

}  // namespace qenergy::ledger
