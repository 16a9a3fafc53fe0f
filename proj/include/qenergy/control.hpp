#pragma once

#include "qenergy/parallel.hpp"
#include "qenergy/quantum.hpp"
#include "qenergy/random.hpp"

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace qenergy::control {

// Qubit coupled to a truncated harmonic ladder. The control starts in the uniform
// superposition of levels ell0 .. ell0+L-1.
struct LadderControl {
    std::size_t big_l = 8;
    std::size_t ell0 = 1;
    double omega = 1.0;
    std::size_t trunc = 0;  // 0 means ell0 + L + 2

    std::size_t levels() const { return trunc ? trunc : ell0 + big_l + 2; }

    void validate() const {
        if (big_l < 2) throw ValidationError("ladder window must have at least 2 levels");
        if (ell0 < 1) throw ValidationError("window offset must be at least 1");
        if (!(omega > 0.0) || !std::isfinite(omega)) throw ValidationError("omega must be positive");
        if (levels() < ell0 + big_l + 1) throw ValidationError("truncation cuts into the control window");
    }
};

// Joint index is s * levels + c, qubit first.
inline std::size_t joint_index(std::size_t s, std::size_t c, std::size_t levels) { return s * levels + c; }

inline ComplexMatrix build_dilation(const ComplexMatrix& u, const LadderControl& ctrl) {
    ctrl.validate();
    if (u.rows() != 2 || u.cols() != 2) throw ValidationError("target must be a single qubit");
    if (!is_unitary(u)) throw ValidationError("gate is not unitary");
    const std::size_t k = ctrl.levels();
    ComplexMatrix v = ComplexMatrix::Zero(2 * k, 2 * k);
    v(0, 0) = 1.0;
    // Excitation n couples |0, n> and |1, n-1>; at n = k only |1, k-1> survives truncation.
    for (std::size_t n = 1; n <= k; ++n)
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j) {
                if (n - i >= k || n - j >= k) continue;
                v(joint_index(i, n - i, k), joint_index(j, n - j, k)) = u(i, j);
            }
    return v;
}

inline ComplexMatrix total_hamiltonian(const LadderControl& ctrl) {
    const std::size_t k = ctrl.levels();
    ComplexMatrix h = ComplexMatrix::Zero(2 * k, 2 * k);
    for (std::size_t s = 0; s < 2; ++s)
        for (std::size_t c = 0; c < k; ++c)
            h(joint_index(s, c, k), joint_index(s, c, k)) = ctrl.omega * static_cast<double>(s + c);
    return h;
}

// Basis states whose excitation number stays below the truncation edge.
inline std::vector<std::size_t> interior_indices(const LadderControl& ctrl) {
    const std::size_t k = ctrl.levels();
    std::vector<std::size_t> idx;
    for (std::size_t s = 0; s < 2; ++s)
        for (std::size_t c = 0; c < k; ++c)
            if (s + c <= k - 1) idx.push_back(joint_index(s, c, k));
    return idx;
}

inline ComplexMatrix restrict_to(const ComplexMatrix& m, const std::vector<std::size_t>& idx) {
    ComplexMatrix r(idx.size(), idx.size());
    for (std::size_t a = 0; a < idx.size(); ++a)
        for (std::size_t b = 0; b < idx.size(); ++b) r(a, b) = m(idx[a], idx[b]);
    return r;
}

inline double commutator_norm(const ComplexMatrix& v, const LadderControl& ctrl) {
    const auto idx = interior_indices(ctrl);
    const ComplexMatrix h = total_hamiltonian(ctrl);
    return operator_norm(restrict_to(h * v - v * h, idx));
}

inline ComplexVector control_state(const LadderControl& ctrl) {
    ctrl.validate();
    ComplexVector phi = ComplexVector::Zero(ctrl.levels());
    const double a = 1.0 / std::sqrt(static_cast<double>(ctrl.big_l));
    for (std::size_t n = 0; n < ctrl.big_l; ++n) phi(ctrl.ell0 + n) = a;
    return phi;
}

inline double control_energy(const LadderControl& ctrl) {
    ctrl.validate();
    return ctrl.omega * (static_cast<double>(ctrl.ell0) + 0.5 * static_cast<double>(ctrl.big_l - 1));
}

// <phi| H_C |phi> read off the ladder Hamiltonian.
inline double control_energy_matrix_element(const LadderControl& ctrl) {
    const ComplexVector phi = control_state(ctrl);
    double e = 0.0;
    for (std::size_t n = 0; n < ctrl.levels(); ++n) e += std::norm(phi(n)) * ctrl.omega * static_cast<double>(n);
    return e;
}

struct ChannelOutput {
    DensityOperator system = DensityOperator::maximally_mixed(2);
    DensityOperator control = DensityOperator::maximally_mixed(2);
    ComplexVector joint;
};

inline ComplexVector apply_dilation(const ComplexMatrix& v, const ComplexVector& psi, const LadderControl& ctrl) {
    if (psi.size() != 2) throw ValidationError("input must be a qubit state");
    return v * kron(psi, control_state(ctrl));
}

inline ChannelOutput control_channel(const ComplexMatrix& u, const LadderControl& ctrl, const ComplexVector& psi) {
    const ComplexMatrix v = build_dilation(u, ctrl);
    ChannelOutput out;
    out.joint = apply_dilation(v, psi / psi.norm(), ctrl);
    const ComplexMatrix rho = out.joint * out.joint.adjoint();
    const std::vector<std::size_t> dims{2, ctrl.levels()};
    out.system = DensityOperator(partial_trace_matrix(rho, dims, {0}));
    out.control = DensityOperator(partial_trace_matrix(rho, dims, {1}));
    return out;
}

// Lambda_U(|j><k|) for the four qubit matrix units, stored as [2*j + k].
inline std::vector<ComplexMatrix> channel_action(const ComplexMatrix& u, const LadderControl& ctrl) {
    const ComplexMatrix v = build_dilation(u, ctrl);
    const std::vector<std::size_t> dims{2, ctrl.levels()};
    std::vector<ComplexVector> out(2);
    for (std::size_t j = 0; j < 2; ++j) out[j] = apply_dilation(v, ComplexVector::Unit(2, j), ctrl);
    std::vector<ComplexMatrix> units;
    for (std::size_t j = 0; j < 2; ++j)
        for (std::size_t k = 0; k < 2; ++k)
            units.push_back(partial_trace_matrix(out[j] * out[k].adjoint(), dims, {0}));
    return units;
}

inline double entanglement_fidelity(const ComplexMatrix& u, const LadderControl& ctrl) {
    const auto units = channel_action(u, ctrl);
    // F_ent = (1/4) sum_{jk} <j|U^dag Lambda(|j><k|) U|k>
    double f = 0.0;
    for (std::size_t j = 0; j < 2; ++j)
        for (std::size_t k = 0; k < 2; ++k) {
            const ComplexMatrix m = u.adjoint() * units[2 * j + k] * u;
            f += m(j, k).real();
        }
    return 0.25 * f;
}

inline double average_fidelity(const ComplexMatrix& u, const LadderControl& ctrl) {
    return (2.0 * entanglement_fidelity(u, ctrl) + 1.0) / 3.0;
}

struct MonteCarloEstimate {
    double mean = 0.0;
    double stderr_ = 0.0;
};

inline MonteCarloEstimate average_fidelity_mc(const ComplexMatrix& u, const LadderControl& ctrl,
                                              std::size_t samples, std::uint64_t seed,
                                              std::size_t workers = default_workers()) {
    if (samples < 2) throw ValidationError("need at least two samples");
    const auto units = channel_action(u, ctrl);
    const auto vals = parallel_map(
        samples,
        [&](std::size_t i) {
            Rng rng(seed, i);
            const ComplexVector psi = random_state_vector(2, rng);
            ComplexMatrix out = ComplexMatrix::Zero(2, 2);
            for (std::size_t j = 0; j < 2; ++j)
                for (std::size_t k = 0; k < 2; ++k) out += psi(j) * std::conj(psi(k)) * units[2 * j + k];
            const ComplexVector target = u * psi;
            return (target.adjoint() * out * target)(0, 0).real();
        },
        workers);
    double s = 0.0, s2 = 0.0;
    for (double v : vals) {
        s += v;
        s2 += v * v;
    }
    const double n = static_cast<double>(samples);
    MonteCarloEstimate est;
    est.mean = s / n;
    est.stderr_ = std::sqrt(std::max(0.0, s2 / n - est.mean * est.mean) / (n - 1.0));
    return est;
}

struct ChannelReport {
    double avg_fidelity = 0.0;
    double delta_s_c = 0.0;
    double control_energy = 0.0;
    double commutator_norm = 0.0;
};

inline ChannelReport control_diagnostics(const ComplexMatrix& u, const LadderControl& ctrl, std::size_t haar_samples,
                                         std::uint64_t seed, std::size_t workers = default_workers()) {
    if (haar_samples == 0) throw ValidationError("need at least one Haar sample");
    const ComplexMatrix v = build_dilation(u, ctrl);
    const std::vector<std::size_t> dims{2, ctrl.levels()};
    const auto entropies = parallel_map(
        haar_samples,
        [&](std::size_t i) {
            Rng rng(seed, i);
            const ComplexVector joint = apply_dilation(v, random_state_vector(2, rng), ctrl);
            // the joint state is pure, so the control and qubit entropies agree
            return von_neumann_entropy(DensityOperator(partial_trace_matrix(joint * joint.adjoint(), dims, {0})));
        },
        workers);
    ChannelReport r;
    for (double s : entropies) r.delta_s_c += s;
    r.delta_s_c /= static_cast<double>(haar_samples);
    r.avg_fidelity = average_fidelity(u, ctrl);
    r.control_energy = control_energy_matrix_element(ctrl);
    r.commutator_norm = commutator_norm(v, ctrl);
    return r;
}

inline ComplexMatrix named_gate(const std::string& name, std::uint64_t seed = 0) {
    ComplexMatrix g(2, 2);
    const double h = 1.0 / std::numbers::sqrt2;
    if (name == "I") {
        g << 1, 0, 0, 1;
    } else if (name == "X") {
        g << 0, 1, 1, 0;
    } else if (name == "Z") {
        g << 1, 0, 0, -1;
    } else if (name == "H") {
        g << h, h, h, -h;
    } else if (name == "T") {
        g << 1, 0, 0, std::polar(1.0, std::numbers::pi / 4);
    } else if (name == "random") {
        Rng rng(seed, 0x7a);
        g = random_unitary(2, rng);
    } else {
        throw ValidationError("unknown gate: " + name);
    }
    return g;
}

}  // namespace qenergy::control
