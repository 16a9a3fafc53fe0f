#pragma once

#include "qenergy/quantum.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

namespace qenergy {

// Random stream keyed by (seed, stream index). Streams for different indices are
// independent of the order in which they are created, so trials can run on any worker.
class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                          0x51u};
        engine_.seed(seq);
    }

    std::uint64_t next() { return engine_(); }

    // Uniform integer in [0, bound), rejection sampled so the result is portable.
    std::uint64_t below(std::uint64_t bound) {
        if (bound == 0) throw std::invalid_argument("empty range");
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                    std::numeric_limits<std::uint64_t>::max() % bound;
        std::uint64_t x;
        do x = engine_();
        while (x >= limit);
        return x % bound;
    }

    // Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    bool coin() { return (engine_() >> 63) != 0; }

    double normal() {
        // Box-Muller keeps the stream independent of library distribution details.
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1;
        do u1 = uniform();
        while (u1 <= 0.0);
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        spare_ = r * std::sin(2.0 * std::numbers::pi * u2);
        has_spare_ = true;
        return r * std::cos(2.0 * std::numbers::pi * u2);
    }

    template <class T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
    }

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

inline ComplexVector random_state_vector(std::size_t dim, Rng& rng) {
    ComplexVector v(dim);
    for (std::size_t i = 0; i < dim; ++i) v(i) = cplx(rng.normal(), rng.normal());
    return v / v.norm();
}

// Haar-random unitary via QR of a Ginibre matrix with the phase fix.
inline ComplexMatrix random_unitary(std::size_t dim, Rng& rng) {
    ComplexMatrix g(dim, dim);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) g(i, j) = cplx(rng.normal(), rng.normal());
    Eigen::HouseholderQR<ComplexMatrix> qr(g);
    ComplexMatrix q = qr.householderQ();
    ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (std::size_t j = 0; j < dim; ++j) {
        const cplx d = r(j, j);
        const double a = std::abs(d);
        q.col(j) *= (a > 0.0 ? d / a : cplx(1.0));
    }
    return q;
}

inline DensityOperator random_pure_state(std::size_t dim, Rng& rng) {
    return DensityOperator::pure(random_state_vector(dim, rng));
}

// Hilbert-Schmidt random mixed state.
inline DensityOperator random_mixed_state(std::size_t dim, Rng& rng) {
    ComplexMatrix g(dim, dim);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) g(i, j) = cplx(rng.normal(), rng.normal());
    ComplexMatrix m = g * g.adjoint();
    return DensityOperator(m / m.trace().real());
}

inline DensityOperator random_diagonal_state(std::size_t dim, Rng& rng) {
    std::vector<double> p(dim);
    double total = 0.0;
    for (auto& x : p) {
        x = -std::log(1.0 - rng.uniform());
        total += x;
    }
    for (auto& x : p) x /= total;
    return DensityOperator::from_diagonal(p);
}

}  // namespace qenergy
