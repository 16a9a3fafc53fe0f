#pragma once

#include "qenergy/gf2.hpp"
#include "qenergy/random.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

namespace qenergy::simon {

using word = gf2::word;

inline constexpr unsigned max_table_bits = 20;
inline constexpr unsigned max_statevector_bits = 10;

inline word mask(unsigned n) { return n >= 32 ? ~word{0} : ((word{1} << n) - 1); }

struct SimonInstance {
    unsigned n = 0;
    int b = 0;
    word s = 0;  // zero when b = 0
    std::vector<word> table;

    word operator()(word x) const { return table.at(x); }
    std::size_t domain() const { return table.size(); }

    // Checks the promise: a permutation when b = 0, exactly 2-to-1 with period s when b = 1.
    void validate() const {
        if (n < 1 || n > max_table_bits) throw ValidationError("problem size out of range");
        const std::size_t size = std::size_t{1} << n;
        if (table.size() != size) throw ValidationError("function table has the wrong size");
        std::vector<std::uint8_t> hits(size, 0);
        for (word y : table) {
            if (y >= size) throw ValidationError("function value out of range");
            if (hits[y] == 2) throw ValidationError("function value used more than twice");
            ++hits[y];
        }
        if (b == 0) {
            if (s != 0) throw ValidationError("shift must be zero for one-to-one instances");
            for (auto h : hits)
                if (h != 1) throw ValidationError("one-to-one instance is not a permutation");
        } else if (b == 1) {
            if (s == 0 || s >= size) throw ValidationError("shift must be a nonzero n-bit string");
            for (word x = 0; x < size; ++x)
                if (table[x] != table[x ^ s]) throw ValidationError("function is not s-periodic");
            for (auto h : hits)
                if (h == 1) throw ValidationError("two-to-one instance has a singleton value");
        } else {
            throw ValidationError("decision bit must be 0 or 1");
        }
    }
};

inline void check_size(unsigned n) {
    if (n < 1 || n > max_table_bits) throw ValidationError("problem size must lie in [1, 20]");
}

inline SimonInstance sample_instance(unsigned n, int b, Rng& rng) {
    check_size(n);
    const std::size_t size = std::size_t{1} << n;
    SimonInstance inst;
    inst.n = n;
    inst.b = b;
    std::vector<word> outputs(size);
    for (std::size_t i = 0; i < size; ++i) outputs[i] = static_cast<word>(i);
    rng.shuffle(outputs);
    if (b == 0) {
        inst.table = std::move(outputs);
    } else {
        inst.s = static_cast<word>(1 + rng.below(size - 1));
        inst.table.assign(size, 0);
        // class representatives in increasing order take the first 2^(n-1) shuffled outputs
        std::size_t next = 0;
        for (word x = 0; x < size; ++x) {
            if (x > (x ^ inst.s)) continue;
            inst.table[x] = inst.table[x ^ inst.s] = outputs[next++];
        }
    }
    inst.validate();
    return inst;
}

inline SimonInstance sample_uniform_instance(unsigned n, Rng& rng) {
    check_size(n);
    const int b = rng.coin() ? 1 : 0;
    return sample_instance(n, b, rng);
}

struct PRPConfig {
    std::string key = "0110100110010110";  // bit string
    unsigned rounds = 8;

    void validate() const {
        if (key.empty()) throw ValidationError("key must be nonempty");
        if (key.find_first_not_of("01") != std::string::npos) throw ValidationError("key must be a bit string");
        if (rounds < 4 || rounds % 2 != 0) throw ValidationError("round count must be even and at least 4");
    }
};

namespace detail {
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

inline std::uint64_t key_digest(const std::string& key) {
    std::uint64_t h = mix64(key.size());
    for (char c : key) h = mix64(h ^ static_cast<std::uint64_t>(c - '0' + 1));
    return h;
}
}  // namespace detail

// Keyed permutation of n-bit blocks: an unbalanced Feistel network. The left part has
// ceil(n/2) bits and the right part floor(n/2); every round maps (L, R) to (R, L ^ F(R)),
// so the part widths swap each round and return to the start after an even count.
class Feistel {
public:
    Feistel(unsigned n, const PRPConfig& cfg) : n_(n), rounds_(cfg.rounds) {
        check_size(n);
        cfg.validate();
        const std::uint64_t k = detail::key_digest(cfg.key);
        for (unsigned r = 0; r < rounds_; ++r) round_keys_.push_back(detail::mix64(k + r));
    }

    word operator()(word x) const {
        unsigned wl = (n_ + 1) / 2, wr = n_ / 2;
        word l = x >> wr, r = x & mask(wr);
        for (unsigned i = 0; i < rounds_; ++i) {
            const word f = static_cast<word>(detail::mix64(round_keys_[i] ^ r)) & mask(wl);
            const word nl = r, nr = l ^ f;
            l = nl;
            r = nr;
            std::swap(wl, wr);
        }
        return (l << wr) | r;
    }

private:
    unsigned n_;
    unsigned rounds_;
    std::vector<std::uint64_t> round_keys_;
};

inline SimonInstance prp_instance(unsigned n, int b, word s, const PRPConfig& cfg) {
    check_size(n);
    const Feistel fk(n, cfg);
    const std::size_t size = std::size_t{1} << n;
    SimonInstance inst;
    inst.n = n;
    inst.b = b;
    inst.s = b == 1 ? s : 0;
    if (b == 1 && (s == 0 || s >= size)) throw ValidationError("shift must be a nonzero n-bit string");
    inst.table.resize(size);
    for (word x = 0; x < size; ++x) inst.table[x] = fk(b == 1 ? std::min(x, x ^ s) : x);
    // the two-to-one table uses only half the outputs, which validate() accepts
    inst.validate();
    return inst;
}

struct QueryRecord {
    word x;
    word y;
};

class QueryLog {
public:
    void append(word x, word y) {
        if (!seen_.insert(x).second) throw std::domain_error("oracle input already queried");
        queries_.push_back({x, y});
    }
    bool contains(word x) const { return seen_.count(x) != 0; }
    const std::vector<QueryRecord>& queries() const { return queries_; }
    std::size_t count() const { return queries_.size(); }

private:
    std::vector<QueryRecord> queries_;
    std::unordered_set<word> seen_;
};

inline word classical_query(const SimonInstance& inst, word x, QueryLog& log) {
    if (x >= inst.domain()) throw std::out_of_range("query input out of range");
    if (log.contains(x)) throw std::domain_error("oracle input already queried");
    const word y = inst(x);
    log.append(x, y);
    return y;
}

// Statevector of the Fourier-twice subroutine on 2n qubits. The index is x * 2^n + z,
// with x the input register and z the output register.
class FourierTwice {
public:
    explicit FourierTwice(const SimonInstance& inst) : n_(inst.n) {
        if (inst.n > max_statevector_bits) throw ValidationError("statevector simulation limited to n <= 10");
        const std::size_t size = std::size_t{1} << n_;
        amp_.assign(size * size, cplx(0.0));
        amp_[0] = 1.0;
        hadamard_input();
        apply_oracle(inst);
        hadamard_input();
        marginal_.assign(size, 0.0);
        for (std::size_t x = 0; x < size; ++x)
            for (std::size_t z = 0; z < size; ++z) marginal_[x] += std::norm(amp_[x * size + z]);
        // Amplitudes are integer multiples of 2^-n, so any nonzero outcome probability is at
        // least 4^-n. Anything smaller is rounding residue of an exact cancellation.
        const double snap = 0.5 * std::pow(0.25, n_);
        double total = 0.0;
        for (auto& p : marginal_) {
            if (p < snap) p = 0.0;
            total += p;
        }
        for (auto& p : marginal_) p /= total;
        cdf_.resize(size);
        std::partial_sum(marginal_.begin(), marginal_.end(), cdf_.begin());
    }

    unsigned n() const { return n_; }
    const std::vector<cplx>& amplitudes() const { return amp_; }
    const std::vector<double>& input_marginal() const { return marginal_; }

    word sample(Rng& rng) const {
        const double u = rng.uniform();
        const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
        std::size_t y = static_cast<std::size_t>(it - cdf_.begin());
        if (y >= cdf_.size()) y = cdf_.size() - 1;
        while (marginal_[y] == 0.0) --y;  // u landed on the rounding tail of the cdf
        return static_cast<word>(y);
    }

private:
    void hadamard_input() {
        const std::size_t size = std::size_t{1} << n_;
        const double h = 1.0 / std::numbers::sqrt2;
        for (unsigned q = 0; q < n_; ++q) {
            const std::size_t bit = (std::size_t{1} << q) * size;
            for (std::size_t i = 0; i < amp_.size(); ++i) {
                if (i & bit) continue;
                const cplx a = amp_[i], c = amp_[i | bit];
                amp_[i] = h * (a + c);
                amp_[i | bit] = h * (a - c);
            }
        }
    }

    // Acts as |x,z> -> |x, z ^ f(x)>, but is only ever called with the output register in |0>.
    void apply_oracle(const SimonInstance& inst) {
        const std::size_t size = std::size_t{1} << n_;
        for (std::size_t x = 0; x < size; ++x)
            for (std::size_t z = 1; z < size; ++z)
                if (std::abs(amp_[x * size + z]) > 1e-12)
                    throw std::logic_error("oracle called with a nonzero output register");
        std::vector<cplx> next(amp_.size(), cplx(0.0));
        for (std::size_t x = 0; x < size; ++x)
            for (std::size_t z = 0; z < size; ++z) next[x * size + (z ^ inst.table[x])] = amp_[x * size + z];
        amp_ = std::move(next);
    }

    unsigned n_;
    std::vector<cplx> amp_;
    std::vector<double> marginal_;
    std::vector<double> cdf_;
};

inline word quantum_fourier_twice_round(const SimonInstance& inst, Rng& rng) {
    return FourierTwice(inst).sample(rng);
}

struct QuantumResult {
    int a = 0;
    std::size_t m_used = 0;
    std::vector<word> samples;
    std::size_t rank = 0;
    std::optional<word> candidate;  // kernel vector checked by the verification queries
    QueryLog log;                   // verification queries only
};

inline std::size_t default_rounds(unsigned n) { return n + 10; }

inline QuantumResult quantum_solve(const SimonInstance& inst, std::size_t rounds, Rng& rng,
                                   const FourierTwice* cached = nullptr) {
    if (rounds < inst.n + 1) throw std::invalid_argument("need at least n+1 rounds");
    std::optional<FourierTwice> local;
    if (!cached) cached = &local.emplace(inst);
    QuantumResult r;
    r.samples.reserve(rounds);
    for (std::size_t i = 0; i < rounds; ++i) r.samples.push_back(cached->sample(rng));
    r.rank = gf2::rank(r.samples, inst.n);
    r.m_used = rounds;
    if (r.rank == inst.n) return r;
    r.candidate = gf2::kernel_vector(r.samples, inst.n);
    const word y0 = classical_query(inst, 0, r.log);
    const word y1 = classical_query(inst, *r.candidate, r.log);
    r.m_used += 2;
    r.a = y0 == y1 ? 1 : 0;
    return r;
}

struct ClassicalResult {
    int a = 0;
    QueryLog log;
};

// m distinct inputs, uniformly random and in random order (sparse Fisher-Yates).
inline std::vector<word> distinct_inputs(unsigned n, std::size_t m, Rng& rng) {
    const std::uint64_t size = std::uint64_t{1} << n;
    if (m > size) throw std::invalid_argument("more queries than inputs");
    std::unordered_map<std::uint64_t, std::uint64_t> moved;
    auto at = [&](std::uint64_t i) {
        auto it = moved.find(i);
        return it == moved.end() ? i : it->second;
    };
    std::vector<word> out;
    out.reserve(m);
    for (std::uint64_t i = 0; i < m; ++i) {
        const std::uint64_t j = i + rng.below(size - i);
        const std::uint64_t vi = at(i), vj = at(j);
        moved[j] = vi;
        out.push_back(static_cast<word>(vj));
    }
    return out;
}

inline ClassicalResult classical_solve(const SimonInstance& inst, std::size_t m, Rng& rng) {
    if (m > inst.domain()) throw std::invalid_argument("m exceeds 2^n");
    ClassicalResult r;
    std::unordered_set<word> outputs;
    for (word x : distinct_inputs(inst.n, m, rng)) {
        const word y = classical_query(inst, x, r.log);
        if (!outputs.insert(y).second) r.a = 1;
    }
    return r;
}

struct BoundParams {
    double delta_cap = 1.0 / 6.0;   // success margin
    double delta_fail = 1.0 / 3.0;  // failure budget
};

inline double optimal_delta() { return 2.0 - std::sqrt(15.0) / 2.0; }

inline double m_lower_real(unsigned n, double delta_cap) {
    if (!(delta_cap > 0.0 && delta_cap < 0.5)) throw ValidationError("delta must lie in (0, 1/2)");
    return std::sqrt(2.0 * delta_cap / (1.0 + delta_cap)) * std::exp2(0.5 * n);
}

inline std::uint64_t m_lower(unsigned n, const BoundParams& p) {
    if (n > 100) throw std::invalid_argument("problem size too large for an integer query count");
    return static_cast<std::uint64_t>(std::ceil(m_lower_real(n, p.delta_cap)));
}

struct Ceiling {
    double value;
    bool saturated;
};

inline Ceiling prop1_success_ceiling(unsigned n, std::uint64_t m) {
    const double m2 = static_cast<double>(m) * static_cast<double>(m);
    const double denom = std::exp2(n + 1.0) - m2;
    if (denom <= 0.0) return {1.0, true};
    const double v = 0.5 + m2 / denom;
    if (v >= 1.0) return {1.0, true};
    return {v, false};
}

inline std::uint64_t prop3_queries(unsigned n, const BoundParams& p) {
    if (!(p.delta_fail > 0.0 && p.delta_fail < 1.0)) throw ValidationError("delta must lie in (0, 1)");
    const double v = 0.5 * std::sqrt(8.0 * std::log(1.0 / p.delta_fail) * std::exp2(n) + 1.0) + 0.5;
    return static_cast<std::uint64_t>(std::ceil(v));
}

inline std::uint64_t prop3_queries_capped(unsigned n, const BoundParams& p) {
    return std::min<std::uint64_t>(prop3_queries(n, p), std::uint64_t{1} << n);
}

inline double prop3_failure_bound(unsigned n, std::uint64_t m) {
    const double md = static_cast<double>(m);
    return std::exp(-md * (md - 1.0) / std::exp2(n + 1.0));
}

inline double lemma1_floor(const BoundParams& p) {
    const double d = p.delta_cap;
    if (!(d > 0.0 && d < 1.0 / 6.0)) throw ValidationError("delta must lie in (0, 1/6)");
    return (1.0 - 6.0 * d) / (3.0 - 6.0 * d);
}

}  // namespace qenergy::simon
