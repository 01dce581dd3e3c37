#include "lpiso/presentation.hpp"

#include "lpiso/errors.hpp"

#include <bit>
#include <stdexcept>

namespace lpiso {

// ------------------------------------------------------------ RationalVector

RationalVector RationalVector::unit(std::size_t n, const ComplexRational& c) {
    RationalVector v;
    v.add(n, c);
    return v;
}

void RationalVector::add(std::size_t n, const ComplexRational& c) {
    if (c.is_zero()) {
        return;
    }
    auto [it, inserted] = terms_.try_emplace(n, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) {
            terms_.erase(it);
        }
    }
}

ComplexRational RationalVector::coefficient(std::size_t n) const {
    auto it = terms_.find(n);
    return it == terms_.end() ? ComplexRational() : it->second;
}

RationalVector operator+(const RationalVector& a, const RationalVector& b) {
    RationalVector out = a;
    for (const auto& [n, c] : b.terms_) {
        out.add(n, c);
    }
    return out;
}

RationalVector operator-(const RationalVector& a) {
    RationalVector out;
    for (const auto& [n, c] : a.terms_) {
        out.terms_.emplace(n, -c);
    }
    return out;
}

RationalVector operator-(const RationalVector& a, const RationalVector& b) { return a + (-b); }

RationalVector operator*(const ComplexRational& s, const RationalVector& v) {
    RationalVector out;
    for (const auto& [n, c] : v.terms_) {
        out.add(n, s * c);
    }
    return out;
}

// -------------------------------------------------------------- Presentation

Presentation Presentation::white_box(Exponent p, Generator generator,
                                     std::optional<std::size_t> count, std::string name) {
    Presentation P(std::move(p), std::move(name));
    P.generator_ = std::move(generator);
    P.count_ = count;
    return P;
}

Presentation Presentation::oracle(Exponent p, NormOracle norm, std::optional<std::size_t> count,
                                  std::string name) {
    Presentation P(std::move(p), std::move(name));
    P.norm_ = std::move(norm);
    P.count_ = count;
    return P;
}

StepFn Presentation::generator(std::size_t n) const {
    if (!generator_) {
        throw std::logic_error("presentation " + name_ + " exposes no generators");
    }
    if (!has_generator(n)) {
        throw std::out_of_range("generator index " + std::to_string(n) + " out of range");
    }
    return generator_(n);
}

StepFn Presentation::materialize(const RationalVector& v) const {
    std::vector<std::pair<ComplexRational, StepFn>> terms;
    for (const auto& [n, c] : v.terms()) {
        terms.emplace_back(c, generator(n));
    }
    return linear_combine(terms);
}

Interval Presentation::norm(const RationalVector& v, long k) const {
    if (v.empty()) {
        return Interval(Rational(0));
    }
    for (const auto& [n, c] : v.terms()) {
        if (!has_generator(n)) {
            throw std::out_of_range("generator index " + std::to_string(n) + " out of range");
        }
    }
    if (norm_) {
        Interval r = norm_(v, k);
        if (!r.width_at_most_pow2(k)) {
            throw Error("norm oracle of " + name_ + " broke its width contract");
        }
        return r;
    }
    return materialize(v).norm(p_, k);
}

Presentation Presentation::with_descriptor(nlohmann::json d) const {
    Presentation out = *this;
    out.descriptor_ = std::move(d);
    return out;
}

// ---------------------------------------------------------- dyadic families

DyadicSet dyadic_interval(std::size_t n) {
    const unsigned level = static_cast<unsigned>(std::bit_width(n + 1) - 1);
    const std::size_t i = n + 1 - (std::size_t{1} << level);
    const Rational w = pow2(-static_cast<long>(level));
    return DyadicSet::interval(w * Rational(static_cast<unsigned long>(i)),
                               w * Rational(static_cast<unsigned long>(i + 1)));
}

std::size_t dyadic_index(unsigned level, std::size_t i) {
    return (std::size_t{1} << level) - 1 + i;
}

Presentation standard_dyadic(const Exponent& p) {
    return Presentation::white_box(
        p, [](std::size_t n) { return StepFn::indicator(dyadic_interval(n)); }, std::nullopt,
        "standard_dyadic");
}

Presentation permuted(const Presentation& base, std::function<std::size_t(std::size_t)> perm,
                      std::string name) {
    return Presentation::white_box(
        base.p(), [base, perm](std::size_t n) { return base.generator(perm(n)); }, base.size(),
        std::move(name));
}

Presentation half_swapped_dyadic(const Exponent& p) {
    return permuted(
        standard_dyadic(p),
        [](std::size_t n) -> std::size_t { return n == 1 ? 2 : n == 2 ? 1 : n; },
        "half_swapped_dyadic");
}

Presentation from_generators(const Exponent& p, std::vector<StepFn> generators, std::string name) {
    const std::size_t count = generators.size();
    return Presentation::white_box(
        p, [gens = std::move(generators)](std::size_t n) { return gens.at(n); }, count,
        std::move(name));
}

Presentation oracle_only(const Presentation& base) {
    return Presentation::oracle(
               base.p(), [base](const RationalVector& v, long k) { return base.norm(v, k); },
               base.size(), base.name() + "/oracle")
        .with_descriptor(base.descriptor());
}

// -------------------------------------------------------------- MeasureRing

namespace {

Interval lebesgue_measure(const DyadicSet& s, long) { return Interval(s.measure()); }

// Levels of the bitmask ring; level L contributes 2^(2^L) indices.
constexpr unsigned kRingLevels = 6;

std::size_t ring_offset(unsigned level) {
    std::size_t off = 0;
    for (unsigned l = 0; l < level; ++l) {
        off += std::size_t{1} << (std::size_t{1} << l);
    }
    return off;
}

struct RingCode {
    unsigned level;
    std::uint64_t mask;
};

RingCode ring_decode(std::size_t n) {
    for (unsigned l = 0; l + 1 < kRingLevels; ++l) {
        const std::size_t block = std::size_t{1} << (std::size_t{1} << l);
        if (n < block) {
            return {l, n};
        }
        n -= block;
    }
    return {kRingLevels - 1, n};
}

std::uint64_t ring_lift(const RingCode& c, unsigned level) {
    std::uint64_t out = 0;
    const unsigned f = 1u << (level - c.level);
    for (unsigned j = 0; j < (1u << c.level); ++j) {
        if ((c.mask >> j) & 1u) {
            out |= ((f == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << f) - 1)) << (j * f));
        }
    }
    return out;
}

// Smallest-level index of the set encoded by mask at the given level.
std::size_t ring_encode(std::uint64_t mask, unsigned level) {
    while (level > 0) {
        const unsigned cells = 1u << (level - 1);
        std::uint64_t coarse = 0;
        bool ok = true;
        for (unsigned j = 0; j < cells && ok; ++j) {
            const std::uint64_t pair = (mask >> (2 * j)) & 3u;
            if (pair == 3u) {
                coarse |= std::uint64_t{1} << j;
            } else if (pair != 0) {
                ok = false;
            }
        }
        if (!ok) {
            break;
        }
        mask = coarse;
        --level;
    }
    return ring_offset(level) + static_cast<std::size_t>(mask);
}

DyadicSet ring_set(std::size_t n) {
    const RingCode c = ring_decode(n);
    std::vector<Span> spans;
    const Rational w = pow2(-static_cast<long>(c.level));
    for (unsigned j = 0; j < (1u << c.level); ++j) {
        if ((c.mask >> j) & 1u) {
            spans.push_back({w * j, w * (j + 1)});
        }
    }
    return DyadicSet(std::move(spans));
}

template <class Op>
std::size_t ring_combine(std::size_t a, std::size_t b, Op op) {
    const RingCode ca = ring_decode(a);
    const RingCode cb = ring_decode(b);
    const unsigned level = std::max(ca.level, cb.level);
    return ring_encode(op(ring_lift(ca, level), ring_lift(cb, level)), level);
}

}  // namespace

MeasureRing MeasureRing::dyadic_intervals() {
    MeasureRing r;
    r.set = dyadic_interval;
    r.measure = lebesgue_measure;
    r.name = "dyadic_intervals";
    return r;
}

MeasureRing MeasureRing::dyadic_ring() {
    MeasureRing r;
    r.set = ring_set;
    r.measure = lebesgue_measure;
    r.union_index = [](std::size_t n, std::size_t m) {
        return ring_combine(n, m, [](std::uint64_t x, std::uint64_t y) { return x | y; });
    };
    r.diff_index = [](std::size_t m, std::size_t n) {
        return ring_combine(n, m, [](std::uint64_t x, std::uint64_t y) { return x & ~y; });
    };
    r.count = ring_offset(kRingLevels);
    r.name = "dyadic_ring";
    return r;
}

MeasureRing MeasureRing::finite(std::vector<DyadicSet> sets, std::string name) {
    MeasureRing r;
    const std::size_t count = sets.size();
    r.set = [sets = std::move(sets)](std::size_t n) { return sets.at(n); };
    r.measure = lebesgue_measure;
    r.count = count;
    r.name = std::move(name);
    return r;
}

Interval norm_via_cells(const MeasureRing& ring,
                        const std::vector<std::pair<std::size_t, ComplexRational>>& coeffs,
                        const Exponent& p, long k) {
    struct Cell {
        DyadicSet set;
        ComplexRational beta;
    };
    // Splitting only the union of the sets: cells outside every R(j) carry
    // beta = 0 and contribute nothing.
    std::vector<Cell> cells;
    for (const auto& [n, alpha] : coeffs) {
        const DyadicSet R = ring.set(n);
        DyadicSet rest = R;
        std::vector<Cell> next;
        for (auto& c : cells) {
            DyadicSet in = c.set & R;
            DyadicSet out = c.set - R;
            rest = rest - c.set;
            if (!in.empty()) {
                next.push_back({std::move(in), c.beta + alpha});
            }
            if (!out.empty()) {
                next.push_back({std::move(out), c.beta});
            }
        }
        if (!rest.empty()) {
            next.push_back({std::move(rest), alpha});
        }
        cells = std::move(next);
    }
    std::erase_if(cells, [](const Cell& c) { return c.beta.is_zero(); });
    if (cells.empty()) {
        return Interval(Rational(0));
    }
    long extra = 2;
    for (std::size_t s = cells.size(); s > 0; s >>= 1) {
        ++extra;
    }
    auto mass = [&](long j) {
        Interval total(Rational(0));
        for (const auto& c : cells) {
            const Interval m = ring.measure(c.set, j + extra);
            total += pow_abs(c.beta, p, j + extra) * m;
        }
        return total;
    };
    if (p.is_rational() && p.value() == 1) {
        return refine_until(k, mass);
    }
    return refine_until(k, [&](long j) { return root(mass(j + 2), p, j); });
}

Presentation induced_presentation(const MeasureRing& ring, const Exponent& p) {
    auto norm = [ring, p](const RationalVector& v, long k) {
        std::vector<std::pair<std::size_t, ComplexRational>> coeffs(v.terms().begin(),
                                                                    v.terms().end());
        return norm_via_cells(ring, coeffs, p, k);
    };
    if (!ring.lebesgue) {
        return Presentation::oracle(p, norm, ring.count, "induced:" + ring.name);
    }
    Presentation P = Presentation::white_box(
        p, [ring](std::size_t n) { return StepFn::indicator(ring.set(n)); }, ring.count,
        "induced:" + ring.name);
    return P;
}

Rational MeasureLowerBounds::next() {
    if (ring_.count && n_ >= *ring_.count) {
        return best_;
    }
    const DyadicSet R = ring_.set(n_);
    pieces_.push_back(R - covered_);
    covered_ = covered_ | R;
    ++n_;
    Rational sum = 0;
    if (ring_.lebesgue) {
        sum = covered_.measure();
    } else {
        const long n = static_cast<long>(n_);
        for (std::size_t m = 0; m < pieces_.size(); ++m) {
            sum += ring_.measure(pieces_[m], n + static_cast<long>(m) + 1).lo();
        }
    }
    if (sum > best_) {
        best_ = sum;
    }
    return best_;
}

RationalVector cauchy_limit(const Presentation& P, const CauchyVectorSeq& seq, long k) {
    if (k < 0) {
        throw std::invalid_argument("precision must be non-negative");
    }
    if (!seq.modulus_certified) {
        throw ModulusViolationError("sequence carries no modulus guarantee");
    }
    const auto nstar = static_cast<std::size_t>(k + 1);
    RationalVector prev = seq.at(0);
    for (std::size_t n = 0; n <= nstar; ++n) {
        RationalVector cur = seq.at(n + 1);
        const Rational bound = pow2(-static_cast<long>(n));
        bool ok = false;
        for (long extra = 4; extra <= 64 && !ok; extra *= 2) {
            const Interval d = P.norm(cur - prev, static_cast<long>(n) + extra);
            if (d.hi() < bound) {
                ok = true;
            } else if (d.lo() >= bound) {
                break;
            }
        }
        if (!ok) {
            throw ModulusViolationError("step " + std::to_string(n) +
                                        " is not certified below 2^-" + std::to_string(n));
        }
        prev = std::move(cur);
    }
    return seq.at(nstar);
}

}  // namespace lpiso
