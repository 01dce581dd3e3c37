#pragma once

#include "lpiso/enclosure.hpp"
#include "lpiso/stepfn.hpp"

#include <nlohmann/json.hpp>

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace lpiso {

/// A finite Q(i)-combination of generators, keyed by generator index. Zero
/// coefficients are never stored.
class RationalVector {
public:
    RationalVector() = default;
    static RationalVector unit(std::size_t n, const ComplexRational& c = ComplexRational(1));

    const std::map<std::size_t, ComplexRational>& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }
    void add(std::size_t n, const ComplexRational& c);
    ComplexRational coefficient(std::size_t n) const;
    // One past the largest generator index used (0 for the empty vector).
    std::size_t span_end() const { return terms_.empty() ? 0 : terms_.rbegin()->first + 1; }

    friend RationalVector operator+(const RationalVector& a, const RationalVector& b);
    friend RationalVector operator-(const RationalVector& a, const RationalVector& b);
    friend RationalVector operator-(const RationalVector& a);
    friend RationalVector operator*(const ComplexRational& s, const RationalVector& v);
    RationalVector& operator+=(const RationalVector& b) { return *this = *this + b; }

    friend bool operator==(const RationalVector&, const RationalVector&) = default;

private:
    std::map<std::size_t, ComplexRational> terms_;
};

/// A presentation of an L^p space: a generator sequence with a norm oracle
/// for rational vectors. White-box presentations also expose each generator
/// as a step function; oracle presentations only answer norm queries.
/// Generator order is part of the interface.
class Presentation {
public:
    using Generator = std::function<StepFn(std::size_t)>;
    using NormOracle = std::function<Interval(const RationalVector&, long k)>;

    static Presentation white_box(Exponent p, Generator generator, std::optional<std::size_t> count,
                                  std::string name);
    static Presentation oracle(Exponent p, NormOracle norm, std::optional<std::size_t> count,
                               std::string name);

    const Exponent& p() const { return p_; }
    const std::string& name() const { return name_; }
    bool is_white_box() const { return static_cast<bool>(generator_); }
    // Number of generators for finite toy presentations; nullopt = infinite.
    std::optional<std::size_t> size() const { return count_; }
    bool has_generator(std::size_t n) const { return !count_ || n < *count_; }

    StepFn generator(std::size_t n) const;
    StepFn materialize(const RationalVector& v) const;

    /// Interval of width <= 2^-k containing ||v||_p.
    Interval norm(const RationalVector& v, long k) const;

    // JSON description the presentation was parsed from (null when built in
    // code); reports embed it so they can be re-verified.
    const nlohmann::json& descriptor() const { return descriptor_; }
    Presentation with_descriptor(nlohmann::json d) const;

private:
    Presentation(Exponent p, std::string name) : p_(std::move(p)), name_(std::move(name)) {}

    Exponent p_;
    std::string name_;
    Generator generator_;
    NormOracle norm_;
    std::optional<std::size_t> count_;
    nlohmann::json descriptor_;
};

/// n-th dyadic interval in the canonical order: by level, then left endpoint.
/// n = 2^L - 1 + i is [i 2^-L, (i+1) 2^-L).
DyadicSet dyadic_interval(std::size_t n);
std::size_t dyadic_index(unsigned level, std::size_t i);

/// The standard presentation of L^p[0,1]: characteristic functions of dyadic
/// intervals in canonical order.
Presentation standard_dyadic(const Exponent& p);

/// Re-enumeration of a white-box presentation: generator n of the result is
/// generator perm(n) of the base.
Presentation permuted(const Presentation& base, std::function<std::size_t(std::size_t)> perm,
                      std::string name);

/// The standard dyadic presentation with generators 1 and 2 ([0,1/2) and
/// [1/2,1)) exchanged.
Presentation half_swapped_dyadic(const Exponent& p);

/// A presentation given by finitely many explicit step functions.
Presentation from_generators(const Exponent& p, std::vector<StepFn> generators, std::string name);

/// Hides the generators of a white-box presentation behind its norm oracle.
Presentation oracle_only(const Presentation& base);

inline Interval norm_oracle(const Presentation& P, const RationalVector& v, long k) {
    return P.norm(v, k);
}

/// A computable ring of measurable subsets of [0,1]. Sets are concrete
/// rational interval unions; the measure is a (possibly non-Lebesgue)
/// enclosure-valued functional on them. union_index/diff_index witness ring
/// closure when the enumeration is closed.
struct MeasureRing {
    std::function<DyadicSet(std::size_t)> set;
    std::function<Interval(const DyadicSet&, long k)> measure;
    std::function<std::size_t(std::size_t, std::size_t)> union_index;  // R(u(n,m)) = R(n) | R(m)
    std::function<std::size_t(std::size_t, std::size_t)> diff_index;   // R(d(m,n)) = R(n) - R(m)
    std::optional<std::size_t> count;
    bool lebesgue = true;
    std::string name;

    Interval index_measure(std::size_t n, long k) const { return measure(set(n), k); }

    /// R(n) = n-th dyadic interval with Lebesgue measure (not closed).
    static MeasureRing dyadic_intervals();
    /// All finite unions of dyadic intervals, enumerated by level L in blocks
    /// of 2^(2^L) bitmasks over the 2^L cells; closed under union and
    /// difference.
    static MeasureRing dyadic_ring();
    static MeasureRing finite(std::vector<DyadicSet> sets, std::string name = "finite");
};

/// The induced presentation D_R(n) = chi_R(n); norms come from the cell
/// decomposition. Generators are exposed as step functions only when the
/// ring's measure is Lebesgue.
Presentation induced_presentation(const MeasureRing& ring, const Exponent& p);

/// (sum_h |beta_h|^p mu(S_h))^(1/p) over the nonempty cells
/// S_h = intersection of R(j) (h_j = 1) and complements (h_j = 0).
Interval norm_via_cells(const MeasureRing& ring,
                        const std::vector<std::pair<std::size_t, ComplexRational>>& coeffs,
                        const Exponent& p, long k);

/// Nondecreasing lower bounds converging to mu(union of all R(n)), built
/// from the disjointification F_n = R(n) - (R(0) | ... | R(n-1)).
class MeasureLowerBounds {
public:
    explicit MeasureLowerBounds(MeasureRing ring) : ring_(std::move(ring)) {}
    Rational next();
    std::size_t consumed() const { return n_; }

private:
    MeasureRing ring_;
    std::size_t n_ = 0;
    DyadicSet covered_;
    std::vector<DyadicSet> pieces_;
    Rational best_ = 0;
};

inline MeasureLowerBounds measure_lower_bounds(const MeasureRing& ring) {
    return MeasureLowerBounds(ring);
}

/// A sequence of rational vectors with ||at(n) - at(n+1)|| < 2^-n.
struct CauchyVectorSeq {
    std::function<RationalVector(std::size_t)> at;
    bool modulus_certified = true;
};

/// Returns at(k+1), which lies within 2^-k of the limit. Every step up to
/// k+1 is re-certified against the norm oracle; throws
/// ModulusViolationError when a step's upper bound is not below 2^-n.
RationalVector cauchy_limit(const Presentation& P, const CauchyVectorSeq& seq, long k);

}  // namespace lpiso
