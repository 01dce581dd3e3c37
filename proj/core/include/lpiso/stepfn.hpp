#pragma once

#include "lpiso/enclosure.hpp"
#include "lpiso/interval.hpp"
#include "lpiso/rational.hpp"

#include <iosfwd>
#include <utility>
#include <vector>

namespace lpiso {

/// A half-open rational interval [lo, hi) inside [0, 1].
struct Span {
    Rational lo;
    Rational hi;

    Rational length() const { return hi - lo; }
    friend bool operator==(const Span&, const Span&) = default;
};

/// A finite union of half-open rational intervals in [0, 1], stored sorted,
/// pairwise disjoint and with touching pieces merged, so equality is
/// structural.
class DyadicSet {
public:
    DyadicSet() = default;
    // Accepts unsorted, overlapping or empty spans and normalises them.
    explicit DyadicSet(std::vector<Span> spans);
    static DyadicSet interval(Rational lo, Rational hi);
    static DyadicSet unit() { return interval(0, 1); }

    const std::vector<Span>& spans() const { return spans_; }
    bool empty() const { return spans_.empty(); }
    Rational measure() const;

    bool contains(const Rational& t) const;
    bool subset_of(const DyadicSet& other) const;
    bool intersects(const DyadicSet& other) const;

    friend DyadicSet operator|(const DyadicSet& a, const DyadicSet& b);
    friend DyadicSet operator&(const DyadicSet& a, const DyadicSet& b);
    friend DyadicSet operator-(const DyadicSet& a, const DyadicSet& b);
    DyadicSet complement() const { return unit() - *this; }

    friend bool operator==(const DyadicSet&, const DyadicSet&) = default;
    friend bool operator<(const DyadicSet& a, const DyadicSet& b);  // arbitrary total order

private:
    std::vector<Span> spans_;
};

std::ostream& operator<<(std::ostream& os, const DyadicSet& s);

/// A complex-rational step function on [0, 1]: value values()[j] on the cell
/// [breaks()[j], breaks()[j+1]). Functions built through the public
/// constructors are canonical (adjacent equal cells merged), which makes ==
/// an exact test. refine_common() produces non-canonical representatives
/// that share a breakpoint list; they compare equal to their canonical form.
class StepFn {
public:
    struct Piece {
        Rational lo;
        Rational hi;
        ComplexRational value;
    };

    StepFn();  // the zero function
    // Overlapping pieces add; the function is zero off the pieces.
    static StepFn from_pieces(const std::vector<Piece>& pieces);
    static StepFn indicator(const DyadicSet& set, const ComplexRational& value = ComplexRational(1));
    static StepFn indicator(const Rational& lo, const Rational& hi,
                            const ComplexRational& value = ComplexRational(1));
    // Breaks must be strictly increasing from 0 to 1 with one value per cell.
    static StepFn on_breaks(std::vector<Rational> breaks, std::vector<ComplexRational> values,
                            bool canonicalize = true);

    const std::vector<Rational>& breaks() const { return breaks_; }
    const std::vector<ComplexRational>& values() const { return values_; }
    std::size_t cells() const { return values_.size(); }
    Rational cell_length(std::size_t j) const { return breaks_[j + 1] - breaks_[j]; }

    ComplexRational at(const Rational& t) const;
    bool is_zero() const;

    // Nonzero cells as (lo, hi, value) triples.
    std::vector<Piece> pieces() const;

    /// Values on a finer breakpoint list (which must contain breaks()).
    std::vector<ComplexRational> values_on(const std::vector<Rational>& finer) const;

    DyadicSet support() const;

    /// sum |value|^p * length, enclosed to width 2^-k.
    Interval mass(const Exponent& p, long k) const;
    /// (sum |value|^p * length)^(1/p), enclosed to width 2^-k.
    Interval norm(const Exponent& p, long k) const;

    StepFn restrict_to(const DyadicSet& set) const;  // f * chi_set

    friend StepFn operator+(const StepFn& a, const StepFn& b);
    friend StepFn operator-(const StepFn& a, const StepFn& b);
    friend StepFn operator-(const StepFn& a);
    friend StepFn operator*(const ComplexRational& s, const StepFn& f);
    friend StepFn operator*(const StepFn& f, const StepFn& g);  // pointwise
    StepFn& operator+=(const StepFn& b) { return *this = *this + b; }
    StepFn& operator-=(const StepFn& b) { return *this = *this - b; }

    friend bool operator==(const StepFn& a, const StepFn& b);

private:
    void canonicalize();

    std::vector<Rational> breaks_;
    std::vector<ComplexRational> values_;
};

std::ostream& operator<<(std::ostream& os, const StepFn& f);

/// Union of the breakpoint lists.
std::vector<Rational> merge_breaks(const std::vector<Rational>& a, const std::vector<Rational>& b);

/// Rewrites f and g on one shared breakpoint list; both outputs are
/// pointwise equal to the inputs.
std::pair<StepFn, StepFn> refine_common(const StepFn& f, const StepFn& g);

/// Exact pointwise linear combination, canonical.
StepFn linear_combine(const std::vector<std::pair<ComplexRational, StepFn>>& terms);

inline DyadicSet support(const StepFn& f) { return f.support(); }
inline Interval norm_p(const StepFn& f, const Exponent& p, long k) { return f.norm(p, k); }

/// f is a subvector of g: f agrees with g wherever f is nonzero.
bool subvector_le(const StepFn& f, const StepFn& g);

/// True when the supports intersect in a null set.
bool disjointly_supported(const StepFn& f, const StepFn& g);

/// f restricted to the set where f = g: the greatest common subvector.
StepFn meet(const StepFn& f, const StepFn& g);

/// s with supp(s) in supp(f) and s * f = chi_supp(f) exactly.
StepFn reciprocal_witness(const StepFn& f);

}  // namespace lpiso
