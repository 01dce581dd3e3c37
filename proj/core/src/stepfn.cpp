#include "lpiso/stepfn.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>

namespace lpiso {

namespace {

Rational clamp01(const Rational& t) {
    if (sgn(t) < 0) {
        return 0;
    }
    if (t > 1) {
        return 1;
    }
    return t;
}

long bit_length(std::size_t n) {
    long b = 0;
    while (n > 0) {
        ++b;
        n >>= 1;
    }
    return b;
}

}  // namespace

// ---------------------------------------------------------------- DyadicSet

DyadicSet::DyadicSet(std::vector<Span> spans) {
    for (auto& s : spans) {
        s.lo = clamp01(s.lo);
        s.hi = clamp01(s.hi);
    }
    std::erase_if(spans, [](const Span& s) { return s.lo >= s.hi; });
    std::sort(spans.begin(), spans.end(), [](const Span& a, const Span& b) { return a.lo < b.lo; });
    for (auto& s : spans) {
        if (!spans_.empty() && s.lo <= spans_.back().hi) {
            spans_.back().hi = std::max(spans_.back().hi, s.hi);
        } else {
            spans_.push_back(std::move(s));
        }
    }
}

DyadicSet DyadicSet::interval(Rational lo, Rational hi) {
    return DyadicSet(std::vector<Span>{Span{std::move(lo), std::move(hi)}});
}

Rational DyadicSet::measure() const {
    Rational m = 0;
    for (const auto& s : spans_) {
        m += s.length();
    }
    return m;
}

bool DyadicSet::contains(const Rational& t) const {
    return std::any_of(spans_.begin(), spans_.end(),
                       [&](const Span& s) { return s.lo <= t && t < s.hi; });
}

// Spans are sorted, disjoint and maximal, so each span of a subset lies
// inside a single span of the superset.
bool DyadicSet::subset_of(const DyadicSet& other) const {
    std::size_t j = 0;
    for (const auto& s : spans_) {
        while (j < other.spans_.size() && other.spans_[j].hi <= s.lo) {
            ++j;
        }
        if (j == other.spans_.size() || s.lo < other.spans_[j].lo || other.spans_[j].hi < s.hi) {
            return false;
        }
    }
    return true;
}

bool DyadicSet::intersects(const DyadicSet& other) const {
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < spans_.size() && j < other.spans_.size()) {
        const Span& x = spans_[i];
        const Span& y = other.spans_[j];
        if (x.lo < y.hi && y.lo < x.hi) {
            return true;
        }
        if (x.hi < y.hi) {
            ++i;
        } else {
            ++j;
        }
    }
    return false;
}

DyadicSet operator|(const DyadicSet& a, const DyadicSet& b) {
    std::vector<Span> all = a.spans_;
    all.insert(all.end(), b.spans_.begin(), b.spans_.end());
    return DyadicSet(std::move(all));
}

DyadicSet operator&(const DyadicSet& a, const DyadicSet& b) {
    std::vector<Span> out;
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < a.spans_.size() && j < b.spans_.size()) {
        const Span& x = a.spans_[i];
        const Span& y = b.spans_[j];
        Rational lo = std::max(x.lo, y.lo);
        Rational hi = std::min(x.hi, y.hi);
        if (lo < hi) {
            out.push_back({lo, hi});
        }
        if (x.hi < y.hi) {
            ++i;
        } else {
            ++j;
        }
    }
    return DyadicSet(std::move(out));
}

DyadicSet operator-(const DyadicSet& a, const DyadicSet& b) {
    std::vector<Span> gaps;
    Rational cursor = 0;
    for (const auto& s : b.spans_) {
        if (cursor < s.lo) {
            gaps.push_back({cursor, s.lo});
        }
        cursor = s.hi;
    }
    if (cursor < 1) {
        gaps.push_back({cursor, Rational(1)});
    }
    return a & DyadicSet(std::move(gaps));
}

bool operator<(const DyadicSet& a, const DyadicSet& b) {
    return std::lexicographical_compare(
        a.spans_.begin(), a.spans_.end(), b.spans_.begin(), b.spans_.end(),
        [](const Span& x, const Span& y) { return x.lo != y.lo ? x.lo < y.lo : x.hi < y.hi; });
}

std::ostream& operator<<(std::ostream& os, const DyadicSet& s) {
    if (s.empty()) {
        return os << "{}";
    }
    bool first = true;
    for (const auto& sp : s.spans()) {
        os << (first ? "" : " u ") << "[" << to_string(sp.lo) << "," << to_string(sp.hi) << ")";
        first = false;
    }
    return os;
}

// ------------------------------------------------------------------- StepFn

StepFn::StepFn() : breaks_{Rational(0), Rational(1)}, values_{ComplexRational()} {}

StepFn StepFn::on_breaks(std::vector<Rational> breaks, std::vector<ComplexRational> values,
                         bool canonicalize) {
    if (breaks.size() < 2 || values.size() + 1 != breaks.size() || breaks.front() != 0 ||
        breaks.back() != 1) {
        throw std::invalid_argument("StepFn: breakpoints must run from 0 to 1 with one value per cell");
    }
    for (std::size_t j = 0; j + 1 < breaks.size(); ++j) {
        if (!(breaks[j] < breaks[j + 1])) {
            throw std::invalid_argument("StepFn: breakpoints must be strictly increasing");
        }
    }
    StepFn f;
    f.breaks_ = std::move(breaks);
    f.values_ = std::move(values);
    if (canonicalize) {
        f.canonicalize();
    }
    return f;
}

StepFn StepFn::from_pieces(const std::vector<Piece>& pieces) {
    std::vector<Rational> pts{Rational(0), Rational(1)};
    for (const auto& pc : pieces) {
        pts.push_back(clamp01(pc.lo));
        pts.push_back(clamp01(pc.hi));
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    std::vector<ComplexRational> vals(pts.size() - 1);
    for (const auto& pc : pieces) {
        Rational lo = clamp01(pc.lo);
        Rational hi = clamp01(pc.hi);
        if (lo >= hi) {
            continue;
        }
        auto first = std::lower_bound(pts.begin(), pts.end(), lo) - pts.begin();
        for (auto j = first; pts[j] < hi; ++j) {
            vals[j] += pc.value;
        }
    }
    return on_breaks(std::move(pts), std::move(vals));
}

StepFn StepFn::indicator(const DyadicSet& set, const ComplexRational& value) {
    std::vector<Piece> pieces;
    for (const auto& s : set.spans()) {
        pieces.push_back({s.lo, s.hi, value});
    }
    return from_pieces(pieces);
}

StepFn StepFn::indicator(const Rational& lo, const Rational& hi, const ComplexRational& value) {
    return from_pieces({Piece{lo, hi, value}});
}

void StepFn::canonicalize() {
    std::vector<Rational> nb{breaks_.front()};
    std::vector<ComplexRational> nv;
    for (std::size_t j = 0; j < values_.size(); ++j) {
        if (!nv.empty() && nv.back() == values_[j]) {
            nb.back() = breaks_[j + 1];
        } else {
            nv.push_back(values_[j]);
            nb.push_back(breaks_[j + 1]);
        }
    }
    breaks_ = std::move(nb);
    values_ = std::move(nv);
}

ComplexRational StepFn::at(const Rational& t) const {
    if (t < 0 || t > 1) {
        throw std::out_of_range("StepFn::at outside [0, 1]");
    }
    auto it = std::upper_bound(breaks_.begin(), breaks_.end(), t);
    std::size_t j = (it == breaks_.begin()) ? 0 : static_cast<std::size_t>(it - breaks_.begin()) - 1;
    return values_[std::min(j, values_.size() - 1)];
}

bool StepFn::is_zero() const {
    return std::all_of(values_.begin(), values_.end(), [](const auto& v) { return v.is_zero(); });
}

std::vector<StepFn::Piece> StepFn::pieces() const {
    std::vector<Piece> out;
    for (std::size_t j = 0; j < values_.size(); ++j) {
        if (!values_[j].is_zero()) {
            out.push_back({breaks_[j], breaks_[j + 1], values_[j]});
        }
    }
    return out;
}

std::vector<ComplexRational> StepFn::values_on(const std::vector<Rational>& finer) const {
    std::vector<ComplexRational> out;
    out.reserve(finer.size() - 1);
    std::size_t j = 0;
    for (std::size_t i = 0; i + 1 < finer.size(); ++i) {
        while (breaks_[j + 1] <= finer[i]) {
            ++j;
        }
        out.push_back(values_[j]);
    }
    return out;
}

DyadicSet StepFn::support() const {
    std::vector<Span> spans;
    for (std::size_t j = 0; j < values_.size(); ++j) {
        if (!values_[j].is_zero()) {
            spans.push_back({breaks_[j], breaks_[j + 1]});
        }
    }
    return DyadicSet(std::move(spans));
}

Interval StepFn::mass(const Exponent& p, long k) const {
    const long kk = k + bit_length(values_.size()) + 2;
    Interval total(Rational(0));
    for (std::size_t j = 0; j < values_.size(); ++j) {
        if (values_[j].is_zero()) {
            continue;
        }
        total += cell_length(j) * pow_abs(values_[j], p, kk);
    }
    if (total.is_point()) {
        return total;
    }
    return round_out(total, kk);
}

Interval StepFn::norm(const Exponent& p, long k) const {
    if (is_zero()) {
        return Interval(Rational(0));
    }
    if (p.is_rational() && p.value() == 1) {
        return mass(p, k);
    }
    return refine_until(k, [&](long j) { return root(mass(p, j), p, j); });
}

StepFn StepFn::restrict_to(const DyadicSet& set) const { return *this * indicator(set); }

namespace {

template <class Op>
StepFn combine(const StepFn& a, const StepFn& b, Op op) {
    auto br = merge_breaks(a.breaks(), b.breaks());
    auto va = a.values_on(br);
    auto vb = b.values_on(br);
    std::vector<ComplexRational> out(va.size());
    for (std::size_t j = 0; j < va.size(); ++j) {
        out[j] = op(va[j], vb[j]);
    }
    return StepFn::on_breaks(std::move(br), std::move(out));
}

}  // namespace

StepFn operator+(const StepFn& a, const StepFn& b) {
    return combine(a, b, [](const auto& x, const auto& y) { return x + y; });
}

StepFn operator-(const StepFn& a, const StepFn& b) {
    return combine(a, b, [](const auto& x, const auto& y) { return x - y; });
}

StepFn operator-(const StepFn& a) { return ComplexRational(-1) * a; }

StepFn operator*(const ComplexRational& s, const StepFn& f) {
    std::vector<ComplexRational> vals;
    vals.reserve(f.values_.size());
    for (const auto& v : f.values_) {
        vals.push_back(s * v);
    }
    return StepFn::on_breaks(f.breaks_, std::move(vals));
}

StepFn operator*(const StepFn& f, const StepFn& g) {
    return combine(f, g, [](const auto& x, const auto& y) { return x * y; });
}

bool operator==(const StepFn& a, const StepFn& b) {
    auto br = merge_breaks(a.breaks_, b.breaks_);
    return a.values_on(br) == b.values_on(br);
}

std::ostream& operator<<(std::ostream& os, const StepFn& f) {
    auto ps = f.pieces();
    if (ps.empty()) {
        return os << "0";
    }
    bool first = true;
    for (const auto& pc : ps) {
        os << (first ? "" : " + ") << "(" << pc.value << ")[" << to_string(pc.lo) << ","
           << to_string(pc.hi) << ")";
        first = false;
    }
    return os;
}

std::vector<Rational> merge_breaks(const std::vector<Rational>& a, const std::vector<Rational>& b) {
    std::vector<Rational> out;
    out.reserve(a.size() + b.size());
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

std::pair<StepFn, StepFn> refine_common(const StepFn& f, const StepFn& g) {
    auto br = merge_breaks(f.breaks(), g.breaks());
    auto vf = f.values_on(br);
    auto vg = g.values_on(br);
    return {StepFn::on_breaks(br, std::move(vf), false), StepFn::on_breaks(br, std::move(vg), false)};
}

StepFn linear_combine(const std::vector<std::pair<ComplexRational, StepFn>>& terms) {
    std::vector<Rational> br{Rational(0), Rational(1)};
    for (const auto& [c, f] : terms) {
        br = merge_breaks(br, f.breaks());
    }
    std::vector<ComplexRational> acc(br.size() - 1);
    for (const auto& [c, f] : terms) {
        if (c.is_zero()) {
            continue;
        }
        auto v = f.values_on(br);
        for (std::size_t j = 0; j < acc.size(); ++j) {
            if (!v[j].is_zero()) {
                acc[j] += c * v[j];
            }
        }
    }
    return StepFn::on_breaks(std::move(br), std::move(acc));
}

bool subvector_le(const StepFn& f, const StepFn& g) {
    auto br = merge_breaks(f.breaks(), g.breaks());
    auto vf = f.values_on(br);
    auto vg = g.values_on(br);
    for (std::size_t j = 0; j < vf.size(); ++j) {
        if (!vf[j].is_zero() && !(vf[j] == vg[j])) {
            return false;
        }
    }
    return true;
}

bool disjointly_supported(const StepFn& f, const StepFn& g) {
    auto br = merge_breaks(f.breaks(), g.breaks());
    auto vf = f.values_on(br);
    auto vg = g.values_on(br);
    for (std::size_t j = 0; j < vf.size(); ++j) {
        if (!vf[j].is_zero() && !vg[j].is_zero()) {
            return false;
        }
    }
    return true;
}

StepFn meet(const StepFn& f, const StepFn& g) {
    auto br = merge_breaks(f.breaks(), g.breaks());
    auto vf = f.values_on(br);
    auto vg = g.values_on(br);
    for (std::size_t j = 0; j < vf.size(); ++j) {
        if (!(vf[j] == vg[j])) {
            vf[j] = ComplexRational();
        }
    }
    return StepFn::on_breaks(std::move(br), std::move(vf));
}

StepFn reciprocal_witness(const StepFn& f) {
    std::vector<ComplexRational> vals;
    vals.reserve(f.cells());
    for (const auto& v : f.values()) {
        vals.push_back(v.is_zero() ? ComplexRational() : ComplexRational(1) / v);
    }
    return StepFn::on_breaks(f.breaks(), std::move(vals));
}

}  // namespace lpiso
