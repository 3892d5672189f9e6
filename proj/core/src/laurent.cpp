#include "p1glue/laurent.hpp"

#include <algorithm>
#include <sstream>

namespace p1glue {

namespace {

void require_same_ring(const RingPtr& a, const RingPtr& b) {
    if (!Ring::same(a, b))
        throw MixedRingsError("operands live in " + a->name() + " and " + b->name());
}

std::optional<int> min_opt(std::optional<int> a, std::optional<int> b) {
    if (!a) return b;
    if (!b) return a;
    return std::min(*a, *b);
}

bool is_composite_zmod(const RingPtr& ring) {
    return ring->kind() == Ring::Kind::integers_mod && ring->factorization().size() > 1;
}

}  // namespace

// ---------------------------------------------------------------------------
// LaurentPoly

LaurentPoly LaurentPoly::one(const RingPtr& ring) {
    return monomial(RingElement::one(ring), 0);
}

LaurentPoly LaurentPoly::monomial(const RingElement& c, int degree) {
    LaurentPoly p(c.ring());
    p.set(degree, c);
    return p;
}

LaurentPoly LaurentPoly::from_coeffs(const RingPtr& ring, int low,
                                     const std::vector<RingElement>& coeffs) {
    LaurentPoly p(ring);
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        if (!Ring::same(coeffs[i].ring(), ring)) throw MixedRingsError();
        p.set(low + static_cast<int>(i), coeffs[i]);
    }
    return p;
}

LaurentPoly LaurentPoly::from_ints(const RingPtr& ring, int low,
                                   const std::vector<long long>& coeffs) {
    LaurentPoly p(ring);
    for (std::size_t i = 0; i < coeffs.size(); ++i)
        p.set(low + static_cast<int>(i), RingElement::from_int(ring, coeffs[i]));
    return p;
}

void LaurentPoly::set(int degree, RingElement c) {
    if (c.is_zero())
        coeffs_.erase(degree);
    else
        coeffs_.insert_or_assign(degree, std::move(c));
}

bool LaurentPoly::is_one() const {
    return coeffs_.size() == 1 && coeffs_.begin()->first == 0 &&
           coeffs_.begin()->second.is_one();
}

RingElement LaurentPoly::coeff(int degree) const {
    auto it = coeffs_.find(degree);
    return it == coeffs_.end() ? RingElement::zero(ring_) : it->second;
}

std::optional<int> LaurentPoly::min_degree() const {
    if (coeffs_.empty()) return std::nullopt;
    return coeffs_.begin()->first;
}

std::optional<int> LaurentPoly::max_degree() const {
    if (coeffs_.empty()) return std::nullopt;
    return coeffs_.rbegin()->first;
}

int LaurentPoly::degree_reach() const {
    if (coeffs_.empty()) return 0;
    return std::max({*max_degree(), -*min_degree(), 0});
}

LaurentPoly LaurentPoly::shifted(int k) const {
    LaurentPoly p(ring_);
    for (const auto& [d, c] : coeffs_) p.coeffs_.emplace(d + k, c);
    return p;
}

LaurentPoly LaurentPoly::truncated_below(int bound) const {
    LaurentPoly p(ring_);
    for (const auto& [d, c] : coeffs_) {
        if (d >= bound) break;
        p.coeffs_.emplace(d, c);
    }
    return p;
}

LaurentPoly LaurentPoly::truncated_from(int bound) const {
    LaurentPoly p(ring_);
    for (auto it = coeffs_.lower_bound(bound); it != coeffs_.end(); ++it)
        p.coeffs_.emplace(it->first, it->second);
    return p;
}

LaurentPoly LaurentPoly::pow(int e) const {
    LaurentPoly r = one(ring_);
    LaurentPoly base = *this;
    while (e > 0) {
        if (e & 1) r = r * base;
        base = base * base;
        e >>= 1;
    }
    return r;
}

LaurentPoly LaurentPoly::operator-() const {
    LaurentPoly p(ring_);
    for (const auto& [d, c] : coeffs_) p.coeffs_.emplace(d, -c);
    return p;
}

LaurentPoly operator+(const LaurentPoly& a, const LaurentPoly& b) {
    require_same_ring(a.ring(), b.ring());
    LaurentPoly p = a;
    for (const auto& [d, c] : b.coeffs_) p.set(d, p.coeff(d) + c);
    return p;
}

LaurentPoly operator-(const LaurentPoly& a, const LaurentPoly& b) { return a + (-b); }

LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
    require_same_ring(a.ring(), b.ring());
    LaurentPoly p(a.ring());
    for (const auto& [da, ca] : a.coeffs_)
        for (const auto& [db, cb] : b.coeffs_) p.set(da + db, p.coeff(da + db) + ca * cb);
    return p;
}

bool operator==(const LaurentPoly& a, const LaurentPoly& b) {
    require_same_ring(a.ring(), b.ring());
    return a.coeffs_ == b.coeffs_;
}

LaurentPoly LaurentPoly::scaled(const RingElement& c) const {
    LaurentPoly p(ring_);
    for (const auto& [d, x] : coeffs_) p.set(d, x * c);
    return p;
}

std::string LaurentPoly::str() const {
    if (coeffs_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [d, c] : coeffs_) {
        if (!first) os << " + ";
        first = false;
        os << c.str();
        if (d != 0) os << "*z^" << d;
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// TruncatedSeries

void TruncatedSeries::normalize() {
    std::size_t lead = 0;
    while (lead < coeffs_.size() && coeffs_[lead].is_zero()) ++lead;
    if (lead > 0) {
        coeffs_.erase(coeffs_.begin(), coeffs_.begin() + static_cast<long>(lead));
        val_ += static_cast<int>(lead);
    }
    if (!prec_) {
        while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
        if (coeffs_.empty()) val_ = 0;
    } else if (coeffs_.empty()) {
        val_ = *prec_;
    }
}

TruncatedSeries TruncatedSeries::exact(const LaurentPoly& p) {
    TruncatedSeries s(p.ring());
    if (p.is_zero()) return s;
    const int lo = *p.min_degree();
    const int hi = *p.max_degree();
    s.val_ = lo;
    s.coeffs_.reserve(static_cast<std::size_t>(hi - lo + 1));
    for (int d = lo; d <= hi; ++d) s.coeffs_.push_back(p.coeff(d));
    s.normalize();
    return s;
}

TruncatedSeries TruncatedSeries::window(const RingPtr& ring, int val,
                                        std::vector<RingElement> coeffs,
                                        std::optional<int> prec) {
    if (prec && *prec - val != static_cast<int>(coeffs.size()))
        throw ParseError("series window size does not match [val, prec)");
    for (const auto& c : coeffs)
        if (!Ring::same(c.ring(), ring)) throw MixedRingsError();
    TruncatedSeries s(ring);
    s.val_ = val;
    s.coeffs_ = std::move(coeffs);
    s.prec_ = prec;
    s.normalize();
    return s;
}

RingElement TruncatedSeries::coeff(int degree) const {
    if (!knows(degree))
        throw Error("internal", "coefficient beyond the known window requested");
    if (degree < val_ || degree >= val_ + static_cast<int>(coeffs_.size()))
        return RingElement::zero(ring_);
    return coeffs_[static_cast<std::size_t>(degree - val_)];
}

TruncatedSeries TruncatedSeries::shifted(int k) const {
    TruncatedSeries s = *this;
    s.val_ += k;
    if (s.prec_) *s.prec_ += k;
    return s;
}

TruncatedSeries TruncatedSeries::truncated(int new_prec) const {
    const int p = prec_ ? std::min(new_prec, *prec_) : new_prec;
    TruncatedSeries s(ring_);
    s.prec_ = p;
    s.val_ = std::min(val_, p);
    const int n = p - s.val_;
    s.coeffs_.reserve(static_cast<std::size_t>(std::max(n, 0)));
    for (int d = s.val_; d < p; ++d) {
        const int idx = d - val_;
        s.coeffs_.push_back(idx >= 0 && idx < static_cast<int>(coeffs_.size())
                                ? coeffs_[static_cast<std::size_t>(idx)]
                                : RingElement::zero(ring_));
    }
    s.normalize();
    return s;
}

LaurentPoly TruncatedSeries::known_poly_below(int bound) const {
    LaurentPoly p(ring_);
    for (int i = 0; i < static_cast<int>(coeffs_.size()); ++i) {
        const int d = val_ + i;
        if (d >= bound) break;
        if (!coeffs_[static_cast<std::size_t>(i)].is_zero())
            p = p + LaurentPoly::monomial(coeffs_[static_cast<std::size_t>(i)], d);
    }
    return p;
}

std::optional<LaurentPoly> TruncatedSeries::to_poly() const {
    if (!is_exact()) return std::nullopt;
    return known_poly_below(val_ + static_cast<int>(coeffs_.size()) + 1);
}

TruncatedSeries TruncatedSeries::operator-() const {
    TruncatedSeries s = *this;
    for (auto& c : s.coeffs_) c = -c;
    return s;
}

TruncatedSeries operator+(const TruncatedSeries& a, const TruncatedSeries& b) {
    require_same_ring(a.ring(), b.ring());
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    const std::optional<int> prec = min_opt(a.prec_, b.prec_);
    const int enda = a.val_ + static_cast<int>(a.coeffs_.size());
    const int endb = b.val_ + static_cast<int>(b.coeffs_.size());
    const int lo = std::min(a.val_, b.val_);
    const int hi = prec ? *prec : std::max(enda, endb);
    std::vector<RingElement> c;
    c.reserve(static_cast<std::size_t>(std::max(hi - lo, 0)));
    for (int d = lo; d < hi; ++d) {
        RingElement ca = (d >= a.val_ && d < enda) ? a.coeffs_[static_cast<std::size_t>(d - a.val_)]
                                                   : RingElement::zero(a.ring());
        RingElement cb = (d >= b.val_ && d < endb) ? b.coeffs_[static_cast<std::size_t>(d - b.val_)]
                                                   : RingElement::zero(b.ring());
        c.push_back(ca + cb);
    }
    return TruncatedSeries::window(a.ring(), lo, std::move(c), prec);
}

TruncatedSeries operator-(const TruncatedSeries& a, const TruncatedSeries& b) {
    return a + (-b);
}

TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) {
    require_same_ring(a.ring(), b.ring());
    if (a.is_zero() || b.is_zero()) return TruncatedSeries::zero(a.ring());
    std::optional<int> prec;
    if (a.prec_) prec = *a.prec_ + b.val_;
    if (b.prec_) prec = min_opt(prec, *b.prec_ + a.val_);
    const int lo = a.val_ + b.val_;
    const int hi = prec ? *prec
                        : a.val_ + static_cast<int>(a.coeffs_.size()) + b.val_ +
                              static_cast<int>(b.coeffs_.size()) - 1;
    const int n = std::max(hi - lo, 0);
    std::vector<RingElement> c(static_cast<std::size_t>(n), RingElement::zero(a.ring()));
    for (int i = 0; i < static_cast<int>(a.coeffs_.size()); ++i) {
        if (a.coeffs_[static_cast<std::size_t>(i)].is_zero()) continue;
        for (int j = 0; j < static_cast<int>(b.coeffs_.size()); ++j) {
            const int d = a.val_ + i + b.val_ + j;
            if (d >= hi) break;
            auto& slot = c[static_cast<std::size_t>(d - lo)];
            slot = slot + a.coeffs_[static_cast<std::size_t>(i)] *
                              b.coeffs_[static_cast<std::size_t>(j)];
        }
    }
    return TruncatedSeries::window(a.ring(), lo, std::move(c), prec);
}

bool operator==(const TruncatedSeries& a, const TruncatedSeries& b) {
    require_same_ring(a.ring(), b.ring());
    return a.val_ == b.val_ && a.prec_ == b.prec_ && a.coeffs_ == b.coeffs_;
}

TruncatedSeries TruncatedSeries::scaled(const RingElement& c) const {
    if (c.is_zero()) return zero(ring_);
    TruncatedSeries s = *this;
    for (auto& x : s.coeffs_) x = x * c;
    s.normalize();
    return s;
}

bool TruncatedSeries::agrees_with(const TruncatedSeries& other) const {
    require_same_ring(ring_, other.ring_);
    const int enda = val_ + static_cast<int>(coeffs_.size());
    const int endb = other.val_ + static_cast<int>(other.coeffs_.size());
    const int lo = std::min(val_, other.val_);
    const auto hi_opt = min_opt(prec_, other.prec_);
    const int hi = hi_opt ? *hi_opt : std::max(enda, endb);
    for (int d = lo; d < hi; ++d) {
        RingElement ca = (d >= val_ && d < enda) ? coeffs_[static_cast<std::size_t>(d - val_)]
                                                 : RingElement::zero(ring_);
        RingElement cb = (d >= other.val_ && d < endb)
                             ? other.coeffs_[static_cast<std::size_t>(d - other.val_)]
                             : RingElement::zero(ring_);
        if (ca != cb) return false;
    }
    return true;
}

std::string TruncatedSeries::str() const {
    std::ostringstream os;
    bool any = false;
    for (int i = 0; i < static_cast<int>(coeffs_.size()); ++i) {
        if (coeffs_[static_cast<std::size_t>(i)].is_zero()) continue;
        if (any) os << " + ";
        any = true;
        os << coeffs_[static_cast<std::size_t>(i)].str();
        if (val_ + i != 0) os << "*z^" << (val_ + i);
    }
    if (!any) os << "0";
    if (prec_) os << " + O(z^" << *prec_ << ")";
    return os.str();
}

// ---------------------------------------------------------------------------
// BFraction

BFraction::BFraction(LaurentPoly num, LaurentPoly den)
    : num_(std::move(num)), den_(std::move(den)) {
    require_same_ring(num_.ring(), den_.ring());
    if (den_.is_zero() || *den_.min_degree() < 0)
        throw ParseError("fraction denominator must be a polynomial in z");
    if (classify_element(den_.coeff(0)).kind != ElementClass::Kind::unit)
        throw ParseError("fraction denominator must have a unit constant term");
}

BFraction BFraction::from_poly(LaurentPoly num) {
    auto one = LaurentPoly::one(num.ring());
    return BFraction(std::move(num), std::move(one));
}

bool BFraction::same_value(const BFraction& other) const {
    return num_ * other.den_ == other.num_ * den_;
}

bool BFraction::is_one_value() const { return num_ == den_; }

BFraction BFraction::operator-() const { return BFraction(-num_, den_); }

BFraction operator+(const BFraction& a, const BFraction& b) {
    if (a.den_ == b.den_) return BFraction(a.num_ + b.num_, a.den_);
    return BFraction(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

BFraction operator-(const BFraction& a, const BFraction& b) { return a + (-b); }

BFraction operator*(const BFraction& a, const BFraction& b) {
    return BFraction(a.num_ * b.num_, a.den_ * b.den_);
}

bool operator==(const BFraction& a, const BFraction& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
}

TruncatedSeries BFraction::expand(int prec) const {
    if (num_.is_zero()) return TruncatedSeries::zero(ring());
    const int val = *num_.min_degree();
    const int len = prec - val;
    if (len <= 0)
        return TruncatedSeries::window(ring(), prec, {}, prec);
    // den^-1 to O(z^len) by the standard unit recursion, then convolve.
    const RingElement inv0 = *try_invert(den_.coeff(0));
    const int dmax = *den_.max_degree();
    std::vector<RingElement> dinv;
    dinv.reserve(static_cast<std::size_t>(len));
    dinv.push_back(inv0);
    for (int t = 1; t < len; ++t) {
        RingElement acc = RingElement::zero(ring());
        for (int u = 1; u <= std::min(t, dmax); ++u)
            acc = acc + den_.coeff(u) * dinv[static_cast<std::size_t>(t - u)];
        dinv.push_back(-(inv0 * acc));
    }
    std::vector<RingElement> out(static_cast<std::size_t>(len), RingElement::zero(ring()));
    for (const auto& [d, c] : num_.coeffs()) {
        for (int t = 0; d - val + t < len; ++t)
            out[static_cast<std::size_t>(d - val + t)] =
                out[static_cast<std::size_t>(d - val + t)] +
                c * dinv[static_cast<std::size_t>(t)];
    }
    return TruncatedSeries::window(ring(), val, std::move(out), prec);
}

std::optional<LaurentPoly> BFraction::to_laurent() const {
    if (!ring()->is_field())
        throw UnsupportedRingError("exact fraction division needs a field base, got " +
                                   ring()->name());
    if (num_.is_zero()) return LaurentPoly::zero(ring());
    if (den_.is_one()) return num_;
    const int shift = *num_.min_degree();
    LaurentPoly r = num_.shifted(-shift);  // polynomial remainder, degrees >= 0
    const int bound = *r.max_degree() - *den_.max_degree();
    const RingElement inv0 = *try_invert(den_.coeff(0));
    LaurentPoly q(ring());
    while (!r.is_zero()) {
        const int low = *r.min_degree();
        if (low > bound) return std::nullopt;
        const RingElement c = r.coeff(low) * inv0;
        q = q + LaurentPoly::monomial(c, low);
        r = r - den_.scaled(c).shifted(low);
    }
    return q.shifted(shift);
}

std::string BFraction::str() const { return "(" + num_.str() + ") / (" + den_.str() + ")"; }

// ---------------------------------------------------------------------------
// unit classification

namespace {

// Scan represented coefficients in ascending degree; valid whenever no
// "other" coefficient appears below the first unit.
SeriesClass classify_scan(const RingPtr& ring,
                          const std::vector<std::pair<int, RingElement>>& window,
                          bool exact, const LaurentPoly& whole) {
    LaurentPoly low(ring);
    for (const auto& [d, c] : window) {
        const auto cls = classify_element(c);
        if (cls.kind == ElementClass::Kind::unit) {
            UnitWitness w;
            w.unit_degree = d;
            w.nil_part = -low;
            w.unit_part = whole.truncated_from(d);
            w.window_only = !exact;
            SeriesClass out;
            out.kind = SeriesClass::Kind::unit;
            out.witnesses.push_back(std::move(w));
            return out;
        }
        if (cls.kind == ElementClass::Kind::other)
            throw UnsupportedRingError(
                "coefficient of z^" + std::to_string(d) +
                " is neither unit nor nilpotent in " + ring->name());
        if (!c.is_zero()) low = low + LaurentPoly::monomial(c, d);
    }
    SeriesClass out;
    if (!exact) {
        out.kind = SeriesClass::Kind::undecidable;
        return out;
    }
    // exact with every coefficient nilpotent: the value itself is nilpotent
    out.kind = SeriesClass::Kind::not_unit;
    int index = 1;
    LaurentPoly p = whole;
    while (!p.is_zero()) {
        p = p * whole;
        ++index;
    }
    out.nilpotency_index = index;
    return out;
}

LaurentPoly project_poly(const LaurentPoly& f, const RingPtr& component) {
    LaurentPoly out(component);
    for (const auto& [d, c] : f.coeffs()) {
        auto pc = crt_project(c, component);
        if (!pc.is_zero()) out = out + LaurentPoly::monomial(pc, d);
    }
    return out;
}

TruncatedSeries project_series(const TruncatedSeries& f, const RingPtr& component) {
    std::vector<RingElement> c;
    c.reserve(f.window_coeffs().size());
    for (const auto& x : f.window_coeffs()) c.push_back(crt_project(x, component));
    return TruncatedSeries::window(component, f.val_floor(), std::move(c), f.prec());
}

}  // namespace

SeriesClass classify_series_unit(const LaurentPoly& f) {
    const auto& ring = f.ring();
    if (is_composite_zmod(ring)) {
        SeriesClass out;
        out.kind = SeriesClass::Kind::unit;
        std::optional<int> max_index = 0;
        bool all_nilpotent = true;
        for (const auto& comp : crt_components(ring)) {
            auto sub = classify_series_unit(project_poly(f, comp));
            if (sub.kind == SeriesClass::Kind::unit) {
                all_nilpotent = false;
                out.witnesses.push_back(std::move(sub.witnesses[0]));
                out.component_rings.push_back(comp);
            } else {
                out.kind = SeriesClass::Kind::not_unit;
                if (sub.nilpotency_index)
                    max_index = std::max(*max_index, *sub.nilpotency_index);
            }
        }
        if (out.kind == SeriesClass::Kind::not_unit) {
            out.witnesses.clear();
            out.component_rings.clear();
            if (all_nilpotent) out.nilpotency_index = max_index;
        }
        return out;
    }
    std::vector<std::pair<int, RingElement>> window;
    window.reserve(f.coeffs().size());
    for (const auto& [d, c] : f.coeffs()) window.emplace_back(d, c);
    return classify_scan(ring, window, /*exact=*/true, f);
}

SeriesClass classify_series_unit(const TruncatedSeries& f) {
    if (f.is_exact()) return classify_series_unit(*f.to_poly());
    const auto& ring = f.ring();
    if (is_composite_zmod(ring)) {
        SeriesClass out;
        out.kind = SeriesClass::Kind::unit;
        for (const auto& comp : crt_components(ring)) {
            auto sub = classify_series_unit(project_series(f, comp));
            if (sub.kind != SeriesClass::Kind::unit) {
                out.kind = SeriesClass::Kind::undecidable;
                out.witnesses.clear();
                out.component_rings.clear();
                return out;
            }
            out.witnesses.push_back(std::move(sub.witnesses[0]));
            out.component_rings.push_back(comp);
        }
        return out;
    }
    std::vector<std::pair<int, RingElement>> window;
    window.reserve(f.window_coeffs().size());
    for (int i = 0; i < static_cast<int>(f.window_coeffs().size()); ++i)
        window.emplace_back(f.val_floor() + i, f.window_coeffs()[static_cast<std::size_t>(i)]);
    return classify_scan(ring, window, /*exact=*/false,
                         f.known_poly_below(f.prec().value()));
}

// ---------------------------------------------------------------------------
// inversion

namespace {

// Minimal s >= 1 with nil_part^s = 0; nilradical_exponent always suffices.
int vanishing_power(const LaurentPoly& nil_part) {
    int s = 1;
    LaurentPoly p = nil_part;
    while (!p.is_zero()) {
        p = p * nil_part;
        ++s;
    }
    return s;
}

BFraction invert_local(const BFraction& f) {
    const auto cls = classify_series_unit(f.num());
    if (cls.kind == SeriesClass::Kind::not_unit) {
        std::string msg = "numerator is not a unit of R((z))";
        if (cls.nilpotency_index)
            msg += " (nilpotent, index " + std::to_string(*cls.nilpotency_index) + ")";
        throw NotAUnitError(msg);
    }
    if (cls.kind == SeriesClass::Kind::undecidable)
        throw UndecidableError("unit classification of the numerator is undecidable");
    const UnitWitness& w = cls.witnesses[0];
    const int s = vanishing_power(w.nil_part);
    // M = N^{s-1} + N^{s-2} Q + ... + Q^{s-1}, so that num * M = Q^s.
    LaurentPoly m(f.ring());
    LaurentPoly qpow = LaurentPoly::one(f.ring());
    for (int t = 0; t < s; ++t) {
        m = m + w.nil_part.pow(s - 1 - t) * qpow;
        qpow = qpow * w.unit_part;
    }
    // qpow = Q^s now; its lowest degree is s * unit_degree with unit coefficient.
    const int shift = -s * w.unit_degree;
    return BFraction((f.den() * m).shifted(shift), qpow.shifted(shift));
}

}  // namespace

BFraction invert_in_b(const BFraction& f) {
    const auto& ring = f.ring();
    if (!is_composite_zmod(ring)) return invert_local(f);
    const auto whole = classify_series_unit(f.num());
    if (whole.kind != SeriesClass::Kind::unit) {
        std::string msg = "numerator is not a unit of R((z)) over " + ring->name();
        if (whole.nilpotency_index)
            msg += " (nilpotent, index " + std::to_string(*whole.nilpotency_index) + ")";
        throw NotAUnitError(msg);
    }
    // invert each prime-power component, then CRT the coefficients back
    std::vector<BFraction> parts;
    const auto comps = crt_components(ring);
    for (const auto& comp : comps)
        parts.push_back(invert_local(BFraction(project_poly(f.num(), comp),
                                               project_poly(f.den(), comp))));
    auto combine = [&](auto pick) {
        LaurentPoly out(ring);
        std::vector<int> degrees;
        for (const auto& p : parts)
            for (const auto& [d, c] : pick(p).coeffs()) degrees.push_back(d);
        std::sort(degrees.begin(), degrees.end());
        degrees.erase(std::unique(degrees.begin(), degrees.end()), degrees.end());
        for (int d : degrees) {
            std::vector<RingElement> cs;
            for (const auto& p : parts) cs.push_back(pick(p).coeff(d));
            auto c = crt_combine(ring, cs);
            if (!c.is_zero()) out = out + LaurentPoly::monomial(c, d);
        }
        return out;
    };
    return BFraction(combine([](const BFraction& p) -> const LaurentPoly& { return p.num(); }),
                     combine([](const BFraction& p) -> const LaurentPoly& { return p.den(); }));
}

BFraction invert_in_b(const LaurentPoly& f) { return invert_in_b(BFraction::from_poly(f)); }

TruncatedSeries invert_series_unit(const TruncatedSeries& f, int prec) {
    if (f.val_floor() < 0 && !f.window_coeffs().empty())
        throw NotAUnitError("series has a nonzero coefficient below degree 0");
    if (!f.knows(0)) throw UndecidableError("constant term lies beyond the known window");
    const auto inv0 = try_invert(f.coeff(0));
    if (!inv0) throw NotAUnitError("constant term is not a unit");
    const int target = f.prec() ? std::min(prec, *f.prec()) : prec;
    if (target <= 0) throw UndecidableError("requested precision is empty");
    const int fend = f.val_floor() + static_cast<int>(f.window_coeffs().size());
    std::vector<RingElement> out;
    out.reserve(static_cast<std::size_t>(target));
    out.push_back(*inv0);
    for (int t = 1; t < target; ++t) {
        RingElement acc = RingElement::zero(f.ring());
        for (int u = 1; u <= std::min(t, fend - 1); ++u)
            acc = acc + f.coeff(u) * out[static_cast<std::size_t>(t - u)];
        out.push_back(-(*inv0 * acc));
    }
    return TruncatedSeries::window(f.ring(), 0, std::move(out), target);
}

TruncatedSeries invert_series(const TruncatedSeries& f, int prec) {
    if (f.is_exact()) return invert_in_b(*f.to_poly()).expand(prec);
    const auto& ring = f.ring();
    if (is_composite_zmod(ring)) {
        const auto comps = crt_components(ring);
        std::vector<TruncatedSeries> parts;
        for (const auto& comp : comps) parts.push_back(invert_series(project_series(f, comp), prec));
        int lo = parts[0].val_floor();
        int hi = *parts[0].prec();
        for (const auto& p : parts) {
            lo = std::min(lo, p.val_floor());
            hi = std::min(hi, *p.prec());
        }
        std::vector<RingElement> cs;
        for (int d = lo; d < hi; ++d) {
            std::vector<RingElement> comp_cs;
            for (std::size_t i = 0; i < parts.size(); ++i)
                comp_cs.push_back(parts[i].knows(d) && d >= parts[i].val_floor()
                                      ? parts[i].coeff(d)
                                      : RingElement::zero(comps[i]));
            cs.push_back(crt_combine(ring, comp_cs));
        }
        return TruncatedSeries::window(ring, lo, std::move(cs), hi);
    }
    const auto cls = classify_series_unit(f);
    if (cls.kind == SeriesClass::Kind::not_unit)
        throw NotAUnitError("series is nilpotent, not invertible");
    if (cls.kind == SeriesClass::Kind::undecidable)
        throw UndecidableError("no unit coefficient inside the known window");
    const UnitWitness& w = cls.witnesses[0];
    const int s = vanishing_power(w.nil_part);
    const int j = w.unit_degree;
    // M = sum_{t<s} N^{s-1-t} Q^t with Q = f + N, so f * M = z^{sj} * unit.
    const TruncatedSeries q = f + TruncatedSeries::exact(w.nil_part);
    TruncatedSeries m = TruncatedSeries::zero(ring);
    TruncatedSeries qpow = TruncatedSeries::one(ring);
    for (int t = 0; t < s; ++t) {
        m = m + TruncatedSeries::exact(w.nil_part.pow(s - 1 - t)) * qpow;
        qpow = qpow * q;
    }
    const TruncatedSeries u = (f * m).shifted(-s * j);
    if (!u.knows(0))
        throw UndecidableError("window too small to reach the unit coefficient");
    const TruncatedSeries uinv = invert_series_unit(u, *u.prec());
    return (m * uinv).shifted(-s * j).truncated(prec);
}

}  // namespace p1glue
