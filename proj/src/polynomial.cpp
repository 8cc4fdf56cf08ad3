#include "strata/polynomial.hpp"

#include <algorithm>

namespace strata {

std::uint64_t total_degree(const Exps& e) {
    std::uint64_t d = 0;
    for (auto x : e) d += x;
    return d;
}

bool divides(const Exps& a, const Exps& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] > b[i]) return false;
    return true;
}

Exps exp_mul(const Exps& a, const Exps& b) {
    Exps r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

Exps exp_div(const Exps& a, const Exps& b) {
    Exps r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

Exps exp_lcm(const Exps& a, const Exps& b) {
    Exps r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = std::max(a[i], b[i]);
    return r;
}

OrderCmp::OrderCmp(const RingSpec& ring, const MonomialOrder& order) : kind_(order.kind) {
    if (order.kind == MonomialOrder::Kind::Block) {
        has_block_ = true;
        in_block_.assign(ring.nvars(), 0);
        for (const auto& v : order.block_vars) in_block_[ring.var_index(v)] = 1;
    }
}

namespace {

// grevlex on a masked subset of positions: higher degree wins, ties broken by
// the last non-zero difference being negative.
int grevlex_cmp_masked(const Exps& a, const Exps& b, const std::vector<char>* mask, char want) {
    std::int64_t da = 0, db = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (mask && (*mask)[i] != want) continue;
        da += a[i];
        db += b[i];
    }
    if (da != db) return da > db ? 1 : -1;
    for (std::size_t i = a.size(); i-- > 0;) {
        if (mask && (*mask)[i] != want) continue;
        if (a[i] != b[i]) return a[i] < b[i] ? 1 : -1;
    }
    return 0;
}

} // namespace

bool OrderCmp::greater(const Exps& a, const Exps& b) const {
    switch (kind_) {
    case MonomialOrder::Kind::Grevlex:
        return grevlex_cmp_masked(a, b, nullptr, 0) > 0;
    case MonomialOrder::Kind::Lex:
        for (std::size_t i = 0; i < a.size(); ++i)
            if (a[i] != b[i]) return a[i] > b[i];
        return false;
    case MonomialOrder::Kind::Block: {
        int c = grevlex_cmp_masked(a, b, &in_block_, 1);
        if (c != 0) return c > 0;
        return grevlex_cmp_masked(a, b, &in_block_, 0) > 0;
    }
    }
    return false;
}

Polynomial Polynomial::constant(const RingSpec& ring, const Coeff& c) {
    Polynomial p(ring);
    p.add_term(Exps(ring.nvars(), 0), c);
    return p;
}

Polynomial Polynomial::variable(const RingSpec& ring, const std::string& name, std::uint32_t power) {
    Polynomial p(ring);
    Exps e(ring.nvars(), 0);
    e[ring.var_index(name)] = power;
    p.add_term(e, Coeff(1));
    return p;
}

Polynomial Polynomial::monomial(const RingSpec& ring, const Exps& e, const Coeff& c) {
    Polynomial p(ring);
    p.add_term(e, c);
    return p;
}

bool Polynomial::is_constant() const {
    if (terms_.empty()) return true;
    return terms_.size() == 1 && total_degree(terms_.begin()->first) == 0;
}

std::uint64_t Polynomial::degree() const {
    std::uint64_t d = 0;
    for (const auto& [e, c] : terms_) d = std::max(d, total_degree(e));
    return d;
}

void Polynomial::add_term(const Exps& e, const Coeff& c) {
    if (e.size() != ring_.nvars()) throw Error("exponent vector length mismatch");
    Coeff r = ring_.reduce(c);
    if (r == 0) return;
    auto it = terms_.find(e);
    if (it == terms_.end()) {
        terms_.emplace(e, r);
    } else {
        it->second = ring_.add(it->second, r);
        if (it->second == 0) terms_.erase(it);
    }
}

Coeff Polynomial::coeff(const Exps& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? Coeff(0) : it->second;
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
    if (ring_ != o.ring_) throw Error("ring mismatch in +");
    Polynomial r = *this;
    for (const auto& [e, c] : o.terms_) r.add_term(e, c);
    return r;
}

Polynomial Polynomial::operator-(const Polynomial& o) const {
    if (ring_ != o.ring_) throw Error("ring mismatch in -");
    Polynomial r = *this;
    for (const auto& [e, c] : o.terms_) r.add_term(e, ring_.neg(c));
    return r;
}

Polynomial Polynomial::operator-() const {
    Polynomial r(ring_);
    for (const auto& [e, c] : terms_) r.terms_.emplace(e, ring_.neg(c));
    return r;
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
    if (ring_ != o.ring_) throw Error("ring mismatch in *");
    Polynomial r(ring_);
    for (const auto& [e1, c1] : terms_)
        for (const auto& [e2, c2] : o.terms_)
            r.add_term(exp_mul(e1, e2), ring_.mul(c1, c2));
    return r;
}

Polynomial Polynomial::scaled(const Coeff& c) const {
    Polynomial r(ring_);
    Coeff cc = ring_.reduce(c);
    if (cc == 0) return r;
    for (const auto& [e, a] : terms_) r.terms_.emplace(e, ring_.mul(a, cc));
    return r;
}

Polynomial Polynomial::pow(std::uint32_t n) const {
    Polynomial r = Polynomial::constant(ring_, Coeff(1));
    Polynomial base = *this;
    while (n > 0) {
        if (n & 1) r = r * base;
        base = base * base;
        n >>= 1;
    }
    return r;
}

Polynomial Polynomial::substitute(const std::map<std::string, Polynomial>& images,
                                  const RingSpec& target) const {
    // Per-variable image (identity by default), with cached powers.
    std::vector<Polynomial> image(ring_.nvars());
    std::vector<std::vector<Polynomial>> powers(ring_.nvars());
    for (std::size_t i = 0; i < ring_.nvars(); ++i) {
        auto it = images.find(ring_.variables()[i]);
        if (it != images.end()) {
            if (it->second.ring() != target) throw Error("substitution image in wrong ring");
            image[i] = it->second;
        } else {
            image[i] = Polynomial::variable(target, ring_.variables()[i]);
        }
        powers[i].push_back(Polynomial::constant(target, Coeff(1)));
    }
    auto power_of = [&](std::size_t i, std::uint32_t n) -> const Polynomial& {
        while (powers[i].size() <= n) powers[i].push_back(powers[i].back() * image[i]);
        return powers[i][n];
    };
    Polynomial result(target);
    for (const auto& [e, c] : terms_) {
        Polynomial term = Polynomial::constant(target, c);
        for (std::size_t i = 0; i < e.size(); ++i)
            if (e[i] > 0) term = term * power_of(i, e[i]);
        result = result + term;
    }
    return result;
}

Polynomial Polynomial::translated(const std::map<std::string, Coeff>& shifts) const {
    if (shifts.empty()) return *this;
    std::map<std::string, Polynomial> images;
    for (const auto& [v, c] : shifts) {
        Polynomial img = Polynomial::variable(ring_, v);
        img.add_term(Exps(ring_.nvars(), 0), c);
        images.emplace(v, img);
    }
    return substitute(images, ring_);
}

std::optional<Polynomial> Polynomial::divided_by_var_power(std::size_t var, std::uint32_t n) const {
    Polynomial r(ring_);
    for (const auto& [e, c] : terms_) {
        if (e[var] < n) return std::nullopt;
        Exps q = e;
        q[var] -= n;
        r.terms_.emplace(std::move(q), c);
    }
    return r;
}

const Exps& Polynomial::leading_exps(const OrderCmp& cmp) const {
    if (terms_.empty()) throw Error("leading term of zero polynomial");
    const Exps* best = &terms_.begin()->first;
    for (const auto& [e, c] : terms_)
        if (cmp.greater(e, *best)) best = &e;
    return *best;
}

Polynomial Polynomial::mapped_into(const RingSpec& target) const {
    if (target == ring_) return *this;
    if (target.characteristic() != ring_.characteristic())
        throw Error("cannot map polynomial across characteristics");
    // variables that never occur may be absent from the target
    constexpr std::size_t kAbsent = SIZE_MAX;
    std::vector<std::size_t> where(ring_.nvars(), kAbsent);
    for (std::size_t i = 0; i < ring_.nvars(); ++i)
        if (target.has_var(ring_.variables()[i]))
            where[i] = target.var_index(ring_.variables()[i]);
    Polynomial r(target);
    for (const auto& [e, c] : terms_) {
        Exps t(target.nvars(), 0);
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            if (where[i] == kAbsent)
                throw Error("polynomial uses variable absent from target ring: " +
                            ring_.variables()[i]);
            t[where[i]] = e[i];
        }
        r.add_term(t, c);
    }
    return r;
}

Polynomial Polynomial::homogeneous_component(std::uint64_t d) const {
    Polynomial r(ring_);
    for (const auto& [e, c] : terms_)
        if (total_degree(e) == d) r.terms_.emplace(e, c);
    return r;
}

Polynomial hasse_derivative(const Polynomial& f, const Exps& alpha) {
    const RingSpec& ring = f.ring();
    if (alpha.size() != ring.nvars()) throw Error("alpha length mismatch");
    Polynomial r(ring);
    for (const auto& [beta, c] : f.terms()) {
        if (!divides(alpha, beta)) continue;
        Coeff factor = c;
        for (std::size_t i = 0; i < alpha.size(); ++i) {
            if (alpha[i] == 0) continue;
            factor = ring.mul(factor, ring.binomial(beta[i], alpha[i]));
        }
        if (factor != 0) r.add_term(exp_div(beta, alpha), factor);
    }
    return r;
}

std::uint64_t order_at_coordinate_prime(const Polynomial& f, const CoordinatePrime& p) {
    p.validate(f.ring());
    Polynomial g = f.translated(p.translation);
    if (g.is_zero()) throw Error("order of the zero polynomial is undefined (infinite)");
    std::vector<char> in_p(f.ring().nvars(), 0);
    for (const auto& v : p.varset) in_p[f.ring().var_index(v)] = 1;
    std::uint64_t best = UINT64_MAX;
    for (const auto& [e, c] : g.terms()) {
        std::uint64_t d = 0;
        for (std::size_t i = 0; i < e.size(); ++i)
            if (in_p[i]) d += e[i];
        best = std::min(best, d);
    }
    return best;
}

} // namespace strata
