#include "strata/ring.hpp"

#include <algorithm>
#include <set>

namespace strata {

namespace {

std::uint64_t mulmod_prim(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t powmod_prim(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod_prim(r, a, m);
        a = mulmod_prim(a, a, m);
        e >>= 1;
    }
    return r;
}

} // namespace

// Deterministic Miller-Rabin for 64-bit inputs.
bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0) return n == p;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        std::uint64_t x = powmod_prim(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod_prim(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

RingSpec::RingSpec(std::uint64_t characteristic, std::vector<std::string> variables)
    : char_(characteristic), vars_(std::move(variables)) {
    if (char_ != 0 && !is_prime_u64(char_))
        throw Error("characteristic must be 0 or a prime, got " + std::to_string(char_));
    for (std::size_t i = 0; i < vars_.size(); ++i) {
        if (vars_[i].empty()) throw Error("empty variable name");
        if (!index_.emplace(vars_[i], i).second)
            throw Error("duplicate variable name: " + vars_[i]);
    }
}

std::size_t RingSpec::var_index(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw Error("unknown variable: " + name);
    return it->second;
}

bool RingSpec::has_var(const std::string& name) const {
    return index_.count(name) != 0;
}

Coeff RingSpec::reduce(const Coeff& a) const {
    if (char_ == 0) {
        Coeff r = a;
        r.canonicalize();
        return r;
    }
    mpz_class p(static_cast<unsigned long>(char_));
    mpz_class den = a.get_den();
    mpz_class num = a.get_num() % p;
    if (num < 0) num += p;
    if (den != 1) {
        mpz_class d = den % p;
        if (d < 0) d += p;
        mpz_class dinv;
        if (mpz_invert(dinv.get_mpz_t(), d.get_mpz_t(), p.get_mpz_t()) == 0)
            throw Error("denominator not invertible mod " + std::to_string(char_));
        num = (num * dinv) % p;
    }
    return Coeff(num);
}

Coeff RingSpec::inv(const Coeff& a) const {
    if (char_ == 0) {
        if (a == 0) throw Error("division by zero");
        return Coeff(1) / a;
    }
    Coeff r = reduce(a);
    if (r == 0) throw Error("division by zero in F_" + std::to_string(char_));
    mpz_class p(static_cast<unsigned long>(char_));
    mpz_class ainv;
    mpz_invert(ainv.get_mpz_t(), r.get_num().get_mpz_t(), p.get_mpz_t());
    return Coeff(ainv);
}

namespace {

std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % p);
}

std::uint64_t invmod_u64(std::uint64_t a, std::uint64_t p) {
    mpz_class ap(static_cast<unsigned long>(a)), pp(static_cast<unsigned long>(p)), v;
    mpz_invert(v.get_mpz_t(), ap.get_mpz_t(), pp.get_mpz_t());
    return v.get_ui();
}

// C(n,k) mod p for 0 <= k <= n < p.
std::uint64_t binom_digit_mod_p(std::uint64_t n, std::uint64_t k, std::uint64_t p) {
    if (k > n - k) k = n - k;
    std::uint64_t c = 1;
    for (std::uint64_t i = 0; i < k; ++i) {
        c = mulmod_u64(c, (n - i) % p, p);
        c = mulmod_u64(c, invmod_u64((i + 1) % p, p), p);
    }
    return c;
}

} // namespace

Coeff RingSpec::binomial(std::uint64_t n, std::uint64_t k) const {
    if (k > n) return Coeff(0);
    if (char_ == 0) {
        mpz_class b;
        mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
        return Coeff(b);
    }
    // Lucas: C(n,k) mod p is the product of digit-wise binomials base p.
    std::uint64_t p = char_;
    std::uint64_t result = 1;
    while (n > 0 || k > 0) {
        std::uint64_t nd = n % p, kd = k % p;
        if (kd > nd) return Coeff(0);
        result = mulmod_u64(result, binom_digit_mod_p(nd, kd, p), p);
        n /= p;
        k /= p;
    }
    return Coeff(static_cast<unsigned long>(result));
}

RingSpec RingSpec::subring(const std::vector<std::string>& keep) const {
    std::set<std::string> keepset(keep.begin(), keep.end());
    std::vector<std::string> vars;
    for (const auto& v : vars_)
        if (keepset.count(v)) vars.push_back(v);
    return RingSpec(char_, vars);
}

bool CoordinatePrime::contains_var(const std::string& v) const {
    return std::find(varset.begin(), varset.end(), v) != varset.end();
}

void CoordinatePrime::validate(const RingSpec& ring) const {
    if (varset.empty()) throw Error("coordinate prime has empty variable set");
    std::set<std::string> seen;
    for (const auto& v : varset) {
        ring.var_index(v);
        if (!seen.insert(v).second) throw Error("duplicate variable in prime: " + v);
    }
    for (const auto& [v, c] : translation) {
        ring.var_index(v);
        (void)c;
    }
}

} // namespace strata
