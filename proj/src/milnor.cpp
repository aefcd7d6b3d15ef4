#include "bpq/milnor.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace bpq::milnor {

using arith::OddPrime;

std::string BaseField::name() const
{
    switch (tag) {
        case FieldTag::C: return "C";
        case FieldTag::R: return "R";
        case FieldTag::Q2: return "Q2";
        case FieldTag::Q: return "Q";
        case FieldTag::Qp: return "Q" + std::to_string(p);
    }
    return "?";
}

BaseField BaseField::parse(const std::string& s)
{
    if (s == "C")
        return C();
    if (s == "R")
        return R();
    if (s == "Q2")
        return Q2();
    if (s == "Q")
        return Q();
    if (s.rfind("Qp:", 0) == 0)
        return Qp(std::stoll(s.substr(3)));
    if (s.size() > 1 && s[0] == 'Q')
        return Qp(std::stoll(s.substr(1)));
    throw std::invalid_argument("unknown field spec: " + s);
}

BaseField Place::completion() const
{
    switch (kind) {
        case Kind::real: return BaseField::R();
        case Kind::two: return BaseField::Q2();
        case Kind::odd: return BaseField::Qp(p);
    }
    return BaseField::R();
}

std::string Place::name() const
{
    switch (kind) {
        case Kind::real: return "real";
        case Kind::two: return "2";
        case Kind::odd: return std::to_string(p);
    }
    return "?";
}

void KClass::toggle(uint16_t s)
{
    auto it = std::lower_bound(sup.begin(), sup.end(), s);
    if (it != sup.end() && *it == s)
        sup.erase(it);
    else
        sup.insert(it, s);
}

KClass kclass_add(const KClass& a, const KClass& b)
{
    if (a.degree != b.degree)
        throw std::invalid_argument("kclass_add: degree mismatch");
    KClass r = a;
    for (uint16_t s : b.sup)
        r.toggle(s);
    return r;
}

FieldCtx::FieldCtx(BaseField field, std::vector<long long> primes)
    : field_(field), primes_(std::move(primes))
{
    std::sort(primes_.begin(), primes_.end());
    primes_.erase(std::unique(primes_.begin(), primes_.end()), primes_.end());
    for (long long q : primes_) {
        if (!arith::is_prime(q))
            throw std::invalid_argument("prime window contains a non-prime");
        if (q != 2)
            odd_primes_.push_back(q);
    }
}

/* Canonical bases.
 *   Q : deg1 [2],[3],... then rho; deg2 a_3,a_5,... then rho^2; deg>=3 rho^n.
 *   R : rho^d only.  C : degree 0 only.
 *   Qp, p=1 mod 4 : u, p | up.     Qp, p=3 mod 4 : p, rho (=u) | p^2.
 *   Q2: x, y, rho | rho^2.
 * Non-rho symbols come first so echelon leads pick them for labels. */
const std::vector<std::string>& FieldCtx::basis_names(int degree) const
{
    auto it = names_.find(degree);
    if (it != names_.end())
        return it->second;
    std::vector<std::string> v;
    if (degree < 0) {
        // empty
    }
    else if (degree == 0) {
        v = {"1"};
    }
    else {
        switch (field_.tag) {
            case FieldTag::C:
                break;
            case FieldTag::R:
                v = {degree == 1 ? "rho" : "rho^" + std::to_string(degree)};
                break;
            case FieldTag::Qp:
                if (degree == 1)
                    v = field_.p % 4 == 1 ? std::vector<std::string>{"u", "p"}
                                          : std::vector<std::string>{"p", "rho"};
                else if (degree == 2)
                    v = field_.p % 4 == 1 ? std::vector<std::string>{"up"}
                                          : std::vector<std::string>{"p^2"};
                break;
            case FieldTag::Q2:
                if (degree == 1)
                    v = {"x", "y", "rho"};
                else if (degree == 2)
                    v = {"rho^2"};
                break;
            case FieldTag::Q:
                if (degree == 1) {
                    for (long long q : primes_)
                        v.push_back("[" + std::to_string(q) + "]");
                    v.push_back("rho");
                }
                else if (degree == 2) {
                    for (long long q : odd_primes_)
                        v.push_back("a_" + std::to_string(q));
                    v.push_back("rho^2");
                }
                else {
                    v = {"rho^" + std::to_string(degree)};
                }
                break;
        }
    }
    return names_.emplace(degree, std::move(v)).first->second;
}

size_t FieldCtx::basis_size(int degree) const
{
    return basis_names(degree).size();
}

std::string FieldCtx::symbol_name(int degree, size_t idx) const
{
    return basis_names(degree).at(idx);
}

std::optional<uint16_t> FieldCtx::symbol_index(int degree, const std::string& name) const
{
    const auto& v = basis_names(degree);
    for (size_t i = 0; i < v.size(); ++i)
        if (v[i] == name)
            return uint16_t(i);
    return std::nullopt;
}

KClass FieldCtx::sym(int degree, size_t idx) const
{
    if (idx >= basis_size(degree))
        throw std::out_of_range("symbol index out of range");
    return KClass{degree, {uint16_t(idx)}};
}

KClass FieldCtx::sym(int degree, const std::string& name) const
{
    auto i = symbol_index(degree, name);
    if (!i)
        throw std::invalid_argument("no symbol '" + name + "' in degree " + std::to_string(degree) + " over " + field_.name());
    return KClass{degree, {*i}};
}

KClass FieldCtx::rho_power(int k) const
{
    if (k == 0)
        return unit();
    switch (field_.tag) {
        case FieldTag::C:
            return zero(k);
        case FieldTag::R:
            return sym(k, 0);
        case FieldTag::Q:
            return sym(k, basis_size(k) - 1);  // rho^k is last
        case FieldTag::Qp:
            if (field_.p % 4 == 1)
                return zero(k);  // rho = 0
            // rho = u with u^2 = 0
            return k == 1 ? sym(1, "rho") : zero(k);
        case FieldTag::Q2:
            if (k == 1)
                return sym(1, "rho");
            if (k == 2)
                return sym(2, "rho^2");
            return zero(k);  // rho^3 = 0
    }
    return zero(k);
}

namespace {

/* numeric value of a degree-1 symbol over Q: rho = [-1], [q] = q */
long long q_symbol_value(const std::string& name)
{
    if (name == "rho")
        return -1;
    return std::stoll(name.substr(1, name.size() - 2));
}

}  // namespace

bool FieldCtx::real_nonzero(const KClass& a) const
{
    // parity of the real-place components over Q (rho^d the only survivor)
    if (field_.tag != FieldTag::Q)
        throw std::logic_error("real_nonzero: only over Q");
    int count = 0;
    const auto& names = basis_names(a.degree);
    for (uint16_t s : a.sup) {
        const std::string& nm = names[s];
        if (a.degree == 0)
            count ^= 1;
        else if (a.degree == 1)
            count ^= (nm == "rho") ? 1 : 0;  // [q] > 0 is a real square
        else
            count ^= 1;  // a_p and rho^d all localize to rho^d at the real place
    }
    return count != 0;
}

KClass FieldCtx::mul_sym(int da, uint16_t a, int db, uint16_t b) const
{
    if (da == 0)
        return sym(db, b);
    if (db == 0)
        return sym(da, a);
    int d = da + db;
    const std::string na = symbol_name(da, a), nb = symbol_name(db, b);

    switch (field_.tag) {
        case FieldTag::C:
            return zero(d);
        case FieldTag::R:
            return sym(d, 0);
        case FieldTag::Qp: {
            if (d > 2)
                return zero(d);
            bool p1 = field_.p % 4 == 1;
            // deg1 * deg1 from the presentations u^2 = 0, p^2 = 0 (p=1 mod 4)
            // and u^2 = 0, p^2 = up (p=3 mod 4, u = rho)
            if (p1) {
                if (na != nb)
                    return sym(2, "up");
                return zero(2);  // u^2 = p^2 = 0
            }
            if (na == "rho" && nb == "rho")
                return zero(2);
            return sym(2, "p^2");  // p*p = p*rho = rho*p = p^2
        }
        case FieldTag::Q2: {
            if (d > 2)
                return zero(d);
            auto is = [&](const char* s1, const char* s2) {
                return (na == s1 && nb == s2) || (na == s2 && nb == s1);
            };
            if (is("rho", "rho") || is("x", "y"))
                return sym(2, "rho^2");
            return zero(2);  // x^2 = y^2 = rho x = rho y = 0
        }
        case FieldTag::Q: {
            if (da == 1 && db == 1) {
                long long l = q_symbol_value(na), q = q_symbol_value(nb);
                KClass out = zero(2);
                if (arith::hilbert_two({l}, {q}) == -1)
                    out.toggle(uint16_t(basis_size(2) - 1));  // rho^2
                std::vector<long long> cands{std::llabs(l), std::llabs(q)};
                std::sort(cands.begin(), cands.end());
                cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
                for (long long pp : cands) {
                    if (pp < 3 || !arith::is_prime(pp))
                        continue;
                    if (arith::hilbert_odd({l}, {q}, OddPrime(pp)) == -1) {
                        auto idx = symbol_index(2, "a_" + std::to_string(pp));
                        if (!idx)
                            throw std::domain_error("prime window too small for product " + na + nb);
                        KClass t = zero(2);
                        t.toggle(*idx);
                        out = kclass_add(out, t);
                    }
                }
                return out;
            }
            // Degree >= 3 lands in Z/2{rho^d}; only the real place survives,
            // so the product is rho^d exactly when both factors are real-nonzero.
            KClass ca = sym(da, a), cb = sym(db, b);
            if (real_nonzero(ca) && real_nonzero(cb))
                return sym(d, basis_size(d) - 1);
            return zero(d);
        }
    }
    return zero(d);
}

KClass FieldCtx::mul(const KClass& a, const KClass& b) const
{
    KClass out = zero(a.degree + b.degree);
    for (uint16_t sa : a.sup)
        for (uint16_t sb : b.sup)
            out = kclass_add(out, mul_sym(a.degree, sa, b.degree, sb));
    return out;
}

std::string FieldCtx::to_string(const KClass& a) const
{
    if (a.zero())
        return "0";
    std::string out;
    for (size_t i = 0; i < a.sup.size(); ++i) {
        if (i)
            out += " + ";
        out += symbol_name(a.degree, a.sup[i]);
    }
    return out;
}

KClass FieldCtx::parse(int degree, const std::string& text) const
{
    KClass out = zero(degree);
    if (text == "0")
        return out;
    std::string token;
    std::stringstream ss(text);
    while (std::getline(ss, token, '+')) {
        size_t b = token.find_first_not_of(" \t");
        size_t e = token.find_last_not_of(" \t");
        if (b == std::string::npos)
            throw std::invalid_argument("bad KClass text: " + text);
        out = kclass_add(out, sym(degree, token.substr(b, e - b + 1)));
    }
    return out;
}

KClass FieldCtx::localize_sym(int degree, uint16_t idx, const Place& v, const FieldCtx& local) const
{
    if (degree == 0)
        return local.unit();
    const std::string nm = symbol_name(degree, idx);

    if (degree == 1) {
        long long val = q_symbol_value(nm);
        switch (v.kind) {
            case Place::Kind::real:
                return val < 0 ? local.sym(1, "rho") : local.zero(1);
            case Place::Kind::odd: {
                OddPrime p(v.p);
                if (val == p.value)
                    return local.sym(1, "p");
                // unit: nonzero iff a nonsquare mod p
                const char* u = p.value % 4 == 1 ? "u" : "rho";
                return arith::legendre(val, p) == -1 ? local.sym(1, u) : local.zero(1);
            }
            case Place::Kind::two: {
                if (val == 2)
                    return local.sym(1, "x");
                long long r = ((val % 8) + 8) % 8;  // odd residue mod 8
                switch (r) {
                    case 1: return local.zero(1);
                    case 3: return kclass_add(local.sym(1, "rho"), local.sym(1, "y"));
                    case 5: return local.sym(1, "y");
                    case 7: return local.sym(1, "rho");
                }
                throw std::logic_error("localize: even residue");
            }
        }
    }
    if (degree == 2 && nm != "rho^2") {
        // a_p: the nonzero class of k^M_2(Q_p) at p, rho^2 at the real place
        // (forced by reciprocity), zero at every other finite place.
        long long p = std::stoll(nm.substr(2));
        if (v.kind == Place::Kind::odd && v.p == p)
            return local.sym(2, p % 4 == 1 ? "up" : "p^2");
        if (v.kind == Place::Kind::real)
            return local.sym(2, 0);
        return local.zero(2);
    }
    // rho^d, d >= 2
    if (v.kind == Place::Kind::real)
        return local.sym(degree, 0);
    return local.rho_power(degree);
}

KClass FieldCtx::localize(const KClass& a, const Place& v, const FieldCtx& local) const
{
    if (field_.tag != FieldTag::Q)
        throw std::logic_error("localize: source must be Q");
    if (!(local.field() == v.completion()))
        throw std::invalid_argument("localize: local context does not match place");
    KClass out = local.zero(a.degree);
    for (uint16_t s : a.sup)
        out = kclass_add(out, localize_sym(a.degree, s, v, local));
    return out;
}

std::map<Place, KClass> FieldCtx::hasse(const KClass& a, const std::vector<Place>& places,
                                        const std::map<Place, FieldCtx>& locals) const
{
    std::map<Place, KClass> out;
    for (const Place& v : places)
        out.emplace(v, localize(a, v, locals.at(v)));
    return out;
}

std::vector<MStarMono> mstar_basis(const FieldCtx& ctx, BiDeg d)
{
    std::vector<MStarMono> out;
    int t = d.m;
    if (t < 0)
        return out;
    int deg = -d.w - t;
    if (deg < 0)
        return out;
    for (size_t i = 0; i < ctx.basis_size(deg); ++i)
        out.push_back({deg, uint16_t(i), t});
    return out;
}

}  // namespace bpq::milnor
