#ifndef BPQ_MILNOR_HPP
#define BPQ_MILNOR_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bpq/arith.hpp"

namespace bpq::milnor {

enum class FieldTag { C, R, Qp, Q2, Q };

struct BaseField {
    FieldTag tag = FieldTag::Q;
    long long p = 0;  // only for Qp (odd)

    static BaseField C() { return {FieldTag::C, 0}; }
    static BaseField R() { return {FieldTag::R, 0}; }
    static BaseField Qp(long long p) { return {FieldTag::Qp, arith::OddPrime(p).value}; }
    static BaseField Q2() { return {FieldTag::Q2, 0}; }
    static BaseField Q() { return {FieldTag::Q, 0}; }

    bool operator==(const BaseField&) const = default;
    std::string name() const;
    static BaseField parse(const std::string& s);
};

struct Place {
    enum class Kind { real, two, odd };
    Kind kind = Kind::real;
    long long p = 0;

    static Place real() { return {Kind::real, 0}; }
    static Place two() { return {Kind::two, 0}; }
    static Place odd(long long p) { return {Kind::odd, arith::OddPrime(p).value}; }

    bool operator==(const Place&) const = default;
    bool operator<(const Place& o) const
    {
        if (kind != o.kind)
            return int(kind) < int(o.kind);
        return p < o.p;
    }
    BaseField completion() const;
    std::string name() const;
};

/* Adams bidegree m + w*alpha. */
struct BiDeg {
    int m = 0;
    int w = 0;
    bool operator==(const BiDeg&) const = default;
    auto operator<=>(const BiDeg&) const = default;
    BiDeg operator+(const BiDeg& o) const { return {m + o.m, w + o.w}; }
    BiDeg operator-(const BiDeg& o) const { return {m - o.m, w - o.w}; }
};

/* F2 combination of canonical basis symbols of one degree. Symbols are
 * indices into FieldCtx::basis_names(degree); support kept sorted. */
struct KClass {
    int degree = 0;
    std::vector<uint16_t> sup;

    bool zero() const { return sup.empty(); }
    void toggle(uint16_t s);
    bool operator==(const KClass&) const = default;
};

KClass kclass_add(const KClass& a, const KClass& b);

/* Field plus prime window; owns the canonical symbol bases and the
 * multiplication/localization tables. Symbols outside the window are
 * rejected, never dropped. */
class FieldCtx {
public:
    FieldCtx(BaseField field, std::vector<long long> primes);

    const BaseField& field() const { return field_; }
    const std::vector<long long>& primes() const { return primes_; }
    const std::vector<long long>& odd_primes() const { return odd_primes_; }

    size_t basis_size(int degree) const;
    const std::vector<std::string>& basis_names(int degree) const;
    std::string symbol_name(int degree, size_t idx) const;
    std::optional<uint16_t> symbol_index(int degree, const std::string& name) const;

    KClass zero(int degree) const { return KClass{degree, {}}; }
    KClass unit() const { return KClass{0, {0}}; }
    KClass sym(int degree, size_t idx) const;
    KClass sym(int degree, const std::string& name) const;
    /* rho^k as a KClass of degree k (possibly zero) */
    KClass rho_power(int k) const;

    KClass mul(const KClass& a, const KClass& b) const;

    std::string to_string(const KClass& a) const;
    KClass parse(int degree, const std::string& text) const;

    /* symbol-wise localization of classes over Q at a place; result lives in
     * the local context (which must match place.completion()) */
    KClass localize(const KClass& a, const Place& v, const FieldCtx& local) const;

    std::map<Place, KClass> hasse(const KClass& a, const std::vector<Place>& places,
                                  const std::map<Place, FieldCtx>& locals) const;

private:
    BaseField field_;
    std::vector<long long> primes_;
    std::vector<long long> odd_primes_;
    mutable std::map<int, std::vector<std::string>> names_;

    KClass mul_sym(int da, uint16_t a, int db, uint16_t b) const;
    KClass localize_sym(int degree, uint16_t idx, const Place& v, const FieldCtx& local) const;
    bool real_nonzero(const KClass& a) const;  // parity of real components
};

/* Basis of M_star = k^M[tau] in one Adams bidegree: pairs (symbol, tau
 * exponent); tau has bidegree (1,-1), a degree-d symbol (0,-d). */
struct MStarMono {
    int sym_degree;
    uint16_t sym;
    int t;
};
std::vector<MStarMono> mstar_basis(const FieldCtx& ctx, BiDeg d);

}  // namespace bpq::milnor

#endif
