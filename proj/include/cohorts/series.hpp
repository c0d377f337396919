#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

namespace cohorts {

// Power series truncated at a fixed degree, integer coefficients.  Binary
// operations insist on equal truncation degrees; mixing them silently is
// almost always a bug.
class Series {
public:
    explicit Series(int degree);
    Series(int degree, std::vector<mpz_class> coeffs);
    static Series one(int degree);
    static Series monomial(int degree, int k, const mpz_class& c = 1);

    int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
    const mpz_class& coeff(int i) const;
    void set_coeff(int i, mpz_class v);

    Series truncated(int d) const;
    Series times_t(int k) const;       // multiply by t^k
    Series of_t_power(int k) const;    // substitute t -> t^k, k >= 1
    Series divided_by(const Series& d) const;  // d must have constant term 1

    Series& operator+=(const Series& o);
    Series& operator-=(const Series& o);
    friend Series operator+(Series a, const Series& b) { return a += b; }
    friend Series operator-(Series a, const Series& b) { return a -= b; }
    friend Series operator*(const Series& a, const Series& b);
    friend Series operator*(const mpz_class& c, Series a);

    bool operator==(const Series&) const = default;

    std::vector<std::string> coeff_strings() const;

private:
    std::vector<mpz_class> c_;
};

// 1/a.  Constant term must be +1 or -1.
Series reciprocal(const Series& a);

// C = 1 + t C^2 truncated: 1, 1, 2, 5, 14, 42, ...
Series catalan_series(int degree);

// M = t + t M + t M^2 truncated; coefficient n counts unary-binary trees
// with n nodes: 0, 1, 1, 2, 4, 9, 21, ...
Series motzkin_atom_series(int degree);

// H_1 = 1, H_n = 1/(1 - t H_{n-1}).  Coefficient m of H_n is the m-th
// Catalan number for m < n; H_n counts avoiders of the depth-n nest.
Series h_truncation(int n, int degree);

// Multiset construction: coefficient n of multiset(z) counts multisets of
// objects with total size n, where z_i objects of size i are available.
// Requires z(0) = 0.
Series multiset(const Series& z);
Series multiset_min2(const Series& z);  // multisets of at least 2 objects
Series multiset_min3(const Series& z);  // at least 3

// multiset(z) = exp(z + w) where w = sum_{i>=2} z(t^i)/i.  The tail w is
// genuinely rational; returned as coefficients 0..degree.
std::vector<mpq_class> multiset_log_tail(const Series& z);

}  // namespace cohorts
