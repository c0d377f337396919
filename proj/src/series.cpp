#include "cohorts/series.hpp"

#include <stdexcept>
#include <utility>

namespace cohorts {

Series::Series(int degree) {
    if (degree < 0) throw std::invalid_argument("negative truncation degree");
    c_.resize(static_cast<std::size_t>(degree) + 1);
}

Series::Series(int degree, std::vector<mpz_class> coeffs) : Series(degree) {
    for (std::size_t i = 0; i < c_.size() && i < coeffs.size(); ++i)
        c_[i] = std::move(coeffs[i]);
}

Series Series::one(int degree) {
    Series s(degree);
    s.c_[0] = 1;
    return s;
}

Series Series::monomial(int degree, int k, const mpz_class& c) {
    Series s(degree);
    if (k < 0) throw std::invalid_argument("negative exponent");
    if (k <= degree) s.c_[static_cast<std::size_t>(k)] = c;
    return s;
}

const mpz_class& Series::coeff(int i) const {
    static const mpz_class zero = 0;
    if (i < 0 || i > degree()) return zero;
    return c_[static_cast<std::size_t>(i)];
}

void Series::set_coeff(int i, mpz_class v) {
    if (i < 0 || i > degree()) throw std::out_of_range("coefficient index");
    c_[static_cast<std::size_t>(i)] = std::move(v);
}

Series Series::truncated(int d) const {
    if (d > degree()) throw std::invalid_argument("cannot extend a truncation");
    Series s(d);
    for (int i = 0; i <= d; ++i) s.c_[static_cast<std::size_t>(i)] = coeff(i);
    return s;
}

Series Series::times_t(int k) const {
    if (k < 0) throw std::invalid_argument("negative shift");
    Series s(degree());
    for (int i = 0; i + k <= degree(); ++i) s.c_[static_cast<std::size_t>(i + k)] = coeff(i);
    return s;
}

Series Series::of_t_power(int k) const {
    if (k < 1) throw std::invalid_argument("substitution power must be >= 1");
    Series s(degree());
    for (int i = 0; i * k <= degree(); ++i) s.c_[static_cast<std::size_t>(i * k)] = coeff(i);
    return s;
}

namespace {

void require_same_degree(const Series& a, const Series& b) {
    if (a.degree() != b.degree())
        throw std::invalid_argument("truncation degrees differ");
}

}  // namespace

Series& Series::operator+=(const Series& o) {
    require_same_degree(*this, o);
    for (int i = 0; i <= degree(); ++i) c_[static_cast<std::size_t>(i)] += o.coeff(i);
    return *this;
}

Series& Series::operator-=(const Series& o) {
    require_same_degree(*this, o);
    for (int i = 0; i <= degree(); ++i) c_[static_cast<std::size_t>(i)] -= o.coeff(i);
    return *this;
}

Series operator*(const Series& a, const Series& b) {
    require_same_degree(a, b);
    Series s(a.degree());
    for (int i = 0; i <= a.degree(); ++i) {
        if (a.coeff(i) == 0) continue;
        for (int j = 0; i + j <= a.degree(); ++j) {
            if (b.coeff(j) == 0) continue;
            s.c_[static_cast<std::size_t>(i + j)] += a.coeff(i) * b.coeff(j);
        }
    }
    return s;
}

Series operator*(const mpz_class& c, Series a) {
    for (auto& x : a.c_) x *= c;
    return a;
}

Series Series::divided_by(const Series& d) const {
    require_same_degree(*this, d);
    if (d.coeff(0) != 1)
        throw std::invalid_argument("divisor must have constant term 1");
    Series q(degree());
    for (int n = 0; n <= degree(); ++n) {
        mpz_class v = coeff(n);
        for (int k = 1; k <= n; ++k) v -= d.coeff(k) * q.coeff(n - k);
        q.c_[static_cast<std::size_t>(n)] = std::move(v);
    }
    return q;
}

Series reciprocal(const Series& a) {
    if (a.coeff(0) == 1) return Series::one(a.degree()).divided_by(a);
    if (a.coeff(0) == -1) return mpz_class(-1) * Series::one(a.degree()).divided_by(mpz_class(-1) * a);
    throw std::invalid_argument("reciprocal needs constant term +-1");
}

Series catalan_series(int degree) {
    Series c = Series::one(degree);
    for (int n = 1; n <= degree; ++n) {
        mpz_class s = 0;
        for (int i = 0; i <= n - 1; ++i) s += c.coeff(i) * c.coeff(n - 1 - i);
        c.set_coeff(n, std::move(s));
    }
    return c;
}

Series motzkin_atom_series(int degree) {
    Series m(degree);
    for (int n = 1; n <= degree; ++n) {
        mpz_class s = (n == 1) ? 1 : 0;
        s += m.coeff(n - 1);
        for (int i = 1; i <= n - 2; ++i) s += m.coeff(i) * m.coeff(n - 1 - i);
        m.set_coeff(n, std::move(s));
    }
    return m;
}

Series h_truncation(int n, int degree) {
    if (n < 1) throw std::invalid_argument("truncation depth must be >= 1");
    Series h = Series::one(degree);
    for (int k = 2; k <= n; ++k)
        h = reciprocal(Series::one(degree) - h.times_t(1));
    return h;
}

std::vector<std::string> Series::coeff_strings() const {
    std::vector<std::string> out;
    out.reserve(c_.size());
    for (const mpz_class& x : c_) out.push_back(x.get_str());
    return out;
}

// ---- multiset operators --------------------------------------------------

namespace {

// sigma[k] = sum over divisors d of k of d * z_d.
std::vector<mpz_class> divisor_weights(const Series& z) {
    int D = z.degree();
    std::vector<mpz_class> sigma(static_cast<std::size_t>(D) + 1);
    for (int d = 1; d <= D; ++d) {
        if (z.coeff(d) == 0) continue;
        mpz_class dz = d * z.coeff(d);
        for (int k = d; k <= D; k += d) sigma[static_cast<std::size_t>(k)] += dz;
    }
    return sigma;
}

mpz_class exact_div(const mpz_class& a, int n) {
    mpz_class q, r;
    mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), a.get_mpz_t(), mpz_class(n).get_mpz_t());
    if (r != 0) throw std::logic_error("non-integral multiset coefficient");
    return q;
}

}  // namespace

Series multiset(const Series& z) {
    if (z.coeff(0) != 0)
        throw std::invalid_argument("multiset needs z(0) = 0");
    int D = z.degree();
    std::vector<mpz_class> sigma = divisor_weights(z);
    Series m = Series::one(D);
    for (int n = 1; n <= D; ++n) {
        mpz_class s = 0;
        for (int k = 1; k <= n; ++k)
            s += sigma[static_cast<std::size_t>(k)] * m.coeff(n - k);
        m.set_coeff(n, exact_div(s, n));
    }
    return m;
}

Series multiset_min2(const Series& z) {
    return multiset(z) - Series::one(z.degree()) - z;
}

Series multiset_min3(const Series& z) {
    // Pairs enter as (z^2 + z(t^2))/2; the numerator is even coefficientwise.
    Series pairs = z * z + z.of_t_power(2);
    Series half(z.degree());
    for (int i = 0; i <= z.degree(); ++i) half.set_coeff(i, exact_div(pairs.coeff(i), 2));
    return multiset(z) - Series::one(z.degree()) - z - half;
}

std::vector<mpq_class> multiset_log_tail(const Series& z) {
    if (z.coeff(0) != 0)
        throw std::invalid_argument("multiset_log_tail needs z(0) = 0");
    int D = z.degree();
    std::vector<mpq_class> w(static_cast<std::size_t>(D) + 1);
    for (int i = 2; i <= D; ++i) {
        for (int j = 1; i * j <= D; ++j) {
            if (z.coeff(j) == 0) continue;
            w[static_cast<std::size_t>(i * j)] += mpq_class(z.coeff(j), i);
        }
    }
    for (auto& x : w) x.canonicalize();
    return w;
}

}  // namespace cohorts
