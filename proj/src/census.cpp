#include "cohorts/census.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace cohorts {

// ---- move text form ------------------------------------------------------

std::string move_to_string(const Move& m) {
    std::string out(m.kind == Move::Kind::swap_atoms ? "s:" : "r:");
    for (std::size_t i = 0; i < m.path.size(); ++i) {
        if (i) out.push_back(',');
        out += std::to_string(m.path[i]);
    }
    if (m.kind == Move::Kind::swap_atoms) {
        out += ':' + std::to_string(m.pos);
    } else {
        out += m.forward ? ":f:" : ":b:";
        out += std::to_string(m.split);
    }
    return out;
}

namespace {

std::vector<std::string> split_on(std::string_view text, char sep) {
    std::vector<std::string> parts;
    std::size_t p = 0;
    while (true) {
        std::size_t q = text.find(sep, p);
        parts.emplace_back(text.substr(p, q == std::string_view::npos ? q : q - p));
        if (q == std::string_view::npos) break;
        p = q + 1;
    }
    return parts;
}

int parse_int(const std::string& s) {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
        throw std::invalid_argument("bad number in move text");
    return std::stoi(s);
}

}  // namespace

Move move_from_string(std::string_view text) {
    std::vector<std::string> parts = split_on(text, ':');
    Move m;
    if (parts.size() >= 2 && parts[0] == "s") {
        if (parts.size() != 3) throw std::invalid_argument("swap move needs 3 fields");
        m.kind = Move::Kind::swap_atoms;
        m.pos = parse_int(parts[2]);
    } else if (parts.size() >= 2 && parts[0] == "r") {
        if (parts.size() != 4) throw std::invalid_argument("rotation move needs 4 fields");
        m.kind = Move::Kind::rotate;
        if (parts[2] == "f")
            m.forward = true;
        else if (parts[2] == "b")
            m.forward = false;
        else
            throw std::invalid_argument("rotation direction must be f or b");
        m.split = parse_int(parts[3]);
    } else {
        throw std::invalid_argument("move text must start with s: or r:");
    }
    if (!parts[1].empty())
        for (const std::string& tok : split_on(parts[1], ','))
            m.path.push_back(parse_int(tok));
    return m;
}

// ---- applying moves ------------------------------------------------------

namespace {

ArchSystem* locate(ArchSystem& x, const std::vector<int>& path) {
    ArchSystem* f = &x;
    for (int i : path) {
        if (i < 0 || static_cast<std::size_t>(i) >= f->size())
            throw std::invalid_argument("move path leaves the system");
        f = &(*f)[static_cast<std::size_t>(i)].contents;
    }
    return f;
}

void check_split(const ArchSystem& w, int s) {
    if (s < 0 || s > static_cast<int>(w.size()) || s > 1 ||
        static_cast<int>(w.size()) - s > 1)
        throw std::invalid_argument("rotation split does not fit");
}

}  // namespace

ArchSystem apply_move(const ArchSystem& x, const Move& m) {
    ArchSystem out = x;
    ArchSystem* f = locate(out, m.path);
    if (m.kind == Move::Kind::swap_atoms) {
        if (m.pos < 0 || static_cast<std::size_t>(m.pos) + 1 >= f->size())
            throw std::invalid_argument("swap position out of range");
        std::swap((*f)[static_cast<std::size_t>(m.pos)],
                  (*f)[static_cast<std::size_t>(m.pos) + 1]);
        return out;
    }
    if (f->empty() || f->size() > 2)
        throw std::invalid_argument("rotation needs a forest of 1 or 2 atoms");
    if (m.forward) {
        const Atom wrapped = f->back();
        const ArchSystem w = wrapped.contents;
        if (w.size() > 2) throw std::invalid_argument("wrapped pair too wide");
        check_split(w, m.split);
        ArchSystem head;
        if (f->size() == 2) head.push_back((*f)[0]);
        for (int i = 0; i < m.split; ++i) head.push_back(w[static_cast<std::size_t>(i)]);
        ArchSystem nf{wrap(head)};
        for (std::size_t i = static_cast<std::size_t>(m.split); i < w.size(); ++i)
            nf.push_back(w[i]);
        *f = std::move(nf);
    } else {
        const Atom wrapped = (*f)[0];
        const ArchSystem w = wrapped.contents;
        if (w.size() > 2) throw std::invalid_argument("wrapped pair too wide");
        check_split(w, m.split);
        ArchSystem tail;
        for (std::size_t i = static_cast<std::size_t>(m.split); i < w.size(); ++i)
            tail.push_back(w[i]);
        if (f->size() == 2) tail.push_back((*f)[1]);
        ArchSystem nf;
        for (int i = 0; i < m.split; ++i) nf.push_back(w[static_cast<std::size_t>(i)]);
        nf.push_back(wrap(tail));
        *f = std::move(nf);
    }
    return out;
}

// ---- enumerating moves ---------------------------------------------------

namespace {

std::vector<int> splits_for(std::size_t w) {
    if (w == 0) return {0};
    if (w == 1) return {0, 1};
    return {1};
}

void collect_moves(const ArchSystem& x, const ArchSystem& f, std::vector<int>& path,
                   bool bijective_only, std::vector<std::pair<Move, ArchSystem>>& out) {
    for (std::size_t pos = 0; pos + 1 < f.size(); ++pos) {
        Move m{Move::Kind::swap_atoms, path, static_cast<int>(pos), true, 0};
        out.emplace_back(m, apply_move(x, m));
    }
    if (f.size() == 1 || f.size() == 2) {
        const ArchSystem& wf = f.back().contents;
        if (wf.size() <= 2)
            for (int s : splits_for(wf.size())) {
                bool a_full = f.size() == 2;
                bool b_full = s == 1;
                bool c_full = static_cast<int>(wf.size()) - s == 1;
                if (bijective_only && a_full && b_full && c_full) continue;
                Move m{Move::Kind::rotate, path, 0, true, s};
                out.emplace_back(m, apply_move(x, m));
            }
        const ArchSystem& wb = f[0].contents;
        if (wb.size() <= 2)
            for (int s : splits_for(wb.size())) {
                bool a_full = s == 1;
                bool b_full = static_cast<int>(wb.size()) - s == 1;
                bool c_full = f.size() == 2;
                if (bijective_only && a_full && b_full && c_full) continue;
                Move m{Move::Kind::rotate, path, 0, false, s};
                out.emplace_back(m, apply_move(x, m));
            }
    }
    for (std::size_t i = 0; i < f.size(); ++i) {
        path.push_back(static_cast<int>(i));
        collect_moves(x, f[i].contents, path, bijective_only, out);
        path.pop_back();
    }
}

}  // namespace

std::vector<std::pair<Move, ArchSystem>> moves_from(const ArchSystem& x,
                                                    bool bijective_only) {
    std::vector<std::pair<Move, ArchSystem>> out;
    std::vector<int> path;
    collect_moves(x, x, path, bijective_only, out);
    return out;
}

std::vector<ArchSystem> neighbors(const ArchSystem& x, bool bijective_only) {
    std::string self = render(x);
    std::set<std::string> seen;
    std::vector<ArchSystem> out;
    for (auto& [m, y] : moves_from(x, bijective_only)) {
        std::string w = render(y);
        if (w == self) continue;
        if (seen.insert(w).second) out.push_back(std::move(y));
    }
    return out;
}

bool is_singleton(const ArchSystem& x) {
    std::string self = render(x);
    for (auto& [m, y] : moves_from(x, false))
        if (render(y) != self) return false;
    return true;
}

// ---- census --------------------------------------------------------------

namespace {

using Acc = std::map<AtomicForm, CohortRow, FormLess>;

void tally(Acc& acc, const std::string& w) {
    AtomicForm key = cohort_key(parse(w));
    auto [it, fresh] = acc.try_emplace(key);
    if (fresh) {
        it->second.key = it->first;
        it->second.rep = w;
    } else if (w < it->second.rep) {
        it->second.rep = w;
    }
    it->second.count += 1;
}

}  // namespace

std::vector<CohortRow> census(int n) {
    if (n < 1) throw std::invalid_argument("census needs n >= 1");
    Acc acc;
#if defined(_OPENMP)
    std::uint64_t total = catalan_u64(n);
    if (total >= 4096) {
        int chunks = omp_get_max_threads() * 4;
        std::uint64_t base = total / static_cast<std::uint64_t>(chunks);
        std::uint64_t rem = total % static_cast<std::uint64_t>(chunks);
#pragma omp parallel
        {
            Acc local;
#pragma omp for schedule(dynamic)
            for (int c = 0; c < chunks; ++c) {
                std::uint64_t uc = static_cast<std::uint64_t>(c);
                std::uint64_t lo = uc * base + std::min(uc, rem);
                std::uint64_t hi = lo + base + (uc < rem ? 1 : 0);
                WordStream s(n, lo);
                for (std::uint64_t i = lo; i < hi; ++i, s.advance()) tally(local, s.word());
            }
#pragma omp critical
            for (auto& [key, row] : local) {
                auto [it, fresh] = acc.try_emplace(key);
                if (fresh) {
                    it->second.key = it->first;
                    it->second.rep = row.rep;
                } else if (row.rep < it->second.rep) {
                    it->second.rep = row.rep;
                }
                it->second.count += row.count;
            }
        }
    } else {
        for_each_word(n, [&](const std::string& w) { tally(acc, w); });
    }
#else
    for_each_word(n, [&](const std::string& w) { tally(acc, w); });
#endif
    std::vector<CohortRow> rows;
    rows.reserve(acc.size());
    for (auto& [key, row] : acc) rows.push_back(std::move(row));
    return rows;
}

// ---- counting series -----------------------------------------------------

namespace {

mpz_class exact_div(const mpz_class& a, int n) {
    mpz_class q, r;
    mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), a.get_mpz_t(), mpz_class(n).get_mpz_t());
    if (r != 0) throw std::logic_error("non-integral series coefficient");
    return q;
}

// sum over divisors d of k of d * v[d], where v may be shifted by `off`.
mpz_class divisor_weight(const std::vector<mpz_class>& v, int off, int k) {
    mpz_class s = 0;
    for (int d = 1; d * d <= k; ++d) {
        if (k % d != 0) continue;
        int e = k / d;
        if (d - off >= 0 && static_cast<std::size_t>(d - off) < v.size())
            s += d * v[static_cast<std::size_t>(d - off)];
        if (e != d && e - off >= 0 && static_cast<std::size_t>(e - off) < v.size())
            s += e * v[static_cast<std::size_t>(e - off)];
    }
    return s;
}

}  // namespace

std::pair<Series, Series> cohort_series_pair(int degree) {
    // Design notes
    //
    // Atomic forms a_n and large forms b_n satisfy
    //   a = [n=1] + a(shifted) + multisets of >= 2 larges, over t
    //   b = t * multisets of >= 3 atomics
    // and both multiset layers unroll into divisor-sum recurrences that fill
    // in one degree per pass: p = multiset(a) coefficients, q = multiset(u)
    // with u_d = b_{d-1}.  Each pass needs only values already filled.
    if (degree < 1) throw std::invalid_argument("degree must be >= 1");
    std::size_t D = static_cast<std::size_t>(degree);
    std::vector<mpz_class> a(D + 2), b(D + 2), p(D + 2), q(D + 2);
    p[0] = 1;
    q[0] = 1;
    for (int n = 1; n <= degree; ++n) {
        std::size_t un = static_cast<std::size_t>(n);
        if (n - 1 >= 1) {
            mpz_class s = 0;
            for (int k = 1; k <= n - 1; ++k)
                s += divisor_weight(a, 0, k) * p[static_cast<std::size_t>(n - 1 - k)];
            p[un - 1] = exact_div(s, n - 1);
        }
        mpz_class pairs = 0;
        for (int i = 1; i <= n - 2; ++i)
            pairs += a[static_cast<std::size_t>(i)] * a[static_cast<std::size_t>(n - 1 - i)];
        if ((n - 1) % 2 == 0 && (n - 1) / 2 >= 1)
            pairs += a[static_cast<std::size_t>((n - 1) / 2)];
        b[un] = p[un - 1] - (n == 1 ? 1 : 0) - a[un - 1] - exact_div(pairs, 2);
        {
            mpz_class s = 0;
            for (int k = 1; k <= n + 1; ++k)
                s += divisor_weight(b, 1, k) * q[static_cast<std::size_t>(n + 1 - k)];
            q[un + 1] = exact_div(s, n + 1);
        }
        a[un] = (n == 1 ? 1 : 0) + a[un - 1] + q[un + 1];
    }
    a.resize(D + 1);
    b.resize(D + 1);
    return {Series(degree, std::move(a)), Series(degree, std::move(b))};
}

Series cohort_count_series(int degree) {
    return cohort_series_pair(degree).first;
}

Series main_cohort_series(int degree) {
    Series m(degree);
    if (degree >= 1) m.set_coeff(1, 1);
    for (int n = 2; n <= degree; ++n) {
        mpz_class v = m.coeff(n - 1);
        for (int i = 1; i <= n - 2; ++i) v += m.coeff(i) * m.coeff(n - 1 - i);
        m.set_coeff(n, v);
    }
    return m;
}

mpz_class main_cohort_size(int n) {
    if (n < 1) throw std::invalid_argument("size must be >= 1");
    return main_cohort_series(n + 1).coeff(n + 1);
}

Series singleton_series(int degree) {
    // s3: k >= 3 equal atoms, each bare or the wrap of a singleton system;
    // s1: one atom wrapping an s3-style singleton (plus the bare atom);
    // s2: two equal atoms, each wrapping an s3-style singleton.
    if (degree < 1) throw std::invalid_argument("degree must be >= 1");
    std::size_t D = static_cast<std::size_t>(degree);
    std::vector<mpz_class> atoms(D + 1), s3(D + 1), s(D + 1);
    for (int n = 1; n <= degree; ++n) {
        std::size_t un = static_cast<std::size_t>(n);
        atoms[un] = (n == 1) ? 1 : s[un - 1];
        for (int k = 3; k <= n; ++k)
            if (n % k == 0) s3[un] += atoms[static_cast<std::size_t>(n / k)];
        mpz_class s1 = (n == 1) ? 1 : s3[un - 1];
        mpz_class s2 = 0;
        if (n % 2 == 0 && n / 2 - 1 >= 1) s2 = s3[static_cast<std::size_t>(n / 2 - 1)];
        s[un] = s1 + s2 + s3[un];
    }
    return Series(degree, std::move(s));
}

}  // namespace cohorts
