#include "cohorts/canonical.hpp"

#include <algorithm>
#include <stdexcept>

namespace cohorts {

bool AtomicForm::operator==(const AtomicForm& o) const {
    return u == o.u && leaves == o.leaves;
}

bool LargeForm::operator==(const LargeForm& o) const {
    return children == o.children;
}

int form_size(const AtomicForm& f) {
    int s = f.u;
    if (!f.leaves.empty()) s += static_cast<int>(f.leaves.size()) - 1;
    for (const LargeForm& l : f.leaves) s += form_size(l);
    return s;
}

int form_size(const LargeForm& f) {
    int s = 1;
    for (const AtomicForm& c : f.children) s += form_size(c);
    return s;
}

namespace {

int form_cmp(const AtomicForm& a, const AtomicForm& b);

int form_cmp(const LargeForm& a, const LargeForm& b) {
    if (int d = form_size(a) - form_size(b)) return d;
    std::size_t n = std::min(a.children.size(), b.children.size());
    for (std::size_t i = 0; i < n; ++i)
        if (int d = form_cmp(a.children[i], b.children[i])) return d;
    return static_cast<int>(a.children.size()) - static_cast<int>(b.children.size());
}

int form_cmp(const AtomicForm& a, const AtomicForm& b) {
    if (int d = form_size(a) - form_size(b)) return d;
    if (int d = a.u - b.u) return d;
    std::size_t n = std::min(a.leaves.size(), b.leaves.size());
    for (std::size_t i = 0; i < n; ++i)
        if (int d = form_cmp(a.leaves[i], b.leaves[i])) return d;
    return static_cast<int>(a.leaves.size()) - static_cast<int>(b.leaves.size());
}

}  // namespace

bool form_less(const AtomicForm& a, const AtomicForm& b) { return form_cmp(a, b) < 0; }
bool form_less(const LargeForm& a, const LargeForm& b) { return form_cmp(a, b) < 0; }

AtomicForm canonical_atom(const Atom& atom) {
    const ArchSystem& c = atom.contents;
    if (c.empty()) return AtomicForm{1, {}};
    if (c.size() == 1) {
        AtomicForm k = canonical_atom(c[0]);
        k.u += 1;
        return k;
    }
    if (c.size() == 2) {
        AtomicForm k1 = canonical_atom(c[0]);
        AtomicForm k2 = canonical_atom(c[1]);
        AtomicForm out;
        out.leaves.reserve(k1.leaves.size() + k2.leaves.size());
        std::merge(k1.leaves.begin(), k1.leaves.end(), k2.leaves.begin(), k2.leaves.end(),
                   std::back_inserter(out.leaves),
                   [](const LargeForm& a, const LargeForm& b) { return form_less(a, b); });
        int total = atom_size(atom);
        int occupied = 0;
        if (!out.leaves.empty()) occupied += static_cast<int>(out.leaves.size()) - 1;
        for (const LargeForm& l : out.leaves) occupied += form_size(l);
        out.u = total - occupied;
        if (out.u < 0 || (out.leaves.empty() && out.u < 1))
            throw std::logic_error("canonical join lost size");
        return out;
    }
    LargeForm big;
    big.children.reserve(c.size());
    for (const Atom& a : c) big.children.push_back(canonical_atom(a));
    std::sort(big.children.begin(), big.children.end(),
              [](const AtomicForm& a, const AtomicForm& b) { return form_less(a, b); });
    return AtomicForm{0, {std::move(big)}};
}

AtomicForm cohort_key(const ArchSystem& sys) {
    return canonical_atom(wrap(sys));
}

AtomicForm main_key(int n) {
    if (n < 0) throw std::invalid_argument("negative size");
    return AtomicForm{n + 1, {}};
}

bool is_main_key(const AtomicForm& key) {
    return key.leaves.empty();
}

// ---- text form -----------------------------------------------------------

namespace {

void atomic_to(const AtomicForm& f, std::string& out);

void large_to(const LargeForm& f, std::string& out) {
    out += "(L";
    for (const AtomicForm& c : f.children) {
        out.push_back(' ');
        atomic_to(c, out);
    }
    out.push_back(')');
}

void atomic_to(const AtomicForm& f, std::string& out) {
    out += "(u ";
    out += std::to_string(f.u);
    for (const LargeForm& l : f.leaves) {
        out.push_back(' ');
        large_to(l, out);
    }
    out.push_back(')');
}

struct Tokens {
    std::vector<std::string> toks;
    std::size_t pos = 0;
    const std::string& peek() {
        static const std::string empty;
        return pos < toks.size() ? toks[pos] : empty;
    }
    std::string next() {
        if (pos >= toks.size()) throw std::invalid_argument("form text truncated");
        return toks[pos++];
    }
};

Tokens tokenize(std::string_view text) {
    Tokens t;
    std::string cur;
    for (char ch : text) {
        if (ch == '(' || ch == ')') {
            if (!cur.empty()) {
                t.toks.push_back(cur);
                cur.clear();
            }
            t.toks.push_back(std::string(1, ch));
        } else if (ch == ' ' || ch == '\t') {
            if (!cur.empty()) {
                t.toks.push_back(cur);
                cur.clear();
            }
        } else {
            cur.push_back(ch);
        }
    }
    if (!cur.empty()) t.toks.push_back(cur);
    return t;
}

AtomicForm parse_atomic(Tokens& t);

LargeForm parse_large(Tokens& t) {
    if (t.next() != "(" || t.next() != "L")
        throw std::invalid_argument("expected (L ...)");
    LargeForm f;
    while (t.peek() == "(") f.children.push_back(parse_atomic(t));
    if (t.next() != ")") throw std::invalid_argument("expected ')'");
    if (f.children.size() < 3)
        throw std::invalid_argument("large form needs at least 3 children");
    if (!std::is_sorted(f.children.begin(), f.children.end(),
                        [](const AtomicForm& a, const AtomicForm& b) { return form_less(a, b); }))
        throw std::invalid_argument("large form children out of order");
    return f;
}

AtomicForm parse_atomic(Tokens& t) {
    if (t.next() != "(" || t.next() != "u")
        throw std::invalid_argument("expected (u ...)");
    std::string num = t.next();
    if (num.empty() || num.find_first_not_of("0123456789") != std::string::npos)
        throw std::invalid_argument("bad unit count");
    AtomicForm f;
    f.u = std::stoi(num);
    while (t.peek() == "(") f.leaves.push_back(parse_large(t));
    if (t.next() != ")") throw std::invalid_argument("expected ')'");
    if (!std::is_sorted(f.leaves.begin(), f.leaves.end(),
                        [](const LargeForm& a, const LargeForm& b) { return form_less(a, b); }))
        throw std::invalid_argument("leaves out of order");
    if (f.leaves.empty() && f.u < 1)
        throw std::invalid_argument("leafless form needs u >= 1");
    return f;
}

}  // namespace

std::string form_to_string(const AtomicForm& f) {
    std::string out;
    atomic_to(f, out);
    return out;
}

AtomicForm form_from_string(std::string_view text) {
    Tokens t = tokenize(text);
    AtomicForm f = parse_atomic(t);
    if (t.pos != t.toks.size())
        throw std::invalid_argument("trailing tokens after form");
    return f;
}

// ---- representative ------------------------------------------------------

namespace {

void validate(const AtomicForm& f);

void validate(const LargeForm& f) {
    if (f.children.size() < 3)
        throw std::invalid_argument("large form needs at least 3 children");
    if (!std::is_sorted(f.children.begin(), f.children.end(),
                        [](const AtomicForm& a, const AtomicForm& b) { return form_less(a, b); }))
        throw std::invalid_argument("large form children out of order");
    for (const AtomicForm& c : f.children) validate(c);
}

void validate(const AtomicForm& f) {
    if (f.u < 0) throw std::invalid_argument("negative unit count");
    if (f.leaves.empty() && f.u < 1)
        throw std::invalid_argument("leafless form needs u >= 1");
    if (!std::is_sorted(f.leaves.begin(), f.leaves.end(),
                        [](const LargeForm& a, const LargeForm& b) { return form_less(a, b); }))
        throw std::invalid_argument("leaves out of order");
    for (const LargeForm& l : f.leaves) validate(l);
}

Atom build_atomic(const AtomicForm& f);

Atom build_large(const LargeForm& f) {
    ArchSystem row;
    row.reserve(f.children.size());
    for (const AtomicForm& c : f.children) row.push_back(build_atomic(c));
    return wrap(row);
}

Atom build_atomic(const AtomicForm& f) {
    Atom b;
    if (f.leaves.empty()) {
        b = wrap(nest(f.u - 1));
        return b;
    }
    // Joining a fresh leaf atom onto the partial build never creates surplus
    // units, so the plain leaves assemble at u = 0; wraps add the rest.
    b = build_large(f.leaves[0]);
    for (std::size_t i = 1; i < f.leaves.size(); ++i)
        b = wrap(ArchSystem{build_large(f.leaves[i]), b});
    for (int i = 0; i < f.u; ++i) b = wrap(ArchSystem{b});
    return b;
}

}  // namespace

ArchSystem representative(const AtomicForm& key) {
    validate(key);
    Atom top = build_atomic(key);
    ArchSystem x = top.contents;
    if (!(cohort_key(x) == key))
        throw std::logic_error("representative does not reproduce its key");
    return x;
}

}  // namespace cohorts
