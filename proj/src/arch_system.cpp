#include "cohorts/arch_system.hpp"

#include <algorithm>
#include <array>
#include <charconv>

namespace cohorts {

ParseError::ParseError(const std::string& msg, std::size_t offset)
    : std::runtime_error(msg + " at offset " + std::to_string(offset)),
      offset_(offset) {}

namespace {

// Recursive descent over the word; `pos` always sits on the next unread char.
ArchSystem parse_contents(std::string_view word, std::size_t& pos) {
    ArchSystem sys;
    while (pos < word.size() && word[pos] == '(') {
        std::size_t open = pos;
        ++pos;
        Atom atom{parse_contents(word, pos)};
        if (pos >= word.size())
            throw ParseError("unclosed '('", open);
        ++pos;  // the matching ')'
        sys.push_back(std::move(atom));
    }
    return sys;
}

void render_into(const ArchSystem& sys, std::string& out) {
    for (const Atom& a : sys) {
        out.push_back('(');
        render_into(a.contents, out);
        out.push_back(')');
    }
}

}  // namespace

ArchSystem parse(std::string_view word) {
    for (std::size_t i = 0; i < word.size(); ++i)
        if (word[i] != '(' && word[i] != ')')
            throw ParseError("unexpected character", i);
    std::size_t pos = 0;
    ArchSystem sys = parse_contents(word, pos);
    if (pos < word.size())
        throw ParseError("unmatched ')'", pos);
    return sys;
}

std::string render(const ArchSystem& sys) {
    std::string out;
    out.reserve(2 * static_cast<std::size_t>(system_size(sys)));
    render_into(sys, out);
    return out;
}

std::string render(const Atom& atom) {
    return render(ArchSystem{atom});
}

int system_size(const ArchSystem& sys) noexcept {
    int n = 0;
    for (const Atom& a : sys) n += atom_size(a);
    return n;
}

int atom_size(const Atom& atom) noexcept {
    return 1 + system_size(atom.contents);
}

ArchSystem nest(int n) {
    ArchSystem sys;
    for (int i = 0; i < n; ++i) sys = ArchSystem{Atom{std::move(sys)}};
    return sys;
}

Atom wrap(const ArchSystem& sys) {
    return Atom{sys};
}

ArchSystem concat(const ArchSystem& a, const ArchSystem& b) {
    ArchSystem out = a;
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

ArchSystem as_system(const Atom& atom) {
    return ArchSystem{atom};
}

// ---- Dyck ----------------------------------------------------------------

DyckPath to_dyck(const ArchSystem& sys) {
    std::string word = render(sys);
    for (char& c : word) c = (c == '(') ? 'u' : 'd';
    return DyckPath{std::move(word)};
}

ArchSystem from_dyck(const DyckPath& path) {
    std::string word = path.steps;
    for (std::size_t i = 0; i < word.size(); ++i) {
        if (word[i] == 'u')
            word[i] = '(';
        else if (word[i] == 'd')
            word[i] = ')';
        else
            throw ParseError("unexpected step", i);
    }
    return parse(word);
}

// ---- forests -------------------------------------------------------------

namespace {

ForestNode node_of(const Atom& atom) {
    ForestNode node;
    node.children.reserve(atom.contents.size());
    for (const Atom& a : atom.contents) node.children.push_back(node_of(a));
    return node;
}

Atom atom_of(const ForestNode& node) {
    Atom atom;
    atom.contents.reserve(node.children.size());
    for (const ForestNode& c : node.children) atom.contents.push_back(atom_of(c));
    return atom;
}

}  // namespace

PlaneForest to_forest(const ArchSystem& sys) {
    PlaneForest forest;
    forest.trees.reserve(sys.size());
    for (const Atom& a : sys) forest.trees.push_back(node_of(a));
    return forest;
}

ArchSystem from_forest(const PlaneForest& forest) {
    ArchSystem sys;
    sys.reserve(forest.trees.size());
    for (const ForestNode& t : forest.trees) sys.push_back(atom_of(t));
    return sys;
}

// ---- permutations --------------------------------------------------------

namespace {

// Labels are assigned bottom-up (contents before their arch), emitted with the
// arch label before its contents: left-endpoint order.
void perm_of(const ArchSystem& sys, int& counter, std::vector<int>& out) {
    for (const Atom& a : sys) {
        std::vector<int> inner;
        perm_of(a.contents, counter, inner);
        out.push_back(++counter);
        out.insert(out.end(), inner.begin(), inner.end());
    }
}

// `values` is a permutation of {1..m}.  The first atom spans the first
// values[0] entries: its arch carries the largest label among them, nested
// content the smaller ones.  A label > values[0] inside that span forces a
// smaller label after it, and those three positions spell 231.
ArchSystem system_of_perm(std::vector<int> values) {
    ArchSystem sys;
    while (!values.empty()) {
        std::size_t k = static_cast<std::size_t>(values[0]);
        if (k > values.size())
            throw std::invalid_argument("permutation contains 231");
        std::vector<int> block(values.begin() + 1,
                               values.begin() + static_cast<std::ptrdiff_t>(k));
        for (int x : block)
            if (x > values[0])
                throw std::invalid_argument("permutation contains 231");
        sys.push_back(Atom{system_of_perm(std::move(block))});
        // block held exactly {1..k-1}, so the tail is {k+1..m}; rebase it.
        std::vector<int> rest;
        rest.reserve(values.size() - k);
        for (std::size_t j = k; j < values.size(); ++j)
            rest.push_back(values[j] - static_cast<int>(k));
        values = std::move(rest);
    }
    return sys;
}

}  // namespace

Perm231 to_perm(const ArchSystem& sys) {
    Perm231 perm;
    int counter = 0;
    perm_of(sys, counter, perm.values);
    return perm;
}

ArchSystem from_perm(const Perm231& perm) {
    const std::vector<int>& v = perm.values;
    std::vector<char> seen(v.size() + 1, 0);
    for (int x : v) {
        if (x < 1 || static_cast<std::size_t>(x) > v.size() || seen[static_cast<std::size_t>(x)])
            throw std::invalid_argument("not a permutation");
        seen[static_cast<std::size_t>(x)] = 1;
    }
    return system_of_perm(v);
}

// ---- textual forms -------------------------------------------------------

namespace {

void forest_counts(const ForestNode& node, std::string& out) {
    out += std::to_string(node.children.size());
    for (const ForestNode& c : node.children) {
        out.push_back(',');
        forest_counts(c, out);
    }
}

ForestNode node_from_counts(const std::vector<int>& counts, std::size_t& pos) {
    if (pos >= counts.size())
        throw std::invalid_argument("forest string truncated");
    int n = counts[pos++];
    ForestNode node;
    node.children.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) node.children.push_back(node_from_counts(counts, pos));
    return node;
}

}  // namespace

std::string forest_to_string(const PlaneForest& forest) {
    std::string out;
    for (std::size_t i = 0; i < forest.trees.size(); ++i) {
        if (i) out.push_back(';');
        forest_counts(forest.trees[i], out);
    }
    return out;
}

PlaneForest forest_from_string(std::string_view text) {
    PlaneForest forest;
    if (text.empty()) return forest;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t semi = text.find(';', start);
        std::string_view tree_text =
            text.substr(start, semi == std::string_view::npos ? std::string_view::npos
                                                              : semi - start);
        std::vector<int> counts;
        std::size_t p = 0;
        while (p <= tree_text.size()) {
            std::size_t comma = tree_text.find(',', p);
            std::string_view tok = tree_text.substr(
                p, comma == std::string_view::npos ? std::string_view::npos : comma - p);
            int value = 0;
            auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
            if (ec != std::errc{} || ptr != tok.data() + tok.size() || value < 0)
                throw std::invalid_argument("bad forest token");
            counts.push_back(value);
            if (comma == std::string_view::npos) break;
            p = comma + 1;
        }
        std::size_t pos = 0;
        forest.trees.push_back(node_from_counts(counts, pos));
        if (pos != counts.size())
            throw std::invalid_argument("forest string has trailing counts");
        if (semi == std::string_view::npos) break;
        start = semi + 1;
    }
    return forest;
}

std::string perm_to_string(const Perm231& perm) {
    std::string out;
    bool digits = perm.values.size() <= 9;
    for (std::size_t i = 0; i < perm.values.size(); ++i) {
        if (i && !digits) out.push_back(',');
        out += std::to_string(perm.values[i]);
    }
    return out;
}

Perm231 perm_from_string(std::string_view text) {
    Perm231 perm;
    if (text.empty()) return perm;
    if (text.find(',') == std::string_view::npos) {
        for (char c : text) {
            if (c < '1' || c > '9')
                throw std::invalid_argument("bad permutation digit");
            perm.values.push_back(c - '0');
        }
    } else {
        std::size_t p = 0;
        while (p <= text.size()) {
            std::size_t comma = text.find(',', p);
            std::string_view tok = text.substr(
                p, comma == std::string_view::npos ? std::string_view::npos : comma - p);
            int value = 0;
            auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
            if (ec != std::errc{} || ptr != tok.data() + tok.size() || value < 1)
                throw std::invalid_argument("bad permutation token");
            perm.values.push_back(value);
            if (comma == std::string_view::npos) break;
            p = comma + 1;
        }
    }
    std::vector<char> seen(perm.values.size() + 1, 0);
    for (int x : perm.values) {
        if (static_cast<std::size_t>(x) > perm.values.size() || seen[static_cast<std::size_t>(x)])
            throw std::invalid_argument("not a permutation");
        seen[static_cast<std::size_t>(x)] = 1;
    }
    return perm;
}

// ---- enumeration ---------------------------------------------------------

std::uint64_t catalan_u64(int n) {
    if (n < 0 || n > 35)
        throw std::invalid_argument("catalan_u64 supports 0 <= n <= 35");
    unsigned __int128 c = 1;
    for (int i = 0; i < n; ++i) c = c * 2 * (2 * static_cast<unsigned>(i) + 1) / (static_cast<unsigned>(i) + 2);
    return static_cast<std::uint64_t>(c);
}

namespace {

constexpr int kMaxArches = 35;

// completions[r][h]: balanced completions using r steps starting at height h.
const std::vector<std::vector<std::uint64_t>>& completion_table() {
    static const std::vector<std::vector<std::uint64_t>> table = [] {
        int steps = 2 * kMaxArches;
        std::vector<std::vector<std::uint64_t>> t(
            static_cast<std::size_t>(steps) + 1,
            std::vector<std::uint64_t>(static_cast<std::size_t>(steps) + 2, 0));
        t[0][0] = 1;
        for (int r = 1; r <= steps; ++r)
            for (int h = 0; h <= steps; ++h) {
                std::uint64_t v = (h + 1 <= steps) ? t[r - 1][h + 1] : 0;
                if (h > 0) v += t[r - 1][h - 1];
                t[r][h] = v;
            }
        return t;
    }();
    return table;
}

}  // namespace

std::uint64_t word_rank(std::string_view word) {
    const auto& table = completion_table();
    std::uint64_t rank = 0;
    int h = 0;
    int r = static_cast<int>(word.size());
    for (char c : word) {
        if (c == ')') {
            rank += table[static_cast<std::size_t>(r - 1)][static_cast<std::size_t>(h + 1)];
            --h;
        } else {
            ++h;
        }
        --r;
    }
    return rank;
}

std::string word_unrank(int n, std::uint64_t rank) {
    if (n < 0 || n > kMaxArches)
        throw std::invalid_argument("word_unrank supports 0 <= n <= 35");
    const auto& table = completion_table();
    if (rank >= table[static_cast<std::size_t>(2 * n)][0])
        throw std::invalid_argument("rank out of range");
    // Invariant below: rank < completions[r][h], so '(' is forced at height 0.
    std::string word;
    word.reserve(2 * static_cast<std::size_t>(n));
    int h = 0;
    for (int r = 2 * n; r > 0; --r) {
        std::uint64_t with_open =
            table[static_cast<std::size_t>(r - 1)][static_cast<std::size_t>(h + 1)];
        if (rank < with_open) {
            word.push_back('(');
            ++h;
        } else {
            rank -= with_open;
            word.push_back(')');
            --h;
        }
    }
    if (h != 0 || rank != 0)
        throw std::invalid_argument("rank out of range");
    return word;
}

WordStream::WordStream(int n) : WordStream(n, 0) {}

WordStream::WordStream(int n, std::uint64_t rank) : rank_(rank) {
    if (rank >= catalan_u64(n)) {
        done_ = true;
        return;
    }
    word_ = word_unrank(n, rank);
}

void WordStream::advance() {
    ++rank_;
    // Rightmost '(' sitting at height >= 1 flips to ')'; the tail refills with
    // the lexicographically least completion (all opens first).
    std::size_t best = std::string::npos;
    int h = 0, h_at_best = 0;
    for (std::size_t i = 0; i < word_.size(); ++i) {
        if (word_[i] == '(') {
            if (h >= 1) {
                best = i;
                h_at_best = h;
            }
            ++h;
        } else {
            --h;
        }
    }
    if (best == std::string::npos) {
        done_ = true;
        return;
    }
    word_[best] = ')';
    int h2 = h_at_best - 1;
    int r = static_cast<int>(word_.size() - best - 1);
    int opens = (r - h2) / 2;
    std::size_t p = best + 1;
    for (int k = 0; k < opens; ++k) word_[p++] = '(';
    for (int k = 0; k < h2 + opens; ++k) word_[p++] = ')';
}

std::vector<std::string> enumerate_all(int n) {
    std::vector<std::string> words;
    words.reserve(static_cast<std::size_t>(catalan_u64(n)));
    for_each_word(n, [&](const std::string& w) { words.push_back(w); });
    return words;
}

}  // namespace cohorts
