#include "cohorts/containment.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace cohorts {

namespace {

// Design notes
//
// Containment recurses on atom sequences.  A block of leading pattern atoms
// either embeds into the first host atom (wholly into its contents, or, for a
// single pattern atom, root onto root) or the host atom is skipped.  The two
// choices are exclusive in terms of which host arches get used, so the same
// recursion enumerates every occurrence exactly once.

// Open-addressing memo reused across queries: slots tagged with the query
// epoch, so a new query sees the table as empty without clearing it.  Keys
// use subtree addresses, which are stable within one query; a stale tag from
// a prior query makes the slot vacant, so reuse of freed addresses is safe.
struct Memo {
    struct Slot {
        const void* pattern;
        const void* host;
        std::uint64_t packed;
        std::uint32_t epoch;
        bool value;
    };
    std::vector<Slot> slots = std::vector<Slot>(1024);
    std::uint32_t epoch = 0;
    std::size_t used = 0;

    void begin() {
        if (++epoch == 0) {
            std::fill(slots.begin(), slots.end(), Slot{});
            epoch = 1;
        }
        used = 0;
    }

    static std::size_t hash(const void* p, const void* x, std::uint64_t packed) {
        std::uint64_t h = packed * 0x9e3779b97f4a7c15ULL;
        h ^= reinterpret_cast<std::uintptr_t>(p) * 0xc2b2ae3d27d4eb4fULL;
        h ^= reinterpret_cast<std::uintptr_t>(x) * 0x165667b19e3779f9ULL;
        return static_cast<std::size_t>(h ^ (h >> 29));
    }

    bool* find(const void* p, const void* x, std::uint64_t packed) {
        const std::size_t mask = slots.size() - 1;
        for (std::size_t i = hash(p, x, packed) & mask;; i = (i + 1) & mask) {
            Slot& s = slots[i];
            if (s.epoch != epoch) return nullptr;
            if (s.pattern == p && s.host == x && s.packed == packed) return &s.value;
        }
    }

    void insert(const void* p, const void* x, std::uint64_t packed, bool v) {
        if (used * 2 >= slots.size()) grow();
        const std::size_t mask = slots.size() - 1;
        std::size_t i = hash(p, x, packed) & mask;
        while (slots[i].epoch == epoch) i = (i + 1) & mask;
        slots[i] = Slot{p, x, packed, epoch, v};
        ++used;
    }

    void grow() {
        std::vector<Slot> old = std::move(slots);
        slots.assign(old.size() * 2, Slot{});
        const std::size_t mask = slots.size() - 1;
        for (const Slot& s : old) {
            if (s.epoch != epoch) continue;
            std::size_t i = hash(s.pattern, s.host, s.packed) & mask;
            while (slots[i].epoch == epoch) i = (i + 1) & mask;
            slots[i] = s;
        }
    }
};

Memo& query_memo() {
    static thread_local Memo m;
    return m;
}

bool fits_forest(Memo& memo, const ArchSystem& p, std::size_t pi, std::size_t pe,
                 const ArchSystem& x, std::size_t xi);

bool fits_atom_range(Memo& memo, const ArchSystem& p, std::size_t pi, std::size_t pe,
                     const Atom& x) {
    if (fits_forest(memo, p, pi, pe, x.contents, 0)) return true;
    if (pe - pi == 1) {
        const ArchSystem& inner = p[pi].contents;
        return fits_forest(memo, inner, 0, inner.size(), x.contents, 0);
    }
    return false;
}

bool fits_forest(Memo& memo, const ArchSystem& p, std::size_t pi, std::size_t pe,
                 const ArchSystem& x, std::size_t xi) {
    if (pi == pe) return true;
    if (xi == x.size()) return false;
    const std::uint64_t packed = (static_cast<std::uint64_t>(pi) << 42) |
                                 (static_cast<std::uint64_t>(pe) << 21) |
                                 static_cast<std::uint64_t>(xi);
    if (const bool* hit = memo.find(&p, &x, packed)) return *hit;
    bool ok = fits_forest(memo, p, pi, pe, x, xi + 1);
    for (std::size_t t = 1; !ok && t <= pe - pi; ++t)
        ok = fits_atom_range(memo, p, pi, pi + t, x[xi]) &&
             fits_forest(memo, p, pi + t, pe, x, xi + 1);
    memo.insert(&p, &x, packed, ok);
    return ok;
}

}  // namespace

bool contains(const ArchSystem& host, const ArchSystem& pattern) {
    if (pattern.empty()) return true;
    if (system_size(pattern) > system_size(host)) return false;
    Memo& memo = query_memo();
    memo.begin();
    return fits_forest(memo, pattern, 0, pattern.size(), host, 0);
}

bool avoids(const ArchSystem& host, const ArchSystem& pattern) {
    return !contains(host, pattern);
}

// ---- arch ids ------------------------------------------------------------

namespace {

void spans_walk(const ArchSystem& sys, int& pos, std::vector<std::pair<int, int>>& out) {
    for (const Atom& a : sys) {
        std::size_t id = out.size();
        out.emplace_back(pos++, -1);
        spans_walk(a.contents, pos, out);
        out[id].second = pos++;
    }
}

const Atom* preorder_find(const ArchSystem& sys, int& id) {
    for (const Atom& a : sys) {
        if (id == 0) return &a;
        --id;
        if (const Atom* r = preorder_find(a.contents, id)) return r;
    }
    return nullptr;
}

}  // namespace

std::vector<std::pair<int, int>> arch_spans(const ArchSystem& sys) {
    std::vector<std::pair<int, int>> out;
    out.reserve(static_cast<std::size_t>(system_size(sys)));
    int pos = 0;
    spans_walk(sys, pos, out);
    return out;
}

const Atom& atom_at(const ArchSystem& sys, int arch_id) {
    int id = arch_id;
    const Atom* a = (id >= 0) ? preorder_find(sys, id) : nullptr;
    if (!a) throw std::out_of_range("arch id out of range");
    return *a;
}

// ---- occurrence enumeration ----------------------------------------------

namespace {

struct PreorderIds {
    std::vector<std::vector<int>> children;  // arch id -> child arch ids
    std::vector<int> top;
};

std::vector<int> ids_walk(const ArchSystem& sys, PreorderIds& p, int& next) {
    std::vector<int> ids;
    ids.reserve(sys.size());
    for (const Atom& a : sys) {
        int id = next++;
        p.children[static_cast<std::size_t>(id)] = ids_walk(a.contents, p, next);
        ids.push_back(id);
    }
    return ids;
}

PreorderIds preorder_ids(const ArchSystem& sys) {
    PreorderIds p;
    p.children.resize(static_cast<std::size_t>(system_size(sys)));
    int next = 0;
    p.top = ids_walk(sys, p, next);
    return p;
}

struct OccCtx {
    const PreorderIds& host;
    std::vector<int> assign;
    const std::function<void(const std::vector<int>&)>& emit;
};

// Continuations as plain frames on the call stack: each names the suspended
// forest walk to resume once the nested range is fully matched.
struct Cont {
    void (*fn)(OccCtx&, const void*);
    const void* frame;
    void operator()(OccCtx& c) const { fn(c, frame); }
};

void occ_forest(OccCtx& c, const ArchSystem& p, std::size_t pi, std::size_t pe,
                const std::vector<int>& hids, std::size_t xi, const Cont& k);

struct ForestFrame {
    const ArchSystem& p;
    std::size_t pi, pe;
    const std::vector<int>& hids;
    std::size_t xi;
    const Cont& k;
};

void resume_forest(OccCtx& c, const void* frame) {
    const ForestFrame& f = *static_cast<const ForestFrame*>(frame);
    occ_forest(c, f.p, f.pi, f.pe, f.hids, f.xi, f.k);
}

void occ_atom_range(OccCtx& c, const ArchSystem& p, std::size_t pi, std::size_t pe,
                    int x, const Cont& k) {
    const std::vector<int>& kids = c.host.children[static_cast<std::size_t>(x)];
    occ_forest(c, p, pi, pe, kids, 0, k);
    if (pe - pi == 1) {
        c.assign.push_back(x);
        const ArchSystem& inner = p[pi].contents;
        occ_forest(c, inner, 0, inner.size(), kids, 0, k);
        c.assign.pop_back();
    }
}

void occ_forest(OccCtx& c, const ArchSystem& p, std::size_t pi, std::size_t pe,
                const std::vector<int>& hids, std::size_t xi, const Cont& k) {
    if (pi == pe) {
        k(c);
        return;
    }
    if (xi == hids.size()) return;
    occ_forest(c, p, pi, pe, hids, xi + 1, k);
    for (std::size_t t = 1; t <= pe - pi; ++t) {
        const ForestFrame rest{p, pi + t, pe, hids, xi + 1, k};
        occ_atom_range(c, p, pi, pi + t, hids[xi], Cont{resume_forest, &rest});
    }
}

void emit_occurrence(OccCtx& c, const void*) { c.emit(c.assign); }

}  // namespace

void for_each_occurrence(const ArchSystem& host, const ArchSystem& pattern,
                         const std::function<void(const std::vector<int>&)>& f) {
    PreorderIds ids = preorder_ids(host);
    OccCtx c{ids, {}, f};
    c.assign.reserve(static_cast<std::size_t>(system_size(pattern)));
    occ_forest(c, pattern, 0, pattern.size(), ids.top, 0, Cont{emit_occurrence, nullptr});
}

std::vector<int> occurrence_endpoints(const std::vector<std::pair<int, int>>& spans,
                                      const std::vector<int>& arch_ids) {
    std::vector<int> pts;
    pts.reserve(2 * arch_ids.size());
    for (int id : arch_ids) {
        pts.push_back(spans[static_cast<std::size_t>(id)].first);
        pts.push_back(spans[static_cast<std::size_t>(id)].second);
    }
    std::sort(pts.begin(), pts.end());
    return pts;
}

std::optional<std::vector<int>> leftmost_occurrence(const ArchSystem& host,
                                                    const ArchSystem& pattern) {
    auto spans = arch_spans(host);
    std::optional<std::vector<int>> best;
    std::vector<int> best_pts;
    for_each_occurrence(host, pattern, [&](const std::vector<int>& occ) {
        std::vector<int> pts = occurrence_endpoints(spans, occ);
        std::reverse(pts.begin(), pts.end());  // descending: rightmost point first
        if (!best || pts < best_pts) {
            best = occ;
            best_pts = std::move(pts);
        }
    });
    return best;
}

std::optional<std::vector<int>> rightmost_occurrence(const ArchSystem& host,
                                                     const ArchSystem& pattern) {
    auto spans = arch_spans(host);
    std::optional<std::vector<int>> best;
    std::vector<int> best_pts;
    for_each_occurrence(host, pattern, [&](const std::vector<int>& occ) {
        std::vector<int> pts = occurrence_endpoints(spans, occ);
        if (!best || pts > best_pts) {
            best = occ;
            best_pts = std::move(pts);
        }
    });
    return best;
}

ArchSystem induced_subsystem(const ArchSystem& host, const std::vector<int>& arch_ids) {
    int total = system_size(host);
    std::vector<char> keep(static_cast<std::size_t>(total), 0);
    for (int id : arch_ids) {
        if (id < 0 || id >= total) throw std::out_of_range("arch id out of range");
        keep[static_cast<std::size_t>(id)] = 1;
    }
    struct Rec {
        const std::vector<char>& keep;
        int id = 0;
        ArchSystem walk(const ArchSystem& sys) {
            ArchSystem out;
            for (const Atom& a : sys) {
                bool kept = keep[static_cast<std::size_t>(id++)];
                ArchSystem inner = walk(a.contents);
                if (kept)
                    out.push_back(Atom{std::move(inner)});
                else
                    for (Atom& x : inner) out.push_back(std::move(x));
            }
            return out;
        }
    } rec{keep};
    return rec.walk(host);
}

// ---- avoidance counting --------------------------------------------------

std::uint64_t count_avoiders_serial(const ArchSystem& pattern, int n) {
    std::uint64_t count = 0;
    for_each_word(n, [&](const std::string& w) {
        if (!contains(parse(w), pattern)) ++count;
    });
    return count;
}

std::uint64_t count_avoiders(const ArchSystem& pattern, int n) {
#if defined(_OPENMP)
    std::uint64_t total = catalan_u64(n);
    if (total < 4096) return count_avoiders_serial(pattern, n);
    int chunks = omp_get_max_threads() * 4;
    std::uint64_t base = total / static_cast<std::uint64_t>(chunks);
    std::uint64_t rem = total % static_cast<std::uint64_t>(chunks);
    std::uint64_t count = 0;
#pragma omp parallel for reduction(+ : count) schedule(dynamic)
    for (int c = 0; c < chunks; ++c) {
        std::uint64_t uc = static_cast<std::uint64_t>(c);
        std::uint64_t lo = uc * base + std::min(uc, rem);
        std::uint64_t hi = lo + base + (uc < rem ? 1 : 0);
        WordStream s(n, lo);
        for (std::uint64_t i = lo; i < hi; ++i, s.advance())
            if (!contains(parse(s.word()), pattern)) ++count;
    }
    return count;
#else
    return count_avoiders_serial(pattern, n);
#endif
}

}  // namespace cohorts
