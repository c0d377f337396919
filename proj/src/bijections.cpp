#include "cohorts/bijections.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <mutex>
#include <queue>
#include <set>
#include <stdexcept>
#include <utility>

#include "cohorts/containment.hpp"

namespace cohorts {

// Design notes
//
// The swap map pins the leftmost occurrence of P and the rightmost occurrence
// of Q, then rewrites only the gap between them.  Inside the gap the marked
// characters are the closings of arches entering from the left, the openings
// of arches leaving to the right, and both ends of the arches around the
// designated carrier (the gap arch whose subtree holds the middle pattern
// atom, chosen by minimal right end going forward and maximal left end coming
// back).  Non-crossing forces the marks into the fixed layout
//
//   [entering closings] [leaving openings] [carrier openings]
//     core  [carrier closings] [entering closings] [leaving openings]
//
// with at most one of the two inner straddle groups nonempty, and the
// unmarked stretches between marks are complete systems.  The map keeps the
// core in place, reverses the stretch sequence around it, and redeals the
// straddle marks as far left as they fit.  Everything else in the word is
// untouched, so the rewrite is an involution-style exchange between the two
// designations rather than anything global.

Bijection::Bijection(ArchSystem src, ArchSystem tgt)
    : src_(std::move(src)), tgt_(std::move(tgt)) {}

ArchSystem Bijection::apply(const ArchSystem& x, bool check) const {
    if (check && contains(x, src_))
        throw std::invalid_argument("input contains the source pattern");
    return map(x);
}

ArchSystem Bijection::unapply(const ArchSystem& y, bool check) const {
    if (check && contains(y, tgt_))
        throw std::invalid_argument("input contains the target pattern");
    return unmap(y);
}

namespace {

enum class Pick { min_right, max_left };

struct Boundaries {
    int end_left;     // last position of the pinned left occurrence, -1 without P
    int start_right;  // first position of the pinned right occurrence, |word| without Q
};

Boundaries pin_gap(const ArchSystem& x, const std::string& xw,
                   const std::vector<std::pair<int, int>>& spans,
                   const ArchSystem& P, const ArchSystem& Q) {
    Boundaries b{-1, static_cast<int>(xw.size())};
    if (!P.empty()) {
        auto occ = leftmost_occurrence(x, P);
        if (!occ) throw std::logic_error("gap rewrite without a left occurrence");
        b.end_left = occurrence_endpoints(spans, *occ).back();
    }
    if (!Q.empty()) {
        auto occ = rightmost_occurrence(x, Q);
        if (!occ) throw std::logic_error("gap rewrite without a right occurrence");
        b.start_right = occurrence_endpoints(spans, *occ).front();
    }
    if (b.end_left >= b.start_right) throw std::logic_error("pinned occurrences overlap");
    return b;
}

ArchSystem reparse(const std::string& word, const char* what) {
    try {
        return parse(word);
    } catch (const ParseError&) {
        throw std::logic_error(std::string(what) + " produced an invalid word");
    }
}

ArchSystem reverse_gap(const ArchSystem& x, const ArchSystem& P, const ArchSystem& Q,
                       const Atom& a, Pick pick) {
    const std::string xw = render(x);
    const auto spans = arch_spans(x);
    const Boundaries b = pin_gap(x, xw, spans, P, Q);
    const ArchSystem probe = as_system(a);

    int zi = -1;
    for (int id = 0; id < static_cast<int>(spans.size()); ++id) {
        auto [l, r] = spans[id];
        if (l <= b.end_left || r >= b.start_right) continue;
        if (!contains(as_system(atom_at(x, id)), probe)) continue;
        if (zi < 0 ||
            (pick == Pick::min_right ? r < spans[zi].second : l > spans[zi].first))
            zi = id;
    }
    if (zi < 0) throw std::logic_error("no carrier inside the gap");
    const int zl = spans[zi].first, zr = spans[zi].second;

    std::vector<int> i_close, j_open, k_open, k_close;
    for (auto [l, r] : spans) {
        const bool l_in = l > b.end_left && l < b.start_right;
        const bool r_in = r > b.end_left && r < b.start_right;
        if (!l_in && r_in) i_close.push_back(r);
        else if (l_in && !r_in) j_open.push_back(l);
        else if (l_in && r_in && l <= zl && r >= zr) {
            k_open.push_back(l);
            k_close.push_back(r);
        }
    }
    std::sort(i_close.begin(), i_close.end());
    std::sort(j_open.begin(), j_open.end());
    std::sort(k_open.begin(), k_open.end());
    std::sort(k_close.begin(), k_close.end());

    std::vector<int> iL, iR, jL, jR;
    auto side_split = [&](const std::vector<int>& v, std::vector<int>& lo, std::vector<int>& hi) {
        for (int p : v) {
            if (p < zl) lo.push_back(p);
            else if (p > zr) hi.push_back(p);
            else throw std::logic_error("straddle mark inside the carrier");
        }
    };
    side_split(i_close, iL, iR);
    side_split(j_open, jL, jR);
    if (!jL.empty() && !iR.empty()) throw std::logic_error("straddle marks out of order");

    std::vector<int> left_marks = iL;
    left_marks.insert(left_marks.end(), jL.begin(), jL.end());
    left_marks.insert(left_marks.end(), k_open.begin(), k_open.end());
    std::vector<int> right_marks = k_close;
    right_marks.insert(right_marks.end(), iR.begin(), iR.end());
    right_marks.insert(right_marks.end(), jR.begin(), jR.end());
    if (!std::is_sorted(left_marks.begin(), left_marks.end()) ||
        !std::is_sorted(right_marks.begin(), right_marks.end()))
        throw std::logic_error("gap marks out of order");
    if (left_marks.empty() || left_marks.back() != zl || right_marks.front() != zr)
        throw std::logic_error("carrier is not innermost among its covers");

    std::vector<std::string> left_slots, right_slots;
    int prev = b.end_left;
    for (int mk : left_marks) {
        left_slots.push_back(xw.substr(prev + 1, mk - prev - 1));
        prev = mk;
    }
    const std::string core = xw.substr(zl + 1, zr - zl - 1);
    for (std::size_t h = 0; h < right_marks.size(); ++h) {
        const int next = h + 1 < right_marks.size() ? right_marks[h + 1] : b.start_right;
        right_slots.push_back(xw.substr(right_marks[h] + 1, next - right_marks[h] - 1));
    }

    const int i_total = static_cast<int>(iL.size() + iR.size());
    const int j_total = static_cast<int>(jL.size() + jR.size());
    const int k = static_cast<int>(k_open.size());
    const int p_slots = static_cast<int>(left_slots.size());
    const int q_slots = static_cast<int>(right_slots.size());
    const int avail = q_slots - k;
    const int n_iL = std::min(i_total, avail);
    const int n_jL = avail - n_iL;
    const int n_iR = i_total - n_iL;
    const int n_jR = j_total - n_jL;

    std::string left_chars(n_iL, ')');
    left_chars.append(n_jL, '(').append(k, '(');
    std::string right_chars(k, ')');
    right_chars.append(n_iR, ')').append(n_jR, '(');
    // reversed stretch sequence: right slots outside-in, core, left slots inside-out
    std::vector<const std::string*> seq;
    for (int h = q_slots - 1; h >= 0; --h) seq.push_back(&right_slots[h]);
    for (int h = p_slots - 1; h >= 0; --h) seq.push_back(&left_slots[h]);

    std::string out = xw.substr(0, b.end_left + 1);
    std::size_t si = 0;
    for (int h = 0; h < q_slots; ++h) {
        out += *seq[si++];
        out += left_chars[h];
    }
    out += core;
    for (int h = 0; h < p_slots; ++h) {
        out += right_chars[h];
        out += *seq[si++];
    }
    out += xw.substr(b.start_right);
    return reparse(out, "gap reversal");
}

class IdentityBij final : public Bijection {
public:
    explicit IdentityBij(ArchSystem p) : Bijection(p, p) {}
    std::string describe() const override { return "id(" + render(source()) + ")"; }

protected:
    ArchSystem map(const ArchSystem& x) const override { return x; }
    ArchSystem unmap(const ArchSystem& y) const override { return y; }
};

class SwapBij final : public Bijection {
public:
    SwapBij(ArchSystem P, ArchSystem Q, Atom a, Atom b)
        : Bijection(concat(concat(concat(P, as_system(a)), as_system(b)), Q),
                    concat(concat(concat(P, as_system(b)), as_system(a)), Q)),
          P_(std::move(P)), Q_(std::move(Q)), a_(std::move(a)), b_(std::move(b)),
          mid_(concat(concat(P_, as_system(a_)), Q_)) {}

    std::string describe() const override {
        return "swap(" + render(P_) + ";" + render(Q_) + ";" + render(a_) + ";" +
               render(b_) + ")";
    }

protected:
    ArchSystem map(const ArchSystem& x) const override {
        if (avoids(x, mid_)) return x;
        return reverse_gap(x, P_, Q_, a_, Pick::min_right);
    }
    ArchSystem unmap(const ArchSystem& y) const override {
        if (avoids(y, mid_)) return y;
        return reverse_gap(y, P_, Q_, a_, Pick::max_left);
    }

private:
    ArchSystem P_, Q_;
    Atom a_, b_;
    ArchSystem mid_;
};

// The absorb map hands the rightmost subtree holding b a new cover: walking
// the chain of arches over that subtree, every sibling stretch swaps sides,
// the stretch left of the chain is mapped recursively, and the far prefix and
// suffix trade places with the innermost sibling stretches.  Reading the
// chain of the leftmost such subtree undoes it.
class AbsorbBij final : public Bijection {
public:
    AbsorbBij(Atom a, std::optional<Atom> b)
        : Bijection(src_of(a, b), tgt_of(a, b)), a_(std::move(a)), b_(std::move(b)) {
        if (b_) bpat_ = as_system(*b_);
    }

    std::string describe() const override {
        return "absorb(" + render(a_) + ";" + (b_ ? render(*b_) : std::string("-")) + ")";
    }

protected:
    ArchSystem map(const ArchSystem& x) const override {
        if (!b_) {
            if (x.empty()) return x;
            ArchSystem head(x.begin(), x.end() - 1);
            return concat(as_system(wrap(head)), map(x.back().contents));
        }
        if (avoids(x, bpat_)) return x;
        const std::string xw = render(x);
        const auto spans = arch_spans(x);
        const int w = (*rightmost_occurrence(x, bpat_))[0];
        const auto [wl, wr] = spans[w];
        std::vector<std::pair<int, int>> chain;  // arches over w, innermost first
        for (auto [l, r] : spans)
            if (l < wl && r > wr) chain.push_back({l, r});
        std::sort(chain.begin(), chain.end(),
                  [](auto u, auto v) { return u.first > v.first; });
        const int p = static_cast<int>(chain.size());

        std::string M, B0;
        if (p == 0) {
            M = xw.substr(0, wl);
            B0 = xw.substr(wr + 1);
        } else {
            M = xw.substr(chain[0].first + 1, wl - chain[0].first - 1);
            B0 = xw.substr(wr + 1, chain[0].second - wr - 1);
        }
        std::string cur = "(" + xw.substr(wl + 1, wr - wl - 1) + ")";
        for (int i = 1; i <= p; ++i) {
            std::string Ai, Bi;
            if (i < p) {
                Ai = xw.substr(chain[i].first + 1, chain[i - 1].first - chain[i].first - 1);
                Bi = xw.substr(chain[i - 1].second + 1,
                               chain[i].second - chain[i - 1].second - 1);
            } else {
                Ai = xw.substr(0, chain[p - 1].first);
                Bi = xw.substr(chain[p - 1].second + 1);
            }
            cur = "(" + Bi + cur + Ai + ")";
        }
        const ArchSystem m_in = reparse(M, "absorb split");
        return reparse(B0 + cur + render(map(m_in)), "absorb rebuild");
    }

    ArchSystem unmap(const ArchSystem& y) const override {
        if (!b_) {
            if (y.empty()) return y;
            ArchSystem tail(y.begin() + 1, y.end());
            return concat(y.front().contents, as_system(wrap(unmap(tail))));
        }
        if (avoids(y, bpat_)) return y;
        const std::string yw = render(y);
        const auto spans = arch_spans(y);
        const int w = (*leftmost_occurrence(y, bpat_))[0];
        const auto [wl, wr] = spans[w];
        std::vector<std::pair<int, int>> chain;
        for (auto [l, r] : spans)
            if (l < wl && r > wr) chain.push_back({l, r});
        std::sort(chain.begin(), chain.end(),
                  [](auto u, auto v) { return u.first > v.first; });
        const int p = static_cast<int>(chain.size());

        std::string B0, Ms;
        if (p == 0) {
            B0 = yw.substr(0, wl);
            Ms = yw.substr(wr + 1);
        } else {
            B0 = yw.substr(0, chain[p - 1].first);
            Ms = yw.substr(chain[p - 1].second + 1);
        }
        const std::string core = yw.substr(wl + 1, wr - wl - 1);
        const std::string m_out = render(unmap(reparse(Ms, "absorb read")));
        if (p == 0) return reparse(m_out + "(" + core + ")" + B0, "absorb undo");

        std::string cur = "(" + m_out + "(" + core + ")" + B0 + ")";
        for (int i = 1; i <= p - 1; ++i) {
            const int r_lo = i == 1 ? wr : chain[i - 2].second;
            const int l_hi = i == 1 ? wl : chain[i - 2].first;
            const std::string Ai = yw.substr(r_lo + 1, chain[i - 1].second - r_lo - 1);
            const std::string Bi = yw.substr(chain[i - 1].first + 1,
                                             l_hi - chain[i - 1].first - 1);
            cur = "(" + Ai + cur + Bi + ")";
        }
        const int r_lo = p == 1 ? wr : chain[p - 2].second;
        const int l_hi = p == 1 ? wl : chain[p - 2].first;
        const std::string Ap = yw.substr(r_lo + 1, chain[p - 1].second - r_lo - 1);
        const std::string Bp = yw.substr(chain[p - 1].first + 1,
                                         l_hi - chain[p - 1].first - 1);
        return reparse(Ap + cur + Bp, "absorb undo");
    }

private:
    static ArchSystem src_of(const Atom& a, const std::optional<Atom>& b) {
        const ArchSystem inner = b ? as_system(*b) : ArchSystem{};
        return concat(as_system(a), as_system(wrap(inner)));
    }
    static ArchSystem tgt_of(const Atom& a, const std::optional<Atom>& b) {
        if (!b) return as_system(wrap(as_system(a)));
        return as_system(wrap(concat(as_system(*b), as_system(a))));
    }

    Atom a_;
    std::optional<Atom> b_;
    ArchSystem bpat_;
};

class InverseBij final : public Bijection {
public:
    explicit InverseBij(BijPtr inner)
        : Bijection(inner->target(), inner->source()), inner_(std::move(inner)) {}
    std::string describe() const override { return "inv[" + inner_->describe() + "]"; }

protected:
    ArchSystem map(const ArchSystem& x) const override { return inner_->unapply(x, false); }
    ArchSystem unmap(const ArchSystem& y) const override { return inner_->apply(y, false); }

private:
    BijPtr inner_;
};

class WrapLiftBij final : public Bijection {
public:
    explicit WrapLiftBij(BijPtr inner)
        : Bijection(as_system(wrap(inner->source())), as_system(wrap(inner->target()))),
          inner_(std::move(inner)) {}
    std::string describe() const override { return "lift[" + inner_->describe() + "]"; }

protected:
    ArchSystem map(const ArchSystem& x) const override {
        ArchSystem out;
        out.reserve(x.size());
        for (const Atom& t : x) out.push_back(wrap(inner_->apply(t.contents, false)));
        return out;
    }
    ArchSystem unmap(const ArchSystem& y) const override {
        ArchSystem out;
        out.reserve(y.size());
        for (const Atom& t : y) out.push_back(wrap(inner_->unapply(t.contents, false)));
        return out;
    }

private:
    BijPtr inner_;
};

// Between the pinned occurrences every gap stretch is a complete system clear
// of the inner pattern, so the inner map acts stretch by stretch while the
// straddling arch characters stay put.
class ContextBij final : public Bijection {
public:
    ContextBij(ArchSystem P, ArchSystem Q, BijPtr inner)
        : Bijection(concat(concat(P, inner->source()), Q),
                    concat(concat(P, inner->target()), Q)),
          P_(std::move(P)), Q_(std::move(Q)), inner_(std::move(inner)),
          pq_(concat(P_, Q_)) {}

    std::string describe() const override {
        return "ctx(" + render(P_) + ";" + render(Q_) + ")[" + inner_->describe() + "]";
    }

protected:
    ArchSystem map(const ArchSystem& x) const override { return reslot(x, true); }
    ArchSystem unmap(const ArchSystem& y) const override { return reslot(y, false); }

private:
    ArchSystem reslot(const ArchSystem& x, bool fwd) const {
        if (avoids(x, pq_)) return x;
        const std::string xw = render(x);
        const auto spans = arch_spans(x);
        const Boundaries b = pin_gap(x, xw, spans, P_, Q_);
        std::vector<std::pair<int, char>> marks;
        for (auto [l, r] : spans) {
            const bool l_in = l > b.end_left && l < b.start_right;
            const bool r_in = r > b.end_left && r < b.start_right;
            if (!l_in && r_in) marks.push_back({r, ')'});
            else if (l_in && !r_in) marks.push_back({l, '('});
        }
        std::sort(marks.begin(), marks.end());
        bool seen_open = false;
        for (auto& [pos, c] : marks) {
            if (c == '(') seen_open = true;
            else if (seen_open) throw std::logic_error("straddle marks out of order");
        }
        std::string out = xw.substr(0, b.end_left + 1);
        int prev = b.end_left;
        auto emit = [&](int lo, int hi) {
            const ArchSystem slot = reparse(xw.substr(lo + 1, hi - lo - 1), "context slot");
            out += render(fwd ? inner_->apply(slot, false) : inner_->unapply(slot, false));
        };
        for (auto& [pos, c] : marks) {
            emit(prev, pos);
            out += c;
            prev = pos;
        }
        emit(prev, b.start_right);
        out += xw.substr(b.start_right);
        return reparse(out, "context rewrite");
    }

    ArchSystem P_, Q_;
    BijPtr inner_;
    ArchSystem pq_;
};

class ComposeBij final : public Bijection {
public:
    explicit ComposeBij(std::vector<BijPtr> steps)
        : Bijection(steps.front()->source(), steps.back()->target()),
          steps_(std::move(steps)) {}

    std::string describe() const override {
        std::string out = "compose[";
        for (std::size_t i = 0; i < steps_.size(); ++i) {
            if (i) out += ";";
            out += steps_[i]->describe();
        }
        return out + "]";
    }

protected:
    ArchSystem map(const ArchSystem& x) const override {
        ArchSystem cur = x;
        for (const auto& s : steps_) cur = s->apply(cur, false);
        return cur;
    }
    ArchSystem unmap(const ArchSystem& y) const override {
        ArchSystem cur = y;
        for (auto it = steps_.rbegin(); it != steps_.rend(); ++it)
            cur = (*it)->unapply(cur, false);
        return cur;
    }

private:
    std::vector<BijPtr> steps_;
};

}  // namespace

BijPtr bij_identity(ArchSystem pattern) {
    return std::make_shared<IdentityBij>(std::move(pattern));
}

BijPtr bij_swap(ArchSystem P, ArchSystem Q, Atom a, Atom b) {
    return std::make_shared<SwapBij>(std::move(P), std::move(Q), std::move(a), std::move(b));
}

BijPtr bij_absorb(Atom a, std::optional<Atom> b) {
    return std::make_shared<AbsorbBij>(std::move(a), std::move(b));
}

BijPtr bij_inverse(BijPtr inner) {
    if (!inner) throw std::invalid_argument("null bijection");
    return std::make_shared<InverseBij>(std::move(inner));
}

BijPtr bij_wrap_lift(BijPtr inner) {
    if (!inner) throw std::invalid_argument("null bijection");
    return std::make_shared<WrapLiftBij>(std::move(inner));
}

BijPtr bij_context(ArchSystem P, ArchSystem Q, BijPtr inner) {
    if (!inner) throw std::invalid_argument("null bijection");
    if (inner->source().size() != 1 || inner->target().size() != 1)
        throw std::invalid_argument("context lifting needs single-atom inner patterns");
    return std::make_shared<ContextBij>(std::move(P), std::move(Q), std::move(inner));
}

BijPtr bij_compose(std::vector<BijPtr> steps) {
    if (steps.empty()) throw std::invalid_argument("empty composition");
    for (const auto& s : steps)
        if (!s) throw std::invalid_argument("null bijection");
    for (std::size_t i = 0; i + 1 < steps.size(); ++i)
        if (render(steps[i]->target()) != render(steps[i + 1]->source()))
            throw std::invalid_argument("composition patterns do not line up");
    if (steps.size() == 1) return steps.front();
    return std::make_shared<ComposeBij>(std::move(steps));
}

// ---- move compilation -----------------------------------------------------

namespace {

// Forward rotation on the two-layer forest [a?, (w)], w split into b | c.
BijPtr forward_route(const ArchSystem& F, int split) {
    if (F.empty() || F.size() > 2)
        throw std::invalid_argument("rotation needs one or two atoms");
    const ArchSystem& w = F.back().contents;
    const int rest = static_cast<int>(w.size()) - split;
    if (split < 0 || split > 1 || rest < 0 || rest > 1)
        throw std::invalid_argument("rotation split out of range");
    const std::optional<Atom> a =
        F.size() == 2 ? std::optional<Atom>(F.front()) : std::nullopt;
    const std::optional<Atom> b = split == 1 ? std::optional<Atom>(w.front()) : std::nullopt;
    const std::optional<Atom> c = rest == 1 ? std::optional<Atom>(w.back()) : std::nullopt;

    if (a && b && c)
        throw std::invalid_argument("rotation with all three slots full has no bijection");
    if (!a && !c) return bij_identity(F);
    if (!a) {
        return bij_compose({bij_inverse(bij_absorb(*c, b)),
                            bij_swap({}, {}, *c, wrap(b ? as_system(*b) : ArchSystem{}))});
    }
    if (!b && c) {
        return bij_compose({bij_absorb(*a, *c),
                            bij_wrap_lift(bij_swap({}, {}, *c, *a)),
                            bij_inverse(bij_absorb(*c, *a)),
                            bij_swap({}, {}, *c, wrap(as_system(*a)))});
    }
    if (!b) return bij_absorb(*a, std::nullopt);
    return bij_compose({bij_absorb(*a, *b), bij_wrap_lift(bij_swap({}, {}, *b, *a))});
}

BijPtr local_bijection(const ArchSystem& f, const Move& m) {
    if (m.kind == Move::Kind::swap_atoms) {
        if (m.pos < 0 || m.pos + 1 >= static_cast<int>(f.size()))
            throw std::invalid_argument("swap position out of range");
        return bij_swap(ArchSystem(f.begin(), f.begin() + m.pos),
                        ArchSystem(f.begin() + m.pos + 2, f.end()),
                        f[m.pos], f[m.pos + 1]);
    }
    if (m.forward) return forward_route(f, m.split);
    // A backward rotation inverts the forward one that recreates f from its
    // image: f = [(w), c?] comes from [w[:s], (w[s:] c?)] by keeping |w| - s
    // leading atoms in the wrap.
    Move local = m;
    local.path.clear();
    const ArchSystem f2 = apply_move(f, local);
    const int fwd_split = static_cast<int>(f.front().contents.size()) - m.split;
    return bij_inverse(forward_route(f2, fwd_split));
}

}  // namespace

BijPtr move_bijection(const ArchSystem& state, const Move& m) {
    struct Frame {
        ArchSystem prefix, suffix;
    };
    std::vector<Frame> frames;
    const ArchSystem* f = &state;
    for (int idx : m.path) {
        if (idx < 0 || idx >= static_cast<int>(f->size()))
            throw std::invalid_argument("move path leaves the forest");
        frames.push_back({ArchSystem(f->begin(), f->begin() + idx),
                          ArchSystem(f->begin() + idx + 1, f->end())});
        f = &(*f)[idx].contents;
    }
    Move local = m;
    local.path.clear();
    BijPtr sigma = local_bijection(*f, local);
    for (auto it = frames.rbegin(); it != frames.rend(); ++it)
        sigma = bij_context(it->prefix, it->suffix, bij_wrap_lift(sigma));
    if (render(sigma->target()) != render(apply_move(state, m)))
        throw std::logic_error("move bijection target mismatch");
    return sigma;
}

// ---- paths ----------------------------------------------------------------

namespace {

constexpr std::int32_t kCellUnknown = -1;
constexpr std::int32_t kCellError = -2;

struct AvData {
    std::vector<char> flags;              // over the word pool
    std::vector<std::int32_t> members;    // pool indices of the avoiders
};

struct VCache {
    std::mutex mu;
    std::map<int, std::vector<std::string>> pools;
    std::map<int, std::vector<ArchSystem>> parsed;
    std::map<std::string, AvData> av;
    std::map<std::string, std::vector<std::int32_t>> tables;
    std::map<std::string, char> edge_ok;
    std::map<std::string, BijPtr> edge_bijs;
    std::map<std::string, std::vector<std::pair<Move, std::string>>> nbrs;
    std::map<std::string, std::string> comp_root;
    std::map<std::string, std::map<std::string, std::pair<std::string, Move>>> trees;
};

VCache& vcache() {
    static VCache c;
    return c;
}

const std::vector<std::string>& pool_words(int n) {
    auto& c = vcache();
    {
        std::lock_guard lk(c.mu);
        auto it = c.pools.find(n);
        if (it != c.pools.end()) return it->second;
    }
    auto words = enumerate_all(n);
    std::lock_guard lk(c.mu);
    return c.pools.emplace(n, std::move(words)).first->second;
}

const std::vector<ArchSystem>& parsed_pool(int n) {
    auto& c = vcache();
    {
        std::lock_guard lk(c.mu);
        auto it = c.parsed.find(n);
        if (it != c.parsed.end()) return it->second;
    }
    const auto& words = pool_words(n);
    std::vector<ArchSystem> sys;
    sys.reserve(words.size());
    for (const auto& w : words) sys.push_back(parse(w));
    std::lock_guard lk(c.mu);
    return c.parsed.emplace(n, std::move(sys)).first->second;
}

const AvData& av_data(const std::string& pattern_word, int n) {
    auto& c = vcache();
    const std::string key = pattern_word + '#' + std::to_string(n);
    {
        std::lock_guard lk(c.mu);
        auto it = c.av.find(key);
        if (it != c.av.end()) return it->second;
    }
    const ArchSystem pat = parse(pattern_word);
    const auto& sys = parsed_pool(n);
    AvData d;
    d.flags.assign(sys.size(), 0);
#pragma omp parallel for schedule(dynamic, 512)
    for (int i = 0; i < static_cast<int>(sys.size()); ++i)
        if (avoids(sys[static_cast<std::size_t>(i)], pat)) d.flags[i] = 1;
    for (std::size_t i = 0; i < sys.size(); ++i)
        if (d.flags[i]) d.members.push_back(static_cast<std::int32_t>(i));
    std::lock_guard lk(c.mu);
    return c.av.emplace(key, std::move(d)).first->second;
}

const BijPtr& edge_bijection(const std::string& state_word, const Move& m) {
    auto& c = vcache();
    const std::string key = state_word + '\x1f' + move_to_string(m);
    {
        std::lock_guard lk(c.mu);
        auto it = c.edge_bijs.find(key);
        if (it != c.edge_bijs.end()) return it->second;
    }
    BijPtr b = move_bijection(parse(state_word), m);
    std::lock_guard lk(c.mu);
    return c.edge_bijs.emplace(key, std::move(b)).first->second;
}

std::vector<std::int32_t>& edge_table(const std::string& state_word, const Move& m, int n,
                                      std::size_t pool_size) {
    auto& c = vcache();
    const std::string key =
        state_word + '\x1f' + move_to_string(m) + '\x1f' + std::to_string(n);
    std::lock_guard lk(c.mu);
    auto it = c.tables.find(key);
    if (it != c.tables.end()) return it->second;
    return c.tables.emplace(key, std::vector<std::int32_t>(pool_size, kCellUnknown))
        .first->second;
}

std::int32_t compute_cell(const Bijection& bij, const std::vector<std::string>& pool,
                          const std::vector<ArchSystem>& sys, std::int32_t idx) {
    try {
        const std::string yw = render(bij.apply(sys[idx], false));
        const auto it = std::lower_bound(pool.begin(), pool.end(), yw);
        if (it == pool.end() || *it != yw) return kCellError;
        return static_cast<std::int32_t>(it - pool.begin());
    } catch (const std::exception&) {
        return kCellError;
    }
}

const std::vector<std::pair<Move, std::string>>& cached_neighbors(const std::string& w,
                                                                  bool bijective_only) {
    auto& c = vcache();
    const std::string key = (bijective_only ? "1" : "0") + w;
    {
        std::lock_guard lk(c.mu);
        auto it = c.nbrs.find(key);
        if (it != c.nbrs.end()) return it->second;
    }
    std::vector<std::pair<Move, std::string>> out;
    for (auto& [m, y] : moves_from(parse(w), bijective_only)) {
        std::string yw = render(y);
        if (yw != w) out.emplace_back(m, std::move(yw));
    }
    std::lock_guard lk(c.mu);
    return c.nbrs.emplace(key, std::move(out)).first->second;
}

// Parent tree of the whole move component, rooted at its least word.  Routing
// every query through this one tree lets repeated queries inside a component
// share their per-move tables.
std::pair<std::string, const std::map<std::string, std::pair<std::string, Move>>*>
component_tree(const std::string& start, bool bijective_only) {
    auto& c = vcache();
    const std::string flag = bijective_only ? "1" : "0";
    {
        std::lock_guard lk(c.mu);
        auto it = c.comp_root.find(flag + start);
        if (it != c.comp_root.end()) return {it->second, &c.trees.at(flag + it->second)};
    }
    std::set<std::string> seen{start};
    std::queue<std::string> q;
    q.push(start);
    std::string least = start;
    while (!q.empty()) {
        const std::string w = q.front();
        q.pop();
        for (const auto& [m, yw] : cached_neighbors(w, bijective_only)) {
            if (seen.insert(yw).second) {
                if (yw < least) least = yw;
                q.push(yw);
            }
        }
    }
    std::map<std::string, std::pair<std::string, Move>> tree;
    std::queue<std::string> q2;
    q2.push(least);
    std::set<std::string> seen2{least};
    while (!q2.empty()) {
        const std::string w = q2.front();
        q2.pop();
        for (const auto& [m, yw] : cached_neighbors(w, bijective_only)) {
            if (seen2.insert(yw).second) {
                tree.emplace(yw, std::make_pair(w, m));
                q2.push(yw);
            }
        }
    }
    std::lock_guard lk(c.mu);
    for (const auto& w : seen) c.comp_root.emplace(flag + w, least);
    auto& slot = c.trees.emplace(flag + least, std::move(tree)).first->second;
    return {least, &slot};
}

Move inverse_move(const ArchSystem& state, const Move& m) {
    Move inv = m;
    if (m.kind == Move::Kind::swap_atoms) return inv;
    const ArchSystem* f = &state;
    for (int idx : m.path) f = &(*f)[idx].contents;
    if (m.forward) {
        inv.forward = false;
        inv.split = static_cast<int>(f->size()) - 1;
    } else {
        inv.forward = true;
        inv.split = static_cast<int>(f->front().contents.size()) - m.split;
    }
    return inv;
}

}  // namespace

std::optional<BijectionPath> find_path(const ArchSystem& A, const ArchSystem& B,
                                       bool bijective_only) {
    const std::string aw = render(A), bw = render(B);
    if (aw == bw) return BijectionPath{aw, bw, {}, {aw}};
    if (system_size(A) != system_size(B)) return std::nullopt;
    auto [root, tree] = component_tree(aw, bijective_only);
    if (bw != root && !tree->count(bw)) return std::nullopt;

    auto chain_to = [&](const std::string& w) {
        std::vector<std::string> words;
        std::vector<Move> mvs;
        std::string cur = w;
        while (cur != root) {
            const auto& [pw, m] = tree->at(cur);
            words.push_back(cur);
            mvs.push_back(m);
            cur = pw;
        }
        words.push_back(root);
        std::reverse(words.begin(), words.end());
        std::reverse(mvs.begin(), mvs.end());
        return std::make_pair(std::move(words), std::move(mvs));
    };
    auto [wa, ma] = chain_to(aw);
    auto [wb, mb] = chain_to(bw);
    std::size_t common = 0;
    while (common + 1 < wa.size() && common + 1 < wb.size() &&
           wa[common + 1] == wb[common + 1])
        ++common;

    BijectionPath path;
    path.start = aw;
    path.end = bw;
    path.states.push_back(aw);
    for (std::size_t i = wa.size() - 1; i > common; --i) {
        path.moves.push_back(inverse_move(parse(wa[i - 1]), ma[i - 1]));
        path.states.push_back(wa[i - 1]);
    }
    for (std::size_t i = common; i + 1 < wb.size(); ++i) {
        path.moves.push_back(mb[i]);
        path.states.push_back(wb[i + 1]);
    }
    return path;
}

BijPtr path_bijection(const BijectionPath& path) {
    if (path.states.empty() || path.states.front() != path.start ||
        path.states.back() != path.end || path.states.size() != path.moves.size() + 1)
        throw std::invalid_argument("inconsistent path");
    if (path.moves.empty()) return bij_identity(parse(path.start));
    std::vector<BijPtr> steps;
    steps.reserve(path.moves.size());
    for (std::size_t i = 0; i < path.moves.size(); ++i) {
        BijPtr b = move_bijection(parse(path.states[i]), path.moves[i]);
        if (render(b->target()) != path.states[i + 1])
            throw std::invalid_argument("path states do not follow its moves");
        steps.push_back(std::move(b));
    }
    return bij_compose(std::move(steps));
}

ArchSystem apply_path(const BijectionPath& path, const ArchSystem& x) {
    return path_bijection(path)->apply(x);
}

// ---- exhaustive verification ----------------------------------------------

namespace {

// One edge of a path as a map Av(state) -> Av(next state): checks totality,
// landing inside the next avoider set, injectivity, and count equality over
// the whole sets.  A path of verified edges composes to a verified bijection,
// so passing pairs never need a walk of their own; the verdict is cached per
// (state, move, host size).
bool edge_verified(const std::string& state_word, const Move& m,
                   const std::string& next_word, const Bijection& bij, int s) {
    auto& c = vcache();
    const std::string key =
        state_word + '\x1f' + move_to_string(m) + '\x1f' + std::to_string(s);
    {
        std::lock_guard lk(c.mu);
        auto it = c.edge_ok.find(key);
        if (it != c.edge_ok.end()) return it->second == '1';
    }
    const auto& pool = pool_words(s);
    const auto& sys = parsed_pool(s);
    const AvData& src = av_data(state_word, s);
    const AvData& dst = av_data(next_word, s);
    std::vector<std::int32_t>& tab = edge_table(state_word, m, s, pool.size());
#pragma omp parallel for schedule(dynamic, 128)
    for (int i = 0; i < static_cast<int>(src.members.size()); ++i) {
        std::int32_t& cell = tab[src.members[static_cast<std::size_t>(i)]];
        if (cell == kCellUnknown)
            cell = compute_cell(bij, pool, sys, src.members[static_cast<std::size_t>(i)]);
    }
    bool ok = src.members.size() == dst.members.size();
    std::vector<char> seen(pool.size(), 0);
    for (std::size_t i = 0; ok && i < src.members.size(); ++i) {
        const std::int32_t cell = tab[src.members[i]];
        if (cell < 0 || !dst.flags[cell] || seen[cell]) ok = false;
        else seen[cell] = 1;
    }
    std::lock_guard lk(c.mu);
    c.edge_ok.emplace(key, ok ? '1' : '0');
    return ok;
}

SizeCheck run_size(const BijectionPath& path, const std::vector<BijPtr>& bijs, int s) {
    SizeCheck sc;
    sc.host_size = s;
    const auto& pool = pool_words(s);
    const auto& sys = parsed_pool(s);
    const AvData& dom = av_data(path.start, s);
    const AvData& img = av_data(path.end, s);
    sc.domain_count = dom.members.size();
    sc.image_count = img.members.size();
    sc.counts_equal = sc.domain_count == sc.image_count;
    sc.total = sc.image_ok = sc.injective = true;

    const std::size_t L = path.moves.size();
    bool all_edges_ok = true;
    for (std::size_t e = 0; e < L; ++e)
        all_edges_ok = edge_verified(path.states[e], path.moves[e],
                                     path.states[e + 1], *bijs[e], s) &&
                       all_edges_ok;
    if (all_edges_ok) {
        if (!sc.counts_equal)
            sc.witness = "size " + std::to_string(s) + ": avoider counts differ: " +
                         std::to_string(sc.domain_count) + " vs " +
                         std::to_string(sc.image_count);
        return sc;
    }

    // Some edge fails somewhere in its avoider set; walk this path explicitly
    // so the report points at this pair's own first failure.
    std::vector<std::vector<std::int32_t>*> tabs(L);
    for (std::size_t e = 0; e < L; ++e)
        tabs[e] = &edge_table(path.states[e], path.moves[e], s, pool.size());

    auto note = [&](const std::string& msg) {
        if (sc.witness.empty()) sc.witness = "size " + std::to_string(s) + ": " + msg;
    };
    // One table at a time: the gathers within a level are independent, so the
    // sweep is throughput-bound instead of chasing one chain per member.
    std::vector<std::int32_t> cur(dom.members.begin(), dom.members.end());
    for (std::size_t e = 0; e < L; ++e) {
        std::vector<std::int32_t>& tab = *tabs[e];
        const Bijection& bij = *bijs[e];
        for (std::size_t i = 0; i < cur.size(); ++i) {
            if (cur[i] < 0) continue;
            std::int32_t& cell = tab[cur[i]];
            if (cell == kCellUnknown) cell = compute_cell(bij, pool, sys, cur[i]);
            if (cell < 0 && sc.total) {
                note(pool[dom.members[i]] + " has no image at step " +
                     std::to_string(e));
                sc.total = false;
            }
            cur[i] = cell;
        }
    }
    std::vector<char> seen(pool.size(), 0);
    for (std::size_t i = 0; i < cur.size(); ++i) {
        const std::int32_t to = cur[i];
        if (to < 0) continue;
        if (!img.flags[to]) {
            note(pool[dom.members[i]] + " maps to " + pool[to] +
                 ", which contains the target");
            sc.image_ok = false;
        }
        if (seen[to]) {
            note("two preimages share " + pool[to]);
            sc.injective = false;
        }
        seen[to] = 1;
    }
    if (!sc.counts_equal)
        note("avoider counts differ: " + std::to_string(sc.domain_count) + " vs " +
             std::to_string(sc.image_count));
    return sc;
}

}  // namespace

PathVerification verify_path(const BijectionPath& path, int max_host_size) {
    if (path.states.empty() || path.states.front() != path.start ||
        path.states.back() != path.end || path.states.size() != path.moves.size() + 1)
        throw std::invalid_argument("inconsistent path");
    std::vector<BijPtr> bijs;
    bijs.reserve(path.moves.size());
    for (std::size_t i = 0; i < path.moves.size(); ++i) {
        const BijPtr& b = edge_bijection(path.states[i], path.moves[i]);
        if (render(b->target()) != path.states[i + 1])
            throw std::invalid_argument("path states do not follow its moves");
        bijs.push_back(b);
    }
    PathVerification out;
    out.pass = true;
    for (int s = 0; s <= max_host_size; ++s) {
        SizeCheck sc = run_size(path, bijs, s);
        out.pass = out.pass && sc.pass();
        out.sizes.push_back(std::move(sc));
    }
    return out;
}

void clear_verification_caches() {
    auto& c = vcache();
    std::lock_guard lk(c.mu);
    c.pools.clear();
    c.parsed.clear();
    c.av.clear();
    c.tables.clear();
    c.edge_bijs.clear();
    c.nbrs.clear();
    c.comp_root.clear();
    c.trees.clear();
}

}  // namespace cohorts
