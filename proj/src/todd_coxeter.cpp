#include "homoperc/todd_coxeter.hpp"

#include <deque>
#include <limits>
#include <stdexcept>

#include "homoperc/errors.hpp"

namespace homoperc {

namespace {
constexpr std::uint32_t kUndef = std::numeric_limits<std::uint32_t>::max();
}

Word parse_word(const std::string& s) {
    Word w;
    for (char c : s) {
        switch (c) {
            case 'a': w.push_back(kGenA); break;
            case 'A': w.push_back(kGenAInv); break;
            case 'b': w.push_back(kGenB); break;
            case 'B': w.push_back(kGenBInv); break;
            case ' ': break;
            default:
                throw ParseError(std::string("bad generator letter '") + c +
                                 "' (want a, b, A, B)");
        }
    }
    return w;
}

std::string word_to_string(const Word& w) {
    static const char letters[4] = {'a', 'A', 'b', 'B'};
    std::string s;
    for (int g : w) {
        if (g < 0 || g > 3) throw InvalidArgument("bad generator code");
        s += letters[g];
    }
    return s;
}

std::vector<Word> GroupPresentation::relators() const {
    std::vector<Word> rs;
    rs.push_back(Word(static_cast<std::size_t>(a_order), kGenA));
    rs.push_back(Word(static_cast<std::size_t>(b_order), kGenB));
    rs.push_back(Word{kGenA, kGenB, kGenA, kGenB});
    for (const auto& r : extra_relators) rs.push_back(r);
    return rs;
}

GroupPresentation van_dyck(int d, int f, std::vector<Word> extra_relators) {
    if (d < 2 || f < 2) throw InvalidArgument("van_dyck: orders must be >= 2");
    GroupPresentation p;
    p.a_order = d;
    p.b_order = f;
    p.extra_relators = std::move(extra_relators);
    return p;
}

namespace {

class Enumerator {
public:
    Enumerator(std::size_t cap) : cap_(cap), alloc_cap_(cap * 3 + 1024) {
        add_coset();
    }

    std::uint32_t rep(std::uint32_t c) {
        while (parent_[c] != c) {
            parent_[c] = parent_[parent_[c]];
            c = parent_[c];
        }
        return c;
    }

    bool dead(std::uint32_t c) { return rep(c) != c; }
    std::size_t live() const { return live_; }

    void scan_and_fill(std::uint32_t alpha, const Word& w) {
        std::uint32_t f = alpha, b = alpha;
        std::size_t i = 0, j = w.size();  // unscanned interval [i, j)
        while (true) {
            while (i < j && tab_[f][w[i]] != kUndef) f = tab_[f][w[i++]];
            if (i == j) {
                if (f != b) coincidence(f, b);
                return;
            }
            while (j > i && tab_[b][inverse_gen(w[j - 1])] != kUndef)
                b = tab_[b][inverse_gen(w[--j])];
            if (j == i) {
                coincidence(f, b);
                return;
            }
            if (j == i + 1) {
                tab_[f][w[i]] = b;
                tab_[b][inverse_gen(w[i])] = f;
                return;
            }
            define(f, w[i]);
        }
    }

    void define(std::uint32_t alpha, int g) {
        if (live_ + 1 > cap_)
            throw CapacityExceeded("coset enumeration passed " + std::to_string(cap_) +
                                   " live cosets");
        if (tab_.size() + 1 > alloc_cap_)
            throw CapacityExceeded("coset table storage exhausted at cap " +
                                   std::to_string(cap_));
        std::uint32_t beta = add_coset();
        tab_[alpha][g] = beta;
        tab_[beta][inverse_gen(g)] = alpha;
    }

    void coincidence(std::uint32_t x, std::uint32_t y) {
        merge(x, y);
        while (!queue_.empty()) {
            std::uint32_t gamma = queue_.front();
            queue_.pop_front();
            for (int g = 0; g < 4; ++g) {
                std::uint32_t delta = tab_[gamma][g];
                if (delta == kUndef) continue;
                tab_[delta][inverse_gen(g)] = kUndef;
                std::uint32_t mu = rep(gamma), nu = rep(delta);
                if (tab_[mu][g] != kUndef) {
                    merge(nu, tab_[mu][g]);
                } else if (tab_[nu][inverse_gen(g)] != kUndef) {
                    merge(mu, tab_[nu][inverse_gen(g)]);
                } else {
                    tab_[mu][g] = nu;
                    tab_[nu][inverse_gen(g)] = mu;
                }
            }
        }
    }

    std::array<std::uint32_t, 4>& row(std::uint32_t c) { return tab_[c]; }
    std::size_t allocated() const { return tab_.size(); }

private:
    std::uint32_t add_coset() {
        std::uint32_t c = static_cast<std::uint32_t>(tab_.size());
        tab_.push_back({kUndef, kUndef, kUndef, kUndef});
        parent_.push_back(c);
        ++live_;
        return c;
    }

    // Smaller index becomes the representative, so numbering stays stable.
    void merge(std::uint32_t x, std::uint32_t y) {
        x = rep(x);
        y = rep(y);
        if (x == y) return;
        if (x > y) std::swap(x, y);
        parent_[y] = x;
        --live_;
        queue_.push_back(y);
    }

    std::size_t cap_;
    std::size_t alloc_cap_;
    std::size_t live_ = 0;
    std::vector<std::array<std::uint32_t, 4>> tab_;
    std::vector<std::uint32_t> parent_;
    std::deque<std::uint32_t> queue_;
};

}  // namespace

CosetTable todd_coxeter(const GroupPresentation& p,
                        const std::vector<Word>& subgroup_words,
                        std::size_t max_cosets) {
    if (max_cosets == 0) throw InvalidArgument("todd_coxeter: zero coset cap");
    const std::vector<Word> relators = p.relators();

    Enumerator en(max_cosets);

    // Coincidences can undefine entries of rows that were already scanned,
    // so the sweep repeats until a pass finds the table complete. Every
    // incomplete pass defines or merges something, which bounds the loop.
    while (true) {
        for (const auto& w : subgroup_words) en.scan_and_fill(0, w);
        for (std::uint32_t alpha = 0; alpha < en.allocated(); ++alpha) {
            if (en.dead(alpha)) continue;
            for (const auto& r : relators) {
                en.scan_and_fill(alpha, r);
                if (en.dead(alpha)) break;
            }
            if (en.dead(alpha)) continue;
            for (int g = 0; g < 4; ++g)
                if (en.row(alpha)[g] == kUndef) en.define(alpha, g);
        }
        bool complete = true;
        for (std::uint32_t c = 0; c < en.allocated() && complete; ++c) {
            if (en.dead(c)) continue;
            for (int g = 0; g < 4; ++g)
                if (en.row(c)[g] == kUndef) { complete = false; break; }
        }
        if (complete) break;
    }

    // Standardize: breadth-first renumbering from the subgroup coset.
    std::vector<std::uint32_t> newid(en.allocated(), kUndef);
    std::vector<std::uint32_t> order;
    order.reserve(en.live());
    std::uint32_t root = en.rep(0);
    newid[root] = 0;
    order.push_back(root);
    for (std::size_t head = 0; head < order.size(); ++head) {
        std::uint32_t c = order[head];
        for (int g = 0; g < 4; ++g) {
            std::uint32_t d = en.rep(en.row(c)[g]);
            if (newid[d] == kUndef) {
                newid[d] = static_cast<std::uint32_t>(order.size());
                order.push_back(d);
            }
        }
    }
    if (order.size() != en.live())
        throw std::logic_error("todd_coxeter: table not transitive");

    CosetTable table;
    table.count = order.size();
    table.action.resize(order.size());
    for (std::size_t i = 0; i < order.size(); ++i)
        for (int g = 0; g < 4; ++g)
            table.action[i][g] = newid[en.rep(en.row(order[i])[g])];

    // Closure audit: every relator and subgroup word must act trivially.
    for (std::uint32_t c = 0; c < table.count; ++c)
        for (const auto& r : relators)
            if (table.trace(c, r) != c)
                throw std::logic_error("todd_coxeter: relator does not close");
    for (const auto& w : subgroup_words)
        if (table.trace(0, w) != 0)
            throw std::logic_error("todd_coxeter: subgroup word does not fix coset 0");

    return table;
}

}  // namespace homoperc
