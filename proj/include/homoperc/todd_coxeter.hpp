#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace homoperc {

// Two-generator words. Codes: a, a^-1, b, b^-1.
enum GenCode : int { kGenA = 0, kGenAInv = 1, kGenB = 2, kGenBInv = 3 };

using Word = std::vector<int>;

inline int inverse_gen(int g) { return g ^ 1; }

// Letters: a, b, with A, B for inverses.
Word parse_word(const std::string& s);
std::string word_to_string(const Word& w);

// <a, b | a^d, b^f, (ab)^2, extra...>
struct GroupPresentation {
    int a_order = 0;  // d
    int b_order = 0;  // f
    std::vector<Word> extra_relators;

    std::vector<Word> relators() const;
};

GroupPresentation van_dyck(int d, int f,
                           std::vector<Word> extra_relators = {});

// Right action of a, a^-1, b, b^-1 on cosets; coset 0 is the subgroup.
struct CosetTable {
    std::size_t count = 0;
    std::vector<std::array<std::uint32_t, 4>> action;

    std::uint32_t act(std::uint32_t c, int g) const { return action[c][g]; }
    std::uint32_t trace(std::uint32_t c, const Word& w) const {
        for (int g : w) c = action[c][g];
        return c;
    }
};

// Coset enumeration over the subgroup generated by subgroup_words, by
// relator tracing with gap filling and coincidence merging. The returned
// table is complete, closed under all relators, and standardized by
// breadth-first renumbering from coset 0, so equal inputs give equal
// tables regardless of enumeration history. Throws CapacityExceeded when
// live cosets would pass max_cosets (or the work table outgrows a fixed
// multiple of it, which signals the same thing in practice).
CosetTable todd_coxeter(const GroupPresentation& p,
                        const std::vector<Word>& subgroup_words,
                        std::size_t max_cosets);

}  // namespace homoperc
