#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace psp {

// A letter is a nonempty subinterval of [0,2].  There are six of them.
// Note that L02 is the full interval [0,2]; it covers level 1 as well.
enum class Letter : std::uint8_t { L0, L1, L2, L01, L12, L02 };

inline constexpr Letter kAllLetters[] = {Letter::L0,  Letter::L1,  Letter::L2,
                                         Letter::L01, Letter::L12, Letter::L02};

int letter_lo(Letter s);
int letter_hi(Letter s);
int letter_width(Letter s);  // number of levels the letter covers
bool letter_has_level(Letter s, int level);

// Interval containment, equality included.
bool letter_contains(Letter outer, Letter inner);
bool letters_comparable(Letter s, Letter t);

// Proper subletters of s (strict subintervals), in enum order.
std::vector<Letter> proper_subletters(Letter s);

std::optional<Letter> letter_from_span(int lo, int hi);

// Text encoding: "0", "1", "2", "01", "12", "02".
std::string to_string(Letter s);
Letter parse_letter(std::string_view text);  // throws ParseError

// A word is a finite sequence of letters; the empty word is allowed.
using Word = std::vector<Letter>;

// Swaps the adjacent pair at positions (i, i+1), which must be {L0, L2}
// in either order; these are the only two letters that commute.
Word permute_step(const Word& w, std::size_t i);  // throws InvariantError

// Sorts every maximal run of L0/L2 letters so all L0 come before all L2.
// Every word is permutation-equivalent to exactly one such word.
Word canonical_commuting_order(Word w);

bool equal_up_to_permutation(const Word& u, const Word& v);

// True iff no word permutation-equivalent to w has an adjacent pair
// s, t with s ⊆ t or t ⊆ s.
bool is_reduced(const Word& w);

// For reduced w: whether w with s appended is still reduced.
bool reduced_after_append(const Word& w, Letter s);

// Normal form: repeatedly cancel the smaller of two letters that can be
// made adjacent by permutation and are comparable, then put the result
// in canonical commuting order.  Idempotent; the result is reduced.
Word nonsplitting_reduce(const Word& w);

// As above, also reporting the number of cancellation steps taken.
Word nonsplitting_reduce_counted(const Word& w, std::size_t* steps);

// Normal form of u concatenated with v.
Word concat_reduce(const Word& u, const Word& v);

Word reversed(Word w);

// Dot-separated encoding, e.g. "0.2.01".  The empty word prints as "-".
std::string word_to_string(const Word& w);
Word parse_word(std::string_view text);  // throws ParseError

}  // namespace psp
