#pragma once

// Finite and infinite words over the alphabet {1..N}. Infinite words come in
// three kinds: eventually periodic, the length-then-lex disjunctive
// enumeration, and seeded random streams. letter(i) is pure and 1-based.

#include <algorithm>
#include <cstdint>
#include <memory>
#include <numeric>
#include <string>
#include <variant>
#include <vector>

#include "fractile/common.hpp"

namespace fractile {

struct Word {
    std::vector<uint8_t> letters;   // values in 1..alphabet
    int alphabet = 0;

    Word() = default;
    Word(std::vector<uint8_t> l, int n) : letters(std::move(l)), alphabet(n) { validate(); }

    static Word empty(int n) { return Word({}, n); }

    void validate() const {
        if (alphabet < 1) throw invalid_word_error("word: alphabet size must be >= 1");
        for (uint8_t c : letters)
            if (c < 1 || c > alphabet)
                throw invalid_word_error("word: letter " + std::to_string(int(c)) +
                                         " out of range 1.." + std::to_string(alphabet));
    }

    std::size_t size() const { return letters.size(); }
    bool empty_word() const { return letters.empty(); }
    uint8_t at(std::size_t i) const { return letters.at(i - 1); }   // 1-based

    Word reversed() const {
        Word w = *this;
        std::reverse(w.letters.begin(), w.letters.end());
        return w;
    }

    Word concat(const Word& rhs) const {
        Word w = *this;
        w.letters.insert(w.letters.end(), rhs.letters.begin(), rhs.letters.end());
        return w;
    }

    Word prefix(std::size_t k) const {
        Word w;
        w.alphabet = alphabet;
        w.letters.assign(letters.begin(), letters.begin() + std::min(k, letters.size()));
        return w;
    }

    std::string str() const {
        std::string s;
        for (uint8_t c : letters) s += char('0' + c);
        return s;
    }

    bool operator==(const Word& rhs) const {
        return alphabet == rhs.alphabet && letters == rhs.letters;
    }
    bool operator<(const Word& rhs) const {
        if (letters.size() != rhs.letters.size()) return letters.size() < rhs.letters.size();
        return letters < rhs.letters;
    }
};

class InfiniteWord {
public:
    struct EventuallyPeriodic {
        Word pre;
        Word period;   // nonempty
    };
    struct DisjunctiveEnumeration {
        int alphabet;
    };
    struct Random {
        int alphabet;
        std::vector<double> probs;   // size N, min > 0, sums to 1
        uint64_t seed;
    };

    static InfiniteWord periodic(Word period) {
        if (period.empty_word()) throw invalid_word_error("periodic word: empty period");
        return InfiniteWord(EventuallyPeriodic{Word::empty(period.alphabet), std::move(period)});
    }

    static InfiniteWord eventually_periodic(Word pre, Word period) {
        if (period.empty_word()) throw invalid_word_error("periodic word: empty period");
        if (pre.alphabet != period.alphabet)
            throw invalid_word_error("eventually periodic word: alphabet mismatch");
        return InfiniteWord(EventuallyPeriodic{std::move(pre), std::move(period)});
    }

    static InfiniteWord disjunctive(int alphabet) {
        if (alphabet < 1) throw invalid_word_error("disjunctive word: alphabet must be >= 1");
        return InfiniteWord(DisjunctiveEnumeration{alphabet});
    }

    static InfiniteWord random(int alphabet, uint64_t seed, std::vector<double> probs = {}) {
        if (alphabet < 1) throw invalid_word_error("random word: alphabet must be >= 1");
        if (probs.empty()) probs.assign(alphabet, 1.0 / alphabet);
        if (static_cast<int>(probs.size()) != alphabet)
            throw invalid_word_error("random word: probs size must equal alphabet");
        double total = std::accumulate(probs.begin(), probs.end(), 0.0);
        for (double& p : probs) {
            if (p <= 0) throw invalid_word_error("random word: every letter probability must be > 0");
            p /= total;
        }
        return InfiniteWord(Random{alphabet, std::move(probs), seed});
    }

    int alphabet() const {
        if (auto* p = std::get_if<EventuallyPeriodic>(&v_)) return p->period.alphabet;
        if (auto* d = std::get_if<DisjunctiveEnumeration>(&v_)) return d->alphabet;
        return std::get<Random>(v_).alphabet;
    }

    // 1-based stream access.
    uint8_t letter(uint64_t i) const {
        if (i < 1) throw invalid_word_error("letter index is 1-based");
        if (auto* p = std::get_if<EventuallyPeriodic>(&v_)) {
            if (i <= p->pre.size()) return p->pre.letters[i - 1];
            uint64_t j = (i - p->pre.size() - 1) % p->period.size();
            return p->period.letters[j];
        }
        if (auto* d = std::get_if<DisjunctiveEnumeration>(&v_))
            return disjunctive_letter(d->alphabet, i);
        const Random& r = std::get<Random>(v_);
        double u = mix64_double(r.seed, i);
        double acc = 0.0;
        for (int n = 0; n < r.alphabet; ++n) {
            acc += r.probs[n];
            if (u < acc) return uint8_t(n + 1);
        }
        return uint8_t(r.alphabet);
    }

    Word prefix(std::size_t k) const {
        Word w;
        w.alphabet = alphabet();
        w.letters.resize(k);
        for (std::size_t i = 1; i <= k; ++i) w.letters[i - 1] = letter(i);
        return w;
    }

    bool is_periodic() const { return std::holds_alternative<EventuallyPeriodic>(v_); }
    bool is_disjunctive_enumeration() const {
        return std::holds_alternative<DisjunctiveEnumeration>(v_);
    }
    bool is_random() const { return std::holds_alternative<Random>(v_); }

    const EventuallyPeriodic* periodic_parts() const {
        return std::get_if<EventuallyPeriodic>(&v_);
    }

    // Position of letter i in the concatenation 1,2,..,N,11,12,..: find the
    // length block, then the word and the offset inside it.
    static uint8_t disjunctive_letter(int N, uint64_t i) {
        uint64_t remaining = i - 1;   // 0-based offset into the stream
        uint64_t len = 1;
        uint64_t words_of_len = N;    // N^len
        while (true) {
            uint64_t block = len * words_of_len;
            if (remaining < block) break;
            remaining -= block;
            ++len;
            words_of_len *= N;
            if (words_of_len > (uint64_t(1) << 62) / (len ? len : 1))
                throw budget_exceeded_error("disjunctive letter index too large");
        }
        uint64_t word_index = remaining / len;
        uint64_t pos = remaining % len;   // 0-based within the word
        // word_index written in base N with `len` digits, most significant first
        uint64_t digit_place = len - 1 - pos;
        uint64_t q = word_index;
        for (uint64_t p = 0; p < digit_place; ++p) q /= N;
        return uint8_t(q % N + 1);
    }

private:
    explicit InfiniteWord(std::variant<EventuallyPeriodic, DisjunctiveEnumeration, Random> v)
        : v_(std::move(v)) {}

    std::variant<EventuallyPeriodic, DisjunctiveEnumeration, Random> v_;
};

// Word string grammar: digits for a finite word or prefix, a parenthesized
// period for infinite words ("3(12)" = 312121..., "(1)" = 111...), and the
// selectors "disjunctive" and "random:seed=<u64>". Digit strings containing a
// '0' are read 0-based and shifted up by one, so the chair word (12301230)
// denotes letters 2341 2341.
namespace detail {
inline std::vector<uint8_t> parse_digits(const std::string& s, bool zero_based) {
    std::vector<uint8_t> out;
    out.reserve(s.size());
    for (char c : s) {
        if (c < '0' || c > '9') throw invalid_word_error("word string: invalid digit");
        out.push_back(uint8_t(c - '0' + (zero_based ? 1 : 0)));
    }
    return out;
}
} // namespace detail

inline Word parse_finite_word(const std::string& s, int alphabet) {
    bool zero_based = s.find('0') != std::string::npos;
    return Word(detail::parse_digits(s, zero_based), alphabet);
}

inline InfiniteWord parse_infinite_word(const std::string& s, int alphabet) {
    if (s == "disjunctive") return InfiniteWord::disjunctive(alphabet);
    if (s.rfind("random:seed=", 0) == 0) {
        uint64_t seed = std::stoull(s.substr(12));
        return InfiniteWord::random(alphabet, seed);
    }
    auto open = s.find('(');
    if (open == std::string::npos)
        throw invalid_word_error("infinite word string needs a (period): got '" + s + "'");
    auto close = s.find(')', open);
    if (close == std::string::npos || close != s.size() - 1 || close == open + 1)
        throw invalid_word_error("malformed word string '" + s + "'");
    std::string pre = s.substr(0, open);
    std::string per = s.substr(open + 1, close - open - 1);
    bool zero_based = (pre + per).find('0') != std::string::npos;
    Word pre_w(detail::parse_digits(pre, zero_based), alphabet);
    Word per_w(detail::parse_digits(per, zero_based), alphabet);
    return InfiniteWord::eventually_periodic(std::move(pre_w), std::move(per_w));
}

} // namespace fractile
