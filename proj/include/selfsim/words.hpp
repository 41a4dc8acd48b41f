#pragma once

/// Finite words over the alphabet {1..k}: the index set of the levels of the
/// natural fractal structure. A word u·j names the piece f_u(f_j(K)).

#include <compare>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace selfsim {

/// Thrown whenever a request would materialize more objects than allowed.
class BudgetExceeded : public std::runtime_error {
public:
    explicit BudgetExceeded(const std::string& what)
        : std::runtime_error("budget exceeded: " + what) {}
};

using Symbol = std::uint16_t;

class Word {
public:
    Word() = default;
    explicit Word(std::vector<Symbol> symbols) : symbols_(std::move(symbols)) {}
    Word(std::initializer_list<Symbol> symbols) : symbols_(symbols) {}

    /// Parses "121" (single digits) or "1.10.3" (dot separated). "" and "e"
    /// denote the empty word.
    static Word parse(std::string_view text) {
        Word w;
        if (text.empty() || text == "e") return w;
        if (text.find('.') == std::string_view::npos) {
            for (char ch : text) {
                if (ch < '1' || ch > '9') throw std::invalid_argument("bad word symbol in '" + std::string(text) + "'");
                w.symbols_.push_back(static_cast<Symbol>(ch - '0'));
            }
            return w;
        }
        std::size_t start = 0;
        while (start <= text.size()) {
            auto end = text.find('.', start);
            if (end == std::string_view::npos) end = text.size();
            auto token = text.substr(start, end - start);
            if (token.empty()) throw std::invalid_argument("empty symbol in '" + std::string(text) + "'");
            unsigned long value = std::stoul(std::string(token));
            if (value == 0 || value > std::numeric_limits<Symbol>::max())
                throw std::invalid_argument("symbol out of range in '" + std::string(text) + "'");
            w.symbols_.push_back(static_cast<Symbol>(value));
            start = end + 1;
        }
        return w;
    }

    const std::vector<Symbol>& symbols() const noexcept { return symbols_; }
    std::size_t size() const noexcept { return symbols_.size(); }
    bool empty() const noexcept { return symbols_.empty(); }
    Symbol operator[](std::size_t i) const { return symbols_[i]; }

    Word appended(Symbol j) const {
        Word w = *this;
        w.symbols_.push_back(j);
        return w;
    }

    Word concat(const Word& tail) const {
        Word w = *this;
        w.symbols_.insert(w.symbols_.end(), tail.symbols_.begin(), tail.symbols_.end());
        return w;
    }

    Word prefix(std::size_t n) const {
        if (n > size()) throw std::out_of_range("prefix longer than word");
        return Word(std::vector<Symbol>(symbols_.begin(), symbols_.begin() + static_cast<std::ptrdiff_t>(n)));
    }

    /// "e" for the empty word; digits when every symbol is < 10, dotted otherwise.
    std::string to_string() const {
        if (symbols_.empty()) return "e";
        bool small = true;
        for (Symbol s : symbols_) small = small && s < 10;
        std::string out;
        for (std::size_t i = 0; i < symbols_.size(); ++i) {
            if (!small && i > 0) out += '.';
            out += std::to_string(symbols_[i]);
        }
        return out;
    }

    bool valid_for(std::size_t k) const noexcept {
        for (Symbol s : symbols_)
            if (s < 1 || s > k) return false;
        return true;
    }

    // Lexicographic, shorter prefix first.
    friend auto operator<=>(const Word&, const Word&) = default;
    friend bool operator==(const Word&, const Word&) = default;

private:
    std::vector<Symbol> symbols_;
};

/// u ⊑ v.
inline bool is_prefix(const Word& u, const Word& v) noexcept {
    if (u.size() > v.size()) return false;
    for (std::size_t i = 0; i < u.size(); ++i)
        if (u[i] != v[i]) return false;
    return true;
}

inline bool incomparable(const Word& u, const Word& v) noexcept {
    return !is_prefix(u, v) && !is_prefix(v, u);
}

/// k^n, or throws BudgetExceeded when it overflows or exceeds `budget`.
inline std::size_t checked_power(std::size_t k, std::size_t n, std::size_t budget) {
    std::size_t value = 1;
    for (std::size_t i = 0; i < n; ++i) {
        if (value > budget / k)
            throw BudgetExceeded(std::to_string(k) + "^" + std::to_string(n) + " exceeds " + std::to_string(budget));
        value *= k;
    }
    if (value > budget)
        throw BudgetExceeded(std::to_string(k) + "^" + std::to_string(n) + " exceeds " + std::to_string(budget));
    return value;
}

inline std::vector<Word> children(const Word& u, std::size_t k,
                                  std::size_t budget = std::numeric_limits<std::size_t>::max()) {
    if (k < 2) throw std::invalid_argument("alphabet size must be at least 2");
    checked_power(k, 1, budget);
    std::vector<Word> out;
    out.reserve(k);
    for (std::size_t j = 1; j <= k; ++j) out.push_back(u.appended(static_cast<Symbol>(j)));
    return out;
}

/// Σ^n in lexicographic order.
inline std::vector<Word> enumerate_level(std::size_t k, std::size_t n,
                                         std::size_t budget = std::numeric_limits<std::size_t>::max()) {
    if (k < 2) throw std::invalid_argument("alphabet size must be at least 2");
    const std::size_t count = checked_power(k, n, budget);
    std::vector<Word> out;
    out.reserve(count);
    std::vector<Symbol> current(n, 1);
    for (std::size_t idx = 0; idx < count; ++idx) {
        out.emplace_back(current);
        for (std::size_t pos = n; pos-- > 0;) {
            if (current[pos] < k) {
                ++current[pos];
                break;
            }
            current[pos] = 1;
        }
    }
    return out;
}

}  // namespace selfsim
