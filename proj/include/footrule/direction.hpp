#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace footrule {

/// An orientation of the d coordinate axes: one sign per component.
///
/// Components marked -1 are read "downward" (small values are extreme),
/// components marked +1 "upward". The index set I collects the -1
/// positions, J the +1 positions; I and J partition {0,..,d-1}.
class Direction {
public:
    explicit Direction(std::vector<int> signs) {
        if (signs.size() < 2)
            throw std::invalid_argument("Direction: need at least 2 components");
        signs_.reserve(signs.size());
        for (int s : signs) {
            if (s != 1 && s != -1)
                throw std::invalid_argument("Direction: signs must be +1 or -1");
            signs_.push_back(static_cast<std::int8_t>(s));
        }
    }

    /// Parse a sign string such as "+--+".
    static Direction parse(std::string_view text) {
        std::vector<int> signs;
        signs.reserve(text.size());
        for (char c : text) {
            if (c == '+') signs.push_back(1);
            else if (c == '-') signs.push_back(-1);
            else throw std::invalid_argument("Direction: expected only '+'/'-', got '" +
                                             std::string(1, c) + "'");
        }
        return Direction(std::move(signs));
    }

    static Direction all_positive(int d) { return uniform(d, 1); }
    static Direction all_negative(int d) { return uniform(d, -1); }

    /// All 2^d directions, ordered so that the sign strings are sorted
    /// ("++" < "+-" < "-+" < "--"): bit k-1..0 of the enumeration index
    /// maps to component 0..d-1, with a set bit meaning -1.
    static std::vector<Direction> enumerate(int d) {
        if (d < 2 || d > 26)
            throw std::invalid_argument("Direction::enumerate: d out of range");
        std::vector<Direction> out;
        out.reserve(std::size_t{1} << d);
        for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << d); ++mask) {
            std::vector<int> signs(static_cast<std::size_t>(d));
            for (int i = 0; i < d; ++i)
                signs[static_cast<std::size_t>(i)] =
                    (mask >> (d - 1 - i)) & 1u ? -1 : 1;
            out.emplace_back(std::move(signs));
        }
        return out;
    }

    int dim() const { return static_cast<int>(signs_.size()); }
    int sign(int i) const { return signs_[static_cast<std::size_t>(i)]; }
    bool is_negative(int i) const { return sign(i) < 0; }

    /// |I|, the number of -1 components.
    int negative_count() const {
        int k = 0;
        for (auto s : signs_) k += (s < 0);
        return k;
    }

    /// |J|, the number of +1 components.
    int positive_count() const { return dim() - negative_count(); }

    std::vector<int> negative_indices() const { return indices_with_sign(-1); }
    std::vector<int> positive_indices() const { return indices_with_sign(1); }

    Direction negated() const {
        std::vector<int> signs(signs_.size());
        for (std::size_t i = 0; i < signs_.size(); ++i) signs[i] = -signs_[i];
        return Direction(std::move(signs));
    }

    /// Sign string, e.g. "+--+".
    std::string str() const {
        std::string s;
        s.reserve(signs_.size());
        for (auto v : signs_) s.push_back(v > 0 ? '+' : '-');
        return s;
    }

    bool operator==(const Direction& other) const { return signs_ == other.signs_; }
    bool operator!=(const Direction& other) const { return !(*this == other); }

private:
    static Direction uniform(int d, int s) {
        if (d < 2) throw std::invalid_argument("Direction: need at least 2 components");
        return Direction(std::vector<int>(static_cast<std::size_t>(d), s));
    }

    std::vector<int> indices_with_sign(int s) const {
        std::vector<int> idx;
        for (int i = 0; i < dim(); ++i)
            if (sign(i) == s) idx.push_back(i);
        return idx;
    }

    std::vector<std::int8_t> signs_;
};

} // namespace footrule
