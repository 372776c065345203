#pragma once

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mkit {

/// A d-tuple of nonnegative integers.
///
/// Ordering is graded lexicographic: first by weight, then lexicographically
/// on the entries, so (0,0) < (0,1) < (1,0) < (0,2) < (1,1) < (2,0).
class MultiIndex {
public:
    MultiIndex() = default;
    explicit MultiIndex(std::size_t dim) : entries_(dim, 0) {}
    MultiIndex(std::initializer_list<int> entries);
    explicit MultiIndex(std::vector<int> entries);

    static MultiIndex unit(std::size_t dim, std::size_t i);

    std::size_t dim() const { return entries_.size(); }
    int operator[](std::size_t i) const { return entries_[i]; }
    const std::vector<int>& entries() const { return entries_; }

    int weight() const { return weight_; }
    double factorial() const;

    /// Copy with entry i changed by delta; nullopt if it would become negative.
    std::optional<MultiIndex> shifted(std::size_t i, int delta) const;

    /// True when every entry is <= the matching entry of other.
    bool dominated_by(const MultiIndex& other) const;

    MultiIndex& operator+=(const MultiIndex& other);

    friend MultiIndex operator+(MultiIndex lhs, const MultiIndex& rhs) { return lhs += rhs; }
    /// Entrywise difference; requires rhs dominated by lhs.
    friend MultiIndex operator-(const MultiIndex& lhs, const MultiIndex& rhs);

    friend bool operator==(const MultiIndex& a, const MultiIndex& b) { return a.entries_ == b.entries_; }
    friend std::strong_ordering operator<=>(const MultiIndex& a, const MultiIndex& b);

private:
    std::vector<int> entries_;
    int weight_ = 0;
};

/// All multi-indices of dimension d and weight exactly w, in graded-lex order.
std::vector<MultiIndex> indices_of_weight(std::size_t d, int w);

/// All multi-indices of dimension d with weight <= max_weight, in graded-lex order.
std::vector<MultiIndex> indices_up_to(std::size_t d, int max_weight);

/// All multi-indices n with n <= box entrywise, in graded-lex order.
std::vector<MultiIndex> indices_in_box(const MultiIndex& box);

/// "1,0,2"
std::string to_string(const MultiIndex& m);

/// Parses "1,0,2"; throws std::invalid_argument on malformed or negative input.
MultiIndex parse_multi_index(std::string_view text);

} // namespace mkit
