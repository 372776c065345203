#include "mkit/multi_index.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <stdexcept>

#include "mkit/core.hpp"

namespace mkit {

MultiIndex::MultiIndex(std::initializer_list<int> entries) : MultiIndex(std::vector<int>(entries)) {}

MultiIndex::MultiIndex(std::vector<int> entries) : entries_(std::move(entries))
{
    for (int e : entries_) {
        if (e < 0)
            throw std::invalid_argument("MultiIndex: negative entry");
    }
    weight_ = std::accumulate(entries_.begin(), entries_.end(), 0);
}

MultiIndex MultiIndex::unit(std::size_t dim, std::size_t i)
{
    MultiIndex m(dim);
    m.entries_.at(i) = 1;
    m.weight_ = 1;
    return m;
}

double MultiIndex::factorial() const
{
    double result = 1.0;
    for (int e : entries_)
        result *= mkit::factorial(e);
    return result;
}

std::optional<MultiIndex> MultiIndex::shifted(std::size_t i, int delta) const
{
    if (entries_.at(i) + delta < 0)
        return std::nullopt;
    MultiIndex copy = *this;
    copy.entries_[i] += delta;
    copy.weight_ += delta;
    return copy;
}

bool MultiIndex::dominated_by(const MultiIndex& other) const
{
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (entries_[i] > other.entries_[i])
            return false;
    }
    return true;
}

MultiIndex& MultiIndex::operator+=(const MultiIndex& other)
{
    if (other.dim() != dim())
        throw std::invalid_argument("MultiIndex: dimension mismatch");
    for (std::size_t i = 0; i < entries_.size(); ++i)
        entries_[i] += other.entries_[i];
    weight_ += other.weight_;
    return *this;
}

MultiIndex operator-(const MultiIndex& lhs, const MultiIndex& rhs)
{
    if (lhs.dim() != rhs.dim())
        throw std::invalid_argument("MultiIndex: dimension mismatch");
    std::vector<int> out(lhs.dim());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = lhs[i] - rhs[i];
    return MultiIndex(std::move(out));
}

std::strong_ordering operator<=>(const MultiIndex& a, const MultiIndex& b)
{
    if (auto c = a.weight_ <=> b.weight_; c != 0)
        return c;
    return a.entries_ <=> b.entries_;
}

namespace {

void fill_weight(std::vector<int>& current, std::size_t pos, int remaining, std::vector<MultiIndex>& out)
{
    if (pos + 1 == current.size()) {
        current[pos] = remaining;
        out.emplace_back(current);
        return;
    }
    for (int v = 0; v <= remaining; ++v) {
        current[pos] = v;
        fill_weight(current, pos + 1, remaining - v, out);
    }
}

} // namespace

std::vector<MultiIndex> indices_of_weight(std::size_t d, int w)
{
    std::vector<MultiIndex> out;
    if (w < 0)
        return out;
    if (d == 0) {
        if (w == 0)
            out.emplace_back(0);
        return out;
    }
    std::vector<int> current(d, 0);
    fill_weight(current, 0, w, out);
    return out;
}

std::vector<MultiIndex> indices_up_to(std::size_t d, int max_weight)
{
    std::vector<MultiIndex> out;
    for (int w = 0; w <= max_weight; ++w) {
        auto shell = indices_of_weight(d, w);
        out.insert(out.end(), std::make_move_iterator(shell.begin()), std::make_move_iterator(shell.end()));
    }
    return out;
}

std::vector<MultiIndex> indices_in_box(const MultiIndex& box)
{
    std::vector<MultiIndex> out;
    for (auto& m : indices_up_to(box.dim(), box.weight())) {
        if (m.dominated_by(box))
            out.push_back(std::move(m));
    }
    return out;
}

std::string to_string(const MultiIndex& m)
{
    std::string s;
    for (std::size_t i = 0; i < m.dim(); ++i) {
        if (i)
            s += ',';
        s += std::to_string(m[i]);
    }
    return s;
}

MultiIndex parse_multi_index(std::string_view text)
{
    std::vector<int> entries;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t end = std::min(text.find(',', start), text.size());
        const std::string_view field = text.substr(start, end - start);
        int value = 0;
        const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
        if (field.empty() || ec != std::errc() || ptr != field.data() + field.size() || value < 0)
            throw std::invalid_argument("malformed multi-index: '" + std::string(text) + "'");
        entries.push_back(value);
        start = end + 1;
    }
    return MultiIndex(std::move(entries));
}

} // namespace mkit
