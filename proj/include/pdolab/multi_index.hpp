#pragma once

#include <compare>
#include <initializer_list>
#include <string>
#include <vector>

namespace pdolab {

/// alpha in N_0^n with |alpha| <= kMaxOrder.
class MultiIndex {
public:
    static constexpr int kMaxOrder = 8;

    MultiIndex() = default;
    explicit MultiIndex(int dim);
    MultiIndex(std::initializer_list<int> entries);
    explicit MultiIndex(std::vector<int> entries);

    static MultiIndex unit(int dim, int axis);

    int dim() const noexcept { return static_cast<int>(entries_.size()); }
    int order() const noexcept { return order_; }
    int operator[](int d) const { return entries_[static_cast<std::size_t>(d)]; }
    const std::vector<int>& entries() const noexcept { return entries_; }

    MultiIndex operator+(const MultiIndex& other) const;
    bool is_zero() const noexcept { return order_ == 0; }
    std::string to_string() const;

    friend bool operator==(const MultiIndex&, const MultiIndex&) = default;
    friend auto operator<=>(const MultiIndex& a, const MultiIndex& b) { return a.entries_ <=> b.entries_; }

private:
    void validate();

    std::vector<int> entries_;
    int order_ = 0;
};

/// Every alpha in N_0^dim with |alpha| <= max_order, ordered by |alpha| then
/// lexicographically.
std::vector<MultiIndex> multi_indices_up_to(int dim, int max_order);

} // namespace pdolab
