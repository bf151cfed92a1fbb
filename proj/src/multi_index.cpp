#include "pdolab/multi_index.hpp"

#include "pdolab/errors.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

namespace pdolab {

MultiIndex::MultiIndex(int dim) : entries_(static_cast<std::size_t>(dim), 0) {}

MultiIndex::MultiIndex(std::initializer_list<int> entries) : entries_(entries) { validate(); }

MultiIndex::MultiIndex(std::vector<int> entries) : entries_(std::move(entries)) { validate(); }

MultiIndex MultiIndex::unit(int dim, int axis) {
    std::vector<int> e(static_cast<std::size_t>(dim), 0);
    e.at(static_cast<std::size_t>(axis)) = 1;
    return MultiIndex(std::move(e));
}

void MultiIndex::validate() {
    for (int e : entries_) {
        if (e < 0) {
            throw InvariantError("MultiIndex: negative entry");
        }
    }
    order_ = std::accumulate(entries_.begin(), entries_.end(), 0);
    if (order_ > kMaxOrder) {
        throw InvariantError("MultiIndex: order " + std::to_string(order_) + " exceeds cap " +
                             std::to_string(kMaxOrder));
    }
}

MultiIndex MultiIndex::operator+(const MultiIndex& other) const {
    if (dim() != other.dim()) {
        throw InvariantError("MultiIndex: dimension mismatch");
    }
    std::vector<int> e(entries_);
    for (std::size_t d = 0; d < e.size(); ++d) {
        e[d] += other.entries_[d];
    }
    return MultiIndex(std::move(e));
}

std::string MultiIndex::to_string() const {
    std::string s = "(";
    for (std::size_t d = 0; d < entries_.size(); ++d) {
        s += (d ? "," : "") + std::to_string(entries_[d]);
    }
    return s + ")";
}

std::vector<MultiIndex> multi_indices_up_to(int dim, int max_order) {
    std::vector<MultiIndex> out;
    std::vector<int> current(static_cast<std::size_t>(dim), 0);
    std::function<void(int, int)> rec = [&](int axis, int remaining) {
        if (axis == dim) {
            out.emplace_back(current);
            return;
        }
        for (int v = 0; v <= remaining; ++v) {
            current[static_cast<std::size_t>(axis)] = v;
            rec(axis + 1, remaining - v);
        }
        current[static_cast<std::size_t>(axis)] = 0;
    };
    rec(0, max_order);
    std::stable_sort(out.begin(), out.end(), [](const MultiIndex& a, const MultiIndex& b) {
        return a.order() != b.order() ? a.order() < b.order() : a < b;
    });
    return out;
}

} // namespace pdolab
