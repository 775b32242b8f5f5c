#pragma once

#include <cstdint>
#include <numeric>
#include <vector>

namespace phi4 {

// Union by smaller index, with path halving; roots are component minima.
class UnionFind {
public:
    explicit UnionFind(std::size_t n = 0) { reset(n); }

    void reset(std::size_t n)
    {
        parent_.resize(n);
        std::iota(parent_.begin(), parent_.end(), std::uint32_t{0});
    }

    std::uint32_t find(std::uint32_t x)
    {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    bool unite(std::uint32_t x, std::uint32_t y)
    {
        x = find(x);
        y = find(y);
        if (x == y) return false;
        if (x < y) parent_[y] = x; else parent_[x] = y;
        return true;
    }

    std::size_t size() const { return parent_.size(); }

private:
    std::vector<std::uint32_t> parent_;
};

}  // namespace phi4
