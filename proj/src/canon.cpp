#include "spinelab/canon.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <tuple>

namespace spinelab {

namespace {

using Signature = std::vector<std::uint64_t>;

// Refine `cell` (cell index per point) to the coarsest equitable partition
// finer than it. Cell indices stay ordered consistently with the input.
void refine(const ColoredStructure& s, std::vector<int>& cell) {
    const int n = s.n;
    int cells = n == 0 ? 0 : *std::max_element(cell.begin(), cell.end()) + 1;
    std::vector<Signature> sig(n);
    while (true) {
        for (int x = 0; x < n; ++x) {
            Signature& g = sig[x];
            g.clear();
            g.push_back(static_cast<std::uint64_t>(cell[x]));
            std::size_t start = g.size();
            for (int y = 0; y < n; ++y) {
                const std::uint32_t a = s.at(x, y), b = s.at(y, x);
                if (a == 0 && b == 0) continue;
                g.push_back((static_cast<std::uint64_t>(cell[y]) << 40) | (static_cast<std::uint64_t>(a) << 20) | b);
            }
            std::sort(g.begin() + static_cast<long>(start), g.end());
        }
        std::vector<int> idx(n);
        for (int i = 0; i < n; ++i) idx[i] = i;
        std::sort(idx.begin(), idx.end(), [&](int a, int b) { return sig[a] < sig[b]; });
        std::vector<int> next(n);
        int k = -1;
        for (int i = 0; i < n; ++i) {
            if (i == 0 || sig[idx[i]] != sig[idx[i - 1]]) ++k;
            next[idx[i]] = k;
        }
        const int count = k + 1;
        cell.swap(next);
        if (count == cells) return;
        cells = count;
    }
}

std::vector<int> initial_cells(const ColoredStructure& s) {
    std::vector<std::uint32_t> colors(s.color.begin(), s.color.end());
    std::sort(colors.begin(), colors.end());
    colors.erase(std::unique(colors.begin(), colors.end()), colors.end());
    std::vector<int> cell(s.n);
    for (int x = 0; x < s.n; ++x)
        cell[x] = static_cast<int>(std::lower_bound(colors.begin(), colors.end(), s.color[x]) - colors.begin());
    return cell;
}

// Returns the lowest-index cell with more than one point, or -1.
int target_cell(const std::vector<int>& cell, std::vector<int>& members) {
    const int n = static_cast<int>(cell.size());
    std::vector<int> counts(n, 0);
    for (int c : cell) ++counts[c];
    for (int c = 0; c < n; ++c) {
        if (counts[c] > 1) {
            members.clear();
            for (int x = 0; x < n; ++x)
                if (cell[x] == c) members.push_back(x);
            return c;
        }
    }
    return -1;
}

std::vector<int> individualize(const std::vector<int>& cell, int x) {
    std::vector<int> next(cell.size());
    for (std::size_t y = 0; y < cell.size(); ++y)
        next[y] = 2 * cell[y] + (static_cast<int>(y) == x ? 0 : 1);
    // Compress to consecutive indices preserving order.
    std::vector<int> vals(next);
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
    for (auto& v : next) v = static_cast<int>(std::lower_bound(vals.begin(), vals.end(), v) - vals.begin());
    return next;
}

template <typename LeafFn>
void search(const ColoredStructure& s, std::vector<int> cell, LeafFn& leaf) {
    refine(s, cell);
    std::vector<int> members;
    if (target_cell(cell, members) < 0) {
        std::vector<int> order(s.n);
        for (int x = 0; x < s.n; ++x) order[cell[x]] = x;
        leaf(order);
        return;
    }
    for (int x : members) search(s, individualize(cell, x), leaf);
}

}  // namespace

std::vector<std::uint32_t> structure_code(const ColoredStructure& s, const std::vector<int>& order) {
    std::vector<std::uint32_t> code;
    code.reserve(1 + s.n + static_cast<std::size_t>(s.n) * s.n);
    code.push_back(static_cast<std::uint32_t>(s.n));
    for (int k = 0; k < s.n; ++k) code.push_back(s.color[order[k]]);
    for (int i = 0; i < s.n; ++i)
        for (int j = 0; j < s.n; ++j) code.push_back(s.at(order[i], order[j]));
    return code;
}

CanonicalLabeling canonical_labeling(const ColoredStructure& s) {
    CanonicalLabeling best;
    bool have = false;
    auto leaf = [&](const std::vector<int>& order) {
        auto code = structure_code(s, order);
        if (!have || code < best.code) {
            best.code = std::move(code);
            best.order = order;
            have = true;
        }
    };
    search(s, initial_cells(s), leaf);
    best.position.assign(s.n, 0);
    for (int k = 0; k < s.n; ++k) best.position[best.order[k]] = k;
    return best;
}

std::vector<std::vector<int>> structure_automorphisms(const ColoredStructure& s, std::size_t cap) {
    const CanonicalLabeling canon = canonical_labeling(s);
    std::vector<std::vector<int>> out;
    auto leaf = [&](const std::vector<int>& order) {
        if (structure_code(s, order) != canon.code) return;
        // order maps canonical positions to points; compose with canon.position.
        std::vector<int> perm(s.n);
        for (int x = 0; x < s.n; ++x) perm[x] = order[canon.position[x]];
        out.push_back(std::move(perm));
        if (out.size() > cap) throw std::length_error("automorphism count exceeds cap");
    };
    search(s, initial_cells(s), leaf);
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace spinelab
