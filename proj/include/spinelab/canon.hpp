#pragma once

#include <cstdint>
#include <vector>

namespace spinelab {

// Points with a color each and a dense matrix of arc labels. Two structures
// are isomorphic when a bijection preserves colors and labels.
struct ColoredStructure {
    int n = 0;
    std::vector<std::uint32_t> color;
    std::vector<std::uint32_t> arc;  // row-major n*n

    explicit ColoredStructure(int points = 0) : n(points), color(points, 0), arc(static_cast<std::size_t>(points) * points, 0) {}
    std::uint32_t& at(int x, int y) { return arc[static_cast<std::size_t>(x) * n + y]; }
    std::uint32_t at(int x, int y) const { return arc[static_cast<std::size_t>(x) * n + y]; }
};

struct CanonicalLabeling {
    std::vector<int> order;     // order[k] = point placed at canonical position k
    std::vector<int> position;  // inverse of order
    std::vector<std::uint32_t> code;
};

// Individualization-refinement search over the whole tree; returns the
// leaf with the lexicographically smallest code.
CanonicalLabeling canonical_labeling(const ColoredStructure& s);

// Code of s under a given ordering of its points.
std::vector<std::uint32_t> structure_code(const ColoredStructure& s, const std::vector<int>& order);

// Every automorphism of s (as point permutations perm[x] = image of x).
// Throws std::length_error once more than `cap` are found.
std::vector<std::vector<int>> structure_automorphisms(const ColoredStructure& s, std::size_t cap);

}  // namespace spinelab
