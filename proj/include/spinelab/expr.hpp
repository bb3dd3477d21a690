#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "spinelab/algebra.hpp"

namespace spinelab {

class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using NameLookup = std::function<std::optional<Element>(const std::string&)>;

// Grammar: sums and differences of products of powers of integers, names and
// parenthesized expressions, e.g. "2*z4^2 + z4*w3". Integers denote
// multiples of the unit of `alg`.
Element parse_element(const std::string& text, const AlgebraPtr& alg, const NameLookup& lookup);

// Resolves generator names of `alg` only.
Element parse_element(const std::string& text, const AlgebraPtr& alg);

// Evaluates each (lhs, rhs) pair and reports whether the two sides agree.
std::vector<bool> check_relations(const std::vector<std::pair<std::string, std::string>>& relations,
                                  const AlgebraPtr& alg, const NameLookup& lookup);

}  // namespace spinelab
