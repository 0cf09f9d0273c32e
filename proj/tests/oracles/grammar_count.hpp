#pragma once

#include <cstddef>

namespace oracle {

// Count of non-redundant kernels over b bases for the seven forms when only
// the inner pair of each form is unordered:
// a: b, a*b and a+b: b(b+1)/2 each, four three-operand forms: b * b(b+1)/2 each.
constexpr std::size_t grammar_count(std::size_t b) {
    const std::size_t pairs = b * (b + 1) / 2;
    return b + 2 * pairs + 4 * b * pairs;
}

}  // namespace oracle
