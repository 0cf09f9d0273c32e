#pragma once

#include "hrkl/embedding.hpp"
#include "hrkl/series.hpp"

#include <map>
#include <span>
#include <string>
#include <vector>

namespace hrkl {

/// Dynamic time warping with squared-difference cell cost and steps
/// {down, right, diagonal}; returns the square root of the optimal path sum.
double dtw_distance(std::span<const double> a, std::span<const double> b);

struct SaxConfig {
    std::size_t window = 25;
    std::size_t word_length = 8;
    std::size_t alphabet = 4;
    bool numerosity_reduction = true;

    /// Throws ValidationError unless word_length <= window and 2 <= alphabet <= 10.
    void validate() const;
};

/// Equiprobable standard-normal breakpoints for `alphabet` symbols.
std::vector<double> sax_breakpoints(std::size_t alphabet);

/// z-normalize, piecewise aggregate to word_length means, quantize to 'a',
/// 'b', ... A constant segment maps to the symbol of a zero mean.
std::string sax_word(std::span<const double> segment, const SaxConfig& cfg);

using BopHistogram = std::map<std::string, std::size_t>;

/// Sliding-window (stride 1) bag of SAX words.
BopHistogram sax_bop_histogram(std::span<const double> series, const SaxConfig& cfg);

/// Euclidean distance over the union of words, missing counts as 0.
double bop_distance(const BopHistogram& a, const BopHistogram& b);

DistanceMatrix dtw_distance_matrix(const Dataset& data);
DistanceMatrix sax_bop_distance_matrix(const Dataset& data, const SaxConfig& cfg);

}  // namespace hrkl
