#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "superdens/common.hpp"

namespace superdens {

enum class Source { Exponential, Bimodal, Trimodal, File };

const char* to_string(Source s);
/// Accepts "exponential", "bimodal", "trimodal" (and "file").
Source source_from_string(const std::string& name);

/// Sorted observations plus where they came from.
class SampleSet {
public:
    SampleSet(std::vector<double> values, std::uint64_t seed, Source source);

    const std::vector<double>& values() const { return values_; }
    std::size_t size() const { return values_.size(); }
    std::uint64_t seed() const { return seed_; }
    Source source() const { return source_; }

private:
    std::vector<double> values_;
    std::uint64_t seed_;
    Source source_;
};

/// Uniform variates in [0, 1) with 53 random bits each, drawn from
/// std::mt19937_64. Both the engine and this conversion are fully specified,
/// so a seed reproduces the same stream on every platform.
class UniformStream {
public:
    explicit UniformStream(std::uint64_t seed) : engine_(seed) {}
    double next() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

private:
    std::mt19937_64 engine_;
};

/// Inverse CDFs of the three reference distributions.
double exponential_quantile(double u);
double bimodal_quantile(double u);
double trimodal_quantile(double u);

/// Exp(1): x = -ln(1 - u).
SampleSet gen_exponential(std::size_t m, std::uint64_t seed);
/// 2/3 on [1, 2], 1/3 on [3, 4].
SampleSet gen_bimodal(std::size_t m, std::uint64_t seed);
/// 1 on [0, 1/2], 1/2 on [1, 3/2], 1/2 on [3, 7/2].
SampleSet gen_trimodal(std::size_t m, std::uint64_t seed);

SampleSet generate(Source source, std::size_t m, std::uint64_t seed);

using Pdf = std::function<double(double)>;

/// Exact density of a generated source. Throws InvalidArgument for File.
Pdf true_pdf(Source source);

/// Closed support hull of a generated source ([0, +inf) for Exponential).
std::pair<double, double> support(Source source);

}  // namespace superdens
