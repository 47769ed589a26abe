#include "superdens/sample_lab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace superdens {

const char* to_string(Source s) {
    switch (s) {
        case Source::Exponential: return "exponential";
        case Source::Bimodal: return "bimodal";
        case Source::Trimodal: return "trimodal";
        case Source::File: return "file";
    }
    return "file";
}

Source source_from_string(const std::string& name) {
    if (name == "exponential" || name == "exp") return Source::Exponential;
    if (name == "bimodal") return Source::Bimodal;
    if (name == "trimodal") return Source::Trimodal;
    if (name == "file") return Source::File;
    throw InvalidArgument("unknown distribution '" + name + "' (expected exponential, bimodal or trimodal)");
}

SampleSet::SampleSet(std::vector<double> values, std::uint64_t seed, Source source)
    : values_(std::move(values)), seed_(seed), source_(source) {
    if (values_.empty()) throw InvalidArgument("a sample set needs at least one value");
    std::sort(values_.begin(), values_.end());
}

double exponential_quantile(double u) { return -std::log1p(-u); }

double bimodal_quantile(double u) {
    if (u < 2.0 / 3.0) return 1.0 + 1.5 * u;
    return 3.0 + 3.0 * (u - 2.0 / 3.0);
}

double trimodal_quantile(double u) {
    if (u < 0.5) return u;
    if (u < 0.75) return 1.0 + 2.0 * (u - 0.5);
    return 3.0 + 2.0 * (u - 0.75);
}

namespace {

template <class Quantile>
SampleSet draw(std::size_t m, std::uint64_t seed, Source source, Quantile q) {
    if (m < 1) throw InvalidArgument("sample size must be >= 1");
    UniformStream us(seed);
    std::vector<double> xs(m);
    for (double& x : xs) x = q(us.next());
    return {std::move(xs), seed, source};
}

}  // namespace

SampleSet gen_exponential(std::size_t m, std::uint64_t seed) {
    return draw(m, seed, Source::Exponential, exponential_quantile);
}

SampleSet gen_bimodal(std::size_t m, std::uint64_t seed) { return draw(m, seed, Source::Bimodal, bimodal_quantile); }

SampleSet gen_trimodal(std::size_t m, std::uint64_t seed) {
    return draw(m, seed, Source::Trimodal, trimodal_quantile);
}

SampleSet generate(Source source, std::size_t m, std::uint64_t seed) {
    switch (source) {
        case Source::Exponential: return gen_exponential(m, seed);
        case Source::Bimodal: return gen_bimodal(m, seed);
        case Source::Trimodal: return gen_trimodal(m, seed);
        case Source::File: break;
    }
    throw InvalidArgument("cannot generate samples for a file source");
}

Pdf true_pdf(Source source) {
    switch (source) {
        case Source::Exponential:
            return [](double x) { return x >= 0.0 ? std::exp(-x) : 0.0; };
        case Source::Bimodal:
            return [](double x) {
                if (x >= 1.0 && x <= 2.0) return 2.0 / 3.0;
                if (x >= 3.0 && x <= 4.0) return 1.0 / 3.0;
                return 0.0;
            };
        case Source::Trimodal:
            return [](double x) {
                if (x >= 0.0 && x <= 0.5) return 1.0;
                if (x >= 1.0 && x <= 1.5) return 0.5;
                if (x >= 3.0 && x <= 3.5) return 0.5;
                return 0.0;
            };
        case Source::File: break;
    }
    throw InvalidArgument("samples read from a file have no true density");
}

std::pair<double, double> support(Source source) {
    switch (source) {
        case Source::Exponential: return {0.0, std::numeric_limits<double>::infinity()};
        case Source::Bimodal: return {1.0, 4.0};
        case Source::Trimodal: return {0.0, 3.5};
        case Source::File: break;
    }
    throw InvalidArgument("samples read from a file have no known support");
}

}  // namespace superdens
