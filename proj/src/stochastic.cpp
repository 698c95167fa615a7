#include "pond/stochastic.hpp"

#include <numeric>
#include <stdexcept>

namespace pond {

namespace {

constexpr std::uint64_t kFnvOffset = 14695981039346656037ull;
constexpr std::uint64_t kFnvPrime = 1099511628211ull;

std::uint64_t fnv1a(std::uint64_t h, const void* data, std::size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= kFnvPrime;
    }
    return h;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

double sample_scalar(const DistModel& m, RandomStream& stream) {
    switch (m.tag) {
        case Dist::Deterministic:
            return m.param;
        case Dist::Bernoulli:
            return stream.uniform() < m.param ? 1.0 : 0.0;
        case Dist::Geometric: {
            // success probability p = 1/(1+mean), support {0,1,2,...}
            std::geometric_distribution<long> g(1.0 / (1.0 + m.param));
            return static_cast<double>(g(stream.engine()));
        }
        case Dist::Empirical:
            if (m.values.empty()) throw std::runtime_error("empirical model with no values");
            return m.values[stream.uniform_index(m.values.size())];
        case Dist::NegatedArrivalFraction:
            throw std::logic_error("arrival-dependent model sampled without arrivals");
    }
    throw std::logic_error("unknown distribution tag");
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master_seed, const std::vector<SeedLabel>& labels) {
    if (labels.empty()) throw std::invalid_argument("derive_seed: labels must be non-empty");
    std::uint64_t h = fnv1a(kFnvOffset, &master_seed, sizeof(master_seed));
    for (const auto& [tag, index] : labels) {
        h = fnv1a(h, tag.data(), tag.size());
        h = fnv1a(h, &index, sizeof(index));
    }
    return splitmix64(h);
}

RandomStream derive_stream(std::uint64_t master_seed, const std::vector<SeedLabel>& labels) {
    return RandomStream(derive_seed(master_seed, labels));
}

std::vector<long> sample_arrivals(const std::vector<DistModel>& models, RandomStream& stream) {
    std::vector<long> arrivals(models.size());
    for (std::size_t i = 0; i < models.size(); ++i) {
        double v = sample_scalar(models[i], stream);
        arrivals[i] = static_cast<long>(v);
        if (arrivals[i] < 0) throw std::runtime_error("negative arrival sampled");
    }
    return arrivals;
}

std::vector<double> sample_rewards(const DistModel& model, long count, RandomStream& stream) {
    if (count < 0) throw std::invalid_argument("sample_rewards: count must be >= 0");
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(count));
    for (long s = 0; s < count; ++s) out.push_back(sample_scalar(model, stream));
    return out;
}

ConstraintRealization sample_constraint_realization(const ConstraintSpec& spec,
                                                    const std::vector<long>& arrivals,
                                                    RandomStream& stream) {
    const std::size_t n = spec.weight_model.rows();
    const std::size_t m = spec.weight_model.cols();
    ConstraintRealization real;
    real.weights = Grid<double>(n, m);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            double w = sample_scalar(spec.weight_model(i, j), stream);
            bool ok = spec.sign == WeightSign::AllNonNegative ? w >= 0.0 : w <= 0.0;
            if (!ok)
                throw std::runtime_error("weight realization violates declared sign at (" +
                                         std::to_string(i) + "," + std::to_string(j) + ")");
            real.weights(i, j) = w;
        }
    long total = std::accumulate(arrivals.begin(), arrivals.end(), 0L);
    real.requirements.resize(m);
    for (std::size_t j = 0; j < m; ++j) {
        const auto& model = spec.requirement_model[j];
        real.requirements[j] =
            model.tag == Dist::NegatedArrivalFraction
                ? -model.param * static_cast<double>(total)
                : sample_scalar(model, stream);
    }
    return real;
}

}  // namespace pond
