#include "lvsg/rpc.hpp"

#include "lvsg/error.hpp"
#include "lvsg/parallel.hpp"
#include "lvsg/seeding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace lvsg::rpc {

std::vector<double> CascadeSample::weights() const
{
    std::vector<double> w(log_weights.size());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = std::exp(log_weights[i]);
    return w;
}

std::vector<int> CascadeSample::path(std::size_t leaf) const
{
    std::vector<int> p(static_cast<std::size_t>(levels));
    for (int k = levels - 1; k >= 0; --k) {
        p[static_cast<std::size_t>(k)] = static_cast<int>(leaf % static_cast<std::size_t>(branching));
        leaf /= static_cast<std::size_t>(branching);
    }
    return p;
}

namespace {

// sub-stream of a node for its own draws; child streams use the child index
constexpr std::uint64_t kOwnStream = ~std::uint64_t{0};

void check_lambdas(std::span<const double> lambdas)
{
    require(!lambdas.empty(), "cascade: need at least one level");
    double prev = 0.0;
    for (double l : lambdas) {
        require(std::isfinite(l) && l > prev && l < 1.0, "cascade: lambdas must increase strictly inside (0, 1)");
        prev = l;
    }
}

std::size_t leaf_count(int levels, int branching)
{
    double total = 1.0;
    for (int k = 0; k < levels; ++k) total *= branching;
    require(total <= 1e6, "cascade: N^K must not exceed 10^6 leaves");
    return static_cast<std::size_t>(total);
}

} // namespace

CascadeSample sample_cascade(std::span<const double> lambdas, int branching, std::mt19937_64& rng, bool allow_small)
{
    check_lambdas(lambdas);
    require(branching >= (allow_small ? 1 : 100), "cascade: branching N must be at least 100");
    const int K = static_cast<int>(lambdas.size());
    const std::size_t leaves = leaf_count(K, branching);

    CascadeSample out;
    out.levels = K;
    out.branching = branching;
    out.lambdas.assign(lambdas.begin(), lambdas.end());
    out.level_truncation.assign(static_cast<std::size_t>(K), 0.0);

    std::exponential_distribution<double> expo(1.0);
    const auto N = static_cast<std::size_t>(branching);
    // log weights of the nodes at the current depth, lexicographic; each node
    // draws its children from its own stream, so the top N atoms of a node do
    // not depend on N and runs at N and 2N share them
    std::vector<double> cur{0.0};
    std::vector<std::uint64_t> streams{rng()};
    std::vector<double> atoms(N);
    for (int k = 0; k < K; ++k) {
        const double lambda = lambdas[static_cast<std::size_t>(k)];
        std::vector<double> next(cur.size() * N);
        std::vector<std::uint64_t> next_streams(k + 1 < K ? next.size() : 0);
        double trunc_sum = 0.0;
        for (std::size_t node = 0; node < cur.size(); ++node) {
            std::mt19937_64 node_rng(derive_seed(streams[node], kOwnStream));
            double gamma = 0.0;
            for (std::size_t j = 0; j < N; ++j) {
                gamma += expo(node_rng);
                atoms[j] = -std::log(gamma) / lambda;
                next[node * N + j] = cur[node] + atoms[j];
                if (!next_streams.empty()) next_streams[node * N + j] = derive_seed(streams[node], j);
            }
            // points beyond Gamma_N have unit intensity in Gamma, so the
            // expected tail is int_{Gamma_N}^inf g^(-1/lambda) dg
            const double log_tail = (1.0 - 1.0 / lambda) * std::log(gamma) + std::log(lambda / (1.0 - lambda));
            const double log_kept = quad::log_sum_exp(atoms);
            trunc_sum += 1.0 / (1.0 + std::exp(log_kept - log_tail));
        }
        out.level_truncation[static_cast<std::size_t>(k)] = trunc_sum / static_cast<double>(cur.size());
        cur = std::move(next);
        streams = std::move(next_streams);
    }
    const double norm = quad::log_sum_exp(cur);
    for (double& v : cur) v -= norm;
    out.log_weights = std::move(cur);
    (void)leaves;
    out.retained_mass_estimate = 1.0;
    for (double r : out.level_truncation) out.retained_mass_estimate *= 1.0 - r;
    return out;
}

CascadeSample sample_cascade(std::span<const double> lambdas, int branching, std::uint64_t seed, bool allow_small)
{
    std::mt19937_64 rng(seed);
    return sample_cascade(lambdas, branching, rng, allow_small);
}

double TreeGaussians::at(std::span<const int> path, int level) const
{
    std::size_t idx = 0;
    for (int k = 0; k < level; ++k) idx = idx * static_cast<std::size_t>(branching) + static_cast<std::size_t>(path[static_cast<std::size_t>(k)]);
    return z[static_cast<std::size_t>(level - 1)][idx];
}

TreeGaussians sample_tree_gaussians(int levels, int branching, std::mt19937_64& rng)
{
    require(levels >= 1 && branching >= 1, "tree gaussians: need K >= 1 and N >= 1");
    leaf_count(levels, branching);
    TreeGaussians t;
    t.levels = levels;
    t.branching = branching;
    std::normal_distribution<double> normal;
    // per-parent streams, as in sample_cascade
    const auto N = static_cast<std::size_t>(branching);
    std::vector<std::uint64_t> streams{rng()};
    for (int k = 1; k <= levels; ++k) {
        std::vector<double> v(streams.size() * N);
        std::vector<std::uint64_t> next(k < levels ? v.size() : 0);
        for (std::size_t node = 0; node < streams.size(); ++node) {
            std::mt19937_64 node_rng(derive_seed(streams[node], kOwnStream));
            for (std::size_t j = 0; j < N; ++j) {
                v[node * N + j] = normal(node_rng);
                if (!next.empty()) next[node * N + j] = derive_seed(streams[node], j);
            }
        }
        t.z.push_back(std::move(v));
        streams = std::move(next);
    }
    return t;
}

namespace {

std::vector<double> q_scales(const parisi::ParisiMeasure& zeta, double beta, double kappa)
{
    const auto& b = zeta.atoms();
    std::vector<double> s(b.size() - 1);
    for (std::size_t k = 1; k < b.size(); ++k) s[k - 1] = beta * kappa * std::sqrt(b[k] - b[k - 1]);
    return s;
}

std::vector<double> y_scales(const parisi::ParisiMeasure& zeta, double beta, double kappa)
{
    const auto& b = zeta.atoms();
    std::vector<double> s(b.size() - 1);
    for (std::size_t k = 1; k < b.size(); ++k)
        s[k - 1] = beta * kappa / std::sqrt(2.0) * std::sqrt(b[k] * b[k] - b[k - 1] * b[k - 1]);
    return s;
}

double path_sum(std::span<const int> path, const TreeGaussians& z, const std::vector<double>& scales)
{
    require(static_cast<int>(path.size()) == z.levels && z.levels == static_cast<int>(scales.size()),
            "tree sum: path length must equal K");
    double s = 0.0;
    for (int k = 1; k <= z.levels; ++k) s += scales[static_cast<std::size_t>(k - 1)] * z.at(path, k);
    return s;
}

// sum_k scale_k z_k for all leaves in lexicographic order
std::vector<double> all_sums(const TreeGaussians& z, const std::vector<double>& scales)
{
    require(z.levels == static_cast<int>(scales.size()), "tree sum: K mismatch");
    std::vector<double> cur{0.0};
    const auto N = static_cast<std::size_t>(z.branching);
    for (int k = 0; k < z.levels; ++k) {
        std::vector<double> next(cur.size() * N);
        const auto& zk = z.z[static_cast<std::size_t>(k)];
        const double s = scales[static_cast<std::size_t>(k)];
        for (std::size_t i = 0; i < next.size(); ++i) next[i] = cur[i / N] + s * zk[i];
        cur = std::move(next);
    }
    return cur;
}

// Cubic (Catmull-Rom) table of a smooth function on a uniform grid with an
// exact fallback outside it.
class LeafTable {
public:
    LeafTable(const parisi::LeafIntegral& leaf, double lo, double hi, int points) : leaf_(leaf), lo_(lo)
    {
        step_ = (hi - lo) / (points - 1);
        values_.resize(static_cast<std::size_t>(points) + 2);
        for (int i = -1; i <= points; ++i) values_[static_cast<std::size_t>(i + 1)] = leaf(lo + i * step_);
        hi_ = hi;
    }

    double operator()(double u) const
    {
        if (!(u >= lo_ && u < hi_)) return leaf_(u);
        const double t = (u - lo_) / step_;
        const auto i = static_cast<std::size_t>(t);
        const double f = t - static_cast<double>(i);
        const double p0 = values_[i];
        const double p1 = values_[i + 1];
        const double p2 = values_[i + 2];
        const double p3 = values_[i + 3];
        return p1 + 0.5 * f * (p2 - p0 + f * (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3 + f * (3.0 * (p1 - p2) + p3 - p0)));
    }

private:
    const parisi::LeafIntegral& leaf_;
    double lo_;
    double hi_ = 0.0;
    double step_ = 1.0;
    std::vector<double> values_;
};

} // namespace

double q_leaf(std::span<const int> path, const TreeGaussians& z, const parisi::ParisiMeasure& zeta, double beta,
              double kappa)
{
    return path_sum(path, z, q_scales(zeta, beta, kappa));
}

double y_leaf(std::span<const int> path, const TreeGaussians& z, const parisi::ParisiMeasure& zeta, double beta,
              double kappa)
{
    return path_sum(path, z, y_scales(zeta, beta, kappa));
}

std::vector<double> q_all(const TreeGaussians& z, const parisi::ParisiMeasure& zeta, double beta, double kappa)
{
    return all_sums(z, q_scales(zeta, beta, kappa));
}

std::vector<double> y_all(const TreeGaussians& z, const parisi::ParisiMeasure& zeta, double beta, double kappa)
{
    return all_sums(z, y_scales(zeta, beta, kappa));
}

double linear_leaf_x0(std::span<const double> lambdas, std::span<const double> slopes, double offset)
{
    require(lambdas.size() == slopes.size(), "linear leaf: need one slope per level");
    double x = offset;
    for (std::size_t k = 0; k < lambdas.size(); ++k) x += 0.5 * lambdas[k] * slopes[k] * slopes[k];
    return x;
}

VerifyResult verify_prpc(const parisi::ParisiMeasure& zeta, const parisi::Args& args, const Leaf& leaf,
                         const VerifyOptions& options)
{
    args.validate();
    require(options.replicas >= 2, "verify_prpc: need at least two replicas");
    const int K = zeta.levels();
    leaf_count(K, options.branching);
    const parisi::Model& m = args.model;

    double recursion = 0.0;
    std::vector<double> scales;
    switch (leaf.kind) {
    case Leaf::Kind::mu_beta:
        recursion = parisi::recursion_x0(zeta, args, parisi::RecursionOptions{options.order, false}).value;
        scales = q_scales(zeta, m.beta, m.kappa);
        break;
    case Leaf::Kind::linear:
        require(static_cast<int>(leaf.slopes.size()) == K, "verify_prpc: linear leaf needs K slopes");
        recursion = linear_leaf_x0(zeta.lambdas(), leaf.slopes, leaf.offset);
        scales = leaf.slopes;
        break;
    case Leaf::Kind::y_process:
        recursion = parisi::correction_sum_form(zeta, m);
        scales = y_scales(zeta, m.beta, m.kappa);
        break;
    case Leaf::Kind::constant:
        recursion = leaf.offset;
        scales.assign(static_cast<std::size_t>(K), 0.0);
        break;
    }

    double total = 0.0;
    for (double s : scales) total += std::abs(s);
    const double reach = 9.0 * total;
    std::optional<parisi::LeafIntegral> exact;
    std::optional<LeafTable> table;
    if (leaf.kind == Leaf::Kind::mu_beta) {
        exact.emplace(args, -reach, reach);
        table.emplace(*exact, -reach, reach, 20001);
    }

    std::vector<double> samples(static_cast<std::size_t>(options.replicas));
    std::vector<double> retained(samples.size());
    parallel_for(options.replicas, options.jobs, [&](int r) {
        std::mt19937_64 rng(derive_seed(options.seed, static_cast<std::uint64_t>(r)));
        const CascadeSample cascade = sample_cascade(zeta.lambdas(), options.branching, rng, true);
        const TreeGaussians tree = sample_tree_gaussians(K, options.branching, rng);
        std::vector<double> terms = all_sums(tree, scales);
        for (std::size_t i = 0; i < terms.size(); ++i) {
            double x = terms[i] + leaf.offset;
            if (leaf.kind == Leaf::Kind::mu_beta) x = (*table)(terms[i]);
            terms[i] = cascade.log_weights[i] + x;
        }
        samples[static_cast<std::size_t>(r)] = quad::log_sum_exp(terms);
        retained[static_cast<std::size_t>(r)] = cascade.retained_mass_estimate;
    });

    const double R = options.replicas;
    double mean = 0.0;
    for (double s : samples) mean += s / R;
    double var = 0.0;
    for (double s : samples) var += (s - mean) * (s - mean) / (R - 1.0);
    const double se = std::sqrt(var / R);
    double kept = 0.0;
    for (double r : retained) kept += r / R;
    double z = 0.0;
    if (se > 0.0)
        z = (mean - recursion) / se;
    else if (std::abs(mean - recursion) > 1e-12 * (1.0 + std::abs(recursion)))
        z = std::copysign(std::numeric_limits<double>::infinity(), mean - recursion);
    return {mean, recursion, se, z, options.branching, options.replicas, kept};
}

} // namespace lvsg::rpc
