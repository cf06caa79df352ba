#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "modalshift/csv.hpp"
#include "modalshift/indicators.hpp"
#include "modalshift/model.hpp"
#include "modalshift/parallel.hpp"
#include "modalshift/rng.hpp"

namespace modalshift {

/// Search point: the two behavioural coefficients.
struct Genome {
    double beta_c = 0.0;
    double beta_tau = 0.0;

    double gene(int i) const { return i == 0 ? beta_c : beta_tau; }
    void set_gene(int i, double value) { (i == 0 ? beta_c : beta_tau) = value; }
};

inline constexpr int kGeneCount = 2;

struct Individual {
    Genome genome;
    std::array<double, 2> objectives{};
    int rank = 0;
    double crowding = 0.0;
};

/// NSGA-II run description. Both objectives are minimized; genome genes are
/// box-bounded. Evaluation averages `replications` simulator runs under a
/// seed set shared by every genome (common random numbers).
struct OptimizeSpec {
    SimulationConfig base = congested_config();
    int population = 200;
    int generations = 2000;
    int replications = 5;
    std::array<double, kGeneCount> lower{-5.0, -5.0};
    std::array<double, kGeneCount> upper{5.0, 5.0};
    double crossover_probability = 0.9;
    double eta_c = 15.0;
    double mutation_probability = 0.5;
    double eta_m = 20.0;
    std::uint64_t master_seed = 0;
};

namespace detail {

inline std::vector<std::string> validate_optimize_structure(const OptimizeSpec& spec) {
    std::vector<std::string> errors = validate_config(spec.base);
    auto require = [&errors](bool ok, const char* message) {
        if (!ok)
            errors.push_back(message);
    };
    require(spec.population >= 4, "opt.population must be >= 4");
    require(spec.population % 2 == 0, "opt.population must be even");
    require(spec.replications >= 1, "opt.replications must be >= 1");
    for (int g = 0; g < kGeneCount; ++g) {
        require(std::isfinite(spec.lower[g]) && std::isfinite(spec.upper[g]),
                "opt bounds must be finite");
        require(spec.lower[g] < spec.upper[g],
                "opt bounds must satisfy low < high for each gene");
    }
    require(spec.crossover_probability >= 0.0 && spec.crossover_probability <= 1.0,
            "opt.crossover_probability must lie in [0, 1]");
    require(spec.mutation_probability >= 0.0 && spec.mutation_probability <= 1.0,
            "opt.mutation_probability must lie in [0, 1]");
    require(spec.eta_c > 0.0, "opt.eta_c must be positive");
    require(spec.eta_m > 0.0, "opt.eta_m must be positive");
    return errors;
}

} // namespace detail

inline std::vector<std::string> validate_optimize_spec(const OptimizeSpec& spec) {
    std::vector<std::string> errors = detail::validate_optimize_structure(spec);
    if (spec.generations < 1)
        errors.push_back("opt.generations must be >= 1");
    return errors;
}

inline const OptimizeSpec& validated_optimize(const OptimizeSpec& spec) {
    const std::vector<std::string> errors = validate_optimize_spec(spec);
    if (!errors.empty()) {
        std::string message = "invalid optimizer specification:";
        for (const std::string& error : errors)
            message += "\n  - " + error;
        throw ConfigError(message);
    }
    return spec;
}

/// Pareto dominance for minimization: no worse in both, better in one.
inline bool dominates(const std::array<double, 2>& a, const std::array<double, 2>& b) {
    return a[0] <= b[0] && a[1] <= b[1] && (a[0] < b[0] || a[1] < b[1]);
}

/// Deb's fast non-dominated sort. Returns index lists per front, rank 0
/// first; indices within a front keep a deterministic order.
inline std::vector<std::vector<std::size_t>>
fast_non_dominated_sort(const std::vector<std::array<double, 2>>& points) {
    const std::size_t n = points.size();
    std::vector<std::vector<std::size_t>> dominated(n);
    std::vector<int> domination_count(n, 0);
    std::vector<std::vector<std::size_t>> fronts;

    std::vector<std::size_t> current;
    for (std::size_t p = 0; p < n; ++p) {
        for (std::size_t q = 0; q < n; ++q) {
            if (p == q)
                continue;
            if (dominates(points[p], points[q]))
                dominated[p].push_back(q);
            else if (dominates(points[q], points[p]))
                ++domination_count[p];
        }
        if (domination_count[p] == 0)
            current.push_back(p);
    }

    while (!current.empty()) {
        fronts.push_back(current);
        std::vector<std::size_t> next;
        for (const std::size_t p : fronts.back())
            for (const std::size_t q : dominated[p])
                if (--domination_count[q] == 0)
                    next.push_back(q);
        current = std::move(next);
    }
    return fronts;
}

/// Crowding distance within one front: boundary points are infinite, the
/// rest sum normalized neighbour gaps per objective. Fronts of one or two
/// points are all infinite; a flat objective contributes nothing.
inline std::vector<double>
crowding_distance(const std::vector<std::array<double, 2>>& front) {
    const std::size_t n = front.size();
    const double inf = std::numeric_limits<double>::infinity();
    if (n <= 2)
        return std::vector<double>(n, inf);

    std::vector<double> distance(n, 0.0);
    std::vector<std::size_t> order(n);
    for (int objective = 0; objective < 2; ++objective) {
        for (std::size_t i = 0; i < n; ++i)
            order[i] = i;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (front[a][objective] != front[b][objective])
                return front[a][objective] < front[b][objective];
            return a < b;
        });
        distance[order.front()] = inf;
        distance[order.back()] = inf;
        const double span = front[order.back()][objective] - front[order.front()][objective];
        if (span <= 0.0)
            continue;
        for (std::size_t i = 1; i + 1 < n; ++i) {
            if (std::isinf(distance[order[i]]))
                continue;
            distance[order[i]] +=
                (front[order[i + 1]][objective] - front[order[i - 1]][objective]) / span;
        }
    }
    return distance;
}

/// SBX: with the crossover probability, blends every gene of both parents;
/// otherwise the children are copies. Children are clipped to bounds.
inline std::pair<Genome, Genome> sbx_crossover(const Genome& a, const Genome& b,
                                               const OptimizeSpec& spec, Rng& rng) {
    Genome c1 = a;
    Genome c2 = b;
    if (rng.next_double() >= spec.crossover_probability)
        return {c1, c2};
    for (int g = 0; g < kGeneCount; ++g) {
        const double u = rng.next_double();
        const double exponent = 1.0 / (spec.eta_c + 1.0);
        const double beta = u <= 0.5 ? std::pow(2.0 * u, exponent)
                                     : std::pow(1.0 / (2.0 * (1.0 - u)), exponent);
        const double x1 = a.gene(g);
        const double x2 = b.gene(g);
        const double y1 = 0.5 * ((1.0 + beta) * x1 + (1.0 - beta) * x2);
        const double y2 = 0.5 * ((1.0 - beta) * x1 + (1.0 + beta) * x2);
        c1.set_gene(g, std::clamp(y1, spec.lower[g], spec.upper[g]));
        c2.set_gene(g, std::clamp(y2, spec.lower[g], spec.upper[g]));
    }
    return {c1, c2};
}

/// Polynomial mutation, applied per gene with the mutation probability; the
/// perturbation scales with the gene's box width and is clipped to bounds.
inline Genome poly_mutate(const Genome& genome, const OptimizeSpec& spec, Rng& rng) {
    Genome mutated = genome;
    for (int g = 0; g < kGeneCount; ++g) {
        if (rng.next_double() >= spec.mutation_probability)
            continue;
        const double u = rng.next_double();
        const double exponent = 1.0 / (spec.eta_m + 1.0);
        const double delta = u < 0.5 ? std::pow(2.0 * u, exponent) - 1.0
                                     : 1.0 - std::pow(2.0 * (1.0 - u), exponent);
        const double span = spec.upper[g] - spec.lower[g];
        mutated.set_gene(g, std::clamp(mutated.gene(g) + delta * span, spec.lower[g],
                                       spec.upper[g]));
    }
    return mutated;
}

namespace detail {

/// Binary tournament on (rank, crowding); ties keep the first contender.
inline const Individual& tournament(const std::vector<Individual>& population, Rng& rng) {
    const Individual& a = population[rng.uniform_index(population.size())];
    const Individual& b = population[rng.uniform_index(population.size())];
    if (b.rank < a.rank)
        return b;
    if (a.rank == b.rank && b.crowding > a.crowding)
        return b;
    return a;
}

/// mu+mu environmental selection: rank the combined pool, fill the next
/// population front by front, and cut the last front by crowding distance
/// (largest first, index as the deterministic tie-break).
inline std::vector<Individual> select_next(const std::vector<Individual>& combined,
                                           std::size_t mu) {
    std::vector<std::array<double, 2>> points(combined.size());
    for (std::size_t i = 0; i < combined.size(); ++i)
        points[i] = combined[i].objectives;
    const std::vector<std::vector<std::size_t>> fronts = fast_non_dominated_sort(points);

    std::vector<Individual> next;
    next.reserve(mu);
    for (std::size_t rank = 0; rank < fronts.size() && next.size() < mu; ++rank) {
        const std::vector<std::size_t>& front = fronts[rank];
        std::vector<std::array<double, 2>> front_points(front.size());
        for (std::size_t i = 0; i < front.size(); ++i)
            front_points[i] = points[front[i]];
        const std::vector<double> crowding = crowding_distance(front_points);

        std::vector<std::size_t> order(front.size());
        for (std::size_t i = 0; i < front.size(); ++i)
            order[i] = i;
        if (front.size() > mu - next.size()) {
            std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
                if (crowding[a] != crowding[b])
                    return crowding[a] > crowding[b];
                return front[a] < front[b];
            });
        }
        for (const std::size_t i : order) {
            if (next.size() == mu)
                break;
            Individual individual = combined[front[i]];
            individual.rank = static_cast<int>(rank);
            individual.crowding = crowding[i];
            next.push_back(individual);
        }
    }
    return next;
}

} // namespace detail

using ObjectiveFn = std::function<std::array<double, 2>(const Genome&)>;
using GenerationCallback = std::function<void(int, const std::vector<Individual>&)>;

/// The generational loop. Fully deterministic for a given spec: initial
/// population and variation draw from two seed-derived streams, and
/// objective evaluations land in per-index slots whatever the parallelism.
/// With zero generations the non-dominated subset of the initial random
/// population is returned.
inline std::vector<Individual> nsga2(const OptimizeSpec& spec, const ObjectiveFn& objective,
                                     int parallelism = 1,
                                     const GenerationCallback& on_generation = {}) {
    {
        std::vector<std::string> errors = detail::validate_optimize_structure(spec);
        if (spec.generations < 0)
            errors.push_back("opt.generations must be >= 0");
        if (!errors.empty()) {
            std::string message = "invalid optimizer specification:";
            for (const std::string& error : errors)
                message += "\n  - " + error;
            throw ConfigError(message);
        }
    }

    const std::size_t mu = static_cast<std::size_t>(spec.population);
    Rng init_rng(derive_seed(spec.master_seed, 0));
    Rng variation_rng(derive_seed(spec.master_seed, 1));

    auto evaluate_all = [&](std::vector<Individual>& group) {
        parallel_for(group.size(), parallelism, [&](std::size_t i) {
            group[i].objectives = objective(group[i].genome);
        });
    };

    std::vector<Individual> population(mu);
    for (Individual& individual : population)
        for (int g = 0; g < kGeneCount; ++g)
            individual.genome.set_gene(g,
                                       init_rng.uniform(spec.lower[g], spec.upper[g]));
    evaluate_all(population);
    population = detail::select_next(population, mu);

    for (int generation = 0; generation < spec.generations; ++generation) {
        std::vector<Individual> offspring;
        offspring.reserve(mu);
        while (offspring.size() < mu) {
            const Individual& p1 = detail::tournament(population, variation_rng);
            const Individual& p2 = detail::tournament(population, variation_rng);
            auto [c1, c2] = sbx_crossover(p1.genome, p2.genome, spec, variation_rng);
            offspring.push_back({poly_mutate(c1, spec, variation_rng), {}, 0, 0.0});
            if (offspring.size() < mu)
                offspring.push_back({poly_mutate(c2, spec, variation_rng), {}, 0, 0.0});
        }
        evaluate_all(offspring);

        std::vector<Individual> combined = population;
        combined.insert(combined.end(), offspring.begin(), offspring.end());
        population = detail::select_next(combined, mu);
        if (on_generation)
            on_generation(generation, population);
    }

    std::vector<Individual> front;
    for (const Individual& individual : population)
        if (individual.rank == 0)
            front.push_back(individual);
    return front;
}

/// The fixed seed set shared by every genome evaluation of a run.
inline std::vector<std::uint64_t> common_seeds(const OptimizeSpec& spec) {
    std::vector<std::uint64_t> seeds(static_cast<std::size_t>(spec.replications));
    for (std::size_t r = 0; r < seeds.size(); ++r)
        seeds[r] = derive_seed(spec.master_seed, 2, r);
    return seeds;
}

/// Mean (main-mode congestion, other-mode congestion) over the common seed
/// set, both to be minimized.
inline std::array<double, 2> evaluate(const Genome& genome, const OptimizeSpec& spec,
                                      const std::vector<std::uint64_t>& seeds) {
    SimulationConfig config = spec.base;
    config.behavioural.beta_c = genome.beta_c;
    config.behavioural.beta_tau = genome.beta_tau;
    std::array<double, 2> objectives{0.0, 0.0};
    for (const std::uint64_t seed : seeds) {
        const SimResult result = run(config, seed).result;
        objectives[0] += result.congestion[mode_index(ModeId::Rer)];
        objectives[1] += result.avg_congestion_other;
    }
    objectives[0] /= static_cast<double>(seeds.size());
    objectives[1] /= static_cast<double>(seeds.size());
    return objectives;
}

inline ObjectiveFn make_simulator_objective(const OptimizeSpec& spec) {
    return [spec, seeds = common_seeds(spec)](const Genome& genome) {
        return evaluate(genome, spec, seeds);
    };
}

inline std::string front_csv_header() {
    return "beta_c,beta_tau,rer_congestion,other_congestion,rank,crowding";
}

/// Front rows sorted by the first objective (then second, then genome) so
/// reruns emit identical bytes.
inline void write_front_csv(std::ostream& out, std::vector<Individual> front) {
    std::sort(front.begin(), front.end(), [](const Individual& a, const Individual& b) {
        if (a.objectives[0] != b.objectives[0])
            return a.objectives[0] < b.objectives[0];
        if (a.objectives[1] != b.objectives[1])
            return a.objectives[1] < b.objectives[1];
        if (a.genome.beta_c != b.genome.beta_c)
            return a.genome.beta_c < b.genome.beta_c;
        return a.genome.beta_tau < b.genome.beta_tau;
    });
    out << front_csv_header() << '\n';
    for (const Individual& individual : front) {
        out << format_double(individual.genome.beta_c) << ','
            << format_double(individual.genome.beta_tau) << ','
            << format_double(individual.objectives[0]) << ','
            << format_double(individual.objectives[1]) << ',' << individual.rank << ','
            << format_double(individual.crowding) << '\n';
    }
}

} // namespace modalshift
