#include "commands.hpp"

#include "output.hpp"

#include "lvsg/error.hpp"
#include "lvsg/frontier.hpp"
#include "lvsg/gibbs.hpp"
#include "lvsg/parallel.hpp"
#include "lvsg/parisi.hpp"
#include "lvsg/randmat.hpp"
#include "lvsg/rpc.hpp"
#include "lvsg/sde.hpp"
#include "lvsg/seeding.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#ifndef LVSG_SCHEMA_VERSION
#define LVSG_SCHEMA_VERSION "0.0.0"
#endif

namespace lvsg::cli {

using nlohmann::json;

namespace {

struct Common {
    std::uint64_t seed = 1;
    std::string output;
    std::string format = "json";
    int jobs = 1;
};

void add_seed(CLI::App* sub, Common& c) { sub->add_option("--seed", c.seed, "base seed")->capture_default_str(); }

void add_output(CLI::App* sub, Common& c, const std::string& default_format)
{
    c.format = default_format;
    sub->add_option("-o,--output", c.output, "output file ('-' for stdout)");
    sub->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
}

void add_jobs(CLI::App* sub, Common& c)
{
    sub->add_option("--jobs", c.jobs, "worker threads over replicas")->check(CLI::PositiveNumber)->capture_default_str();
}

json envelope(const std::string& command)
{
    return json{{"schema_version", LVSG_SCHEMA_VERSION}, {"command", command}};
}

std::vector<double> parse_grid(const std::string& text)
{
    // lo:hi:step or a comma list
    std::vector<double> out;
    if (text.find(':') != std::string::npos) {
        std::vector<double> parts;
        std::stringstream ss(text);
        std::string item;
        while (std::getline(ss, item, ':')) parts.push_back(std::stod(item));
        require(parts.size() == 3, "grid must be lo:hi:step");
        require(parts[2] > 0.0 && parts[1] >= parts[0], "grid needs step > 0 and hi >= lo");
        const auto count = static_cast<long>(std::floor((parts[1] - parts[0]) / parts[2] + 1e-9));
        for (long i = 0; i <= count; ++i) out.push_back(parts[0] + static_cast<double>(i) * parts[2]);
    } else {
        std::stringstream ss(text);
        std::string item;
        while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
    }
    require(!out.empty(), "empty grid");
    return out;
}

std::vector<std::string> split_list(const std::string& s)
{
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto b = item.find_first_not_of(' ');
        const auto e = item.find_last_not_of(' ');
        if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
    }
    return out;
}

json read_json(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot read " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw ValidationError(path + ": " + e.what());
    }
}

template <class T>
T field(const json& j, const std::string& key, T fallback)
{
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ValidationError("field '" + key + "' has the wrong type");
    }
}

struct ParisiInput {
    parisi::Args args;
    std::vector<double> lambdas;
    std::vector<double> atoms;
    int order = 40;
};

ParisiInput parisi_input(const json& j)
{
    ParisiInput in;
    in.args.a = field(j, "a", 5.0);
    in.args.h = field(j, "h", 0.0);
    in.args.gamma = field(j, "gamma", 0.0);
    const json m = j.contains("model") ? j.at("model") : j;
    if (m.contains("temperature")) {
        require(!m.contains("beta"), "give either beta or temperature, not both");
        in.args.model.beta = 1.0 / field(m, "temperature", 0.5);
    } else {
        in.args.model.beta = field(m, "beta", 2.0);
    }
    in.args.model.kappa = field(m, "kappa", 0.3);
    in.args.model.alpha = field(m, "alpha", 0.0);
    in.args.model.phi = field(m, "phi", 1.0);
    in.lambdas = field(j, "lambdas", std::vector<double>{0.5});
    in.atoms = field(j, "atoms", std::vector<double>{0.0, 1.0});
    in.order = field(j, "order", 40);
    return in;
}

json model_json(const parisi::Model& m)
{
    return json{{"beta", m.beta}, {"kappa", m.kappa}, {"alpha", m.alpha}, {"phi", m.phi}};
}

// ---------------------------------------------------------------- frontier

void register_frontier(CLI::App& app, std::function<void()>& action)
{
    auto* sub = app.add_subcommand("frontier", "realizability frontier lambda_+(alpha, kappa) = 1");
    auto c = std::make_shared<Common>();
    auto grid = std::make_shared<std::string>("0.05:0.7:0.05");
    sub->add_option("--kappa-grid", *grid, "lo:hi:step or comma list, kappa in (0, 1/sqrt 2]")->capture_default_str();
    add_output(sub, *c, "csv");
    sub->callback([&action, c, grid] {
        action = [c, grid] {
            const auto kappas = parse_grid(*grid);
            const auto curve = frontier::frontier_curve(kappas);
            if (c->format == "csv") {
                CsvTable t;
                t.header = {{"command", "frontier"}, {"schema_version", LVSG_SCHEMA_VERSION}, {"kappa_grid", *grid}};
                t.columns = {"kappa", "alpha", "c", "lambda_plus"};
                for (const auto& p : curve) t.add_row({p.kappa, p.alpha, p.c, p.lambda_plus});
                write_atomic(resolve_output(c->output, "frontier.csv"), t.str());
            } else {
                json doc = envelope("frontier");
                doc["kappa_grid"] = *grid;
                doc["points"] = json::array();
                for (const auto& p : curve)
                    doc["points"].push_back({{"kappa", p.kappa}, {"alpha", p.alpha}, {"c", p.c}, {"lambda_plus", p.lambda_plus}});
                write_atomic(resolve_output(c->output, "frontier.json"), format_json(doc));
            }
        };
    });
}

// -------------------------------------------------------------- lambda-sim

void register_lambda_sim(CLI::App& app, std::function<void()>& action)
{
    auto* sub = app.add_subcommand("lambda-sim", "heuristic lambda_plus_max over deformed-GOE draws");
    auto c = std::make_shared<Common>();
    struct P {
        int n = 100;
        double kappa = 0.5;
        double alpha = 0.0;
        int draws = 20;
    };
    auto p = std::make_shared<P>();
    sub->add_option("--n", p->n, "matrix size")->check(CLI::PositiveNumber)->capture_default_str();
    sub->add_option("--kappa", p->kappa)->capture_default_str();
    sub->add_option("--alpha", p->alpha)->capture_default_str();
    sub->add_option("--draws", p->draws)->check(CLI::PositiveNumber)->capture_default_str();
    add_seed(sub, *c);
    add_jobs(sub, *c);
    add_output(sub, *c, "csv");
    sub->callback([&action, c, p] {
        action = [c, p] {
            const EnsembleParams ens{p->kappa, p->alpha};
            ens.validate();
            std::vector<std::uint64_t> seeds(static_cast<std::size_t>(p->draws));
            std::vector<double> values(seeds.size());
            parallel_for(p->draws, c->jobs, [&](int i) {
                const auto s = derive_seed(c->seed, static_cast<std::uint64_t>(i));
                seeds[static_cast<std::size_t>(i)] = s;
                const auto sigma = InteractionMatrix::deformed_goe(p->n, ens, s);
                randmat::HeuristicOptions opt;
                opt.seed = derive_seed(s, 1);
                values[static_cast<std::size_t>(i)] = randmat::lambda_plus_max_heuristic(sigma.entries(), opt).value;
            });
            if (c->format == "csv") {
                CsvTable t;
                t.header = {{"command", "lambda-sim"}, {"schema_version", LVSG_SCHEMA_VERSION}, {"seed", std::to_string(c->seed)},
                            {"n", std::to_string(p->n)}, {"kappa", format_number(p->kappa)},
                            {"alpha", format_number(p->alpha)}, {"draws", std::to_string(p->draws)}};
                t.columns = {"n", "seed", "kappa", "alpha", "lambda_max_heuristic", "realizable_flag"};
                for (std::size_t i = 0; i < seeds.size(); ++i)
                    t.rows.push_back({std::to_string(p->n), std::to_string(seeds[i]), format_number(p->kappa),
                                      format_number(p->alpha), format_number(values[i]), values[i] < 1.0 ? "1" : "0"});
                write_atomic(resolve_output(c->output, "lambda-sim.csv"), t.str());
            } else {
                json doc = envelope("lambda-sim");
                doc["seed"] = c->seed;
                doc["draws"] = json::array();
                for (std::size_t i = 0; i < seeds.size(); ++i)
                    doc["draws"].push_back({{"n", p->n}, {"seed", seeds[i]}, {"kappa", p->kappa}, {"alpha", p->alpha},
                                            {"lambda_max_heuristic", values[i]}, {"realizable_flag", values[i] < 1.0}});
                write_atomic(resolve_output(c->output, "lambda-sim.json"), format_json(doc));
            }
        };
    });
}

// -------------------------------------------------------------------- sde

struct ModelFlags {
    int n = 2;
    double kappa = 0.0;
    double alpha = 0.0;
    double phi = 1.0;
    double temperature = 0.5;
};

void add_model_flags(CLI::App* sub, ModelFlags& m)
{
    sub->add_option("--n", m.n, "number of species")->check(CLI::PositiveNumber)->capture_default_str();
    sub->add_option("--kappa", m.kappa, "GOE strength")->capture_default_str();
    sub->add_option("--alpha", m.alpha, "mean interaction")->capture_default_str();
    sub->add_option("--phi", m.phi, "immigration rate")->capture_default_str();
    sub->add_option("--temperature", m.temperature, "demographic noise T")->capture_default_str();
}

ModelParams build_model(const ModelFlags& m, std::uint64_t seed)
{
    ModelParams p;
    p.phi = m.phi;
    p.temperature = m.temperature;
    p.validate_gibbs();
    if (m.kappa == 0.0) {
        require(std::isfinite(m.alpha), "alpha must be finite");
        p.sigma = InteractionMatrix::from_entries(Eigen::MatrixXd::Constant(m.n, m.n, m.alpha / m.n));
    } else {
        const EnsembleParams ens{m.kappa, m.alpha};
        ens.validate();
        p.sigma = InteractionMatrix::deformed_goe(m.n, ens, derive_seed(seed, 0));
    }
    return p;
}

json model_flags_json(const ModelFlags& m)
{
    return json{{"n", m.n}, {"kappa", m.kappa}, {"alpha", m.alpha}, {"phi", m.phi}, {"temperature", m.temperature}};
}

void register_sde(CLI::App& app, std::function<void()>& action)
{
    auto* sub = app.add_subcommand("sde", "Euler simulation of the stochastic Lotka-Volterra system");
    auto c = std::make_shared<Common>();
    struct P {
        ModelFlags m;
        double dt = 1e-3;
        double t_end = 100.0;
        double burn_in = 0.0;
        double x0 = 1.0;
        long stride = 100;
        int batches = 50;
        std::string observables = "mean,second-moment,logmean";
        std::string summary;
    };
    auto p = std::make_shared<P>();
    add_model_flags(sub, p->m);
    sub->add_option("--dt", p->dt)->capture_default_str();
    sub->add_option("--t-end", p->t_end)->capture_default_str();
    sub->add_option("--burn-in", p->burn_in, "time discarded before averaging")->capture_default_str();
    sub->add_option("--x0", p->x0, "initial value of every coordinate")->capture_default_str();
    sub->add_option("--record-stride", p->stride, "keep every k-th step in the time series")->capture_default_str();
    sub->add_option("--batches", p->batches, "batch count for standard errors")->capture_default_str();
    sub->add_option("--observables", p->observables, "comma list of mean, second-moment, logmean")->capture_default_str();
    sub->add_option("--summary", p->summary, "JSON summary path (default: output with .json)");
    add_seed(sub, *c);
    add_output(sub, *c, "csv");
    sub->callback([&action, c, p] {
        action = [c, p] {
            const auto names = split_list(p->observables);
            require(!names.empty(), "sde: the observable list is empty");
            ModelParams model = build_model(p->m, c->seed);
            sde::SimulationOptions opt;
            opt.dt = p->dt;
            opt.t_end = p->t_end;
            opt.seed = derive_seed(c->seed, 1);
            opt.x0 = Eigen::VectorXd::Constant(p->m.n, p->x0);
            opt.record_stride = p->stride;
            for (const auto& n : names) opt.observables.push_back(sde::observable_by_name(n));
            require(p->burn_in >= 0.0 && p->burn_in < p->t_end, "sde: burn-in must lie in [0, t-end)");
            const sde::Trajectory traj = sde::simulate(model, opt);

            CsvTable t;
            t.header = {{"command", "sde"}, {"schema_version", LVSG_SCHEMA_VERSION}, {"seed", std::to_string(c->seed)},
                        {"n", std::to_string(p->m.n)}, {"kappa", format_number(p->m.kappa)},
                        {"alpha", format_number(p->m.alpha)}, {"phi", format_number(p->m.phi)},
                        {"temperature", format_number(p->m.temperature)}, {"dt", format_number(p->dt)},
                        {"t_end", format_number(p->t_end)}};
            t.columns = {"t"};
            for (const auto& o : opt.observables) t.columns.push_back(o.name);
            for (std::size_t i = 0; i < traj.size(); ++i) {
                std::vector<double> row{traj.times()[i]};
                for (const auto& o : opt.observables) row.push_back(o.fn(traj.state(i)));
                t.add_row(row);
            }
            const auto csv_path = resolve_output(c->output, "sde.csv");

            json doc = envelope("sde");
            doc["seed"] = c->seed;
            doc["parameters"] = model_flags_json(p->m);
            doc["parameters"]["dt"] = p->dt;
            doc["parameters"]["t_end"] = p->t_end;
            doc["parameters"]["burn_in"] = p->burn_in;
            doc["parameters"]["x0"] = p->x0;
            doc["final_time"] = traj.final_time();
            doc["exploded"] = traj.exploded();
            doc["explosion_time"] = traj.explosion_time() ? json(*traj.explosion_time()) : json(nullptr);
            doc["observables"] = json::array();
            if (!traj.exploded() && traj.final_time() > p->burn_in) {
                for (std::size_t k = 0; k < opt.observables.size(); ++k) {
                    const auto est = sde::time_average(traj, k, p->burn_in, p->batches);
                    doc["observables"].push_back(
                        {{"name", opt.observables[k].name}, {"mean", est.mean}, {"std_error", est.std_error}});
                }
            }
            std::filesystem::path summary_path;
            if (!p->summary.empty())
                summary_path = resolve_output(p->summary, "sde.json");
            else if (csv_path == "-")
                summary_path = resolve_output("sde.json", "sde.json");
            else
                summary_path = std::filesystem::path(csv_path).replace_extension(".json");
            write_atomic(csv_path, t.str());
            write_atomic(summary_path, format_json(doc));
            if (traj.exploded()) throw ConvergenceError("sde: trajectory left the norm cap (explosion)");
        };
    });
}

// ------------------------------------------------------------ gibbs-sample

gibbs::Domain parse_domain(const std::string& s)
{
    if (s == "orthant") return gibbs::Domain::orthant;
    if (s == "box") return gibbs::Domain::box;
    return gibbs::Domain::ball;
}

void register_gibbs_sample(CLI::App& app, std::function<void()>& action)
{
    auto* sub = app.add_subcommand("gibbs-sample", "Metropolis sampling of the Gibbs measure");
    auto c = std::make_shared<Common>();
    struct P {
        ModelFlags m;
        std::string domain = "orthant";
        double domain_size = 0.0;
        long chain_length = 20000;
        long burn_in = 5000;
        std::string observable = "mean";
        std::string samples;
    };
    auto p = std::make_shared<P>();
    add_model_flags(sub, p->m);
    sub->add_option("--domain", p->domain)->check(CLI::IsMember({"orthant", "box", "ball"}))->capture_default_str();
    sub->add_option("--domain-size", p->domain_size, "a for the box, A for the ball")->capture_default_str();
    sub->add_option("--chain-length", p->chain_length)->capture_default_str();
    sub->add_option("--burn-in", p->burn_in)->capture_default_str();
    sub->add_option("--observable", p->observable, "mean, second-moment or logmean")->capture_default_str();
    sub->add_option("--samples", p->samples, "optional CSV of the recorded states");
    add_seed(sub, *c);
    sub->add_option("-o,--output", c->output, "output JSON ('-' for stdout)");
    sub->callback([&action, c, p] {
        action = [c, p] {
            gibbs::GibbsTarget target;
            target.params = build_model(p->m, c->seed);
            target.domain = parse_domain(p->domain);
            target.domain_size = p->domain_size;
            target.validate();
            gibbs::McmcOptions opt;
            opt.chain_length = p->chain_length;
            opt.burn_in = p->burn_in;
            opt.seed = derive_seed(c->seed, 1);
            const auto samples = gibbs::mcmc_sample(target, opt);
            const auto obs = sde::observable_by_name(p->observable);
            std::vector<double> values(samples.size());
            for (std::size_t i = 0; i < samples.size(); ++i) values[i] = obs.fn(samples.state(i));
            const auto est = gibbs::chain_mean(values);

            json doc = envelope("gibbs-sample");
            doc["n"] = p->m.n;
            doc["kappa"] = p->m.kappa;
            doc["alpha"] = p->m.alpha;
            doc["beta"] = target.params.beta();
            doc["phi"] = p->m.phi;
            doc["temperature"] = p->m.temperature;
            doc["domain"] = p->domain;
            doc["observable"] = p->observable;
            doc["value"] = est.mean;
            doc["std_error"] = est.std_error;
            doc["truncation_frequency"] = 0.0;
            doc["seeds"] = json::array({c->seed});
            doc["schedule"] = json::array({1.0});
            doc["acceptance_rate"] = samples.acceptance_rate;
            doc["chain_length"] = p->chain_length;
            doc["burn_in"] = p->burn_in;
            if (!p->samples.empty()) {
                CsvTable t;
                t.header = {{"command", "gibbs-sample"}, {"seed", std::to_string(c->seed)}};
                for (int i = 0; i < p->m.n; ++i) t.columns.push_back("x" + std::to_string(i + 1));
                for (std::size_t i = 0; i < samples.size(); ++i) {
                    const auto x = samples.state(i);
                    t.add_row(std::vector<double>(x.data(), x.data() + x.size()));
                }
                write_atomic(resolve_output(p->samples, "gibbs-samples.csv"), t.str());
            }
            write_atomic(resolve_output(c->output, "gibbs-sample.json"), format_json(doc));
        };
    });
}

// ------------------------------------------------------------- free-energy

void register_free_energy(CLI::App& app, std::function<void()>& action)
{
    auto* sub = app.add_subcommand("free-energy", "disorder-averaged per-site log partition function");
    auto c = std::make_shared<Common>();
    struct P {
        ModelFlags m;
        int replicas = 20;
        int t_points = 21;
        long chain_length = 20000;
        long burn_in = 5000;
        double eps_sigma = 0.0;
    };
    auto p = std::make_shared<P>();
    add_model_flags(sub, p->m);
    sub->add_option("--replicas", p->replicas, "disorder draws")->check(CLI::PositiveNumber)->capture_default_str();
    sub->add_option("--t-points", p->t_points, "thermodynamic-integration grid size")->capture_default_str();
    sub->add_option("--chain-length", p->chain_length)->capture_default_str();
    sub->add_option("--burn-in", p->burn_in)->capture_default_str();
    sub->add_option("--eps-sigma", p->eps_sigma, "truncation margin; 0 selects (1 - lambda_+)/2")->capture_default_str();
    add_seed(sub, *c);
    add_jobs(sub, *c);
    sub->add_option("-o,--output", c->output, "output JSON ('-' for stdout)");
    sub->callback([&action, c, p] {
        action = [c, p] {
            require(p->m.temperature > 0.0, "free-energy: temperature must be positive");
            gibbs::DisorderOptions opt;
            opt.replicas = p->replicas;
            opt.seed = c->seed;
            opt.eps_sigma = p->eps_sigma;
            opt.jobs = c->jobs;
            opt.thermo.t_points = p->t_points;
            opt.thermo.chain.chain_length = p->chain_length;
            opt.thermo.chain.burn_in = p->burn_in;
            const double beta = 1.0 / p->m.temperature;
            const auto est = gibbs::free_energy_disorder_avg(p->m.n, EnsembleParams{p->m.kappa, p->m.alpha}, beta,
                                                             p->m.phi, opt);
            json doc = envelope("free-energy");
            doc["n"] = est.n;
            doc["kappa"] = p->m.kappa;
            doc["alpha"] = p->m.alpha;
            doc["beta"] = beta;
            doc["phi"] = p->m.phi;
            doc["temperature"] = p->m.temperature;
            doc["value"] = est.value;
            doc["std_error"] = est.std_error;
            doc["log_z"] = est.log_z;
            doc["replicas"] = est.replicas;
            doc["truncation_frequency"] = est.truncation_frequency;
            doc["seeds"] = est.seeds;
            doc["schedule"] = est.schedule;
            doc["integrand"] = est.integrand;
            doc["eps_sigma"] = p->eps_sigma;
            write_atomic(resolve_output(c->output, "free-energy.json"), format_json(doc));
        };
    });
}

// -------------------------------------------------------------- parisi-eval

void register_parisi_eval(CLI::App& app, std::function<void()>& action)
{
    auto* sub = app.add_subcommand("parisi-eval", "one evaluation of the Parisi objective");
    auto c = std::make_shared<Common>();
    auto args_path = std::make_shared<std::string>();
    auto check = std::make_shared<bool>(false);
    sub->add_option("--args", *args_path, "JSON argument file")->required();
    sub->add_flag("--check-doubling", *check, "re-evaluate with twice the Gauss-Hermite order");
    sub->add_option("-o,--output", c->output, "output JSON ('-' for stdout)");
    sub->callback([&action, c, args_path, check] {
        action = [c, args_path, check] {
            const ParisiInput in = parisi_input(read_json(*args_path));
            const parisi::ParisiMeasure zeta(in.lambdas, in.atoms);
            const auto rec = parisi::recursion_x0(zeta, in.args, parisi::RecursionOptions{in.order, *check});
            const double corr = parisi::correction_sum_form(zeta, in.args.model);
            const double d = zeta.max_support();
            const double p_a = rec.value - corr;
            const double value = p_a - in.args.gamma * d - 0.5 * in.args.model.beta * in.args.model.alpha * in.args.h * in.args.h;
            json doc = envelope("parisi-eval");
            doc["model"] = model_json(in.args.model);
            doc["a"] = in.args.a;
            doc["h"] = in.args.h;
            doc["gamma"] = in.args.gamma;
            doc["lambdas"] = in.lambdas;
            doc["atoms"] = in.atoms;
            doc["weights"] = zeta.weights();
            doc["D"] = d;
            doc["order"] = in.order;
            doc["x0"] = rec.value;
            doc["correction"] = corr;
            doc["correction_theta_form"] = parisi::correction_theta_form(zeta, in.args.model);
            doc["parisi_value"] = p_a;
            doc["value"] = value;
            doc["doubling_change"] = rec.doubling_change ? json(*rec.doubling_change) : json(nullptr);
            doc["flagged"] = rec.flagged;
            write_atomic(resolve_output(c->output, "parisi-eval.json"), format_json(doc));
        };
    });
}

// --------------------------------------------------------------- parisi-opt

void register_parisi_opt(CLI::App& app, std::function<void()>& action)
{
    auto* sub = app.add_subcommand("parisi-opt", "saddle search for the limiting free energy");
    auto c = std::make_shared<Common>();
    struct P {
        parisi::Model model;
        parisi::SaddleOptions opt;
        double fixed_a = 0.0;
    };
    auto p = std::make_shared<P>();
    sub->add_option("--beta", p->model.beta)->capture_default_str();
    sub->add_option("--kappa", p->model.kappa)->capture_default_str();
    sub->add_option("--alpha", p->model.alpha)->capture_default_str();
    sub->add_option("--phi", p->model.phi)->capture_default_str();
    sub->add_option("--levels", p->opt.levels, "number of levels K")->check(CLI::Range(1, 3))->capture_default_str();
    sub->add_option("--order", p->opt.order, "Gauss-Hermite points per level")->capture_default_str();
    sub->add_option("--outer-evaluations", p->opt.outer_evaluations)->capture_default_str();
    sub->add_option("--inner-sweeps", p->opt.inner_sweeps)->capture_default_str();
    sub->add_option("--tolerance", p->opt.residual_tolerance, "stationarity residual tolerance")->capture_default_str();
    sub->add_option("--fixed-a", p->fixed_a, "pin the box edge a (0 = search)")->capture_default_str();
    sub->add_option("-o,--output", c->output, "output JSON ('-' for stdout)");
    sub->callback([&action, c, p] {
        action = [c, p] {
            parisi::SaddleOptions opt = p->opt;
            if (p->fixed_a > 0.0) opt.fixed_a = p->fixed_a;
            const auto r = parisi::saddle_search(p->model, opt);
            json doc = envelope("parisi-opt");
            doc["model"] = model_json(p->model);
            doc["levels"] = opt.levels;
            doc["order"] = opt.order;
            doc["converged"] = r.converged;
            doc["value"] = r.converged ? json(r.value) : json(nullptr);
            doc["last_value"] = r.value;
            doc["a"] = r.a;
            doc["D"] = r.d;
            doc["h"] = r.inner.h;
            doc["gamma"] = r.inner.gamma;
            doc["lambdas"] = r.inner.lambdas;
            doc["atoms"] = r.inner.atoms;
            doc["weights"] = parisi::ParisiMeasure(r.inner.lambdas, r.inner.atoms).weights();
            json res = json::object();
            for (std::size_t i = 0; i < r.residuals.size(); ++i) res[r.residual_names[i]] = r.residuals[i];
            doc["residuals"] = res;
            doc["max_residual"] = r.max_residual;
            doc["tolerance"] = opt.residual_tolerance;
            doc["evaluations"] = r.evaluations;
            write_atomic(resolve_output(c->output, "parisi-opt.json"), format_json(doc));
            if (!r.converged)
                throw ConvergenceError("parisi-opt: stationarity residual " + format_number(r.max_residual) +
                                       " above tolerance " + format_number(opt.residual_tolerance));
        };
    });
}

// --------------------------------------------------------------- rpc-verify

void register_rpc_verify(CLI::App& app, std::function<void()>& action)
{
    auto* sub = app.add_subcommand("rpc-verify", "Monte-Carlo check of the cascade representation");
    auto c = std::make_shared<Common>();
    struct P {
        std::string args;
        std::string leaf = "mu-beta";
        std::string slopes;
        double offset = 0.0;
        int branching = 1000;
        int replicas = 200;
    };
    auto p = std::make_shared<P>();
    sub->add_option("--args", p->args, "JSON argument file (same format as parisi-eval)")->required();
    sub->add_option("--leaf", p->leaf)->check(CLI::IsMember({"mu-beta", "linear", "y", "constant"}))->capture_default_str();
    sub->add_option("--slopes", p->slopes, "comma list, linear leaf");
    sub->add_option("--offset", p->offset, "constant term of the linear or constant leaf")->capture_default_str();
    sub->add_option("--N", p->branching, "branching per node")->capture_default_str();
    sub->add_option("--replicas", p->replicas)->capture_default_str();
    add_seed(sub, *c);
    add_jobs(sub, *c);
    sub->add_option("-o,--output", c->output, "output JSON ('-' for stdout)");
    sub->callback([&action, c, p] {
        action = [c, p] {
            const ParisiInput in = parisi_input(read_json(p->args));
            const parisi::ParisiMeasure zeta(in.lambdas, in.atoms);
            rpc::Leaf leaf;
            if (p->leaf == "linear") {
                std::vector<double> s;
                for (const auto& x : split_list(p->slopes)) s.push_back(std::stod(x));
                leaf = rpc::Leaf::linear(s, p->offset);
            } else if (p->leaf == "y") {
                leaf = rpc::Leaf::y_process();
            } else if (p->leaf == "constant") {
                leaf = rpc::Leaf::constant(p->offset);
            }
            rpc::VerifyOptions opt;
            opt.branching = p->branching;
            opt.replicas = p->replicas;
            opt.seed = c->seed;
            opt.jobs = c->jobs;
            opt.order = in.order;
            require(p->branching >= 100, "rpc-verify: N must be at least 100");
            const auto r = rpc::verify_prpc(zeta, in.args, leaf, opt);
            json doc = envelope("rpc-verify");
            doc["seed"] = c->seed;
            doc["leaf"] = p->leaf;
            doc["model"] = model_json(in.args.model);
            doc["a"] = in.args.a;
            doc["h"] = in.args.h;
            doc["gamma"] = in.args.gamma;
            doc["lambdas"] = in.lambdas;
            doc["atoms"] = in.atoms;
            doc["mc_estimate"] = r.mc_estimate;
            doc["recursion_value"] = r.recursion_value;
            doc["std_error"] = r.std_error;
            doc["z_score"] = std::isfinite(r.z_score) ? json(r.z_score) : json(nullptr);
            doc["N"] = r.branching;
            doc["replicas"] = r.replicas;
            doc["retained_mass_estimate"] = r.retained_mass_estimate;
            write_atomic(resolve_output(c->output, "rpc-verify.json"), format_json(doc));
        };
    });
}

} // namespace

void register_commands(CLI::App& app, std::function<void()>& action)
{
    register_frontier(app, action);
    register_lambda_sim(app, action);
    register_sde(app, action);
    register_gibbs_sample(app, action);
    register_free_energy(app, action);
    register_parisi_eval(app, action);
    register_parisi_opt(app, action);
    register_rpc_verify(app, action);
}

} // namespace lvsg::cli
