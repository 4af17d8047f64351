// wqmc: command-line experiments over weighted-space quadrature.
//
// Every subcommand writes a deterministic CSV (12 significant digits, header
// row, config-hash comment line) and exits 0 only when its embedded
// assertions hold: exit 1 names the violated invariant, exit 2 reports a
// configuration parse error.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "wqmc/cbc.hpp"
#include "wqmc/csv.hpp"
#include "wqmc/embeddings.hpp"
#include "wqmc/idim.hpp"
#include "wqmc/polynomial_lattice.hpp"
#include "wqmc/scramble.hpp"
#include "wqmc/tensor_space.hpp"
#include "wqmc/univariate_space.hpp"
#include "wqmc/wce.hpp"
#include "wqmc/weights.hpp"

using namespace wqmc;

namespace {

struct Assertion : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void require(bool ok, const std::string& invariant) {
    if (!ok) throw Assertion(invariant);
}

UnivariateSpace make_space(const std::string& flavor, int r, double anchor) {
    UnivariateSpace s;
    s.flavor = flavor_from_string(flavor);
    s.r = r;
    s.anchor = anchor;
    s.validate();
    return s;
}

void emit(const CsvTable& table, const std::string& out) {
    if (out.empty() || out == "-")
        std::cout << table.str();
    else
        table.write_file(out);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CLI::ValidationError("cannot read " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

// Budget grid "lo:hi" in log2, e.g. "6:16" -> 2^6 .. 2^16.
std::vector<double> parse_budget_grid(const std::string& text) {
    auto colon = text.find(':');
    if (colon == std::string::npos)
        throw CLI::ValidationError("--budget-grid expects lo:hi (log2 exponents)");
    int lo = std::stoi(text.substr(0, colon));
    int hi = std::stoi(text.substr(colon + 1));
    if (lo < 0 || hi < lo) throw CLI::ValidationError("bad budget grid");
    std::vector<double> grid;
    for (int e = lo; e <= hi; ++e) grid.push_back(std::pow(2.0, e));
    return grid;
}

CostModel parse_cost(const std::string& variant, const std::string& growth,
                     double anchor) {
    CostModel m;
    if (variant == "fix") m.variant = CostVariant::Fix;
    else if (variant == "nest") m.variant = CostVariant::Nest;
    else if (variant == "unr") m.variant = CostVariant::Unr;
    else throw CLI::ValidationError("--cost must be fix|nest|unr");
    if (growth == "lin") {
        m.growth = CostGrowth::Linear;
    } else if (growth.rfind("pow:", 0) == 0) {
        m.growth = CostGrowth::Power;
        m.sigma_c = std::stod(growth.substr(4));
    } else if (growth.rfind("exp:", 0) == 0) {
        m.growth = CostGrowth::Exp;
        m.sigma_c = std::stod(growth.substr(4));
    } else {
        throw CLI::ValidationError("--growth must be lin|pow:sigma|exp:sigma");
    }
    m.anchor = anchor;
    m.validate();
    return m;
}

// Shared product test integrand f = prod_j (1 + gamma_j (x - 1.5 x^2)):
// exactly integrable (I = 1) with anchored- and mean-centered factors.
ProductFunction test_integrand(const WeightSequence& w, int dims) {
    std::vector<UnivariateFunction> factors;
    for (int j = 1; j <= dims; ++j) {
        double g = w.weight(j);
        factors.push_back(PiecewisePoly::polynomial({1.0, g, -1.5 * g}));
    }
    return ProductFunction(std::move(factors));
}

int run_kernel_check(const std::string& flavor, int r, double gamma,
                     double anchor, int grid_n, const std::string& out) {
    UnivariateSpace space = make_space(flavor, r, anchor);
    std::vector<double> grid;
    for (int i = 0; i < grid_n; ++i)
        grid.push_back((i + 0.5) / grid_n);
    Eigen::MatrixXd oracle = galerkin_kernel(space, gamma, grid);

    std::ostringstream cfg;
    cfg << "kernel-check " << flavor << " r=" << r << " gamma=" << gamma
        << " grid=" << grid_n;
    CsvTable table({"x", "y", "closed_form", "galerkin", "abs_diff"}, cfg.str());
    double worst = 0.0;
    for (int i = 0; i < grid_n; ++i) {
        for (int l = 0; l < grid_n; ++l) {
            double closed = 1.0 + kernel_eval(space, gamma, grid[i], grid[l]);
            double diff = std::abs(closed - oracle(i, l));
            worst = std::max(worst, diff);
            table.add_row({grid[i], grid[l], closed, oracle(i, l), diff});
        }
    }
    emit(table, out);
    // The Galerkin oracle is a projection, so agreement is limited by the
    // basis resolution; 1e-6 absolute covers all four flavors at r <= 3.
    require(worst < 1e-6, "closed-form kernel must match the Galerkin oracle");
    return 0;
}

int run_embed_sweep(const std::string& flavor_i, const std::string& flavor_ii,
                    int r, const std::string& weights_text, double c0,
                    int s_max, int cells, const std::string& out) {
    WeightSequence w = WeightSequence::parse(weights_text);
    UnivariateSpace si = make_space(flavor_i, r, 0.0);
    UnivariateSpace sii = make_space(flavor_ii, r, 0.0);
    auto rows = uniform_bound_sweep(si, sii, w, c0, s_max, cells);

    std::ostringstream cfg;
    cfg << "embed-sweep " << flavor_i << "/" << flavor_ii << " r=" << r
        << " w=" << w.to_config_string() << " c0=" << c0 << " smax=" << s_max
        << " cells=" << cells;
    CsvTable table({"s", "norm_fwd_c0", "norm_inv_c0inv", "norm_fwd_c0inv",
                    "norm_inv_c0", "budget"},
                   cfg.str());
    for (const auto& row : rows) {
        table.add_row({static_cast<std::int64_t>(row.s), row.norm_fwd_c0,
                       row.norm_inv_c0inv, row.norm_fwd_c0inv, row.norm_inv_c0,
                       row.budget});
        for (double v : {row.norm_fwd_c0, row.norm_inv_c0inv, row.norm_fwd_c0inv,
                         row.norm_inv_c0})
            require(v <= row.budget * (1.0 + 1e-6),
                    "embedding norms must stay below prod (1+gamma_j)^{1/2}");
    }
    emit(table, out);
    return 0;
}

int run_counterexample(int r, const std::string& weights_text, int s_max,
                       const std::string& out) {
    WeightSequence w = WeightSequence::parse(weights_text);
    std::ostringstream cfg;
    cfg << "counterexample r=" << r << " w=" << w.to_config_string()
        << " smax=" << s_max;
    CsvTable table({"s", "lhs", "rhs"}, cfg.str());
    double prev = 0.0;
    for (int s = 1; s <= s_max; ++s) {
        auto [lhs, rhs] = divergence_counterexample(r, w, s);
        table.add_row({static_cast<std::int64_t>(s), lhs, rhs});
        require(std::abs(lhs - 1.0) < 1e-9,
                "defective-pair norm of the witness must stay 1");
        require(rhs > prev, "full-pair norm must grow with the dimension");
        prev = rhs;
    }
    emit(table, out);
    return 0;
}

int run_cbc(int base, int m, int dims, const std::string& flavor, int r,
            int interlace, const std::string& weights_text,
            const std::string& rule_out, const std::string& out) {
    WeightSequence w = WeightSequence::parse(weights_text);
    UnivariateSpace space = make_space(flavor, r, 0.0);
    ProductKernel kernel(space, w, dims);
    PolynomialLattice L = cbc_construct(base, m, dims, kernel, interlace);
    if (!rule_out.empty()) {
        std::ofstream f(rule_out, std::ios::binary);
        if (!f) throw CLI::ValidationError("cannot write " + rule_out);
        f << lattice_to_text(L);
    }
    QuadratureRule rule = plr_rule(L);

    std::ostringstream cfg;
    cfg << "cbc b=" << base << " m=" << m << " dims=" << dims << " " << flavor
        << " r=" << r << " interlace=" << interlace
        << " w=" << w.to_config_string();
    CsvTable table({"dims", "n", "wce"}, cfg.str());
    double prev = 0.0;
    for (int d = 1; d <= dims; ++d) {
        double e = wce_prefix(rule, kernel, d);
        table.add_row({static_cast<std::int64_t>(d),
                       static_cast<std::int64_t>(rule.n()), e});
        require(e * (1.0 + 1e-9) + 1e-15 >= prev,
                "prefix worst-case error must not drop when adding coordinates");
        prev = e;
    }
    emit(table, out);
    return 0;
}

int run_wce(const std::string& rule_path, const std::string& flavor, int r,
            const std::string& weights_text, const std::string& out) {
    PolynomialLattice L = lattice_from_text(read_file(rule_path));
    QuadratureRule rule = plr_rule(L);
    WeightSequence w = WeightSequence::parse(weights_text);
    UnivariateSpace space = make_space(flavor, r, 0.0);
    ProductKernel kernel(space, w, rule.s);

    std::ostringstream cfg;
    cfg << "wce rule=" << rule_path << " " << flavor << " r=" << r
        << " w=" << w.to_config_string();
    CsvTable table({"s", "n", "wce"}, cfg.str());
    table.add_row({static_cast<std::int64_t>(rule.s),
                   static_cast<std::int64_t>(rule.n()), wce(rule, kernel)});
    emit(table, out);
    return 0;
}

int run_scramble_rate(int base, int m_min, int m_max, int dims,
                      const std::string& flavor, int r, int interlace,
                      const std::string& weights_text, int replicates,
                      std::uint64_t seed, const std::string& out,
                      const std::string& plot) {
    WeightSequence w = WeightSequence::parse(weights_text);
    UnivariateSpace space = make_space(flavor, r, 0.0);
    ProductKernel kernel(space, w, dims);
    ProductFunction f = test_integrand(w, dims);

    std::ostringstream cfg;
    cfg << "scramble-rate b=" << base << " m=" << m_min << ":" << m_max
        << " dims=" << dims << " " << flavor << " r=" << r
        << " interlace=" << interlace << " w=" << w.to_config_string()
        << " R=" << replicates << " seed=" << seed;
    CsvTable table({"m", "n", "rmse", "bias"}, cfg.str());
    std::vector<std::pair<double, double>> pairs;
    for (int m = m_min; m <= m_max; ++m) {
        PolynomialLattice L = cbc_construct(base, m, dims, kernel, interlace);
        RandomizedRuleFamily family{plr_rule(L), Randomization::OwenScramble,
                                    base, seed};
        RandomizedError err = randomized_error(family, f, kernel, replicates);
        table.add_row({static_cast<std::int64_t>(m),
                       static_cast<std::int64_t>(family.base.n()), err.rmse,
                       err.bias});
        pairs.emplace_back(static_cast<double>(family.base.n()),
                           std::max(err.rmse, 1e-17));
        double sigma = err.rmse / std::sqrt(static_cast<double>(replicates));
        require(std::abs(err.bias) <= 3.0 * sigma + 1e-14,
                "scrambled estimator must be unbiased within 3 sigma");
    }
    emit(table, out);
    RateFit fit = fit_rate(pairs);
    if (!plot.empty()) write_loglog_svg(plot, "scramble-rate", pairs, fit.lambda_hat);
    return 0;
}

int run_transfer(int base, int m_min, int m_max, int dims, int r, double c0,
                 const std::string& weights_text, const std::string& out) {
    // CBC rules built for the anchored space at weights c0*gamma, evaluated
    // in the ANOVA space at gamma: the equivalence constant keeps the rate.
    WeightSequence w = WeightSequence::parse(weights_text);
    UnivariateSpace anchored = make_space("anchored", r, 0.0);
    UnivariateSpace anova = make_space("anova", r, 0.0);
    ProductKernel native(anova, w, dims);
    ProductKernel scaled(anchored, w.scaled(c0), dims);

    std::ostringstream cfg;
    cfg << "transfer b=" << base << " m=" << m_min << ":" << m_max
        << " dims=" << dims << " r=" << r << " c0=" << c0
        << " w=" << w.to_config_string();
    CsvTable table({"m", "n", "wce_native", "wce_transferred"}, cfg.str());
    std::vector<std::pair<double, double>> nat, tra;
    for (int m = m_min; m <= m_max; ++m) {
        QuadratureRule own = plr_rule(cbc_construct(base, m, dims, native));
    QuadratureRule borrowed = plr_rule(cbc_construct(base, m, dims, scaled));
        double e_nat = wce(own, native);
        double e_tra = wce(borrowed, native);
        table.add_row({static_cast<std::int64_t>(m),
                       static_cast<std::int64_t>(own.n()), e_nat, e_tra});
        nat.emplace_back(own.n(), std::max(e_nat, 1e-17));
        tra.emplace_back(own.n(), std::max(e_tra, 1e-17));
    }
    emit(table, out);
    double slope_nat = fit_rate(nat).lambda_hat;
    double slope_tra = fit_rate(tra).lambda_hat;
    require(std::abs(slope_nat - slope_tra) <= 0.15,
            "transferred construction must keep the native convergence rate");
    return 0;
}

int run_idim(const std::string& algo, const std::string& cost_variant,
             const std::string& growth, const std::string& setting_text,
             const std::string& flavor, int r, const std::string& weights_text,
             const std::string& budget_grid, int dims, int replicates,
             std::optional<std::uint64_t> seed, const std::string& out,
             const std::string& plot) {
    Setting setting;
    if (setting_text == "det") setting = Setting::Det;
    else if (setting_text == "ran") setting = Setting::Ran;
    else throw CLI::ValidationError("--setting must be det|ran");
    if (setting == Setting::Ran && !seed)
        throw CLI::ValidationError("--seed is required for --setting ran");
    std::uint64_t s0 = seed.value_or(0);

    WeightSequence w = WeightSequence::parse(weights_text);
    UnivariateSpace space = make_space(flavor, r, 0.0);
    CostModel model = parse_cost(cost_variant, growth, space.anchor);
    ProductFunction f = test_integrand(w, dims);
    const double exact = 1.0;
    const int reps = setting == Setting::Ran ? replicates : 1;

    std::ostringstream cfg;
    cfg << "idim algo=" << algo << " cost=" << cost_variant << " growth=" << growth
        << " setting=" << setting_text << " " << flavor << " r=" << r
        << " w=" << w.to_config_string() << " budgets=" << budget_grid
        << " dims=" << dims << " R=" << reps << " seed=" << s0;
    CsvTable table({"budget", "cost", "estimate", "error", "replicates"},
                   cfg.str());
    std::vector<std::pair<double, double>> pairs;
    for (double budget : parse_budget_grid(budget_grid)) {
        double mean = 0.0, mse = 0.0, c = 0.0;
        for (int rep = 0; rep < reps; ++rep) {
            IntegrationResult res;
            std::uint64_t sr = s0 + static_cast<std::uint64_t>(rep);
            if (algo == "mdm") {
                MDMPlan plan = mdm_plan(w, space, budget, model);

                res = mdm_integrate(f, plan, space, w, setting, sr, model);
            } else if (algo == "ml") {
                res = multilevel_integrate(f, 4, model, space, w, setting, sr,
                                           budget);
            } else if (algo == "fixed") {
                // Balanced truncation: s ~ n^{1/decay} keeps bias and
                // quadrature error comparable under polynomial weights.
                int s_dim = std::max(
                    1, static_cast<int>(std::round(std::pow(budget, 1.0 / w.decay()))));
                s_dim = std::min(s_dim, dims);
                auto n = static_cast<std::uint64_t>(
                    std::max(1.0, budget / model.dollars(s_dim)));
                res = fixed_subspace_integrate(f, s_dim, n, space, w, setting, sr,
                                               model);
            } else {
                throw CLI::ValidationError("--algo must be mdm|ml|fixed");
            }
            mean += res.estimate / reps;
            mse += (res.estimate - exact) * (res.estimate - exact) / reps;
            c = res.cost;
        }
        double err = std::sqrt(mse);
        table.add_row({budget, c, mean, err, static_cast<std::int64_t>(reps)});
        pairs.emplace_back(c, std::max(err, 1e-17));
    }
    emit(table, out);
    if (!plot.empty())
        write_loglog_svg(plot, "idim " + algo, pairs, fit_rate(pairs).lambda_hat);
    return 0;
}

int run_lambda_table(const std::string& out) {
    // The 24-point grid behind the published rate tables: both settings, all
    // four cost models, r in {1,2}, decay in {1.5, 3, 6}, sigma_c = 1.
    CsvTable table({"setting", "model", "r", "decay", "lower", "upper", "open"},
                   "lambda-table r={1,2} decay={1.5,3,6} sigma=1");
    for (int r : {1, 2}) {
        for (double decay : {1.5, 3.0, 6.0}) {
            for (Setting setting : {Setting::Det, Setting::Ran}) {
                for (LambdaModel model : {LambdaModel::Std, LambdaModel::Fix,
                                          LambdaModel::Nest, LambdaModel::Unr}) {
                    std::string sname = setting == Setting::Det ? "det" : "ran";
                    std::string mname = model == LambdaModel::Std ? "std"
                                        : model == LambdaModel::Fix ? "fix"
                                        : model == LambdaModel::Nest ? "nest"
                                                                     : "unr";
                    try {
                        LambdaBracket b = theoretical_lambda(setting, model, r, decay);
                        table.add_row({sname, mname, static_cast<std::int64_t>(r),
                                       decay, b.lower, b.upper, b.open});
                    } catch (const std::invalid_argument&) {
                        table.add_row({sname, mname, static_cast<std::int64_t>(r),
                                       decay, std::string("-"), std::string("-"),
                                       std::string("-")});
                    }
                }
            }
        }
    }
    emit(table, out);
    return 0;
}

int run_l1_check(const std::string& flavor, int r, const std::string& weights_text,
                 int s_max, int trials, std::uint64_t seed,
                 const std::string& out) {
    WeightSequence w = WeightSequence::parse(weights_text);
    UnivariateSpace space = make_space(flavor, r, 0.0);
    std::ostringstream cfg;
    cfg << "l1-check " << flavor << " r=" << r << " w=" << w.to_config_string()
        << " smax=" << s_max << " trials=" << trials << " seed=" << seed;
    CsvTable table({"s", "max_ratio", "bound"}, cfg.str());
    for (int s = 1; s <= s_max; ++s) {
        ProductKernel kernel(space, w, s);
        L1Check check = l1_embedding_check(kernel, trials, seed);
        table.add_row({static_cast<std::int64_t>(s), check.max_ratio, check.bound});
        require(check.max_ratio <= check.bound * (1.0 + 1e-9),
                "observed L1 mass must stay below the embedding bound");
    }
    emit(table, out);
    return 0;
}

int run_isometry_check(const std::string& flavor, int r,
                       const std::string& weights_text, int points,
                       int truncation, double tol, std::uint64_t seed,
                       const std::string& out) {
    WeightSequence w = WeightSequence::parse(weights_text);
    UnivariateSpace space = make_space(flavor, r, 0.0);
    ProductKernel kernel(space, w, 3);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<std::vector<double>> pts;
    std::vector<double> vals;
    for (int i = 0; i < points; ++i) {
        pts.push_back({unif(rng), unif(rng), unif(rng)});
        vals.push_back(unif(rng) - 0.5);
    }
    std::ostringstream cfg;
    cfg << "isometry-check " << flavor << " r=" << r
        << " w=" << w.to_config_string() << " points=" << points
        << " truncation=" << truncation << " tol=" << tol << " seed=" << seed;
    CsvTable table({"truncation", "relative_error", "ok"}, cfg.str());
    for (int level : {truncation / 4, truncation / 2, truncation}) {
        if (level < 4) continue;
        IsometryCheck c = cylinder_isometry_check(kernel, pts, vals, level,
                                                  space.anchor, tol);
        table.add_row({static_cast<std::int64_t>(level), c.relative_error, c.ok});
        if (level == truncation)
            require(c.ok, "cylinder extension must preserve the interpolation norm");
    }
    emit(table, out);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quadrature experiments in weighted tensor-product spaces"};
    app.require_subcommand(1);

    // Shared option storage.
    std::string flavor = "anchored", weights = "poly(p=3)", out, plot, rule_path,
                rule_out, algo = "mdm", cost_variant = "unr", growth = "lin",
                setting = "det", budget_grid = "6:12", flavor_ii = "anova";
    int r = 1, grid = 17, s_max = 4, cells = 48, base = 2, m = 8, dims = 3,
        interlace = 1, m_min = 3, m_max = 8, replicates = 16, points = 6,
        truncation = 64, trials = 4;
    double gamma = 1.0, anchor = 0.0, c0 = 0.5, tol = 1e-4;
    std::optional<std::uint64_t> seed;

    auto* kc = app.add_subcommand("kernel-check",
                                  "closed-form kernels vs the Galerkin oracle");
    kc->add_option("--flavor", flavor);
    kc->add_option("--r", r);
    kc->add_option("--gamma", gamma);
    kc->add_option("--anchor", anchor);
    kc->add_option("--grid", grid);
    kc->add_option("--out", out);

    auto* es = app.add_subcommand("embed-sweep",
                                  "uniform embedding-norm bound across dimensions");
    es->add_option("--flavor", flavor);
    es->add_option("--flavor-ii", flavor_ii);
    es->add_option("--r", r);
    es->add_option("--weights", weights);
    es->add_option("--c0", c0);
    es->add_option("--smax", s_max);
    es->add_option("--cells", cells);
    es->add_option("--out", out);

    auto* ce = app.add_subcommand("counterexample",
                                  "witness separating the two seminorm scales");
    ce->add_option("--r", r)->default_val(2);
    ce->add_option("--weights", weights);
    ce->add_option("--smax", s_max);
    ce->add_option("--out", out);

    auto* cb = app.add_subcommand("cbc", "component-by-component lattice search");
    cb->add_option("--base", base);
    cb->add_option("--m", m);
    cb->add_option("--dims", dims);
    cb->add_option("--flavor", flavor);
    cb->add_option("--r", r);
    cb->add_option("--interlace", interlace);
    cb->add_option("--weights", weights);
    cb->add_option("--rule-out", rule_out);
    cb->add_option("--out", out);

    auto* wc = app.add_subcommand("wce", "worst-case error of a stored lattice");
    wc->add_option("--rule", rule_path)->required();
    wc->add_option("--flavor", flavor);
    wc->add_option("--r", r);
    wc->add_option("--weights", weights);
    wc->add_option("--out", out);

    auto* sr = app.add_subcommand("scramble-rate",
                                  "randomized RMSE decay of scrambled lattices");
    sr->add_option("--base", base);
    sr->add_option("--m-min", m_min);
    sr->add_option("--m-max", m_max);
    sr->add_option("--dims", dims);
    sr->add_option("--flavor", flavor);
    sr->add_option("--r", r);
    sr->add_option("--interlace", interlace);
    sr->add_option("--weights", weights);
    sr->add_option("--replicates", replicates);
    sr->add_option("--seed", seed)->required();
    sr->add_option("--out", out);
    sr->add_option("--plot", plot);

    auto* tr = app.add_subcommand("transfer",
                                  "rate transfer between seminorm flavors");
    tr->add_option("--base", base);
    tr->add_option("--m-min", m_min);
    tr->add_option("--m-max", m_max);
    tr->add_option("--dims", dims);
    tr->add_option("--r", r);
    tr->add_option("--c0", c0);
    tr->add_option("--weights", weights);
    tr->add_option("--out", out);

    auto* id = app.add_subcommand("idim",
                                  "integration with infinitely many variables");
    id->add_option("--algo", algo);
    id->add_option("--cost", cost_variant);
    id->add_option("--growth", growth);
    id->add_option("--setting", setting);
    id->add_option("--flavor", flavor);
    id->add_option("--r", r);
    id->add_option("--weights", weights);
    id->add_option("--budget-grid", budget_grid);
    id->add_option("--dims", dims)->default_val(12);
    id->add_option("--replicates", replicates);
    id->add_option("--seed", seed);
    id->add_option("--out", out);
    id->add_option("--plot", plot);

    auto* lt = app.add_subcommand("lambda-table",
                                  "theoretical rate brackets on the standard grid");
    lt->add_option("--out", out);

    auto* l1 = app.add_subcommand("l1-check", "empirical L1 embedding bound");
    l1->add_option("--flavor", flavor);
    l1->add_option("--r", r);
    l1->add_option("--weights", weights);
    l1->add_option("--smax", s_max);
    l1->add_option("--trials", trials);
    l1->add_option("--seed", seed)->required();
    l1->add_option("--out", out);

    auto* ic = app.add_subcommand("isometry-check",
                                  "cylinder-extension norm preservation");
    ic->add_option("--flavor", flavor);
    ic->add_option("--r", r);
    ic->add_option("--weights", weights);
    ic->add_option("--points", points);
    ic->add_option("--truncation", truncation);
    ic->add_option("--tol", tol);
    ic->add_option("--seed", seed)->required();
    ic->add_option("--out", out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 2;
    }

    try {
        if (*kc) return run_kernel_check(flavor, r, gamma, anchor, grid, out);
        if (*es)
            return run_embed_sweep(flavor, flavor_ii, r, weights, c0, s_max,
                                   cells, out);
        if (*ce) return run_counterexample(r, weights, s_max, out);
        if (*cb)
            return run_cbc(base, m, dims, flavor, r, interlace, weights,
                           rule_out, out);
        if (*wc) return run_wce(rule_path, flavor, r, weights, out);
        if (*sr)
            return run_scramble_rate(base, m_min, m_max, dims, flavor, r,
                                     interlace, weights, replicates, *seed, out,
                                     plot);
        if (*tr)
            return run_transfer(base, m_min, m_max, dims, r, c0, weights, out);
        if (*id)
            return run_idim(algo, cost_variant, growth, setting, flavor, r,
                            weights, budget_grid, dims, replicates, seed, out,
                            plot);
        if (*lt) return run_lambda_table(out);
        if (*l1) return run_l1_check(flavor, r, weights, s_max, trials, *seed, out);
        if (*ic)
            return run_isometry_check(flavor, r, weights, points, truncation,
                                      tol, *seed, out);
    } catch (const Assertion& e) {
        std::cerr << "assertion failed: " << e.what() << "\n";
        return 1;
    } catch (const CLI::ValidationError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
