// edgc: train, apply and evaluate error correctors, and run the separation checks.

#include "edgc/corrector.hpp"
#include "edgc/csv.hpp"
#include "edgc/metrics.hpp"
#include "edgc/model_file.hpp"
#include "edgc/random.hpp"
#include "edgc/separation.hpp"
#include "edgc/synthetic.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace edgc;

std::uint64_t default_seed()
{
    const char* env = std::getenv("EDGC_SEED");
    if (env == nullptr || *env == '\0') {
        return 0;
    }
    try {
        std::size_t used = 0;
        const unsigned long long value = std::stoull(env, &used);
        if (used != std::string(env).size()) {
            throw std::invalid_argument("trailing characters");
        }
        return value;
    } catch (const std::exception&) {
        throw InvalidInput(std::string("EDGC_SEED is not an unsigned integer: '") + env + "'");
    }
}

SelectionParams parse_rule(const std::string& text, double condition_cap)
{
    SelectionParams params;
    params.condition_cap = condition_cap;
    if (text == "kaiser") {
        params.rule = SelectionRule::kaiser;
    } else if (text == "broken-stick") {
        params.rule = SelectionRule::broken_stick;
    } else if (text == "conditioning") {
        params.rule = SelectionRule::conditioning;
    } else if (text.rfind("range:", 0) == 0) {
        long long first = 0;
        long long last = 0;
        char tail = 0;
        if (std::sscanf(text.c_str() + 6, "%lld:%lld%c", &first, &last, &tail) != 2 || first < 1 || last < first) {
            throw InvalidInput("--rule range needs range:a:b with 1 <= a <= b, got '" + text + "'");
        }
        params = SelectionParams::range(first, last);
        params.condition_cap = condition_cap;
    } else {
        throw InvalidInput("unknown --rule '" + text + "' (kaiser, broken-stick, conditioning, range:a:b)");
    }
    return params;
}

std::vector<double> parse_thresholds(const std::string& text)
{
    std::vector<double> out;
    std::stringstream stream(text);
    std::string item;
    while (std::getline(stream, item, ',')) {
        std::size_t used = 0;
        double value = 0.0;
        try {
            value = std::stod(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != item.size()) {
            throw InvalidInput("bad --threshold entry '" + item + "'");
        }
        out.push_back(value);
    }
    if (out.empty()) {
        throw InvalidInput("--threshold needs at least one value");
    }
    return out;
}

/// Stdout when `path` is empty or "-", otherwise the named file.
class Output {
public:
    explicit Output(const std::string& path)
    {
        if (!path.empty() && path != "-") {
            file_.open(path, std::ios::trunc);
            if (!file_) {
                throw Error("cannot write '" + path + "'");
            }
        }
    }
    std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

private:
    std::ofstream file_;
};

std::string fmt(double value) { return io::format_double(value); }

/// Reads one numeric column, selected by header name, from a CSV with a header row.
std::vector<double> read_named_column(const std::string& path, const std::string& name)
{
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open '" + path + "'");
    }
    std::string header;
    std::getline(in, header);
    std::stringstream cells(header);
    std::string cell;
    long index = -1;
    for (long i = 0; std::getline(cells, cell, ','); ++i) {
        while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) {
            cell.pop_back();
        }
        if (cell == name) {
            index = i;
            break;
        }
    }
    if (index < 0) {
        throw InvalidInput("'" + path + "' has no column named '" + name + "'");
    }
    const RowMatrix table = io::load_matrix_csv(path, true);
    const Vector column = table.col(index);
    return {column.data(), column.data() + column.size()};
}

std::vector<Label> read_labels(const std::string& path, bool header, long column)
{
    const RowMatrix table = io::load_matrix_csv(path, header);
    const long width = static_cast<long>(table.cols());
    const long resolved = column < 0 ? width + column : column;
    if (resolved < 0 || resolved >= width) {
        throw InvalidInput("label column " + std::to_string(column) + " is outside '" + path + "'");
    }
    std::vector<Label> labels;
    labels.reserve(static_cast<std::size_t>(table.rows()));
    for (Index i = 0; i < table.rows(); ++i) {
        const double v = table(i, resolved);
        if (v != 0.0 && v != 1.0) {
            throw InvalidInput("label on data row " + std::to_string(i + 1) + " of '" + path + "' is not 0 or 1");
        }
        labels.push_back(v == 1.0 ? Label::error : Label::correct);
    }
    return labels;
}

RowMatrix read_queries(const std::string& path, bool header, std::optional<long> label_column)
{
    return io::load_matrix_csv(path, header, label_column);
}

// gen --------------------------------------------------------------------

struct GenArgs {
    std::string generator = "planted_clusters";
    io::SyntheticSpec spec;
    std::uint64_t seed = 0;
    std::string out;
};

void add_gen(CLI::App& app, GenArgs& args)
{
    auto* cmd = app.add_subcommand("gen", "Write a synthetic labelled dataset as CSV");
    cmd->add_option("--generator", args.generator, "uniform_ball | two_balls | planted_clusters")
        ->capture_default_str();
    cmd->add_option("--n", args.spec.n, "Dimension")->required();
    cmd->add_option("--x-count", args.spec.x_count, "Rows labelled 0")->required();
    cmd->add_option("--y-count", args.spec.y_count, "Rows labelled 1")->required();
    cmd->add_option("--epsilon", args.spec.epsilon, "Centre offset of the Y ball (two_balls)")->capture_default_str();
    cmd->add_option("--clusters", args.spec.clusters, "Planted Y clusters")->capture_default_str();
    cmd->add_option("--spread", args.spec.spread, "Within-cluster latent spread")->capture_default_str();
    cmd->add_option("--separation", args.spec.separation, "Latent distance of cluster centres from the origin")
        ->capture_default_str();
    cmd->add_option("--latent-dim", args.spec.latent_dim, "Latent dimension (0: min(n, 50))")->capture_default_str();
    cmd->add_option("--noise", args.spec.noise, "Isotropic ambient noise")->capture_default_str();
    cmd->add_option("--seed", args.seed, "Seed (default: EDGC_SEED or 0)");
    cmd->add_option("--out", args.out, "Output CSV")->required();
    cmd->callback([&args] {
        args.spec.generator = io::parse_generator(args.generator);
        io::gen_synthetic(args.spec, args.seed, args.out);
    });
}

// train ------------------------------------------------------------------

struct TrainArgs {
    std::string data;
    bool header = false;
    long label_column = -1;
    Index clusters = 1;
    std::string rule = "kaiser";
    double condition_cap = 1e3;
    std::optional<double> ridge;
    std::string thresholds = "0";
    std::string cluster_space = "whitened";
    std::string pca = "auto";
    std::uint64_t seed = 0;
    std::string out;
};

void add_train(CLI::App& app, TrainArgs& args)
{
    auto* cmd = app.add_subcommand("train", "Train a corrector and write the model file");
    cmd->add_option("--data", args.data, "Labelled CSV (0 = correct, 1 = error)")->required()->check(CLI::ExistingFile);
    cmd->add_flag("--header", args.header, "First CSV line is a header");
    cmd->add_option("--label-column", args.label_column, "Zero-based label column; negative counts from the end")
        ->capture_default_str();
    cmd->add_option("--clusters", args.clusters, "Error clusters k")->capture_default_str();
    cmd->add_option("--rule", args.rule, "kaiser | broken-stick | conditioning | range:a:b")->capture_default_str();
    cmd->add_option("--condition-cap", args.condition_cap, "Cap on lambda_1/lambda_i for the conditioning rule")
        ->capture_default_str();
    cmd->add_option("--ridge", args.ridge, "Ridge added to the pooled covariance (default: scale-relative)");
    cmd->add_option("--threshold", args.thresholds, "theta or theta_1,...,theta_k")->capture_default_str();
    cmd->add_option("--cluster-space", args.cluster_space, "whitened | original")->capture_default_str();
    cmd->add_option("--pca", args.pca, "auto | exact | randomized")->capture_default_str();
    cmd->add_option("--seed", args.seed, "Seed (default: EDGC_SEED or 0)");
    cmd->add_option("--out", args.out, "Model file")->required();
    cmd->callback([&args] {
        TrainOptions options;
        options.clusters = args.clusters;
        options.selection = parse_rule(args.rule, args.condition_cap);
        options.ridge = args.ridge;
        options.thresholds = parse_thresholds(args.thresholds);
        options.seed = args.seed;
        if (args.cluster_space == "whitened") {
            options.cluster_space = ClusterSpace::whitened;
        } else if (args.cluster_space == "original") {
            options.cluster_space = ClusterSpace::centered_original;
        } else {
            throw InvalidInput("unknown --cluster-space '" + args.cluster_space + "' (whitened, original)");
        }
        if (args.pca == "auto") {
            options.pca = PcaMethod::automatic;
        } else if (args.pca == "exact") {
            options.pca = PcaMethod::exact;
        } else if (args.pca == "randomized") {
            options.pca = PcaMethod::randomized;
        } else {
            throw InvalidInput("unknown --pca '" + args.pca + "' (auto, exact, randomized)");
        }
        const LabeledDataset data = io::load_csv(args.data, {args.header, args.label_column});
        const CorrectorModel model = train_corrector(data, options);
        io::save_model(model, args.out);
        std::cout << "n=" << model.input_dim() << " m=" << model.reduced_dim() << " k=" << model.cluster_count()
                  << " rule=" << to_string(model.basis.rule) << " space=" << to_string(model.clusters.space)
                  << '\n';
    });
}

// apply ------------------------------------------------------------------

struct ApplyArgs {
    std::string model;
    std::string data;
    bool header = false;
    std::optional<long> label_column;
    bool fused = false;
    std::string out;
};

void add_apply(CLI::App& app, ApplyArgs& args)
{
    auto* cmd = app.add_subcommand("apply", "Label queries with a trained model");
    cmd->add_option("--model", args.model, "Model file")->required()->check(CLI::ExistingFile);
    cmd->add_option("--data", args.data, "Query CSV")->required()->check(CLI::ExistingFile);
    cmd->add_flag("--header", args.header, "First CSV line is a header");
    cmd->add_option("--label-column", args.label_column, "Drop this column before applying (e.g. -1 for a trailing label)");
    cmd->add_flag("--fused", args.fused, "Use the fused path (models clustered in the original space)");
    cmd->add_option("--out", args.out, "Output CSV (default stdout)");
    cmd->callback([&args] {
        const CorrectorModel model = io::load_model(args.model);
        if (args.fused && model.clusters.space != ClusterSpace::centered_original) {
            throw InvalidInput("--fused needs a model trained with --cluster-space original");
        }
        const RowMatrix queries = read_queries(args.data, args.header, args.label_column);
        const auto decisions =
            apply_batch(queries, model, args.fused ? DeploymentPath::fused : DeploymentPath::projection);
        Output out(args.out);
        std::ostream& os = out.stream();
        os << "index,label,cluster,score\n";
        for (std::size_t i = 0; i < decisions.size(); ++i) {
            const Decision& d = decisions[i];
            os << i << ',' << static_cast<int>(d.label) << ',' << d.cluster << ',' << fmt(d.score) << '\n';
        }
    });
}

// eval -------------------------------------------------------------------

struct EvalArgs {
    std::string scores;
    std::string score_column = "score";
    std::string truth;
    bool truth_header = false;
    long label_column = -1;
    std::string roc_out;
    std::size_t window = 0;
    double threshold = 0.0;
    std::string window_out;
};

void add_eval(CLI::App& app, EvalArgs& args)
{
    auto* cmd = app.add_subcommand("eval", "ROC curve and AUC from scores and true labels");
    cmd->add_option("--scores", args.scores, "CSV with a header naming the score column (e.g. apply output)")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--score-column", args.score_column, "Name of the score column")->capture_default_str();
    cmd->add_option("--truth", args.truth, "CSV holding the true 0/1 labels")->required()->check(CLI::ExistingFile);
    cmd->add_flag("--truth-header", args.truth_header, "First line of the truth CSV is a header");
    cmd->add_option("--label-column", args.label_column, "Label column of the truth CSV")->capture_default_str();
    cmd->add_option("--roc-out", args.roc_out, "ROC points CSV (threshold,fpr,tpr)");
    auto* window = cmd->add_option("--window", args.window, "Sliding window length for the flagged-fraction score");
    cmd->add_option("--threshold", args.threshold, "Flag a row as an error when score < threshold")
        ->capture_default_str();
    cmd->add_option("--window-out", args.window_out, "Sliding score CSV (default stdout)")->needs(window);
    cmd->callback([&args] {
        const std::vector<double> scores = read_named_column(args.scores, args.score_column);
        const std::vector<Label> labels = read_labels(args.truth, args.truth_header, args.label_column);
        const RocCurve roc = roc_curve(scores, labels);
        if (!args.roc_out.empty()) {
            std::vector<std::vector<double>> rows;
            rows.reserve(roc.points.size());
            for (const RocPoint& p : roc.points) {
                rows.push_back({p.threshold, p.fpr, p.tpr});
            }
            io::write_table(args.roc_out, {"threshold", "fpr", "tpr"}, rows);
        }
        std::cout << "auc," << fmt(roc.auc) << '\n';
        if (args.window > 0) {
            std::vector<std::uint8_t> flagged(scores.size());
            for (std::size_t i = 0; i < scores.size(); ++i) {
                flagged[i] = scores[i] < args.threshold ? 1 : 0;
            }
            const auto windowed = sliding_window_score(flagged, args.window);
            Output out(args.window_out);
            out.stream() << "start,score\n";
            for (std::size_t i = 0; i < windowed.size(); ++i) {
                out.stream() << i << ',' << fmt(windowed[i]) << '\n';
            }
        }
    });
}

// verify -----------------------------------------------------------------

struct VerifyArgs {
    std::string theorem;
    lab::BoundParams params;
    std::uint64_t trials = 10000;
    std::uint64_t seed = 0;
    unsigned workers = 1;
    double y_norm = 0.5;
    double kappa = 0.5;
    double epsilon = 0.1;
    Index count = 10000;
    Index centres = 10;
    double offset = 0.5;
    double spread = 0.5;
    std::string out;
};

void write_report_header(std::ostream& os)
{
    os << "suite,quantity,trials,successes,empirical_frequency,theoretical_bound,standard_error,vacuous\n";
}

void write_report(std::ostream& os, const std::string& suite, const std::string& quantity,
                  const lab::SeparabilityReport& r)
{
    os << suite << ',' << quantity << ',' << r.trials << ',' << r.successes << ',' << fmt(r.empirical_frequency) << ','
       << fmt(r.theoretical_bound) << ',' << fmt(r.standard_error) << ',' << (r.vacuous ? 1 : 0) << '\n';
}

void run_verify(const VerifyArgs& args)
{
    Output out(args.out);
    std::ostream& os = out.stream();
    if (args.theorem == "1") {
        const auto report = lab::estimate_theorem1(args.params, args.trials, args.seed, args.workers);
        write_report_header(os);
        write_report(os, "theorem1", "point_from_set", report);
    } else if (args.theorem == "3") {
        const auto reports = lab::estimate_theorem3(args.y_norm, args.params, args.trials, args.seed, args.workers);
        write_report_header(os);
        write_report(os, "theorem3", "point_from_set", reports.point_from_set);
        write_report(os, "theorem3", "set_from_point", reports.set_from_point);
    } else if (args.theorem == "dichotomy") {
        const auto report = lab::check_dichotomy(args.params.n, args.params.M, args.trials, args.seed, {}, args.workers);
        write_report_header(os);
        write_report(os, "dichotomy", "either_alternative", report);
    } else if (args.theorem == "remark2") {
        const auto e = lab::estimate_remark2(args.kappa, args.epsilon, args.params.n, args.count, args.seed);
        const auto count = static_cast<std::uint64_t>(e.count);
        auto as_report = [count](double fraction, double bound, double se) {
            lab::SeparabilityReport r;
            r.trials = count;
            r.successes = static_cast<std::uint64_t>(std::llround(fraction * static_cast<double>(count)));
            r.empirical_frequency = fraction;
            r.theoretical_bound = bound;
            r.standard_error = se;
            r.vacuous = bound >= 1.0;
            return r;
        };
        write_report_header(os);
        write_report(os, "remark2", "missed_x", as_report(e.missed_x, e.bounds.rho_x, e.missed_x_se));
        write_report(os, "remark2", "leaked_y", as_report(e.leaked_y, e.bounds.rho_y, e.leaked_y_se));
    } else if (args.theorem == "2") {
        // alpha is the mean of `centres` points uniform in a ball of radius
        // `spread` around offset * e_1; the z_k are the coordinate axes.
        const Index n = args.params.n;
        if (args.centres < 1 || !(args.spread >= 0.0)) {
            throw InvalidInput("theorem 2 needs --centres >= 1 and --spread >= 0");
        }
        const RowMatrix sample = lab::sample_unit_ball(n, args.params.M, derive_seed(args.seed, 0));
        const RowMatrix z_basis = RowMatrix::Identity(n, n);
        const Index centres = args.centres;
        const double offset = args.offset;
        const double spread = args.spread;
        const lab::CoefficientSampler sampler = [n, centres, offset, spread](std::mt19937_64& rng) {
            RowMatrix points(centres, n);
            lab::fill_unit_ball(points, rng);
            Vector alpha = spread * points.colwise().mean().transpose();
            alpha(0) += offset;
            return alpha;
        };
        const auto e = lab::estimate_theorem2(sampler, z_basis, sample, args.trials, derive_seed(args.seed, 1));
        write_report_header(os);
        write_report(os, "theorem2", "all_points", e.report);
    } else {
        throw InvalidInput("unknown --theorem '" + args.theorem + "' (1, 2, 3, dichotomy, remark2)");
    }
}

void add_verify(CLI::App& app, VerifyArgs& args)
{
    auto* cmd = app.add_subcommand("verify", "Monte Carlo check of a separation bound; writes a CSV report");
    cmd->add_option("--theorem", args.theorem, "1 | 2 | 3 | dichotomy | remark2")->required();
    cmd->add_option("--n", args.params.n, "Dimension")->required();
    cmd->add_option("--M", args.params.M, "Sample size")->capture_default_str();
    cmd->add_option("--C", args.params.C, "Non-concentration constant C")->capture_default_str();
    cmd->add_option("--r", args.params.r, "Non-concentration radius r")->capture_default_str();
    cmd->add_option("--trials", args.trials, "Monte Carlo trials")->capture_default_str();
    cmd->add_option("--seed", args.seed, "Seed (default: EDGC_SEED or 0)");
    cmd->add_option("--workers", args.workers, "Worker threads (results do not depend on this)")
        ->capture_default_str();
    cmd->add_option("--y-norm", args.y_norm, "|y| for theorem 3")->capture_default_str();
    cmd->add_option("--kappa", args.kappa, "Threshold factor for remark2")->capture_default_str();
    cmd->add_option("--epsilon", args.epsilon, "Ball offset for remark2")->capture_default_str();
    cmd->add_option("--count", args.count, "Points per class for remark2")->capture_default_str();
    cmd->add_option("--centres", args.centres, "Points averaged into alpha for theorem 2")->capture_default_str();
    cmd->add_option("--offset", args.offset, "Offset of the alpha distribution along e_1 (theorem 2)")
        ->capture_default_str();
    cmd->add_option("--spread", args.spread, "Radius of the alpha ball (theorem 2)")->capture_default_str();
    cmd->add_option("--out", args.out, "Report CSV (default stdout)");
    cmd->callback([&args] { run_verify(args); });
}

// bench ------------------------------------------------------------------

struct BenchArgs {
    std::string model;
    Index queries = 1000;
    int repeats = 3;
    std::string path = "both";
    std::uint64_t seed = 0;
};

double mean_latency_us(const RowMatrix& queries, const CorrectorModel& model, DeploymentPath path, int repeats)
{
    double best = std::numeric_limits<double>::infinity();
    volatile double sink = 0.0;
    for (int r = 0; r < repeats; ++r) {
        const auto start = std::chrono::steady_clock::now();
        for (Index i = 0; i < queries.rows(); ++i) {
            const std::span<const double> q(queries.row(i).data(), static_cast<std::size_t>(queries.cols()));
            const Decision d = path == DeploymentPath::fused ? apply_fused(q, model) : apply_corrector(q, model);
            sink = sink + d.score;
        }
        const std::chrono::duration<double, std::micro> elapsed = std::chrono::steady_clock::now() - start;
        best = std::min(best, elapsed.count() / static_cast<double>(queries.rows()));
    }
    return best;
}

void add_bench(CLI::App& app, BenchArgs& args)
{
    auto* cmd = app.add_subcommand("bench", "Single-thread per-query latency of the deployment paths");
    cmd->add_option("--model", args.model, "Model file")->required()->check(CLI::ExistingFile);
    cmd->add_option("--queries", args.queries, "Random Gaussian queries per repeat")->capture_default_str();
    cmd->add_option("--repeats", args.repeats, "Repeats; the fastest is reported")->capture_default_str();
    cmd->add_option("--path", args.path, "projection | fused | both")->capture_default_str();
    cmd->add_option("--seed", args.seed, "Seed for the queries");
    cmd->callback([&args] {
        if (args.queries < 1 || args.repeats < 1) {
            throw InvalidInput("--queries and --repeats must be positive");
        }
        const CorrectorModel model = io::load_model(args.model);
        RowMatrix queries(args.queries, model.input_dim());
        std::mt19937_64 rng = substream(args.seed, 0);
        std::normal_distribution<double> normal;
        for (Index i = 0; i < queries.size(); ++i) {
            queries.data()[i] = normal(rng);
        }
        const bool fused_ok = model.fused_vectors.has_value();
        const bool want_projection = args.path == "both" || args.path == "projection";
        const bool want_fused = args.path == "both" || args.path == "fused";
        if (!want_projection && !want_fused) {
            throw InvalidInput("unknown --path '" + args.path + "' (projection, fused, both)");
        }
        if (args.path == "fused" && !fused_ok) {
            throw InvalidInput("model has no fused vectors; train with --cluster-space original");
        }
        std::cout << "path,n,m,k,queries,mean_us_per_query\n";
        const auto line = [&](const char* name, DeploymentPath path) {
            std::cout << name << ',' << model.input_dim() << ',' << model.reduced_dim() << ','
                      << model.cluster_count() << ',' << args.queries << ','
                      << fmt(mean_latency_us(queries, model, path, args.repeats)) << '\n';
        };
        if (want_projection) {
            line("projection", DeploymentPath::projection);
        }
        if (want_fused && fused_ok) {
            line("fused", DeploymentPath::fused);
        }
    });
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Fisher-discriminant error correctors for high-dimensional classifier outputs"};
    app.require_subcommand(1);

    std::uint64_t seed = 0;
    try {
        seed = default_seed();
    } catch (const std::exception& e) {
        std::cerr << "edgc: error: " << e.what() << '\n';
        return 2;
    }
    GenArgs gen;
    TrainArgs train;
    ApplyArgs apply;
    EvalArgs eval;
    VerifyArgs verify;
    BenchArgs bench;
    gen.seed = train.seed = verify.seed = bench.seed = seed;
    add_gen(app, gen);
    add_train(app, train);
    add_apply(app, apply);
    add_eval(app, eval);
    add_verify(app, verify);
    add_bench(app, bench);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "edgc: error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
