#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

#include "aalsim/csv.hpp"
#include "aalsim/error.hpp"
#include "aalsim/experiment.hpp"

using namespace aalsim;

namespace {

std::string error_of(std::string_view text)
{
    try {
        (void)parse_config(text);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return {};
}

// Small dynamic run used where a full preset would be too slow.
ExperimentSpec small_dynamic()
{
    return parse_config("mode = dynamic\n"
                        "n = 10\n"
                        "mutation = count:1\n"
                        "warmup = 200\n"
                        "interval = 10\n"
                        "samples = 20\n"
                        "replicates = 3\n"
                        "seed = 17\n"
                        "sweep.p_client = 0.1,0.25\n"
                        "p_provider = rest\n");
}

} // namespace

TEST_CASE("parse_config: a dynamic single-cell mutation setup")
{
    const ExperimentSpec spec = parse_config(
        "n = 30\nmode = dynamic\np_client = 0.25\np_provider = 0.25\np_neutral = 0.5\nmutation = count:1");
    CHECK(spec.base.n == 30);
    CHECK(spec.base.mode == Mode::Dynamic);
    CHECK(spec.base.mutation.rule == MutationConfig::Rule::FixedCount);
    CHECK(spec.base.mutation.count == 1);
    CHECK(spec.base.mutation.p_client == 0.25);
    CHECK(spec.base.mutation.p_provider == 0.25);
    CHECK(spec.base.mutation.p_neutral == 0.5);
    CHECK(spec.base.warmup_steps == 5000);
    CHECK(spec.base.sample_interval == 50);
    CHECK(spec.base.sample_count == 100);
}

TEST_CASE("parse_config: empty text gives the documented defaults")
{
    const ExperimentSpec spec = parse_config("");
    CHECK(spec.base.mode == Mode::Static);
    CHECK(spec.base.n == 30);
    CHECK(spec.base.reuse == ReusePolicy::Reusable);
    CHECK(!spec.base.match.distant_help);
    CHECK(spec.base.warmup_steps == 5000);
    CHECK(spec.base.sample_interval == 50);
    CHECK(spec.base.sample_count == 100);
    CHECK(spec.base.max_steps == 100000);
    CHECK(spec.replicates == 10);
    CHECK(spec.axes.empty());
    CHECK(spec == parse_config("# only a comment\n\n   \n"));
}

TEST_CASE("parse_config: probabilities over 1 are rejected with line and key")
{
    const std::string msg = error_of("p_client = 0.6\np_provider = 0.6\np_neutral = 0.5");
    CHECK(msg.find("line 3") != std::string::npos);
    CHECK(msg.find("p_neutral") != std::string::npos);
}

TEST_CASE("parse_config: errors name the line and key")
{
    CHECK(error_of("n = 30\nbogus = 1\n").find("line 2: key 'bogus'") != std::string::npos);
    CHECK(error_of("n = thirty\n").find("line 1: key 'n'") != std::string::npos);
    CHECK(error_of("n = 30\nn = 20\n").find("duplicate") != std::string::npos);
    CHECK(error_of("just words\n").find("line 1") != std::string::npos);
    CHECK(error_of("mutation = sometimes\n").find("key 'mutation'") != std::string::npos);
    CHECK(error_of("reuse = maybe\n").find("key 'reuse'") != std::string::npos);
    CHECK(error_of("distant_help = perhaps\n").find("key 'distant_help'") != std::string::npos);
    CHECK(error_of("client_rate = 0.7\nprovider_rate = 0.5\n").find("line 2: key 'provider_rate'") != std::string::npos);
    CHECK(error_of("n = 1\n").find("key 'n'") != std::string::npos);
    CHECK(error_of("replicates = 0\n").find("key 'replicates'") != std::string::npos);
    CHECK(error_of("sweep.seed = 1,2\n").find("sweep.seed") != std::string::npos);
    CHECK(error_of("sweep.mode = static,dynamic\n").find("cannot be swept") != std::string::npos);
    CHECK(error_of("sweep.n = 10,,30\n").find("empty item") != std::string::npos);
    CHECK(error_of("sweep.n = 10,abc\n").find("sweep.n") != std::string::npos);
    CHECK(error_of("n = \n").find("missing value") != std::string::npos);
    CHECK(error_of("p_client = rest\np_provider = rest\n").find("only one") != std::string::npos);
    CHECK(error_of("n = rest\n").find("'rest'") != std::string::npos);
    CHECK(error_of("p_provider = rest\nsweep.p_provider = 0.1\n").find("rest") != std::string::npos);
    CHECK(error_of("mode = dynamic\nwarmup = 0\n").find("key 'warmup'") != std::string::npos);
}

TEST_CASE("parse_config: infeasible sweep points")
{
    const std::string text = "sweep.client_rate = 0.3,0.6\nsweep.provider_rate = 0.2,0.5\n";
    const std::string msg = error_of(text);
    CHECK(msg.find("client_rate=0.6, provider_rate=0.5") != std::string::npos);

    const ExperimentSpec spec = parse_config(text + "skip_infeasible = true\n");
    const auto points = expand_points(spec);
    CHECK(points.size() == 3);
    CHECK(points.back().point_index == 2);
}

TEST_CASE("parse_config: 'rest' derives the remaining probability per point")
{
    const ExperimentSpec spec = parse_config("p_neutral = 0.5\np_provider = rest\nsweep.p_client = 0.1,0.3\n");
    CHECK(spec.rest_probability == Role::Provider);
    const auto points = expand_points(spec);
    REQUIRE(points.size() == 2);
    CHECK(points[0].config.mutation.p_provider == doctest::Approx(0.4));
    CHECK(points[1].config.mutation.p_provider == doctest::Approx(0.2));
}

TEST_CASE("format_config round-trips through parse_config")
{
    for (const auto& name : preset_names()) {
        const ExperimentSpec spec = figure_preset(name);
        CHECK(parse_config(format_config(spec)) == spec);
    }

    Stream rng(4);
    for (int trial = 0; trial < 200; ++trial) {
        ExperimentSpec spec;
        spec.base.n = 2 + static_cast<int>(rng.below(60));
        spec.base.rates.client_rate = rng.uniform01() * 0.5;
        spec.base.rates.provider_rate = rng.uniform01() * 0.5;
        spec.base.values = ValueDistribution{1 + static_cast<int>(rng.below(3)), 4 + static_cast<int>(rng.below(10))};
        spec.base.reuse = rng.below(2) ? ReusePolicy::OneShot : ReusePolicy::Reusable;
        spec.base.match.distant_help = rng.below(2) == 1;
        spec.base.mode = rng.below(2) ? Mode::Static : Mode::Dynamic;
        spec.base.mutation = rng.below(2) ? MutationConfig::fixed(static_cast<std::int64_t>(rng.below(20)))
                                          : MutationConfig::share(rng.uniform01());
        spec.base.mutation.p_client = rng.uniform01() * 0.5;
        spec.base.mutation.p_neutral = rng.uniform01() * 0.5;
        spec.base.mutation.p_provider = 1.0 - spec.base.mutation.p_client - spec.base.mutation.p_neutral;
        spec.rest_probability = Role::Provider;
        spec.base.warmup_steps = 1 + static_cast<std::int64_t>(rng.below(9000));
        spec.base.sample_interval = 1 + static_cast<std::int64_t>(rng.below(90));
        spec.base.sample_count = 1 + static_cast<std::int64_t>(rng.below(200));
        spec.base.max_steps = 1 + static_cast<std::int64_t>(rng.below(1000000));
        spec.master_seed = rng.next();
        spec.replicates = 1 + static_cast<std::int64_t>(rng.below(30));
        spec.output = rng.below(2) ? "" : "out.csv";
        if (rng.below(2)) {
            spec.axes.push_back(SweepAxis{"n", {"10", "20"}});
        }
        CHECK(parse_config(format_config(spec)) == spec);
    }
}

TEST_CASE("figure presets")
{
    for (const auto& name : preset_names()) {
        CHECK_NOTHROW(figure_preset(name));
        CHECK_NOTHROW(expand_points(figure_preset(name)));
    }

    const ExperimentSpec fig4 = figure_preset("fig4");
    CHECK(fig4.base.mode == Mode::Static);
    CHECK(fig4.base.reuse == ReusePolicy::OneShot);
    CHECK(fig4.base.n == 30);

    const ExperimentSpec fig5 = figure_preset("fig5");
    CHECK(fig5.base.reuse == ReusePolicy::Reusable);

    const ExperimentSpec fig6 = figure_preset("fig6");
    CHECK(fig6.base.mode == Mode::Dynamic);
    CHECK(fig6.base.mutation == MutationConfig{MutationConfig::Rule::FixedCount, 1, 0.0, 0.25, 0.25, 0.5});
    CHECK(fig6.axes.at(0).key == "client_rate");

    const ExperimentSpec fig7 = figure_preset("fig7");
    CHECK(fig7.base.mutation.rule == MutationConfig::Rule::FixedCount);
    CHECK(fig7.axes.at(0).values == std::vector<std::string>{"10", "30"});

    const ExperimentSpec fig8 = figure_preset("fig8");
    CHECK(fig8.base.mutation.rule == MutationConfig::Rule::Fraction);
    CHECK(fig8.base.mutation.fraction == 0.01);

    const ExperimentSpec fig9 = figure_preset("fig9");
    CHECK(fig9.base.match.distant_help);
    CHECK(fig9.base.mutation.fraction == 0.01);
    CHECK(fig9.axes.at(0).values.size() == 4);

    CHECK_THROWS_AS(figure_preset("fig10"), UsageError);
    try {
        (void)figure_preset("nope");
    } catch (const UsageError& e) {
        CHECK(std::string(e.what()).find("fig4, fig5, fig6, fig7, fig8, fig9") != std::string::npos);
    }
}

TEST_CASE("emit_csv formatting")
{
    ResultTable empty{{"a", "b"}, {}};
    CHECK(emit_csv(empty) == "a,b\n");

    ResultTable one{{"provider_rate", "satisfaction"}, {{0.4, 0.93}}};
    CHECK(emit_csv(one) == "provider_rate,satisfaction\n0.400000,0.930000\n");

    ResultTable mixed{{"n", "seed", "reuse", "x"}, {{std::int64_t{30}, std::uint64_t{18446744073709551615ULL}, std::string("oneshot"), 1.0 / 3.0}}};
    CHECK(emit_csv(mixed) == "n,seed,reuse,x\n30,18446744073709551615,oneshot,0.333333\n");

    ResultTable ragged{{"a", "b"}, {{0.1}}};
    CHECK_THROWS_AS(emit_csv(ragged), InternalError);
}

TEST_CASE("run_experiment: one point, one replicate, one row")
{
    ExperimentSpec spec = parse_config("n = 10\nreplicates = 1\n");
    const ResultTable t = run_experiment(spec);
    CHECK(t.rows.size() == 1);
    CHECK(t.columns == result_columns(spec));
    CHECK(t.columns.front() == "replicate");
}

TEST_CASE("run_experiment: rows follow (point, replicate) order with derived seeds")
{
    const ExperimentSpec spec = small_dynamic();
    const ResultTable t = run_experiment(spec, 3);
    REQUIRE(t.rows.size() == 6);
    CHECK(t.columns.at(0) == "p_client");
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const auto point = i / 3;
        const auto rep = static_cast<std::int64_t>(i % 3);
        CHECK(std::get<double>(t.rows[i][0]) == (point == 0 ? 0.1 : 0.25));
        CHECK(std::get<std::int64_t>(t.rows[i][1]) == rep);
        CHECK(std::get<std::uint64_t>(t.rows[i][2]) == derive_seed(17, point, 3, rep));
    }
    CHECK(derive_seed(17, 1, 3, 2) == 22);
}

TEST_CASE("run_experiment: parallel and serial kernels agree byte for byte")
{
    const ExperimentSpec spec = small_dynamic();
    const std::string serial = emit_csv(run_experiment_serial(spec));
    for (int threads : {1, 2, 4}) {
        CHECK(emit_csv(run_experiment(spec, threads)) == serial);
    }

    ExperimentSpec st = parse_config("n = 12\nreplicates = 4\nsweep.provider_rate = 0.2,0.5\nreuse = oneshot\n");
    CHECK(emit_csv(run_experiment(st, 3)) == emit_csv(run_experiment_serial(st)));
}

TEST_CASE("run_experiment: identical spec and seed give identical CSV")
{
    const ExperimentSpec spec = small_dynamic();
    CHECK(emit_csv(run_experiment(spec)) == emit_csv(run_experiment(spec)));
    ExperimentSpec other = spec;
    other.master_seed = 18;
    CHECK(emit_csv(run_experiment(other)) != emit_csv(run_experiment(spec)));
}

TEST_CASE("CSV of a reduced init-rate sweep reproduces the run means")
{
    ExperimentSpec spec = figure_preset("fig6");
    spec.base.n = 12;
    spec.base.warmup_steps = 300;
    spec.base.sample_count = 20;
    spec.base.sample_interval = 10;
    spec.replicates = 2;
    spec.axes.at(0).values = {"0.05", "0.6"};

    const std::string csv = emit_csv(run_experiment(spec));
    const auto parsed = read_csv(csv);
    REQUIRE(parsed.size() == 5);
    const auto& header = parsed[0];
    const auto col = [&header](const std::string& name) {
        return static_cast<std::size_t>(std::find(header.begin(), header.end(), name) - header.begin());
    };

    const auto points = expand_points(spec);
    std::size_t row = 1;
    for (const auto& point : points) {
        for (std::int64_t rep = 0; rep < spec.replicates; ++rep, ++row) {
            RunConfig config = point.config;
            config.seed = derive_seed(spec.master_seed, point.point_index, spec.replicates, rep);
            const DynamicResult direct = run_dynamic(config);
            CHECK(std::stoull(parsed[row][col("seed")]) == config.seed);
            CHECK(std::abs(std::stod(parsed[row][col("mean_req_rate_all")]) - direct.mean_req_rate_all) <= 5e-7);
            CHECK(std::abs(std::stod(parsed[row][col("mean_req_rate_waiting")]) - direct.mean_req_rate_waiting) <= 5e-7);
        }
    }
}

TEST_CASE("run_experiment: failures name the point")
{
    ExperimentSpec spec = parse_config("n = 10\nreplicates = 1\nsweep.provider_rate = 0.2,0.5\n");
    spec.base.rates.client_rate = 0.6;  // bypass parse-time checks
    try {
        (void)run_experiment(spec);
        FAIL("expected an error");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("provider_rate=0.5") != std::string::npos);
    }
}

TEST_CASE("snapshot CSV lists every cell")
{
    Stream rng(2);
    Community c = init_grid(4, InitRates{0.3, 0.3}, ValueDistribution{}, rng);
    match_round(c, MatchPolicy{});
    const auto rows = read_csv(emit_snapshot(c));
    REQUIRE(rows.size() == 17);
    CHECK(rows[0] == std::vector<std::string>{"row", "col", "role", "req_value", "pro_value", "work_status", "partner_row", "partner_col"});
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const Coord at{std::stoi(rows[i][0]), std::stoi(rows[i][1])};
        const Cell& cell = c.at(at);
        CHECK(rows[i][2] == to_string(cell.role));
        CHECK(rows[i][5] == (cell.work_status() ? "1" : "0"));
        CHECK(std::stoi(rows[i][6]) == (cell.partner ? cell.partner->row : -1));
    }
}
