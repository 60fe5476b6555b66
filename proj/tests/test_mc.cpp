#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "taildep/error.hpp"
#include "taildep/mc.hpp"
#include "taildep/rng.hpp"

using namespace taildep;

namespace {

namespace fs = std::filesystem;

const char* kTinyConfig = R"({
  "n": [300],
  "d": [8],
  "K": [2],
  "eta": 0.25,
  "s": 2,
  "models": ["max_linear", "linear_noise"],
  "hyper": [
    {"mode": "fixed", "k_frac": 0.05, "kappa": 0.1},
    {"mode": "adaptive"}
  ],
  "replicates": 3,
  "seed": 92
})";

std::string read_file(const fs::path& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// records.csv with the millis column blanked (wall time is measured, so it
// is the one column that legitimately varies between runs).
std::string strip_millis(const std::string& csv) {
    std::istringstream in(csv);
    std::ostringstream out;
    std::string line;
    while (std::getline(in, line)) {
        const std::size_t cut = line.rfind(',');
        out << line.substr(0, cut) << '\n';
    }
    return out.str();
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("study config parses, defaults, and validates") {
    const StudyConfig cfg = parse_study_config(kTinyConfig);
    CHECK(cfg.n_values == std::vector<std::size_t>{300});
    CHECK(cfg.models.size() == 2);
    CHECK(cfg.models[0].first == ModelKind::max_linear);
    CHECK_FALSE(cfg.models[0].second);
    CHECK(cfg.models[1].second);
    CHECK(cfg.hyper.size() == 2);
    CHECK(cfg.replicates == 3);
    CHECK(cfg.cells().size() == 2);

    // hyper defaults to the three paper presets
    const StudyConfig defaulted = parse_study_config(
        R"({"n":[100],"d":[4],"K":[2],"eta":0.2,"s":2,"models":["linear"],"seed":1})");
    CHECK(defaulted.hyper.size() == 3);
    CHECK(defaulted.hyper[0].k_frac == 0.01);
    CHECK(defaulted.hyper[1].k_frac == 0.05);
    CHECK(defaulted.hyper[2].mode == HyperParams::Mode::adaptive);
    CHECK(defaulted.replicates == 100);
}

TEST_CASE("config validation errors") {
    CHECK_THROWS_AS(parse_study_config("not json"), io_error);
    CHECK_THROWS_AS(
        parse_study_config(
            R"({"n":[100],"d":[4],"K":[2],"eta":0.2,"s":2,"models":["linear"],"replicates":0})"),
        parameter_error);
    CHECK_THROWS_AS(
        parse_study_config(
            R"({"n":[100],"d":[4],"K":[6],"eta":0.2,"s":2,"models":["linear"]})"),
        parameter_error);
    CHECK_THROWS_AS(
        parse_study_config(
            R"({"n":[100],"d":[4],"K":[2],"eta":0.2,"s":2,"models":["cubic"]})"),
        parameter_error);
    CHECK_THROWS_AS(parse_study_config(R"({"n":[100],"d":[4]})"), parameter_error);
}

TEST_CASE("hyper settings resolve against n and d") {
    HyperSetting fixed;
    fixed.mode = HyperParams::Mode::fixed;
    fixed.k_frac = 0.05;
    fixed.kappa = 0.1;
    const HyperParams hp = fixed.resolve(1000, 50);
    CHECK(hp.k == 50);
    CHECK(hp.kappa == 0.1);
    CHECK_FALSE(hp.clamped);

    HyperSetting absolute;
    absolute.mode = HyperParams::Mode::fixed;
    absolute.k_abs = 2000;
    const HyperParams clamped = absolute.resolve(100, 50);
    CHECK(clamped.k == 100);
    CHECK(clamped.clamped);

    HyperSetting adaptive;
    adaptive.mode = HyperParams::Mode::adaptive;
    CHECK(adaptive.resolve(1000, 100).k == 67);
}

TEST_CASE("replicate seeds follow the documented derivation") {
    const StudyConfig cfg = parse_study_config(kTinyConfig);
    TempDir dir("taildep_mc_seeds");
    const McReport report = run_study(cfg, 1, dir.path.string());
    for (const ReplicateRecord& r : report.records)
        CHECK(r.seed == derive_seed(cfg.master_seed, r.cell_index, r.replicate));
}

TEST_CASE("study output is complete, ordered, and thread-count invariant") {
    const StudyConfig cfg = parse_study_config(kTinyConfig);
    TempDir dir1("taildep_mc_t1"), dir8("taildep_mc_t8");

    const McReport rep1 = run_study(cfg, 1, dir1.path.string());
    const McReport rep8 = run_study(cfg, 8, dir8.path.string());

    const std::size_t expected = cfg.cells().size() * cfg.hyper.size() * cfg.replicates;
    CHECK(rep1.records.size() == expected);
    CHECK(rep8.records.size() == expected);

    // records arrive in (cell, replicate, hyper) order
    for (std::size_t i = 0; i < rep1.records.size(); ++i) {
        const std::size_t per_cell = cfg.replicates * cfg.hyper.size();
        CHECK(rep1.records[i].cell_index == i / per_cell);
        CHECK(rep1.records[i].replicate == (i % per_cell) / cfg.hyper.size());
        CHECK(rep1.records[i].hyper_index == i % cfg.hyper.size());
    }

    // statistical fields identical across thread counts
    for (std::size_t i = 0; i < expected; ++i) {
        CHECK(record_csv_row(rep1.records[i]).substr(
                  0, record_csv_row(rep1.records[i]).rfind(',')) ==
              record_csv_row(rep8.records[i]).substr(
                  0, record_csv_row(rep8.records[i]).rfind(',')));
    }

    // files: header + millis-stripped body identical; aggregate byte-identical
    const std::string csv1 = read_file(dir1.path / "records.csv");
    const std::string csv8 = read_file(dir8.path / "records.csv");
    CHECK(csv1.substr(0, csv1.find('\n')) == record_csv_header());
    CHECK(strip_millis(csv1) == strip_millis(csv8));
    CHECK(read_file(dir1.path / "aggregate.json") == read_file(dir8.path / "aggregate.json"));
}

TEST_CASE("aggregates average the per-replicate records") {
    StudyConfig cfg = parse_study_config(kTinyConfig);
    cfg.replicates = 4;
    TempDir dir("taildep_mc_agg");
    const McReport report = run_study(cfg, 2, dir.path.string());

    CHECK(report.aggregates.size() == cfg.cells().size() * cfg.hyper.size());
    for (const CellAggregate& agg : report.aggregates) {
        CHECK(agg.replicates == cfg.replicates);
        double k_sum = 0.0;
        std::size_t aligned = 0;
        for (const ReplicateRecord& r : report.records) {
            if (r.cell_index == agg.cell_index && r.hyper_index == agg.hyper_index) {
                k_sum += r.k_rec;
                aligned += r.k_rec;
            }
        }
        CHECK(agg.k_rec_rate == doctest::Approx(k_sum / cfg.replicates));
        CHECK(agg.aligned_count == aligned);
        CHECK(agg.mean_tfnp.has_value() == (aligned > 0));
    }
}
