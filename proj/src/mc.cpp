#include "taildep/mc.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "taildep/chi.hpp"
#include "taildep/error.hpp"
#include "taildep/htsp.hpp"
#include "taildep/io.hpp"
#include "taildep/metrics.hpp"
#include "taildep/rng.hpp"

namespace taildep {

namespace {

// Tags for per-replicate sub-streams (loading matrix, dataset, rank ties).
constexpr std::uint64_t kTagLoading = 1;
constexpr std::uint64_t kTagData = 2;
constexpr std::uint64_t kTagRanks = 3;

}  // namespace

HyperParams HyperSetting::resolve(std::size_t n, std::size_t d) const {
    if (mode == HyperParams::Mode::adaptive) return adaptive_hyperparams(n, d, c_k, c_kappa, r);
    HyperParams hp;
    hp.mode = HyperParams::Mode::fixed;
    std::size_t k = k_abs > 0 ? k_abs
                              : static_cast<std::size_t>(std::floor(k_frac * static_cast<double>(n)));
    if (k < 1) {
        k = 1;
        hp.clamped = true;
    }
    if (k > n) {
        k = n;
        hp.clamped = true;
    }
    hp.k = k;
    hp.kappa = kappa;
    return hp;
}

std::string HyperSetting::label() const {
    return mode == HyperParams::Mode::adaptive ? "adaptive" : "fixed";
}

void StudyConfig::validate() const {
    if (n_values.empty() || d_values.empty() || k_values.empty())
        throw parameter_error("StudyConfig: n, d and K grids must be non-empty");
    if (models.empty()) throw parameter_error("StudyConfig: no models selected");
    if (hyper.empty()) throw parameter_error("StudyConfig: no hyperparameter settings");
    if (replicates < 1) throw parameter_error("StudyConfig: replicates must be at least 1");
    if (!(eta > 0.0 && eta < 0.5)) throw parameter_error("StudyConfig: eta must lie in (0, 1/2)");
    for (const std::size_t n : n_values)
        if (n < 2) throw parameter_error("StudyConfig: every n must be at least 2");
    for (const std::size_t K : k_values) {
        if (s > K || K < 1) throw parameter_error("StudyConfig: need 1 <= s <= K in every cell");
        for (const std::size_t d : d_values)
            if (K > d) throw parameter_error("StudyConfig: need K <= d in every cell");
    }
    for (const auto& h : hyper) {
        if (h.mode == HyperParams::Mode::fixed) {
            if (h.k_abs == 0 && !(h.k_frac > 0.0))
                throw parameter_error("StudyConfig: fixed setting needs k or k_frac");
            if (!(h.kappa > 0.0 && h.kappa < 0.5))
                throw parameter_error("StudyConfig: fixed kappa must lie in (0, 1/2)");
        } else if (!(h.c_k > 0.0) || !(h.c_kappa > 0.0) || !(h.r > 0.0)) {
            throw parameter_error("StudyConfig: adaptive constants must be positive");
        }
    }
}

std::vector<StudyCell> StudyConfig::cells() const {
    std::vector<StudyCell> out;
    for (const std::size_t n : n_values)
        for (const std::size_t d : d_values)
            for (const std::size_t K : k_values)
                for (const auto& [kind, noise] : models)
                    out.push_back(StudyCell{n, d, K, kind, noise});
    return out;
}

namespace {

std::pair<ModelKind, bool> parse_model_tag(const std::string& tag) {
    if (tag == "linear") return {ModelKind::linear, false};
    if (tag == "linear_noise") return {ModelKind::linear, true};
    if (tag == "max_linear") return {ModelKind::max_linear, false};
    if (tag == "max_linear_noise") return {ModelKind::max_linear, true};
    throw parameter_error("StudyConfig: unknown model '" + tag +
                          "' (expected linear[_noise] or max_linear[_noise])");
}

std::vector<HyperSetting> paper_hyper_presets() {
    HyperSetting f1;
    f1.mode = HyperParams::Mode::fixed;
    f1.k_frac = 0.01;
    f1.kappa = 0.1;
    HyperSetting f5 = f1;
    f5.k_frac = 0.05;
    HyperSetting ad;
    ad.mode = HyperParams::Mode::adaptive;
    return {f1, f5, ad};
}

HyperSetting parse_hyper_setting(const nlohmann::json& j) {
    HyperSetting h;
    const std::string mode = j.value("mode", "fixed");
    if (mode == "adaptive") {
        h.mode = HyperParams::Mode::adaptive;
        h.c_k = j.value("c_k", 0.25);
        h.c_kappa = j.value("c_kappa", 0.75);
        h.r = j.value("r", 1.0);
    } else if (mode == "fixed") {
        h.mode = HyperParams::Mode::fixed;
        h.k_abs = j.value("k", 0u);
        h.k_frac = j.value("k_frac", 0.0);
        h.kappa = j.value("kappa", 0.1);
    } else {
        throw parameter_error("StudyConfig: unknown hyper mode '" + mode + "'");
    }
    return h;
}

}  // namespace

StudyConfig parse_study_config(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw io_error(std::string("config: invalid JSON: ") + e.what());
    }

    StudyConfig cfg;
    try {
        cfg.n_values = j.at("n").get<std::vector<std::size_t>>();
        cfg.d_values = j.at("d").get<std::vector<std::size_t>>();
        cfg.k_values = j.at("K").get<std::vector<std::size_t>>();
        cfg.eta = j.at("eta").get<double>();
        cfg.s = j.at("s").get<std::size_t>();
        for (const auto& tag : j.at("models")) cfg.models.push_back(parse_model_tag(tag));
        cfg.factor_alpha = j.value("factor_alpha", 1.0);
        cfg.noise_alpha = j.value("noise_alpha", 2.0);
        cfg.replicates = j.value("replicates", 100u);
        cfg.master_seed = j.value("seed", 0u);
        if (j.contains("hyper") && j["hyper"].is_string()) {
            if (j["hyper"].get<std::string>() != "paper")
                throw parameter_error("StudyConfig: unknown hyper preset");
            cfg.hyper = paper_hyper_presets();
        } else if (j.contains("hyper")) {
            for (const auto& h : j["hyper"]) cfg.hyper.push_back(parse_hyper_setting(h));
        } else {
            cfg.hyper = paper_hyper_presets();
        }
    } catch (const nlohmann::json::exception& e) {
        throw parameter_error(std::string("config: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

StudyConfig load_study_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_study_config(text);
}

std::string record_csv_header() {
    return "n,d,K,eta,s,model,noise,hyper_mode,k,kappa,replicate,seed,k_rec,s_rec,i_rec,tfnp,"
           "tfpp,loss,millis";
}

std::string record_csv_row(const ReplicateRecord& r) {
    std::string row;
    row.reserve(160);
    const auto opt = [](const std::optional<double>& v) {
        return v ? format_double(*v) : std::string();
    };
    row += std::to_string(r.cell.n) + ',' + std::to_string(r.cell.d) + ',' +
           std::to_string(r.cell.K) + ',' + format_double(r.eta) + ',' + std::to_string(r.s) +
           ',' + to_string(r.cell.kind) + ',' + (r.cell.noise ? "1" : "0") + ',' + r.hyper_mode +
           ',' + std::to_string(r.k_used) + ',' + format_double(r.kappa_used) + ',' +
           std::to_string(r.replicate) + ',' + std::to_string(r.seed) + ',' +
           (r.k_rec ? "1" : "0") + ',' + (r.s_rec ? "1" : "0") + ',' + (r.i_rec ? "1" : "0") +
           ',' + opt(r.tfnp) + ',' + opt(r.tfpp) + ',' + opt(r.loss) + ',' +
           std::to_string(r.millis);
    return row;
}

namespace {

std::vector<ReplicateRecord> run_replicate(const StudyConfig& cfg,
                                           const std::vector<StudyCell>& cells,
                                           std::size_t cell_index, std::size_t replicate) {
    const StudyCell& cell = cells[cell_index];
    const std::uint64_t seed = derive_seed(cfg.master_seed, cell_index, replicate);

    ModelSpec spec;
    spec.kind = cell.kind;
    spec.noise = cell.noise;
    spec.d = cell.d;
    spec.K = cell.K;
    spec.eta = cfg.eta;
    spec.s = cfg.s;
    spec.factor_alpha = cfg.factor_alpha;
    spec.noise_alpha = cfg.noise_alpha;

    const LoadingMatrix loading = gen_loading_matrix(spec, derive_seed(seed, kTagLoading));
    const LoadingMatrix truth = implied_loading(loading.values(), spec.factor_alpha);
    const DataMatrix data = sample_dataset(loading, spec, cell.n, derive_seed(seed, kTagData));
    const RankMatrix ranks = compute_ranks(data, derive_seed(seed, kTagRanks));

    std::vector<std::size_t> true_pure_set;
    for (std::size_t j = 0; j < truth.d(); ++j) {
        std::size_t nonzero = 0;
        for (std::size_t a = 0; a < truth.factors(); ++a)
            if (truth(j, a) > kSupportTol) ++nonzero;
        if (nonzero == 1) true_pure_set.push_back(j);
    }
    const std::size_t true_s = sparsity_index(truth);

    std::vector<ReplicateRecord> records;
    records.reserve(cfg.hyper.size());
    for (std::size_t h = 0; h < cfg.hyper.size(); ++h) {
        const auto started = std::chrono::steady_clock::now();
        const HyperParams hp = cfg.hyper[h].resolve(cell.n, cell.d);

        ReplicateRecord rec;
        rec.cell_index = cell_index;
        rec.hyper_index = h;
        rec.replicate = replicate;
        rec.seed = seed;
        rec.cell = cell;
        rec.eta = cfg.eta;
        rec.s = cfg.s;
        rec.hyper_mode = cfg.hyper[h].label();
        rec.k_used = hp.k;
        rec.kappa_used = hp.kappa;

        const ChiMatrix chi = empirical_chi(ranks, hp.k);
        const HtspEstimate est = htsp(chi, hp.kappa);
        const MetricsReport m = evaluate(est, truth, true_pure_set, true_s);
        rec.k_rec = m.k_recovered;
        rec.s_rec = m.s_recovered;
        rec.i_rec = m.i_recovered;
        rec.tfnp = m.tfnp;
        rec.tfpp = m.tfpp;
        rec.loss = m.loss_inf2;

        rec.millis = std::chrono::duration_cast<std::chrono::milliseconds>(
                         std::chrono::steady_clock::now() - started)
                         .count();
        records.push_back(std::move(rec));
    }
    return records;
}

std::vector<CellAggregate> aggregate_records(const StudyConfig& cfg,
                                             const std::vector<StudyCell>& cells,
                                             const std::vector<ReplicateRecord>& records) {
    const std::size_t n_hyper = cfg.hyper.size();
    std::vector<CellAggregate> aggs(cells.size() * n_hyper);
    for (std::size_t c = 0; c < cells.size(); ++c) {
        for (std::size_t h = 0; h < n_hyper; ++h) {
            CellAggregate& agg = aggs[c * n_hyper + h];
            agg.cell_index = c;
            agg.hyper_index = h;
            agg.cell = cells[c];
            agg.hyper_mode = cfg.hyper[h].label();
        }
    }
    std::vector<double> tfnp_sum(aggs.size(), 0.0), tfpp_sum(aggs.size(), 0.0),
        loss_sum(aggs.size(), 0.0);
    for (const ReplicateRecord& r : records) {
        CellAggregate& agg = aggs[r.cell_index * n_hyper + r.hyper_index];
        ++agg.replicates;
        agg.k_rec_rate += r.k_rec;
        agg.s_rec_rate += r.s_rec;
        agg.i_rec_rate += r.i_rec;
        if (r.k_rec) {
            ++agg.aligned_count;
            tfnp_sum[r.cell_index * n_hyper + r.hyper_index] += *r.tfnp;
            tfpp_sum[r.cell_index * n_hyper + r.hyper_index] += *r.tfpp;
            loss_sum[r.cell_index * n_hyper + r.hyper_index] += *r.loss;
        }
    }
    for (std::size_t i = 0; i < aggs.size(); ++i) {
        CellAggregate& agg = aggs[i];
        const double reps = static_cast<double>(agg.replicates);
        if (agg.replicates > 0) {
            agg.k_rec_rate /= reps;
            agg.s_rec_rate /= reps;
            agg.i_rec_rate /= reps;
        }
        if (agg.aligned_count > 0) {
            const double m = static_cast<double>(agg.aligned_count);
            agg.mean_tfnp = tfnp_sum[i] / m;
            agg.mean_tfpp = tfpp_sum[i] / m;
            agg.mean_loss = loss_sum[i] / m;
        }
    }
    return aggs;
}

void write_aggregates(const std::string& path, const std::vector<CellAggregate>& aggs) {
    nlohmann::json out = nlohmann::json::array();
    for (const CellAggregate& a : aggs) {
        nlohmann::json j{{"cell", a.cell_index},
                         {"n", a.cell.n},
                         {"d", a.cell.d},
                         {"K", a.cell.K},
                         {"model", to_string(a.cell.kind)},
                         {"noise", a.cell.noise},
                         {"hyper_mode", a.hyper_mode},
                         {"hyper", a.hyper_index},
                         {"replicates", a.replicates},
                         {"k_rec_rate", a.k_rec_rate},
                         {"s_rec_rate", a.s_rec_rate},
                         {"i_rec_rate", a.i_rec_rate},
                         {"aligned_count", a.aligned_count}};
        if (a.mean_tfnp) j["mean_tfnp"] = *a.mean_tfnp;
        if (a.mean_tfpp) j["mean_tfpp"] = *a.mean_tfpp;
        if (a.mean_loss) j["mean_loss"] = *a.mean_loss;
        out.push_back(std::move(j));
    }
    std::ofstream file(path);
    if (!file) throw io_error("cannot open " + path + " for writing");
    file << out.dump(2) << '\n';
}

}  // namespace

McReport run_study(const StudyConfig& config, std::size_t threads, const std::string& out_dir) {
    config.validate();
    const std::vector<StudyCell> cells = config.cells();
    const std::size_t n_tasks = cells.size() * config.replicates;

    std::filesystem::create_directories(out_dir);
    std::ofstream csv(std::filesystem::path(out_dir) / "records.csv");
    if (!csv) throw io_error("cannot open records.csv in " + out_dir);
    csv << record_csv_header() << '\n';

    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min(threads, n_tasks);

    // Tasks are (cell, replicate) pairs; each produces one record per hyper
    // setting. Records are flushed strictly in task order so the file is
    // identical for any thread count and always a valid prefix.
    std::vector<std::vector<ReplicateRecord>> slots(n_tasks);
    std::vector<char> ready(n_tasks, 0);
    std::atomic<std::size_t> next_task{0};
    std::mutex write_mutex;
    std::size_t flushed = 0;
    std::exception_ptr failure;

    McReport report;
    report.records.reserve(n_tasks * config.hyper.size());

    const auto worker = [&]() {
        while (true) {
            const std::size_t t = next_task.fetch_add(1);
            if (t >= n_tasks) return;
            const std::size_t cell_index = t / config.replicates;
            const std::size_t replicate = t % config.replicates;
            try {
                std::vector<ReplicateRecord> recs =
                    run_replicate(config, cells, cell_index, replicate);
                std::lock_guard<std::mutex> lock(write_mutex);
                slots[t] = std::move(recs);
                ready[t] = 1;
                while (flushed < n_tasks && ready[flushed]) {
                    for (const ReplicateRecord& r : slots[flushed]) {
                        csv << record_csv_row(r) << '\n';
                        report.records.push_back(r);
                    }
                    csv.flush();
                    slots[flushed].clear();
                    ++flushed;
                }
            } catch (...) {
                std::lock_guard<std::mutex> lock(write_mutex);
                if (!failure) failure = std::current_exception();
                return;
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);

    report.aggregates = aggregate_records(config, cells, report.records);
    write_aggregates((std::filesystem::path(out_dir) / "aggregate.json").string(),
                     report.aggregates);
    return report;
}

}  // namespace taildep
