// Copyright 2026 The orbrot Authors
// SPDX-License-Identifier: Apache-2.0

#include "orbrot/cli.hpp"

#include <openssl/evp.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>
#include <yaml-cpp/yaml.h>

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <set>
#include <sstream>
#include <thread>

#include "orbrot/errors.hpp"
#include "orbrot/local_hamiltonian.hpp"
#include "orbrot/oracle.hpp"
#include "orbrot/rng.hpp"
#include "orbrot/rotation.hpp"
#include "orbrot/vqe.hpp"

#ifndef ORBROT_VERSION
#define ORBROT_VERSION "unknown"
#endif

namespace orbrot::cli {

namespace fs = std::filesystem;
using nlohmann::json;

// ---------------------------------------------------------------------------
// Config parsing

namespace {

template <class T> const char* type_name();
template <> const char* type_name<int>() { return "an integer"; }
template <> const char* type_name<std::uint64_t>() { return "a non-negative integer"; }
template <> const char* type_name<double>() { return "a number"; }
template <> const char* type_name<bool>() { return "a boolean"; }
template <> const char* type_name<std::string>() { return "a string"; }
template <> const char* type_name<std::vector<int>>() { return "a list of integers"; }
template <> const char* type_name<std::vector<double>>() { return "a list of numbers"; }
template <> const char* type_name<std::vector<std::string>>() { return "a list of strings"; }

// One mapping in the config; remembers which keys were read.
class Block {
public:
    Block(YAML::Node node, std::string path) : node_(std::move(node)), path_(std::move(path)) {
        if (node_ && !node_.IsNull() && !node_.IsMap()) throw ConfigError(where() + "expected a mapping");
    }

    [[nodiscard]] bool present() const { return node_ && node_.IsMap(); }
    [[nodiscard]] bool has(const std::string& key) const { return present() && node_[key]; }

    template <class T>
    std::optional<T> get(const std::string& key) {
        seen_.insert(key);
        if (!present()) return std::nullopt;
        const YAML::Node v = node_[key];
        if (!v) return std::nullopt;
        try {
            return v.as<T>();
        } catch (const YAML::Exception&) {
            throw ConfigError(name(key) + ": expected " + type_name<T>());
        }
    }

    template <class T>
    T get(const std::string& key, T fallback) {
        return get<T>(key).value_or(std::move(fallback));
    }

    Block sub(const std::string& key) {
        seen_.insert(key);
        return Block(present() ? node_[key] : YAML::Node(), name(key));
    }

    void finish() const {
        if (!present()) return;
        for (const auto& kv : node_) {
            const auto key = kv.first.as<std::string>();
            if (!seen_.count(key)) throw ConfigError(name(key) + ": unknown key");
        }
    }

    [[nodiscard]] std::string name(const std::string& key) const {
        return path_.empty() ? key : path_ + "." + key;
    }

private:
    [[nodiscard]] std::string where() const { return path_.empty() ? "" : path_ + ": "; }

    YAML::Node node_;
    std::string path_;
    std::set<std::string> seen_;
};

fs::path resolve(const fs::path& base, const std::string& p) {
    const fs::path q(p);
    return (q.is_absolute() ? q : base / q).lexically_normal();
}

void require_file(const fs::path& p, const std::string& key) {
    if (!fs::is_regular_file(p)) throw ConfigError(key + ": file not found: " + p.string());
}

} // namespace

ExperimentConfig parse_config(const std::string& text, const fs::path& base_dir) {
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::Exception& e) {
        throw ConfigError(std::string("config is not valid YAML: ") + e.what());
    }
    if (!root || root.IsNull()) root = YAML::Node(YAML::NodeType::Map);
    ExperimentConfig c;
    c.source_text = text;
    Block top(root, "");

    c.command = top.get<std::string>("command", "");
    if (auto s = top.get<std::uint64_t>("seed")) c.seed = *s;
    c.threads = top.get<int>("threads", 1);
    if (auto o = top.get<std::string>("output")) c.output = resolve(base_dir, *o);
    c.compute_oracle = top.get<bool>("compute_oracle", true);
    if (c.threads < 1) throw ConfigError("threads: must be at least 1");

    {
        Block b = top.sub("system");
        if (auto f = b.get<std::string>("fcidump")) {
            c.system.fcidump = resolve(base_dir, *f);
            require_file(c.system.fcidump, b.name("fcidump"));
        }
        Block h = b.sub("hubbard");
        if (h.present()) {
            HubbardSpec spec;
            spec.sites = h.get<int>("sites", spec.sites);
            spec.t = h.get<double>("t", spec.t);
            spec.U = h.get<double>("U", spec.U);
            spec.periodic = h.get<bool>("periodic", spec.periodic);
            h.finish();
            if (spec.sites < 2) throw ConfigError(h.name("sites") + ": must be at least 2");
            c.system.hubbard = spec;
        }
        if (!c.system.fcidump.empty() && c.system.hubbard)
            throw ConfigError("system: give either fcidump or hubbard, not both");
        Block s = b.sub("sector");
        if (s.present()) {
            const int n = c.system.hubbard ? c.system.hubbard->sites : 0;
            Sector sec{n, s.get<int>("n_up", -1), s.get<int>("n_down", -1)};
            s.finish();
            if (sec.n_up < 0) throw ConfigError(s.name("n_up") + ": required non-negative integer");
            if (sec.n_down < 0) throw ConfigError(s.name("n_down") + ": required non-negative integer");
            c.system.sector = sec;
        }
        b.finish();
    }
    {
        Block b = top.sub("ansatz");
        try {
            c.ansatz.family = family_from_name(b.get<std::string>("family", "RBM"));
        } catch (const std::invalid_argument&) {
            throw ConfigError(b.name("family") + ": unknown ansatz family");
        }
        c.ansatz.alpha = b.get<int>("alpha", c.ansatz.alpha);
        c.ansatz.scale = b.get<double>("scale", c.ansatz.scale);
        if (auto s = b.get<std::uint64_t>("seed")) {
            c.ansatz.seed = *s;
            c.ansatz_seed_set = true;
        }
        c.ansatz.trainable_output_scale = b.get<bool>("trainable_output_scale", false);
        b.finish();
        if (c.ansatz.alpha < 1) throw ConfigError(b.name("alpha") + ": must be at least 1");
        if (!(c.ansatz.scale >= 0.0)) throw ConfigError(b.name("scale") + ": must be non-negative");
    }
    {
        Block b = top.sub("optimizer");
        auto& o = c.optimizer;
        o.eta = b.get<double>("eta", o.eta);
        o.eta_kappa = b.get<double>("eta_kappa", o.eta_kappa);
        o.shift = b.get<double>("shift", o.shift);
        o.decay = b.get<double>("decay", o.decay);
        o.steps = b.get<int>("steps", o.steps);
        o.exact = b.get<bool>("exact", o.exact);
        o.sweeps = b.get<int>("sweeps", o.sweeps);
        o.chains = b.get<int>("chains", o.chains);
        o.burn_in = b.get<int>("burn_in", o.burn_in);
        o.double_hop_fraction = b.get<double>("double_hop_fraction", o.double_hop_fraction);
        o.kappa_enabled = b.get<bool>("kappa", o.kappa_enabled);
        o.theta_enabled = b.get<bool>("theta", o.theta_enabled);
        o.plain_gradient = b.get<bool>("plain_gradient", o.plain_gradient);
        o.adaptive_step = b.get<bool>("adaptive_step", o.adaptive_step);
        o.window = b.get<int>("window", o.window);
        o.tolerance = b.get<double>("tolerance", o.tolerance);
        o.checkpoint_every = b.get<int>("checkpoint_every", o.checkpoint_every);
        if (auto s = b.get<std::uint64_t>("seed")) {
            o.seed = *s;
            c.optimizer_seed_set = true;
        }
        b.finish();
        try {
            o.validate();
        } catch (const ConfigError& e) {
            throw ConfigError(std::string("optimizer: ") + e.what());
        }
        if (!(o.double_hop_fraction >= 0.0 && o.double_hop_fraction <= 1.0))
            throw ConfigError(b.name("double_hop_fraction") + ": must lie in [0, 1]");
    }
    {
        Block b = top.sub("active_space");
        if (b.present()) {
            ActiveSpaceSpec spec;
            const bool lists = b.has("active") || b.has("inactive_occupied") || b.has("inactive_virtual");
            const bool window = b.has("core") || b.has("n_active");
            if (lists && window)
                throw ConfigError("active_space: give orbital lists or core/n_active, not both");
            spec.inactive_occupied = b.get<std::vector<int>>("inactive_occupied", {});
            spec.active = b.get<std::vector<int>>("active", {});
            spec.inactive_virtual = b.get<std::vector<int>>("inactive_virtual", {});
            const int core = b.get<int>("core", -1);
            const int n_active = b.get<int>("n_active", -1);
            b.finish();
            if (window) {
                if (core < 0 || n_active < 0)
                    throw ConfigError("active_space: core and n_active are both required");
                spec.inactive_occupied.clear();
                for (int p = 0; p < core; ++p) spec.inactive_occupied.push_back(p);
                for (int p = core; p < core + n_active; ++p) spec.active.push_back(p);
                // virtuals are filled once the orbital count is known
                spec.inactive_virtual = {-1};
            }
            c.active_space = spec;
        }
    }
    {
        Block b = top.sub("vqe");
        c.vqe_layers = b.get<int>("layers", c.vqe_layers);
        c.vqe_restarts = b.get<int>("restarts", c.vqe_restarts);
        b.finish();
        if (c.vqe_layers < 0) throw ConfigError("vqe.layers: must be non-negative");
        if (c.vqe_restarts < 1) throw ConfigError("vqe.restarts: must be at least 1");
    }
    {
        Block b = top.sub("scan");
        for (const auto& f : b.get<std::vector<std::string>>("fcidumps", {})) {
            c.scan_fcidumps.push_back(resolve(base_dir, f));
            require_file(c.scan_fcidumps.back(), b.name("fcidumps"));
        }
        c.scan_method = b.get<std::string>("method", c.scan_method);
        b.finish();
        if (c.scan_method != "vmc" && c.scan_method != "vqe" && c.scan_method != "exact")
            throw ConfigError("scan.method: expected vmc, vqe or exact");
    }
    {
        Block b = top.sub("restart_study");
        c.restart_layers = b.get<int>("layers", c.restart_layers);
        c.restart_inits = b.get<int>("inits", c.restart_inits);
        c.restart_thresholds = b.get<std::vector<double>>("thresholds", {});
        b.finish();
        if (c.restart_inits < 2) throw ConfigError("restart_study.inits: must be at least 2");
        if (c.restart_layers < 0) throw ConfigError("restart_study.layers: must be non-negative");
    }
    {
        Block b = top.sub("rotate");
        c.rotate_kappa = b.get<std::vector<double>>("kappa", {});
        c.rotate_random_scale = b.get<double>("random_scale");
        b.finish();
        if (!c.rotate_kappa.empty() && c.rotate_random_scale)
            throw ConfigError("rotate: give kappa or random_scale, not both");
    }
    top.finish();
    return c;
}

ExperimentConfig load_config(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read config file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path.parent_path().empty() ? fs::path(".") : path.parent_path());
}

void apply_overrides(ExperimentConfig& c, const Overrides& o) {
    if (o.command) c.command = *o.command;
    if (o.output) c.output = *o.output;
    if (o.seed) c.seed = *o.seed;
    if (o.threads) {
        if (*o.threads < 1) throw ConfigError("--threads: must be at least 1");
        c.threads = *o.threads;
    }
    if (o.exact_mode) c.optimizer.exact = true;
    if (!c.ansatz_seed_set) c.ansatz.seed = c.seed;
    if (!c.optimizer_seed_set) c.optimizer.seed = c.seed;
    c.optimizer.threads = c.threads;
}

int exit_code_for(const std::exception& e) noexcept {
    if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const ParseError*>(&e)) return kExitConfig;
    if (dynamic_cast<const CapacityError*>(&e)) return kExitCapacity;
    if (dynamic_cast<const ConvergenceError*>(&e)) return kExitConvergence;
    return kExitFailure;
}

// ---------------------------------------------------------------------------
// Reports

std::string sha256_hex(const std::string& bytes) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("sha256 failed");
    std::ostringstream os;
    for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
    return os.str();
}

std::string sha256_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return sha256_hex(ss.str());
}

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

void write_trajectory_csv(std::ostream& out, const Trajectory& t) {
    out << "step,energy,variance,error,force_theta,force_kappa,acceptance\n";
    for (const auto& r : t.records)
        out << r.step << ',' << num(r.energy) << ',' << num(r.variance) << ',' << num(r.error) << ','
            << num(r.force_theta) << ',' << num(r.force_kappa) << ',' << num(r.acceptance) << '\n';
}

void write_matrix_csv(std::ostream& out, const Eigen::MatrixXd& m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) out << (j ? "," : "") << num(m(i, j));
        out << '\n';
    }
}

namespace {

// Files are collected in memory and written only after the run succeeded.
class Outputs {
public:
    std::ostringstream& file(const std::string& name) { return files_[name]; }

    void commit(const fs::path& dir) const {
        fs::create_directories(dir);
        for (const auto& [name, content] : files_) {
            const fs::path target = dir / name;
            const fs::path tmp = dir / (name + ".tmp");
            {
                std::ofstream out(tmp, std::ios::binary);
                if (!out) throw std::runtime_error("cannot write " + tmp.string());
                out << content.str();
                if (!out) throw std::runtime_error("write failed for " + tmp.string());
            }
            fs::rename(tmp, target);
        }
    }

private:
    std::map<std::string, std::ostringstream> files_;
};

struct System {
    IntegralSet ints;
    Sector sector;
    std::string label;
};

System load_system(const SystemConfig& s) {
    System out;
    if (s.hubbard) {
        out.ints = hubbard_ring(*s.hubbard);
        if (!s.sector) throw ConfigError("system.sector: required for a Hubbard system");
        out.sector = Sector{s.hubbard->sites, s.sector->n_up, s.sector->n_down};
        out.label = "hubbard";
    } else if (!s.fcidump.empty()) {
        FcidumpData d = load_fcidump(s.fcidump.string());
        out.ints = std::move(d.integrals);
        out.sector = d.sector;
        if (s.sector && (s.sector->n_up != d.sector.n_up || s.sector->n_down != d.sector.n_down))
            throw ConfigError("system.sector: does not match the FCIDUMP header");
        out.label = s.fcidump.stem().string();
    } else {
        throw ConfigError("system: one of fcidump or hubbard is required");
    }
    try {
        out.sector.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("system.sector: ") + e.what());
    }
    return out;
}

std::optional<ActiveSpaceSpec> resolve_active(const std::optional<ActiveSpaceSpec>& spec, int n_orb) {
    if (!spec) return std::nullopt;
    ActiveSpaceSpec s = *spec;
    if (s.inactive_virtual == std::vector<int>{-1}) {
        s.inactive_virtual.clear();
        const int used = static_cast<int>(s.inactive_occupied.size() + s.active.size());
        if (used > n_orb) throw ConfigError("active_space: window exceeds the orbital count");
        for (int p = used; p < n_orb; ++p) s.inactive_virtual.push_back(p);
    }
    return s;
}

constexpr std::size_t kOracleDimensionLimit = 2'000'000;

std::optional<double> maybe_oracle(const ExperimentConfig& c, const IntegralSet& ints, const Sector& s) {
    if (!c.compute_oracle || s.dimension() > kOracleDimensionLimit) return std::nullopt;
    return oracle_energy(ints, s);
}

json opt_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

void parallel_for(int n, int threads, const std::function<void(int)>& f) {
    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex m;
    auto worker = [&] {
        for (int i = next++; i < n; i = next++) {
            try {
                f(i);
            } catch (...) {
                std::lock_guard lock(m);
                if (!error) error = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (int t = 1; t < std::min(threads, n); ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

void write_rotation(Outputs& out, int n_orb, const Eigen::VectorXd& kappa) {
    const OrbitalRotation rot(n_orb, kappa);
    write_matrix_csv(out.file("kappa.csv"), rot.kappa());
    write_matrix_csv(out.file("phi.csv"), rot.phi());
}

struct VmcOutcome {
    Trajectory trajectory;
    Eigen::Index n_params = 0;
};

VmcOutcome run_vmc(const ExperimentConfig& c, const IntegralSet& ints, const Sector& sector,
                   Outputs* out) {
    const HamiltonianModel model(ints, sector, resolve_active(c.active_space, ints.n_orb));
    AnsatzConfig ac = c.ansatz;
    ac.sector = model.variational_sector();
    std::unique_ptr<Ansatz> ansatz;
    try {
        ansatz = make_ansatz(ac);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("ansatz: ") + e.what());
    }
    const int every = std::max(1, c.optimizer.steps / 10);
    VmcOutcome res;
    res.n_params = ansatz->n_params();
    res.trajectory = run_optimization(*ansatz, model, c.optimizer, [&](const StepRecord& r) {
        if (r.step % every == 0) spdlog::info("step {:>6}  E = {:.10f}", r.step, r.energy);
    });
    if (out) {
        write_checkpoint(out->file("checkpoint.txt"), Checkpoint{ac, res.trajectory.params, res.trajectory.kappa});
        write_rotation(*out, ints.n_orb, res.trajectory.kappa);
    }
    return res;
}

struct VqeOutcome {
    VqeResult best;
    std::vector<VqeResult> all;
    std::vector<std::uint64_t> seeds;
};

VqeOutcome run_vqe_restarts(const ExperimentConfig& c, const IntegralSet& ints, const Sector& sector) {
    if (c.active_space) throw ConfigError("active_space: not supported for circuit runs");
    if (2 * ints.n_orb > kMaxQubits) throw CapacityError("too many qubits for the statevector");
    VqeOutcome out;
    out.all.resize(static_cast<std::size_t>(c.vqe_restarts));
    out.seeds.resize(out.all.size());
    parallel_for(c.vqe_restarts, c.threads, [&](int i) {
        const std::uint64_t seed = splitmix64(c.seed + static_cast<std::uint64_t>(i));
        out.seeds[static_cast<std::size_t>(i)] = seed;
        OptimizerConfig oc = c.optimizer;
        oc.threads = 1;
        out.all[static_cast<std::size_t>(i)] =
            vqe_run(ints, sector, random_cascade(2 * ints.n_orb, c.vqe_layers, seed), oc);
    });
    std::size_t best = 0;
    for (std::size_t i = 1; i < out.all.size(); ++i)
        if (out.all[i].trajectory.final_energy() < out.all[best].trajectory.final_energy()) best = i;
    out.best = out.all[best];
    return out;
}

void run_exact(const ExperimentConfig& c, const System& sys, Outputs& out, json& summary) {
    const SectorMatrix m = build_sector_hamiltonian(sys.ints, sys.sector);
    const Eigenpair g = ground_state(m);
    const RdmSet rdm = exact_rdms(g.vector, m.basis);
    summary["oracle_energy"] = g.energy;
    summary["dimension"] = m.basis.size();
    summary["rdm_energy"] = rdm.energy(sys.ints);
    std::ostream& v = out.file("ground_state.csv");
    v << "configuration,amplitude\n";
    for (std::size_t i = 0; i < m.basis.size(); ++i)
        v << to_string(m.basis[i], sys.sector.n_modes()) << ',' << num(g.vector[static_cast<Eigen::Index>(i)]) << '\n';
    (void)c;
}

void run_vmc_command(const ExperimentConfig& c, const System& sys, Outputs& out, json& summary) {
    const auto oracle = maybe_oracle(c, sys.ints, sys.sector);
    const VmcOutcome r = run_vmc(c, sys.ints, sys.sector, &out);
    write_trajectory_csv(out.file("trajectory.csv"), r.trajectory);
    summary["final_energy"] = r.trajectory.final_energy();
    summary["oracle_energy"] = opt_number(oracle);
    summary["error"] = oracle ? json(r.trajectory.final_energy() - *oracle) : json(nullptr);
    summary["converged"] = r.trajectory.converged;
    summary["steps"] = r.trajectory.records.size() - 1;
    summary["n_params"] = r.n_params;
    summary["ansatz"] = std::string(family_name(c.ansatz.family));
    summary["kappa_enabled"] = c.optimizer.kappa_enabled;
    if (c.active_space) {
        const HamiltonianModel model(sys.ints, sys.sector, resolve_active(c.active_space, sys.ints.n_orb));
        summary["active_sector"] = {model.variational_sector().n_orb, model.variational_sector().n_up,
                                    model.variational_sector().n_down};
        if (c.compute_oracle)
            summary["active_space_fixed_basis_energy"] =
                oracle_energy(model.working_integrals(), model.variational_sector());
    }
}

void run_vqe_command(const ExperimentConfig& c, const System& sys, Outputs& out, json& summary) {
    const auto oracle = maybe_oracle(c, sys.ints, sys.sector);
    const VqeOutcome r = run_vqe_restarts(c, sys.ints, sys.sector);
    std::ostream& rs = out.file("restarts.csv");
    rs << "restart,seed,energy,error,iterations,sector_weight,converged\n";
    for (std::size_t i = 0; i < r.all.size(); ++i) {
        const double e = r.all[i].trajectory.final_energy();
        rs << i << ',' << r.seeds[i] << ',' << num(e) << ',' << (oracle ? num(e - *oracle) : "") << ','
           << r.all[i].iterations << ',' << num(r.all[i].sector_weight) << ','
           << (r.all[i].trajectory.converged ? 1 : 0) << '\n';
    }
    write_trajectory_csv(out.file("trajectory.csv"), r.best.trajectory);
    write_rotation(out, sys.ints.n_orb, r.best.trajectory.kappa);
    std::ostream& a = out.file("angles.csv");
    a << "index,angle\n";
    for (Eigen::Index k = 0; k < r.best.params.angles.size(); ++k) a << k << ',' << num(r.best.params.angles[k]) << '\n';
    const double best = r.best.trajectory.final_energy();
    summary["final_energy"] = best;
    summary["oracle_energy"] = opt_number(oracle);
    summary["error"] = oracle ? json(best - *oracle) : json(nullptr);
    summary["sector_weight"] = r.best.sector_weight;
    summary["layers"] = c.vqe_layers;
    summary["restarts"] = c.vqe_restarts;
    summary["kappa_enabled"] = c.optimizer.kappa_enabled;
}

std::optional<double> manifest_parameter(const fs::path& fcidump) {
    const fs::path manifest = fcidump.parent_path() / "manifest.json";
    if (!fs::is_regular_file(manifest)) return std::nullopt;
    std::ifstream in(manifest);
    const json doc = json::parse(in, nullptr, false);
    if (doc.is_discarded() || !doc.contains("fixtures")) return std::nullopt;
    for (const auto& [key, entry] : doc["fixtures"].items()) {
        if (entry.value("file", "") != fcidump.filename().string()) continue;
        if (entry.contains("gamma_deg")) return entry["gamma_deg"].get<double>();
        if (entry.contains("bond")) return entry["bond"].get<double>();
    }
    return std::nullopt;
}

void run_scan(const ExperimentConfig& c, Outputs& out, json& summary, json& fixtures) {
    if (c.scan_fcidumps.empty()) throw ConfigError("scan.fcidumps: at least one file is required");
    std::ostream& csv = out.file("scan.csv");
    csv << "label,parameter,energy,oracle_energy,error,converged,steps\n";
    json rows = json::array();
    for (const auto& path : c.scan_fcidumps) {
        fixtures[path.string()] = sha256_file(path);
        FcidumpData d = load_fcidump(path.string());
        const auto oracle = maybe_oracle(c, d.integrals, d.sector);
        double energy = 0.0;
        bool converged = true;
        std::size_t steps = 0;
        spdlog::info("scan point {}", path.filename().string());
        if (c.scan_method == "exact") {
            if (!oracle) throw CapacityError("scan.method exact needs the oracle");
            energy = *oracle;
        } else if (c.scan_method == "vmc") {
            const VmcOutcome r = run_vmc(c, d.integrals, d.sector, nullptr);
            energy = r.trajectory.final_energy();
            converged = r.trajectory.converged;
            steps = r.trajectory.records.size() - 1;
        } else {
            const VqeOutcome r = run_vqe_restarts(c, d.integrals, d.sector);
            energy = r.best.trajectory.final_energy();
            converged = r.best.trajectory.converged;
            steps = static_cast<std::size_t>(r.best.iterations);
        }
        const auto param = manifest_parameter(path);
        csv << path.stem().string() << ',' << (param ? num(*param) : "") << ',' << num(energy) << ','
            << (oracle ? num(*oracle) : "") << ',' << (oracle ? num(energy - *oracle) : "") << ','
            << (converged ? 1 : 0) << ',' << steps << '\n';
        rows.push_back({{"label", path.stem().string()},
                        {"parameter", opt_number(param)},
                        {"energy", energy},
                        {"oracle_energy", opt_number(oracle)}});
    }
    summary["method"] = c.scan_method;
    summary["points"] = rows;
}

void run_restart_study(const ExperimentConfig& c, const System& sys, Outputs& out, json& summary) {
    if (c.active_space) throw ConfigError("active_space: not supported for circuit runs");
    const auto oracle = maybe_oracle(c, sys.ints, sys.sector);
    if (!oracle) throw CapacityError("restart-study needs the oracle energy");
    const auto rows = restart_study(sys.ints, sys.sector, *oracle, c.restart_layers, c.restart_inits,
                                    c.seed, c.optimizer, c.threads);
    std::vector<double> thresholds = c.restart_thresholds;
    if (thresholds.empty())
        for (int k = 0; k <= 16; ++k) thresholds.push_back(1e-4 * std::pow(10.0, k / 4.0));
    write_restart_csv(out.file("restarts.csv"), rows);
    write_cumulative_csv(out.file("cumulative.csv"), cumulative_fraction(rows, thresholds));
    const auto at10 = cumulative_fraction(rows, {1e-2}).front();
    double best_r = 1e300, best_f = 1e300;
    for (const auto& r : rows) {
        best_r = std::min(best_r, r.error_rotated);
        best_f = std::min(best_f, r.error_fixed);
    }
    summary["oracle_energy"] = *oracle;
    summary["inits"] = c.restart_inits;
    summary["layers"] = c.restart_layers;
    summary["fraction_within_10mHa_rotated"] = at10.fraction_rotated;
    summary["fraction_within_10mHa_fixed"] = at10.fraction_fixed;
    summary["best_error_rotated"] = best_r;
    summary["best_error_fixed"] = best_f;
}

void run_rotate(const ExperimentConfig& c, const System& sys, Outputs& out, json& summary) {
    const int n = sys.ints.n_orb;
    Eigen::VectorXd kappa = Eigen::VectorXd::Zero(kappa_param_count(n));
    if (!c.rotate_kappa.empty()) {
        if (static_cast<int>(c.rotate_kappa.size()) != kappa.size())
            throw ConfigError("rotate.kappa: expected " + std::to_string(kappa.size()) + " entries");
        for (Eigen::Index k = 0; k < kappa.size(); ++k) kappa[k] = c.rotate_kappa[static_cast<std::size_t>(k)];
    } else if (c.rotate_random_scale) {
        Rng rng(c.seed, 0x707A7E);
        for (Eigen::Index k = 0; k < kappa.size(); ++k) kappa[k] = *c.rotate_random_scale * rng.normal();
    }
    const OrbitalRotation rot(n, kappa);
    const IntegralSet rotated = rotate_integrals(sys.ints, rot.phi());
    write_fcidump(out.file("rotated.fcidump"), rotated, sys.sector);
    write_rotation(out, n, kappa);
    const auto before = maybe_oracle(c, sys.ints, sys.sector);
    const auto after = maybe_oracle(c, rotated, sys.sector);
    summary["oracle_energy"] = opt_number(before);
    summary["rotated_oracle_energy"] = opt_number(after);
    summary["orthogonality_error"] =
        (rot.phi().transpose() * rot.phi() - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
}

void run_diagnostics(const ExperimentConfig& c, const System& sys, json& summary) {
    const LocalHamiltonian ham(sys.ints);
    summary["n_orb"] = sys.ints.n_orb;
    summary["sector"] = {sys.sector.n_up, sys.sector.n_down};
    summary["dimension"] = sys.sector.dimension();
    summary["core_energy"] = sys.ints.core;
    summary["symmetry_violation"] = sys.ints.symmetry_violation();
    summary["two_body_nonzero"] = sys.ints.count_two_body_nonzero(1e-12);
    summary["reference_energy"] = ham.diagonal(sys.sector.reference());
    summary["oracle_energy"] = opt_number(maybe_oracle(c, sys.ints, sys.sector));
    AnsatzConfig ac = c.ansatz;
    const auto active = resolve_active(c.active_space, sys.ints.n_orb);
    ac.sector = active ? validate_spec(*active, sys.sector) : sys.sector;
    summary["ansatz"] = std::string(family_name(ac.family));
    summary["ansatz_params"] = parameter_count(ac);
}

} // namespace

void run_experiment(const ExperimentConfig& c) {
    if (std::find(kCommands.begin(), kCommands.end(), c.command) == kCommands.end())
        throw ConfigError("command: expected one of exact, vmc, vqe, scan, restart-study, rotate, diagnostics");
    const auto start = std::chrono::steady_clock::now();
    Outputs out;
    json summary;
    summary["command"] = c.command;
    summary["code_version"] = ORBROT_VERSION;
    summary["config_sha256"] = sha256_hex(c.source_text);
    summary["seed"] = c.seed;
    json fixtures = json::object();

    if (c.command == "scan") {
        run_scan(c, out, summary, fixtures);
    } else {
        const System sys = load_system(c.system);
        if (!c.system.fcidump.empty()) fixtures[c.system.fcidump.string()] = sha256_file(c.system.fcidump);
        summary["system"] = sys.label;
        if (c.command == "exact") run_exact(c, sys, out, summary);
        else if (c.command == "vmc") run_vmc_command(c, sys, out, summary);
        else if (c.command == "vqe") run_vqe_command(c, sys, out, summary);
        else if (c.command == "restart-study") run_restart_study(c, sys, out, summary);
        else if (c.command == "rotate") run_rotate(c, sys, out, summary);
        else run_diagnostics(c, sys, summary);
    }
    summary["fixtures"] = fixtures;
    summary["wall_time_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    out.file("summary.json") << summary.dump(2) << '\n';
    out.commit(c.output);
    spdlog::info("wrote reports to {}", c.output.string());
}

int main_entry(int argc, char** argv) {
    CLI::App app{"orbrot: variational ground states with orbital rotations"};
    app.require_subcommand(1, 1);
    std::string config_path;
    Overrides ov;
    std::string output;
    std::uint64_t seed = 0;
    int threads = 0;
    bool quiet = false;
    const std::vector<std::pair<std::string, std::string>> descriptions = {
        {"exact", "exact diagonalization of the configured sector"},
        {"vmc", "neural-state optimization with optional orbital rotations"},
        {"vqe", "Cascade circuit optimization with restarts"},
        {"scan", "run a method over a list of FCIDUMP files"},
        {"restart-study", "paired random-init circuit runs with and without rotations"},
        {"rotate", "rotate integrals by a given or random kappa"},
        {"diagnostics", "integral and sector statistics"},
    };
    for (const auto& [name, text] : descriptions) {
        CLI::App* sub = app.add_subcommand(name, text);
        sub->fallthrough();
    }
    app.add_option("--config", config_path, "YAML experiment config")->required();
    auto* out_opt = app.add_option("--output", output, "output directory");
    auto* seed_opt = app.add_option("--seed", seed, "global seed");
    auto* thr_opt = app.add_option("--threads", threads, "worker threads");
    app.add_flag("--exact-mode", ov.exact_mode, "enumerate the sector instead of sampling");
    app.add_flag("--quiet", quiet, "only warnings and errors on stderr");
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }
    if (!spdlog::get("orbrot")) spdlog::set_default_logger(spdlog::stderr_color_mt("orbrot"));
    spdlog::set_level(quiet ? spdlog::level::warn : spdlog::level::info);
    ov.command = app.get_subcommands().front()->get_name();
    if (*out_opt) ov.output = fs::path(output);
    if (*seed_opt) ov.seed = seed;
    if (*thr_opt) ov.threads = threads;
    try {
        ExperimentConfig c = load_config(config_path);
        apply_overrides(c, ov);
        run_experiment(c);
    } catch (const std::exception& e) {
        std::cerr << "orbrot: " << e.what() << '\n';
        return exit_code_for(e);
    }
    return kExitOk;
}

} // namespace orbrot::cli
