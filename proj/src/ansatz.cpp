// Copyright 2026 The orbrot Authors
// SPDX-License-Identifier: Apache-2.0

#include "orbrot/ansatz.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "orbrot/errors.hpp"
#include "orbrot/rng.hpp"

namespace orbrot {

namespace {

constexpr Complex kI{0.0, 1.0};

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstMap = Eigen::Map<const RowMatrix>;
using ConstVec = Eigen::Map<const Eigen::VectorXd>;

Complex real_log(double v) {
    if (v == 0.0 || !std::isfinite(v)) return {kNodeLogModulus, 0.0};
    return {std::log(std::abs(v)), v < 0 ? std::numbers::pi : 0.0};
}

// log cosh for complex arguments without overflow
Complex log_cosh(Complex z) {
    if (z.real() < 0) z = -z;
    return z + std::log(1.0 + std::exp(-2.0 * z)) - std::numbers::ln2;
}

std::vector<int> occupied_modes(Configuration c) {
    std::vector<int> out;
    for (Bits b = c.bits; b; b &= b - 1) out.push_back(std::countr_zero(b));
    return out;
}

struct LogDet {
    Complex value;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu;
    bool singular = false;
};

LogDet log_det(const Eigen::MatrixXd& a) {
    LogDet r;
    if (a.rows() == 0) {
        r.value = 0.0;
        return r;
    }
    r.lu.compute(a);
    const auto& m = r.lu.matrixLU();
    double logmod = 0.0;
    int sign = r.lu.permutationP().determinant();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        const double d = m(i, i);
        if (d == 0.0 || !std::isfinite(d)) {
            r.singular = true;
            r.value = {kNodeLogModulus, 0.0};
            return r;
        }
        logmod += std::log(std::abs(d));
        if (d < 0) sign = -sign;
    }
    r.value = {logmod, sign < 0 ? std::numbers::pi : 0.0};
    return r;
}

// ---------------------------------------------------------------------------

class Ffn final : public Ansatz {
public:
    explicit Ffn(AnsatzConfig c) : Ansatz(std::move(c)), v_(n_modes()), h_(config_.alpha * v_) {}

    Eigen::Index n_params() const override {
        return static_cast<Eigen::Index>(h_) * v_ + 2 * h_ + 1 +
               (config_.trainable_output_scale ? 1 : 0);
    }

    Complex log_amplitude(Configuration c, const ParamVector& p) const override {
        check(c, p);
        const Eigen::VectorXd x = encode(c);
        const Eigen::VectorXd a = w1(p) * x + b1(p);
        const double z = w2(p).dot(a.cwiseMax(0.0)) + b2(p);
        return real_log(output_scale(p) * std::tanh(z));
    }

    Complex log_derivatives(Configuration c, const ParamVector& p,
                            Eigen::VectorXcd& out) const override {
        check(c, p);
        const Eigen::VectorXd x = encode(c);
        const Eigen::VectorXd a = w1(p) * x + b1(p);
        const Eigen::VectorXd hid = a.cwiseMax(0.0);
        const double z = w2(p).dot(hid) + b2(p);
        const double t = std::tanh(z);
        const double s = output_scale(p);
        if (t == 0.0 || s == 0.0) throw NodeError("FFN amplitude vanishes");
        const double dz = (1.0 - t * t) / t;

        Eigen::VectorXd g(n_params());
        const Eigen::Index hv = static_cast<Eigen::Index>(h_) * v_;
        Eigen::VectorXd delta(h_);
        for (int k = 0; k < h_; ++k) delta[k] = a[k] > 0.0 ? dz * w2(p)[k] : 0.0;
        Eigen::Map<RowMatrix>(g.data(), h_, v_) = delta * x.transpose();
        g.segment(hv, h_) = delta;
        g.segment(hv + h_, h_) = dz * hid;
        g[hv + 2 * h_] = dz;
        if (config_.trainable_output_scale) g[hv + 2 * h_ + 1] = 1.0 / s;
        out = g.cast<Complex>();
        return real_log(s * t);
    }

    ParamVector init_params() const override {
        Rng rng(config_.seed, 0x46464eULL);
        ParamVector p(n_params());
        for (auto& x : p) x = config_.scale * rng.normal();
        if (config_.trainable_output_scale) p[p.size() - 1] = 1.0;
        return p;
    }

private:
    ConstMap w1(const ParamVector& p) const { return {p.data(), h_, v_}; }
    ConstVec b1(const ParamVector& p) const {
        return {p.data() + static_cast<Eigen::Index>(h_) * v_, h_};
    }
    ConstVec w2(const ParamVector& p) const {
        return {p.data() + static_cast<Eigen::Index>(h_) * v_ + h_, h_};
    }
    double b2(const ParamVector& p) const { return p[static_cast<Eigen::Index>(h_) * v_ + 2 * h_]; }
    double output_scale(const ParamVector& p) const {
        return config_.trainable_output_scale ? p[p.size() - 1] : 1.0;
    }

    int v_, h_;
};

// ---------------------------------------------------------------------------

class Rbm final : public Ansatz {
public:
    explicit Rbm(AnsatzConfig c) : Ansatz(std::move(c)), v_(n_modes()), h_(config_.alpha * v_) {}

    Eigen::Index n_params() const override {
        return 2 * (v_ + h_ + static_cast<Eigen::Index>(h_) * v_);
    }

    Complex log_amplitude(Configuration c, const ParamVector& p) const override {
        check(c, p);
        const Eigen::VectorXd x = encode(c);
        const auto& [a, b, w] = unpack(p);
        const Eigen::VectorXcd theta = b + w * x;
        Complex r = (a.array() * x.array().cast<Complex>()).sum();
        for (Eigen::Index j = 0; j < theta.size(); ++j) r += log_cosh(theta[j]);
        return finite_or_node(r);
    }

    Complex log_derivatives(Configuration c, const ParamVector& p,
                            Eigen::VectorXcd& out) const override {
        check(c, p);
        const Eigen::VectorXd x = encode(c);
        const auto& [a, b, w] = unpack(p);
        const Eigen::VectorXcd theta = b + w * x;
        Complex r = (a.array() * x.array().cast<Complex>()).sum();
        for (Eigen::Index j = 0; j < theta.size(); ++j) r += log_cosh(theta[j]);
        r = finite_or_node(r);
        if (is_node(r)) throw NodeError("RBM amplitude vanishes");

        Eigen::VectorXcd th = theta.array().tanh();
        out.resize(n_params());
        Eigen::Index k = 0;
        auto put = [&](Complex o) {
            out[k++] = o;
            out[k++] = kI * o;
        };
        for (int i = 0; i < v_; ++i) put(x[i]);
        for (int j = 0; j < h_; ++j) put(th[j]);
        for (int j = 0; j < h_; ++j)
            for (int i = 0; i < v_; ++i) put(th[j] * x[i]);
        return r;
    }

    ParamVector init_params() const override {
        Rng rng(config_.seed, 0x52424dULL);
        ParamVector p(n_params());
        for (auto& x : p) x = config_.scale * rng.normal();
        return p;
    }

private:
    struct Unpacked {
        Eigen::VectorXcd a, b;
        Eigen::MatrixXcd w;
    };

    Unpacked unpack(const ParamVector& p) const {
        Unpacked u{Eigen::VectorXcd(v_), Eigen::VectorXcd(h_), Eigen::MatrixXcd(h_, v_)};
        Eigen::Index k = 0;
        auto get = [&]() {
            const Complex z(p[k], p[k + 1]);
            k += 2;
            return z;
        };
        for (int i = 0; i < v_; ++i) u.a[i] = get();
        for (int j = 0; j < h_; ++j) u.b[j] = get();
        for (int j = 0; j < h_; ++j)
            for (int i = 0; i < v_; ++i) u.w(j, i) = get();
        return u;
    }

    static Complex finite_or_node(Complex r) {
        if (!std::isfinite(r.real()) || !std::isfinite(r.imag())) return {kNodeLogModulus, 0.0};
        return r;
    }

    int v_, h_;
};

// ---------------------------------------------------------------------------

// Reference occupation: lowest n_up up modes and lowest n_down down modes.
std::vector<int> reference_modes(const Sector& s) {
    return occupied_modes(s.reference());
}

class SlaterJastrow final : public Ansatz {
public:
    explicit SlaterJastrow(AnsatzConfig c)
        : Ansatz(std::move(c)), v_(n_modes()), n_(config_.sector.n_elec()),
          h_(config_.alpha * v_) {}

    Eigen::Index n_params() const override {
        return static_cast<Eigen::Index>(v_) * n_ + static_cast<Eigen::Index>(h_) * v_ + 2 * h_;
    }

    Complex log_amplitude(Configuration c, const ParamVector& p) const override {
        check(c, p);
        const auto occ = occupied_modes(c);
        const auto ld = log_det(slater(p, occ));
        if (ld.singular) return ld.value;
        const Eigen::VectorXd x = encode(c);
        const Eigen::VectorXd t = (w1(p) * x + b1(p)).array().tanh();
        return ld.value + w2(p).dot(t);
    }

    Complex log_derivatives(Configuration c, const ParamVector& p,
                            Eigen::VectorXcd& out) const override {
        check(c, p);
        const auto occ = occupied_modes(c);
        const auto ld = log_det(slater(p, occ));
        if (ld.singular) throw NodeError("Slater determinant is singular");
        const Eigen::VectorXd x = encode(c);
        const Eigen::VectorXd t = (w1(p) * x + b1(p)).array().tanh();

        Eigen::VectorXd g = Eigen::VectorXd::Zero(n_params());
        if (n_ > 0) {
            const Eigen::MatrixXd inv = ld.lu.inverse();
            for (int i = 0; i < n_; ++i)
                for (int k = 0; k < n_; ++k)
                    g[static_cast<Eigen::Index>(occ[i]) * n_ + k] = inv(k, i);
        }
        const Eigen::Index off = static_cast<Eigen::Index>(v_) * n_;
        const Eigen::VectorXd delta =
            w2(p).array() * (1.0 - t.array().square());
        Eigen::Map<RowMatrix>(g.data() + off, h_, v_) = delta * x.transpose();
        g.segment(off + static_cast<Eigen::Index>(h_) * v_, h_) = delta;
        g.segment(off + static_cast<Eigen::Index>(h_) * v_ + h_, h_) = t;
        out = g.cast<Complex>();
        return ld.value + w2(p).dot(t);
    }

    ParamVector init_params() const override {
        Rng rng(config_.seed, 0x534a57ULL);
        ParamVector p(n_params());
        for (auto& x : p) x = config_.scale * rng.normal();
        const auto ref = reference_modes(config_.sector);
        for (int k = 0; k < n_; ++k) p[static_cast<Eigen::Index>(ref[k]) * n_ + k] += 1.0;
        return p;
    }

private:
    Eigen::MatrixXd slater(const ParamVector& p, const std::vector<int>& occ) const {
        const ConstMap xi(p.data(), v_, n_);
        Eigen::MatrixXd a(n_, n_);
        for (int i = 0; i < n_; ++i) a.row(i) = xi.row(occ[i]);
        return a;
    }
    ConstMap w1(const ParamVector& p) const {
        return {p.data() + static_cast<Eigen::Index>(v_) * n_, h_, v_};
    }
    ConstVec b1(const ParamVector& p) const {
        return {p.data() + static_cast<Eigen::Index>(v_) * n_ + static_cast<Eigen::Index>(h_) * v_,
                h_};
    }
    ConstVec w2(const ParamVector& p) const {
        return {p.data() + static_cast<Eigen::Index>(v_) * n_ +
                    static_cast<Eigen::Index>(h_) * v_ + h_,
                h_};
    }

    int v_, n_, h_;
};

// ---------------------------------------------------------------------------

class Backflow final : public Ansatz {
public:
    explicit Backflow(AnsatzConfig c)
        : Ansatz(std::move(c)), v_(n_modes()), n_(config_.sector.n_elec()),
          h_(config_.alpha * v_),
          block_(static_cast<Eigen::Index>(h_) * v_ + h_ + static_cast<Eigen::Index>(n_) * h_ + n_) {}

    Eigen::Index n_params() const override { return block_ * v_; }

    Complex log_amplitude(Configuration c, const ParamVector& p) const override {
        check(c, p);
        const auto occ = occupied_modes(c);
        const Eigen::VectorXd x = encode(c);
        Eigen::MatrixXd a(n_, n_);
        for (int i = 0; i < n_; ++i) {
            const Eigen::VectorXd t = (w1(p, occ[i]) * x + b1(p, occ[i])).array().tanh();
            a.row(i) = (w2(p, occ[i]) * t + b2(p, occ[i])).transpose();
        }
        return log_det(a).value;
    }

    Complex log_derivatives(Configuration c, const ParamVector& p,
                            Eigen::VectorXcd& out) const override {
        check(c, p);
        const auto occ = occupied_modes(c);
        const Eigen::VectorXd x = encode(c);
        Eigen::MatrixXd a(n_, n_);
        std::vector<Eigen::VectorXd> hidden(static_cast<std::size_t>(n_));
        for (int i = 0; i < n_; ++i) {
            hidden[i] = (w1(p, occ[i]) * x + b1(p, occ[i])).array().tanh();
            a.row(i) = (w2(p, occ[i]) * hidden[i] + b2(p, occ[i])).transpose();
        }
        const auto ld = log_det(a);
        if (ld.singular) throw NodeError("backflow determinant is singular");

        Eigen::VectorXd g = Eigen::VectorXd::Zero(n_params());
        if (n_ > 0) {
            const Eigen::MatrixXd inv = ld.lu.inverse();
            for (int i = 0; i < n_; ++i) {
                const Eigen::VectorXd grow = inv.col(i);  // d log det / d a(i, k) = inv(k, i)
                const Eigen::Index base = block_ * occ[i];
                const auto& t = hidden[i];
                const Eigen::VectorXd delta =
                    (w2(p, occ[i]).transpose() * grow).array() * (1.0 - t.array().square());
                Eigen::Map<RowMatrix>(g.data() + base, h_, v_) = delta * x.transpose();
                const Eigen::Index o1 = base + static_cast<Eigen::Index>(h_) * v_;
                g.segment(o1, h_) = delta;
                Eigen::Map<RowMatrix>(g.data() + o1 + h_, n_, h_) = grow * t.transpose();
                g.segment(o1 + h_ + static_cast<Eigen::Index>(n_) * h_, n_) = grow;
            }
        }
        out = g.cast<Complex>();
        return ld.value;
    }

    ParamVector init_params() const override {
        Rng rng(config_.seed, 0x4e4e4246ULL);
        ParamVector p(n_params());
        for (auto& x : p) x = config_.scale * rng.normal();
        const auto ref = reference_modes(config_.sector);
        for (int k = 0; k < n_; ++k) p[b2_offset(ref[k]) + k] += 1.0;
        return p;
    }

private:
    Eigen::Index b2_offset(int m) const {
        return block_ * m + static_cast<Eigen::Index>(h_) * v_ + h_ +
               static_cast<Eigen::Index>(n_) * h_;
    }
    ConstMap w1(const ParamVector& p, int m) const { return {p.data() + block_ * m, h_, v_}; }
    ConstVec b1(const ParamVector& p, int m) const {
        return {p.data() + block_ * m + static_cast<Eigen::Index>(h_) * v_, h_};
    }
    ConstMap w2(const ParamVector& p, int m) const {
        return {p.data() + block_ * m + static_cast<Eigen::Index>(h_) * v_ + h_, n_, h_};
    }
    ConstVec b2(const ParamVector& p, int m) const { return {p.data() + b2_offset(m), n_}; }

    int v_, n_, h_;
    Eigen::Index block_;
};

// ---------------------------------------------------------------------------

class Table final : public Ansatz {
public:
    explicit Table(AnsatzConfig c) : Ansatz(std::move(c)), basis_(config_.sector) {}

    Eigen::Index n_params() const override { return static_cast<Eigen::Index>(basis_.size()); }

    Complex log_amplitude(Configuration c, const ParamVector& p) const override {
        check(c, p);
        return real_log(p[index(c)]);
    }

    Complex log_derivatives(Configuration c, const ParamVector& p,
                            Eigen::VectorXcd& out) const override {
        check(c, p);
        const auto i = index(c);
        if (p[i] == 0.0) throw NodeError("table amplitude vanishes");
        out = Eigen::VectorXcd::Zero(n_params());
        out[i] = 1.0 / p[i];
        return real_log(p[i]);
    }

    ParamVector init_params() const override {
        return ParamVector::Constant(n_params(), 1.0 / std::sqrt(static_cast<double>(n_params())));
    }

private:
    Eigen::Index index(Configuration c) const {
        return static_cast<Eigen::Index>(*basis_.index_of(c));
    }

    SectorBasis basis_;
};

} // namespace

// ---------------------------------------------------------------------------

std::string_view family_name(Family f) noexcept {
    switch (f) {
    case Family::FFN: return "FFN";
    case Family::RBM: return "RBM";
    case Family::SlaterNNJastrow: return "SlaterNNJastrow";
    case Family::NNBackflow: return "NNBackflow";
    case Family::Table: return "Table";
    }
    return "?";
}

Family family_from_name(std::string_view name) {
    for (Family f : {Family::FFN, Family::RBM, Family::SlaterNNJastrow, Family::NNBackflow,
                     Family::Table})
        if (family_name(f) == name) return f;
    throw std::invalid_argument("unknown ansatz family: " + std::string(name));
}

void AnsatzConfig::validate() const {
    sector.validate();
    if (alpha < 1) throw std::invalid_argument("alpha must be at least 1");
    if (!(scale >= 0.0) || !std::isfinite(scale))
        throw std::invalid_argument("parameter scale must be finite and non-negative");
}

Ansatz::Ansatz(AnsatzConfig config) : config_(std::move(config)) { config_.validate(); }

void Ansatz::check(Configuration c, const ParamVector& p) const {
    if (p.size() != n_params()) throw std::invalid_argument("parameter vector has wrong length");
    if (!config_.sector.contains(c)) throw std::invalid_argument("configuration outside sector");
}

Eigen::VectorXd Ansatz::encode(Configuration c) const {
    Eigen::VectorXd x(n_modes());
    for (int i = 0; i < n_modes(); ++i) x[i] = c.occupied(i) ? 1.0 : -1.0;
    return x;
}

std::unique_ptr<Ansatz> make_ansatz(const AnsatzConfig& config) {
    switch (config.family) {
    case Family::FFN: return std::make_unique<Ffn>(config);
    case Family::RBM: return std::make_unique<Rbm>(config);
    case Family::SlaterNNJastrow: return std::make_unique<SlaterJastrow>(config);
    case Family::NNBackflow: return std::make_unique<Backflow>(config);
    case Family::Table: return std::make_unique<Table>(config);
    }
    throw std::invalid_argument("unknown ansatz family");
}

std::unique_ptr<Ansatz> make_table_ansatz(const Sector& sector) {
    AnsatzConfig c;
    c.family = Family::Table;
    c.sector = sector;
    return make_ansatz(c);
}

Eigen::Index parameter_count(const AnsatzConfig& config) {
    return make_ansatz(config)->n_params();
}

// ---------------------------------------------------------------------------

namespace {

std::string hex(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%a", v);
    return buf;
}

double parse_hex(const std::string& s) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0') throw ParseError("bad checkpoint number: " + s);
    return v;
}

void write_vector(std::ostream& out, const char* tag, const Eigen::VectorXd& v) {
    out << tag << ' ' << v.size() << '\n';
    for (double x : v) out << hex(x) << '\n';
}

Eigen::VectorXd read_vector(std::istream& in, const char* tag) {
    std::string key;
    Eigen::Index n = 0;
    if (!(in >> key >> n) || key != tag || n < 0)
        throw ParseError(std::string("checkpoint: expected ") + tag);
    Eigen::VectorXd v(n);
    std::string tok;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (!(in >> tok)) throw ParseError("checkpoint truncated");
        v[i] = parse_hex(tok);
    }
    return v;
}

template <typename T>
T read_field(std::istream& in, const char* tag) {
    std::string key;
    T value{};
    if (!(in >> key >> value) || key != tag)
        throw ParseError(std::string("checkpoint: expected ") + tag);
    return value;
}

} // namespace

void write_checkpoint(std::ostream& out, const Checkpoint& cp) {
    const auto& c = cp.config;
    out << "orbrot-checkpoint 1\n"
        << "family " << family_name(c.family) << '\n'
        << "alpha " << c.alpha << '\n'
        << "sector " << c.sector.n_orb << ' ' << c.sector.n_up << ' ' << c.sector.n_down << '\n'
        << "scale " << hex(c.scale) << '\n'
        << "seed " << c.seed << '\n'
        << "output_scale " << (c.trainable_output_scale ? 1 : 0) << '\n';
    write_vector(out, "params", cp.params);
    write_vector(out, "kappa", cp.kappa);
}

Checkpoint read_checkpoint(std::istream& in) {
    if (read_field<std::string>(in, "orbrot-checkpoint") != "1")
        throw ParseError("unsupported checkpoint version");
    Checkpoint cp;
    auto& c = cp.config;
    try {
        c.family = family_from_name(read_field<std::string>(in, "family"));
    } catch (const std::invalid_argument& e) {
        throw ParseError(e.what());
    }
    c.alpha = read_field<int>(in, "alpha");
    std::string key;
    if (!(in >> key >> c.sector.n_orb >> c.sector.n_up >> c.sector.n_down) || key != "sector")
        throw ParseError("checkpoint: expected sector");
    c.scale = parse_hex(read_field<std::string>(in, "scale"));
    c.seed = read_field<std::uint64_t>(in, "seed");
    c.trainable_output_scale = read_field<int>(in, "output_scale") != 0;
    cp.params = read_vector(in, "params");
    cp.kappa = read_vector(in, "kappa");
    if (cp.params.size() != parameter_count(c))
        throw ParseError("checkpoint parameter count does not match its configuration");
    return cp;
}

void save_checkpoint(const std::string& path, const Checkpoint& cp) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp);
        if (!out) throw std::runtime_error("cannot write " + tmp);
        write_checkpoint(out, cp);
        if (!out) throw std::runtime_error("write failed: " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return read_checkpoint(in);
}

} // namespace orbrot
