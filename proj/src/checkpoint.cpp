#include "bcpnn/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include "bcpnn/errors.hpp"

namespace bcpnn {

namespace {

static_assert(std::endian::native == std::endian::little,
              "checkpoint writer assumes a little-endian host");

constexpr char kMagic[4] = {'B', 'C', 'P', 'N'};

class Writer {
public:
    explicit Writer(std::vector<uint8_t>& out) : out_(out) {}
    void u32(uint32_t v) { raw(&v, 4); }
    void u64(uint64_t v) { raw(&v, 8); }
    void f64_array(const std::vector<double>& v) { raw(v.data(), v.size() * 8); }
    void bytes(const uint8_t* p, size_t n) { raw(p, n); }

private:
    void raw(const void* p, size_t n) {
        const uint8_t* b = static_cast<const uint8_t*>(p);
        out_.insert(out_.end(), b, b + n);
    }
    std::vector<uint8_t>& out_;
};

class Reader {
public:
    Reader(const std::vector<uint8_t>& in, const std::string& origin)
        : in_(in), origin_(origin) {}

    uint32_t u32() {
        uint32_t v;
        raw(&v, 4);
        return v;
    }
    uint64_t u64() {
        uint64_t v;
        raw(&v, 8);
        return v;
    }
    void f64_array(std::vector<double>& v, size_t n) {
        v.resize(n);
        raw(v.data(), n * 8);
    }
    void bytes(uint8_t* p, size_t n) { raw(p, n); }
    size_t offset() const { return off_; }
    bool exhausted() const { return off_ == in_.size(); }

    void raw(void* p, size_t n) {
        if (off_ + n > in_.size())
            throw DataError(origin_ + ": truncated checkpoint, need " + std::to_string(n) +
                            " bytes at offset " + std::to_string(off_));
        std::memcpy(p, in_.data() + off_, n);
        off_ += n;
    }

private:
    const std::vector<uint8_t>& in_;
    std::string origin_;
    size_t off_ = 0;
};

void write_projection_dims(Writer& w, const Projection& p) {
    w.u32(p.src().n_hc);
    w.u32(p.src().mc_per_hc);
    w.u32(p.tgt().n_hc);
    w.u32(p.tgt().mc_per_hc);
}

void check_projection_dims(Reader& r, const LayerSpec& src, const LayerSpec& tgt,
                           const std::string& origin, const char* name) {
    uint32_t d[4] = {r.u32(), r.u32(), r.u32(), r.u32()};
    if (d[0] != src.n_hc || d[1] != src.mc_per_hc || d[2] != tgt.n_hc || d[3] != tgt.mc_per_hc)
        throw DimensionError(origin + ": " + std::string(name) + " projection dims " +
                             std::to_string(d[0]) + "x" + std::to_string(d[1]) + " -> " +
                             std::to_string(d[2]) + "x" + std::to_string(d[3]) +
                             " disagree with the layer header");
}

} // namespace

std::vector<uint8_t> serialize_checkpoint(const Model& model) {
    std::vector<uint8_t> out;
    Writer w(out);

    w.bytes(reinterpret_cast<const uint8_t*>(kMagic), 4);
    w.u32(kCheckpointVersion);

    // header counts
    w.u32(model.input.n_hc);
    w.u32(model.input.mc_per_hc);
    w.u32(model.hidden.n_hc);
    w.u32(model.hidden.mc_per_hc);
    w.u32(model.output.n_hc);
    w.u32(model.output.mc_per_hc);
    w.u32(model.clf.has_value() ? 1u : 0u);
    w.u32(model.epochs_unsup_done);
    w.u32(model.epochs_sup_done);
    w.u32(uint32_t(model.samples_seen & 0xffffffffu));
    w.u32(uint32_t(model.samples_seen >> 32));
    write_projection_dims(w, model.ih);
    if (model.clf) {
        write_projection_dims(w, model.clf->go);
        write_projection_dims(w, model.clf->nogo);
        w.u32(uint32_t(model.clf->mode));
        w.u32(uint32_t(model.clf->trace_updates & 0xffffffffu));
        w.u32(uint32_t(model.clf->trace_updates >> 32));
    }
    w.u32(uint32_t(model.structural.in_degree.size()));
    for (uint32_t d : model.structural.in_degree) w.u32(d);

    // trace and gain arrays, declaration order
    w.f64_array(model.ih.traces.p_src);
    w.f64_array(model.ih.traces.p_tgt);
    w.f64_array(model.ih.traces.p_joint);
    w.f64_array(model.regulator.k_beta);
    if (model.clf) {
        w.f64_array(model.clf->go.traces.p_src);
        w.f64_array(model.clf->go.traces.p_tgt);
        w.f64_array(model.clf->go.traces.p_joint);
        w.f64_array(model.clf->nogo.traces.p_src);
        w.f64_array(model.clf->nogo.traces.p_tgt);
        w.f64_array(model.clf->nogo.traces.p_joint);
    }

    // masks (classifier projections are fully connected; only ih is stored)
    w.bytes(model.ih.mask().data(), model.ih.mask().size());

    w.u64(model.rng.state());

    const std::string echo = serialize(model.cfg);
    w.u32(uint32_t(echo.size()));
    w.bytes(reinterpret_cast<const uint8_t*>(echo.data()), echo.size());
    return out;
}

Model parse_checkpoint(const std::vector<uint8_t>& bytes, const std::string& origin) {
    Reader r(bytes, origin);

    char magic[4];
    r.raw(magic, 4);
    if (std::memcmp(magic, kMagic, 4) != 0)
        throw DataError(origin + ": bad magic at offset 0, not a checkpoint");
    const uint32_t version = r.u32();
    if (version != kCheckpointVersion)
        throw DataError(origin + ": unsupported checkpoint version " + std::to_string(version) +
                        " (expected " + std::to_string(kCheckpointVersion) + ")");

    Model m;
    m.input = LayerSpec{r.u32(), r.u32()};
    m.hidden = LayerSpec{r.u32(), r.u32()};
    m.output = LayerSpec{r.u32(), r.u32()};
    m.input.validate("checkpoint input layer");
    m.hidden.validate("checkpoint hidden layer");
    m.output.validate("checkpoint output layer");
    const bool has_clf = r.u32() != 0;
    m.epochs_unsup_done = r.u32();
    m.epochs_sup_done = r.u32();
    const uint64_t samples_lo = r.u32();
    const uint64_t samples_hi = r.u32();
    m.samples_seen = samples_lo | (samples_hi << 32);

    m.ih = Projection(m.input, m.hidden, +1.0);
    check_projection_dims(r, m.input, m.hidden, origin, "input->hidden");

    uint32_t clf_mode = 0;
    uint64_t clf_updates = 0;
    if (has_clf) {
        check_projection_dims(r, m.hidden, m.output, origin, "go");
        check_projection_dims(r, m.hidden, m.output, origin, "nogo");
        clf_mode = r.u32();
        if (clf_mode > 2) throw DataError(origin + ": bad classifier mode " + std::to_string(clf_mode));
        const uint64_t lo = r.u32(), hi = r.u32();
        clf_updates = lo | (hi << 32);
    }

    const uint32_t n_deg = r.u32();
    if (n_deg != m.hidden.n_hc)
        throw DimensionError(origin + ": in-degree count " + std::to_string(n_deg) +
                             " != hidden HC count " + std::to_string(m.hidden.n_hc));
    m.structural.in_degree.resize(n_deg);
    for (auto& d : m.structural.in_degree) d = r.u32();

    r.f64_array(m.ih.traces.p_src, m.input.units());
    r.f64_array(m.ih.traces.p_tgt, m.hidden.units());
    r.f64_array(m.ih.traces.p_joint, ProbabilityTraces::joint_size(m.input, m.hidden));
    std::vector<double> k_beta;
    r.f64_array(k_beta, m.hidden.units());

    if (has_clf) {
        m.clf = GoNoGoClassifier();
        m.clf->mode = ClassifierMode(clf_mode);
        m.clf->trace_updates = clf_updates;
        m.clf->go = Projection(m.hidden, m.output, +1.0);
        m.clf->nogo = Projection(m.hidden, m.output, -1.0);
        for (auto& g : m.clf->nogo.bias_gain) g = 0.0;
        r.f64_array(m.clf->go.traces.p_src, m.hidden.units());
        r.f64_array(m.clf->go.traces.p_tgt, m.output.units());
        r.f64_array(m.clf->go.traces.p_joint, ProbabilityTraces::joint_size(m.hidden, m.output));
        r.f64_array(m.clf->nogo.traces.p_src, m.hidden.units());
        r.f64_array(m.clf->nogo.traces.p_tgt, m.output.units());
        r.f64_array(m.clf->nogo.traces.p_joint, ProbabilityTraces::joint_size(m.hidden, m.output));
    }

    r.bytes(m.ih.mask_mut().data(), m.ih.mask_mut().size());
    for (uint8_t b : m.ih.mask())
        if (b > 1) throw DataError(origin + ": mask byte out of range");
    if (m.ih.in_degrees() != m.structural.in_degree)
        throw DataError(origin + ": mask in-degrees disagree with stored in-degree table");

    m.rng.set_state(r.u64());

    const uint32_t echo_len = r.u32();
    std::string echo(echo_len, '\0');
    r.bytes(reinterpret_cast<uint8_t*>(echo.data()), echo_len);
    if (!r.exhausted())
        throw DataError(origin + ": trailing bytes at offset " + std::to_string(r.offset()));
    m.cfg = parse_config_text(echo, origin + ":config-echo");

    if (m.hidden.n_hc != m.cfg.hidden_hcs || m.hidden.mc_per_hc != m.cfg.hidden_mcs)
        throw DimensionError(origin + ": hidden layer " + std::to_string(m.hidden.n_hc) + "x" +
                             std::to_string(m.hidden.mc_per_hc) +
                             " does not match its config echo " +
                             std::to_string(m.cfg.hidden_hcs) + "x" +
                             std::to_string(m.cfg.hidden_mcs));

    // config-derived runtime state
    m.structural.n_flips = m.cfg.n_flips;
    m.structural.flip_interval = m.cfg.flip_interval;
    m.ih.traces.tau_p = m.cfg.n_epochs_unsup > 0 ? m.cfg.tau_p_unsup() : 1.0;
    m.ih.traces.k_p = m.epochs_unsup_done >= m.cfg.n_epochs_unsup ? 0.0 : 1.0;
    m.regulator = BiasRegulator(m.hidden, m.cfg.k_half,
                                m.cfg.n_epochs_unsup > 0 ? m.cfg.tau_k_unsup() : 1.0);
    m.regulator.k_beta = std::move(k_beta);
    m.ih.bias_gain = m.regulator.k_beta;
    if (m.clf) {
        const double tau = m.cfg.n_epochs_sup > 0 ? m.cfg.tau_p_sup() : 1.0;
        m.clf->go.traces.tau_p = tau;
        m.clf->nogo.traces.tau_p = tau;
        m.clf->go.sync_parameters(m.cfg.eps_prob);
        m.clf->nogo.sync_parameters(m.cfg.eps_prob);
    }
    return m;
}

void save_checkpoint(const Model& model, const std::string& path) {
    const std::vector<uint8_t> bytes = serialize_checkpoint(model);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write checkpoint '" + path + "'");
    out.write(reinterpret_cast<const char*>(bytes.data()), std::streamsize(bytes.size()));
    if (!out) throw DataError("short write on checkpoint '" + path + "'");
}

Model load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open checkpoint '" + path + "'");
    std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                               std::istreambuf_iterator<char>());
    return parse_checkpoint(bytes, path);
}

} // namespace bcpnn
