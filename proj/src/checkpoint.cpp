#include "graphrl/checkpoint.hpp"

#include <array>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

namespace graphrl {

namespace {

constexpr std::array<char, 4> kMagic{'G', 'R', 'L', 'Q'};

template <typename T>
void put(std::ostream& out, T value) {
    out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

void put_matrices(std::ostream& out, const PolicyParams<float>& p) {
    for (const auto* m : p.tensors()) {
        put<std::uint64_t>(out, m->rows);
        put<std::uint64_t>(out, m->cols);
        out.write(reinterpret_cast<const char*>(m->data.data()),
                  static_cast<std::streamsize>(m->data.size() * sizeof(float)));
    }
}

class Reader {
public:
    Reader(std::istream& in, const std::string& name) : in_(in), name_(name) {}

    template <typename T>
    T get(const char* what) {
        T value{};
        if (!in_.read(reinterpret_cast<char*>(&value), sizeof(T))) fail(std::string("truncated ") + what);
        return value;
    }

    void matrices(PolicyParams<float>& p) {
        int index = 1;
        for (auto* m : p.tensors()) {
            const auto rows = get<std::uint64_t>("matrix header");
            const auto cols = get<std::uint64_t>("matrix header");
            if (rows != m->rows || cols != m->cols) {
                fail("theta" + std::to_string(index) + " is " + std::to_string(rows) + "x" +
                     std::to_string(cols) + ", expected " + std::to_string(m->rows) + "x" +
                     std::to_string(m->cols));
            }
            if (!in_.read(reinterpret_cast<char*>(m->data.data()),
                          static_cast<std::streamsize>(m->data.size() * sizeof(float)))) {
                fail("truncated theta" + std::to_string(index));
            }
            ++index;
        }
    }

    [[noreturn]] void fail(const std::string& msg) const { throw DataError(name_ + ": " + msg); }

private:
    std::istream& in_;
    const std::string& name_;
};

}  // namespace

void write_checkpoint(std::ostream& out, const Checkpoint& ckpt) {
    ckpt.params.validate();
    out.write(kMagic.data(), kMagic.size());
    put<std::uint32_t>(out, kCheckpointVersion);
    put<std::int32_t>(out, ckpt.params.embed_dim);
    put<std::int32_t>(out, ckpt.params.layers);
    put_matrices(out, ckpt.params);
    put<std::uint8_t>(out, ckpt.optimizer ? 1 : 0);
    if (ckpt.optimizer) {
        const auto& s = *ckpt.optimizer;
        put<double>(out, s.config.learning_rate);
        put<double>(out, s.config.beta1);
        put<double>(out, s.config.beta2);
        put<double>(out, s.config.epsilon);
        put<std::uint64_t>(out, s.step);
        put_matrices(out, s.first_moment);
        put_matrices(out, s.second_moment);
    }
    put<std::uint64_t>(out, ckpt.train_steps);
}

Checkpoint read_checkpoint(std::istream& in, const std::string& source_name) {
    Reader r(in, source_name);
    std::array<char, 4> magic{};
    if (!in.read(magic.data(), magic.size()) || magic != kMagic) r.fail("not a checkpoint (bad magic)");
    const auto version = r.get<std::uint32_t>("version");
    if (version != kCheckpointVersion) r.fail("unsupported checkpoint version " + std::to_string(version));
    const auto k = r.get<std::int32_t>("header");
    const auto l = r.get<std::int32_t>("header");
    if (k < 1 || l < 1 || k > 4096 || l > 64) r.fail("implausible K/L in header");

    Checkpoint ckpt;
    ckpt.params = PolicyParams<float>::zeros(k, l);
    r.matrices(ckpt.params);
    const auto has_opt = r.get<std::uint8_t>("optimizer flag");
    if (has_opt > 1) r.fail("bad optimizer flag");
    if (has_opt) {
        AdamConfig cfg;
        cfg.learning_rate = r.get<double>("optimizer");
        cfg.beta1 = r.get<double>("optimizer");
        cfg.beta2 = r.get<double>("optimizer");
        cfg.epsilon = r.get<double>("optimizer");
        auto state = AdamState<float>::init(ckpt.params, cfg);
        state.step = r.get<std::uint64_t>("optimizer");
        r.matrices(state.first_moment);
        r.matrices(state.second_moment);
        ckpt.optimizer = std::move(state);
    }
    ckpt.train_steps = r.get<std::uint64_t>("step counter");
    try {
        ckpt.params.validate();
    } catch (const DataError& e) {
        r.fail(e.what());
    }
    return ckpt;
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write checkpoint " + path.string());
    write_checkpoint(out, ckpt);
    if (!out) throw DataError("failed writing checkpoint " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open checkpoint " + path.string());
    return read_checkpoint(in, path.string());
}

}  // namespace graphrl
