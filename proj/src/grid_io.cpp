#include "qrp/grid_io.hpp"

#include <bit>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <span>
#include <fstream>
#include <iterator>

#include <openssl/evp.h>

#include "qrp/error.hpp"

namespace qrp::io {

static_assert(std::endian::native == std::endian::little, "binary formats assume a little-endian host");

namespace {

constexpr char kR2Magic[8] = {'Q', 'R', 'P', 'R', '2', 'G', '\0', '\1'};
constexpr char kObsMagic[8] = {'Q', 'R', 'P', 'O', 'B', 'S', '\0', '\1'};

class Writer {
public:
    template <class T>
    void put(T v)
    {
        char buf[sizeof(T)];
        std::memcpy(buf, &v, sizeof(T));
        out_.append(buf, sizeof(T));
    }
    template <class T>
    void put_all(std::span<const T> xs)
    {
        out_.append(reinterpret_cast<const char*>(xs.data()), xs.size_bytes());
    }
    void raw(std::string_view s) { out_.append(s); }
    std::string take() { return std::move(out_); }

private:
    std::string out_;
};

class Reader {
public:
    explicit Reader(std::string_view in) : in_(in) {}

    template <class T>
    T get()
    {
        T v;
        std::memcpy(&v, take(sizeof(T)).data(), sizeof(T));
        return v;
    }
    template <class T>
    std::vector<T> get_all(std::size_t n)
    {
        std::vector<T> v(n);
        if (n) std::memcpy(v.data(), take(n * sizeof(T)).data(), n * sizeof(T));
        return v;
    }
    std::string_view take(std::size_t n)
    {
        if (n > in_.size() - pos_) throw IoError("truncated binary grid");
        auto s = in_.substr(pos_, n);
        pos_ += n;
        return s;
    }
    void expect_end() const
    {
        if (pos_ != in_.size()) throw IoError("trailing bytes after binary grid");
    }

private:
    std::string_view in_;
    std::size_t pos_ = 0;
};

std::string fmt9(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

// Shortest representation that parses back to the same double.
std::string shortest(double v)
{
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return {buf, res.ptr};
}

} // namespace

void write_atomic(const fs::path& path, std::string_view contents)
{
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw IoError("cannot open " + tmp.string() + " for writing");
        f.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        if (!f) throw IoError("write failed on " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) throw IoError("cannot rename " + tmp.string() + ": " + ec.message());
}

std::string read_file(const fs::path& path)
{
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open " + path.string());
    return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

std::string sha256_hex(std::string_view data)
{
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
        throw IoError("SHA-256 digest failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 0xf];
    }
    return out;
}

std::string sha256_file(const fs::path& path) { return sha256_hex(read_file(path)); }

std::string encode_r2_grid(const R2Grid& grid)
{
    const std::size_t cells = static_cast<std::size_t>(grid.n_sites) * grid.times.size();
    if (grid.r2.size() != cells || grid.delta.size() != cells || grid.zeroed.size() != cells)
        throw IoError("inconsistent r2 grid dimensions");
    Writer w;
    w.raw({kR2Magic, sizeof kR2Magic});
    w.put<std::uint32_t>(static_cast<std::uint32_t>(grid.n_sites));
    w.put<std::uint32_t>(static_cast<std::uint32_t>(grid.times.size()));
    w.put<double>(grid.threshold);
    w.put_all<double>(grid.times);
    w.put_all<double>(grid.r2);
    w.put_all<double>(grid.delta);
    w.put_all<std::uint8_t>(grid.zeroed);
    return w.take();
}

R2Grid decode_r2_grid(std::string_view bytes)
{
    Reader r(bytes);
    if (r.take(8) != std::string_view(kR2Magic, 8)) throw IoError("not an r2 grid file");
    R2Grid g;
    g.n_sites = static_cast<int>(r.get<std::uint32_t>());
    const std::size_t n_times = r.get<std::uint32_t>();
    g.threshold = r.get<double>();
    const std::size_t cells = static_cast<std::size_t>(g.n_sites) * n_times;
    g.times = r.get_all<double>(n_times);
    g.r2 = r.get_all<double>(cells);
    g.delta = r.get_all<double>(cells);
    g.zeroed = r.get_all<std::uint8_t>(cells);
    r.expect_end();
    return g;
}

std::string encode_observables(const ObservableGrid& grid, const InputBatch& batch)
{
    if (batch.size() != static_cast<std::size_t>(grid.n_instances))
        throw IoError("observable grid and input batch disagree on instance count");
    Writer w;
    w.raw({kObsMagic, sizeof kObsMagic});
    w.put<std::uint32_t>(static_cast<std::uint32_t>(grid.n_instances));
    w.put<std::uint32_t>(static_cast<std::uint32_t>(grid.n_sites));
    w.put<std::uint32_t>(static_cast<std::uint32_t>(grid.times.size()));
    w.put<std::uint8_t>(static_cast<std::uint8_t>(grid.axis));
    w.put<std::uint64_t>(batch.seed);
    w.put<std::uint32_t>(static_cast<std::uint32_t>(batch.n_train));
    w.put<std::uint32_t>(static_cast<std::uint32_t>(batch.n_test));
    w.put_all<double>(batch.values);
    w.put_all<double>(grid.times);
    w.put_all<double>(grid.values);
    w.put<std::uint32_t>(static_cast<std::uint32_t>(grid.meta.size()));
    w.raw(grid.meta);
    return w.take();
}

StoredObservables decode_observables(std::string_view bytes)
{
    Reader r(bytes);
    if (r.take(8) != std::string_view(kObsMagic, 8)) throw IoError("not an observable grid file");
    StoredObservables s;
    auto& g = s.grid;
    g.n_instances = static_cast<int>(r.get<std::uint32_t>());
    g.n_sites = static_cast<int>(r.get<std::uint32_t>());
    const std::size_t n_times = r.get<std::uint32_t>();
    const auto axis = r.get<std::uint8_t>();
    if (axis > 2) throw IoError("bad axis code in observable grid");
    g.axis = static_cast<Axis>(axis);
    s.batch.seed = r.get<std::uint64_t>();
    s.batch.n_train = static_cast<int>(r.get<std::uint32_t>());
    s.batch.n_test = static_cast<int>(r.get<std::uint32_t>());
    if (static_cast<long>(s.batch.n_train) + s.batch.n_test != g.n_instances)
        throw IoError("train/test split does not match instance count");
    s.batch.values = r.get_all<double>(static_cast<std::size_t>(g.n_instances));
    g.times = r.get_all<double>(n_times);
    g.values = r.get_all<double>(static_cast<std::size_t>(g.n_instances) * g.n_sites * n_times);
    const std::size_t meta_len = r.get<std::uint32_t>();
    g.meta = std::string(r.take(meta_len));
    r.expect_end();
    return s;
}

std::string heatmap_csv(const R2Grid& grid)
{
    std::string out = "site_offset,time,r2,delta,masked\n";
    for (int i = 0; i < grid.n_sites; ++i) {
        const std::string offset = std::to_string(site_offset(i, grid.n_sites));
        for (int m = 0; m < grid.n_times(); ++m) {
            const auto c = grid.index(i, m);
            out += offset;
            out += ',' + fmt9(grid.times[m]);
            out += ',' + fmt9(grid.r2[c]);
            out += ',' + fmt9(grid.delta[c]);
            out += grid.zeroed[c] ? ",1\n" : ",0\n";
        }
    }
    return out;
}

std::string entropy_csv(const EntropySeries& series)
{
    std::string out = "time,entropy\n";
    for (std::size_t m = 0; m < series.times.size(); ++m)
        out += fmt9(series.times[m]) + ',' + fmt9(series.values[m]) + '\n';
    return out;
}

std::string sweep_csv(const SweepResult& sweep, const Dip& dip)
{
    std::string out = sweep.parameter + ",r2_mean,dip\n";
    for (std::size_t j = 0; j < sweep.values.size(); ++j)
        out += shortest(sweep.values[j]) + ',' + shortest(sweep.r2_mean[j]) + (j == dip.index ? ",1\n" : ",0\n");
    return out;
}

} // namespace qrp::io
