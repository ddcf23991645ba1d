#include "machlimit/snapshot_io.hpp"

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace machlimit {

namespace {

void put_u32(std::ostream& os, std::uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v & 0xff),
                          static_cast<unsigned char>((v >> 8) & 0xff),
                          static_cast<unsigned char>((v >> 16) & 0xff),
                          static_cast<unsigned char>((v >> 24) & 0xff)};
    os.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t get_u32(std::istream& is) {
    unsigned char b[4];
    is.read(reinterpret_cast<char*>(b), 4);
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

void put_f64(std::ostream& os, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((bits >> (8 * i)) & 0xff);
    os.write(reinterpret_cast<const char*>(b), 8);
}

double get_f64(std::istream& is) {
    unsigned char b[8];
    is.read(reinterpret_cast<char*>(b), 8);
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
}

constexpr char kMagic[4] = {'M', 'L', 'S', 'F'};
constexpr std::uint32_t kVersion = 1;

} // namespace

void write_snapshot(std::ostream& os, const SpectralField& f) {
    const Grid& g = f.grid();
    os.write(kMagic, 4);
    put_u32(os, kVersion);
    put_u32(os, static_cast<std::uint32_t>(g.dim()));
    for (int axis = 0; axis < g.dim(); ++axis)
        put_u32(os, static_cast<std::uint32_t>(g.n()));
    put_f64(os, g.box_length());
    for (const auto& c : f.coeffs()) {
        put_f64(os, c.real());
        put_f64(os, c.imag());
    }
}

SpectralField read_snapshot(std::istream& is) {
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, kMagic, 4) != 0)
        throw std::runtime_error("snapshot: bad magic");
    std::uint32_t version = get_u32(is);
    if (version != kVersion) throw std::runtime_error("snapshot: unsupported version");
    int d = static_cast<int>(get_u32(is));
    int n = 0;
    for (int axis = 0; axis < d; ++axis) {
        int na = static_cast<int>(get_u32(is));
        if (axis == 0)
            n = na;
        else if (na != n)
            throw std::runtime_error("snapshot: anisotropic grids unsupported");
    }
    double L = get_f64(is);
    Grid grid(d, n, L);
    std::vector<cplx> coeffs(grid.size());
    for (auto& c : coeffs) {
        double re = get_f64(is);
        double im = get_f64(is);
        c = cplx(re, im);
    }
    if (!is) throw std::runtime_error("snapshot: truncated file");
    return SpectralField(grid, std::move(coeffs));
}

void write_snapshot_file(const std::string& path, const SpectralField& f) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    write_snapshot(os, f);
}

SpectralField read_snapshot_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open: " + path);
    return read_snapshot(is);
}

void write_norm_csv(std::ostream& os, const TrajectorySeries& ts) {
    os << "t,j,p,value\n";
    char buf[64];
    auto num = [&buf](double v) {
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        return std::string(buf);
    };
    const auto& times = ts.times();
    for (std::size_t i = 0; i < times.size(); ++i)
        for (const auto& kv : ts.blocks())
            os << num(times[i]) << ',' << kv.first.first << ',' << num(kv.first.second) << ','
               << num(kv.second[i]) << '\n';
}

TrajectorySeries read_norm_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line.rfind("t,j,p,value", 0) != 0)
        throw std::runtime_error("norm csv: bad header");
    struct Row {
        double t, p, value;
        int j;
    };
    std::vector<Row> rows;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        Row r;
        char* end = nullptr;
        const char* s = line.c_str();
        r.t = std::strtod(s, &end);
        if (*end != ',') throw std::runtime_error("norm csv: parse error at '" + line + "'");
        r.j = static_cast<int>(std::strtol(end + 1, &end, 10));
        if (*end != ',') throw std::runtime_error("norm csv: parse error at '" + line + "'");
        r.p = std::strtod(end + 1, &end);
        if (*end != ',') throw std::runtime_error("norm csv: parse error at '" + line + "'");
        r.value = std::strtod(end + 1, &end);
        rows.push_back(r);
    }
    TrajectorySeries ts;
    double last_t = 0.0;
    bool any = false;
    for (const auto& r : rows) {
        if (!any || r.t != last_t) {
            ts.append_time(r.t);
            last_t = r.t;
            any = true;
        }
        ts.record(r.j, r.p, r.value);
    }
    return ts;
}

void write_norm_csv_file(const std::string& path, const TrajectorySeries& ts) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    write_norm_csv(os, ts);
}

TrajectorySeries read_norm_csv_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open: " + path);
    return read_norm_csv(is);
}

std::string file_checksum(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open: " + path);
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    char buf[1 << 16];
    while (is) {
        is.read(buf, sizeof(buf));
        std::streamsize got = is.gcount();
        for (std::streamsize i = 0; i < got; ++i) {
            hash ^= static_cast<unsigned char>(buf[i]);
            hash *= 0x100000001b3ULL;
        }
    }
    char out[17];
    std::snprintf(out, sizeof(out), "%016llx", static_cast<unsigned long long>(hash));
    return out;
}

} // namespace machlimit
