#include "fracschrod/snapshot.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace fracschrod {

static_assert(std::endian::native == std::endian::little,
              "snapshot binary format is little-endian; big-endian hosts need byte swaps");

namespace {
constexpr char kMagic[8] = {'F', 'S', 'N', 'A', 'P', '1', '\0', '\0'};
}

void write_snapshot_csv(const std::filesystem::path& path, const ComplexField& u, double time) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_snapshot_csv: cannot open " + path.string());
    const GridSpec& g = u.grid();
    out << "# t=";
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%.17g\n", time);
    out << buf;
    out << "j,k,x,y,re,im,abs\n";
    for (int iy = 0; iy < g.ny(); ++iy) {
        for (int ix = 0; ix < g.nx(); ++ix) {
            const Complex v = u(ix, iy);
            std::snprintf(buf, sizeof(buf), "%d,%d,%.17g,%.17g,%.17g,%.17g,%.17g\n", ix + 1, iy + 1,
                          g.x(ix), g.y(iy), v.real(), v.imag(), std::abs(v));
            out << buf;
        }
    }
}

void write_snapshot_binary(const std::filesystem::path& path, const ComplexField& u, double time) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_snapshot_binary: cannot open " + path.string());

    char header[32] = {};
    std::memcpy(header, kMagic, sizeof(kMagic));
    const std::uint32_t mx = static_cast<std::uint32_t>(u.grid().mx);
    const std::uint32_t my = static_cast<std::uint32_t>(u.grid().my);
    std::memcpy(header + 8, &mx, 4);
    std::memcpy(header + 12, &my, 4);
    std::memcpy(header + 16, &time, 8);
    out.write(header, sizeof(header));

    std::vector<std::complex<float>> vals(u.size());
    const Complex* d = u.data();
    for (std::size_t i = 0; i < u.size(); ++i) {
        vals[i] = std::complex<float>(static_cast<float>(d[i].real()),
                                      static_cast<float>(d[i].imag()));
    }
    out.write(reinterpret_cast<const char*>(vals.data()),
              static_cast<std::streamsize>(vals.size() * sizeof(std::complex<float>)));
}

Snapshot read_snapshot_binary(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("read_snapshot_binary: cannot open " + path.string());

    char header[32];
    in.read(header, sizeof(header));
    if (!in || std::memcmp(header, kMagic, sizeof(kMagic)) != 0) {
        throw std::runtime_error("read_snapshot_binary: bad magic in " + path.string());
    }
    Snapshot s;
    std::uint32_t mx = 0, my = 0;
    std::memcpy(&mx, header + 8, 4);
    std::memcpy(&my, header + 12, 4);
    std::memcpy(&s.time, header + 16, 8);
    s.mx = static_cast<int>(mx);
    s.my = static_cast<int>(my);
    if (s.mx < 2 || s.my < 2) {
        throw std::runtime_error("read_snapshot_binary: invalid mesh counts in " + path.string());
    }
    const std::size_t n = static_cast<std::size_t>(s.mx - 1) * (s.my - 1);
    s.values.resize(n);
    in.read(reinterpret_cast<char*>(s.values.data()),
            static_cast<std::streamsize>(n * sizeof(std::complex<float>)));
    if (!in) throw std::runtime_error("read_snapshot_binary: truncated payload in " + path.string());
    return s;
}

}  // namespace fracschrod
