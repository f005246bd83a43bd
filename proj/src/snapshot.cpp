#include "ellsq/snapshot.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

static_assert(std::endian::native == std::endian::little,
              "snapshot i/o assumes a little-endian host");

namespace ellsq {
namespace {

constexpr char kMagic[8] = {'F', 'L', 'D', 'S', 'N', 'A', 'P', '\0'};

struct Header {
    char magic[8];
    std::uint16_t version;
    std::uint16_t dtype;
    std::uint16_t ndims;
    std::uint16_t n_x_axes;
    std::uint32_t dims[4];
    double extents[4];
};
static_assert(sizeof(Header) == 64, "snapshot header must be exactly 64 bytes");

}  // namespace

void write_snapshot(const std::string& path, const RealField& field) {
    const Grid& g = field.grid();
    Header h{};
    std::memcpy(h.magic, kMagic, 8);
    h.version = 1;
    h.dtype = 1;
    h.ndims = static_cast<std::uint16_t>(g.rank());
    h.n_x_axes = static_cast<std::uint16_t>(g.n_x_axes());
    for (int a = 0; a < g.rank(); ++a) {
        h.dims[a] = static_cast<std::uint32_t>(g.points(a));
        h.extents[a] = g.extent(a);
    }
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("snapshot: cannot open for writing: " + path);
    os.write(reinterpret_cast<const char*>(&h), sizeof(h));
    os.write(reinterpret_cast<const char*>(field.data()),
             static_cast<std::streamsize>(field.size() * sizeof(double)));
    if (!os) throw std::runtime_error("snapshot: write failed: " + path);
}

RealField read_snapshot(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("snapshot: cannot open: " + path);
    Header h{};
    is.read(reinterpret_cast<char*>(&h), sizeof(h));
    if (!is || is.gcount() != sizeof(h)) throw std::runtime_error("snapshot: truncated header");
    if (std::memcmp(h.magic, kMagic, 8) != 0) throw std::runtime_error("snapshot: bad magic");
    if (h.version != 1) throw std::runtime_error("snapshot: unsupported version");
    if (h.dtype != 1) throw std::runtime_error("snapshot: unsupported dtype");
    if (h.ndims > 4) throw std::runtime_error("snapshot: too many dimensions");
    if (h.n_x_axes != 0 && h.n_x_axes != 2) throw std::runtime_error("snapshot: bad n_x_axes");

    std::vector<int> dims;
    std::vector<double> extents;
    for (int a = 0; a < h.ndims; ++a) {
        dims.push_back(static_cast<int>(h.dims[a]));
        extents.push_back(h.extents[a]);
    }
    for (int a = h.ndims; a < 4; ++a)
        if (h.dims[a] != 0 || h.extents[a] != 0.0)
            throw std::runtime_error("snapshot: nonzero padding in header");

    Grid g(dims, extents, h.n_x_axes);
    RealField field(g);
    is.read(reinterpret_cast<char*>(field.data()),
            static_cast<std::streamsize>(field.size() * sizeof(double)));
    if (!is || is.gcount() != static_cast<std::streamsize>(field.size() * sizeof(double)))
        throw std::runtime_error("snapshot: truncated payload");
    is.peek();
    if (!is.eof()) throw std::runtime_error("snapshot: trailing bytes");
    if (!field.all_finite()) throw std::runtime_error("snapshot: non-finite values");
    return field;
}

}  // namespace ellsq
