#include "phi4/snapshot.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace phi4 {

namespace {

constexpr char spin_magic[8] = {'P', 'H', 'I', '4', 'S', 'P', 'N', '1'};
constexpr char rc_magic[8] = {'P', 'H', 'I', '4', 'R', 'C', 'S', '1'};

template <class T>
void put(std::ostream& o, T v)
{
    o.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
T get(std::istream& in)
{
    T v;
    if (!in.read(reinterpret_cast<char*>(&v), sizeof v)) throw std::runtime_error("snapshot truncated");
    return v;
}

void put_shape(std::ostream& o, const ShapeSpec& s)
{
    put<std::int32_t>(o, static_cast<std::int32_t>(s.shape));
    put<std::int32_t>(o, s.d);
    put<std::int32_t>(o, s.n);
    put<std::int32_t>(o, s.m);
    put<std::int32_t>(o, static_cast<std::int32_t>(s.center.size()));
    for (int c : s.center) put<std::int32_t>(o, c);
}

ShapeSpec get_shape(std::istream& in)
{
    ShapeSpec s;
    auto shape = get<std::int32_t>(in);
    if (shape < 0 || shape > static_cast<int>(Shape::block)) throw std::runtime_error("snapshot: bad shape");
    s.shape = static_cast<Shape>(shape);
    s.d = get<std::int32_t>(in);
    s.n = get<std::int32_t>(in);
    s.m = get<std::int32_t>(in);
    auto k = get<std::int32_t>(in);
    if (k < 0 || k > 64) throw std::runtime_error("snapshot: bad centre");
    for (int i = 0; i < k; ++i) s.center.push_back(get<std::int32_t>(in));
    return s;
}

std::ofstream open_out(const std::string& path, bool binary)
{
    std::ofstream o(path, binary ? std::ios::binary : std::ios::out);
    if (!o) throw std::runtime_error("cannot write '" + path + "'");
    return o;
}

std::ifstream open_in(const std::string& path, bool binary)
{
    std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
    if (!in) throw std::runtime_error("cannot read '" + path + "'");
    return in;
}

void check_magic(std::istream& in, const char (&magic)[8])
{
    char buf[8];
    if (!in.read(buf, 8) || std::memcmp(buf, magic, 8) != 0) throw std::runtime_error("snapshot: wrong file type");
}

std::string header(const ShapeSpec& s)
{
    std::ostringstream o;
    o << "# region shape=" << to_string(s.shape) << " d=" << s.d << " n=" << s.n << " m=" << s.m << " center=";
    for (std::size_t i = 0; i < s.center.size(); ++i) o << (i ? "," : "") << s.center[i];
    return o.str();
}

}  // namespace

void save_spins_binary(const std::string& path, const Region& r, const SpinConfig& phi)
{
    if (phi.size() != r.size()) throw std::invalid_argument("configuration does not match the region");
    auto o = open_out(path, true);
    o.write(spin_magic, 8);
    put_shape(o, r.spec());
    put<std::uint64_t>(o, phi.size());
    for (double v : phi) put<double>(o, v);
}

SpinSnapshot load_spins_binary(const std::string& path)
{
    auto in = open_in(path, true);
    check_magic(in, spin_magic);
    SpinSnapshot s;
    s.shape = get_shape(in);
    auto n = get<std::uint64_t>(in);
    if (n != Region(s.shape).size()) throw std::runtime_error("snapshot: size does not match the region header");
    s.phi.resize(n);
    for (auto& v : s.phi) v = get<double>(in);
    return s;
}

void save_spins_csv(const std::string& path, const Region& r, const SpinConfig& phi)
{
    if (phi.size() != r.size()) throw std::invalid_argument("configuration does not match the region");
    auto o = open_out(path, false);
    o << header(r.spec()) << "\n";
    o << "index";
    for (int i = 0; i < r.dim(); ++i) o << ",x" << i;
    o << ",phi\n";
    char buf[64];
    for (std::size_t v = 0; v < r.size(); ++v) {
        o << v;
        for (int c : r.coord(v)) o << "," << c;
        std::snprintf(buf, sizeof buf, "%.17g", phi[v]);
        o << "," << buf << "\n";
    }
}

SpinSnapshot load_spins_csv(const std::string& path)
{
    auto in = open_in(path, false);
    std::string line;
    std::getline(in, line);
    const std::string prefix = "# region ";
    if (line.rfind(prefix, 0) != 0) throw std::runtime_error("snapshot: missing region header");
    SpinSnapshot s;
    std::istringstream h(line.substr(prefix.size()));
    std::string tok;
    while (h >> tok) {
        auto eq = tok.find('=');
        if (eq == std::string::npos) throw std::runtime_error("snapshot: bad header token '" + tok + "'");
        auto k = tok.substr(0, eq), v = tok.substr(eq + 1);
        if (k == "shape") s.shape.shape = shape_from_string(v);
        else if (k == "d") s.shape.d = std::stoi(v);
        else if (k == "n") s.shape.n = std::stoi(v);
        else if (k == "m") s.shape.m = std::stoi(v);
        else if (k == "center") {
            std::istringstream cs(v);
            std::string c;
            while (std::getline(cs, c, ',')) s.shape.center.push_back(std::stoi(c));
        }
    }
    Region r(s.shape);
    std::getline(in, line);  // column names
    s.phi.assign(r.size(), 0.0);
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto comma = line.rfind(',');
        auto idx = std::stoul(line.substr(0, line.find(',')));
        if (idx >= r.size()) throw std::runtime_error("snapshot: vertex index out of range");
        s.phi[idx] = std::stod(line.substr(comma + 1));
        ++rows;
    }
    if (rows != r.size()) throw std::runtime_error("snapshot: wrong number of rows");
    return s;
}

void save_rc_state(const std::string& path, const Region& r, const RCState& s)
{
    if (s.a.size() != r.closed_size()) throw std::invalid_argument("state does not match the region");
    auto o = open_out(path, true);
    o.write(rc_magic, 8);
    put_shape(o, r.spec());
    put<std::uint64_t>(o, s.omega.size());
    std::vector<std::uint8_t> bits((s.omega.size() + 7) / 8, 0);
    for (std::size_t e = 0; e < s.omega.size(); ++e)
        if (s.omega[e]) bits[e / 8] |= static_cast<std::uint8_t>(1u << (e % 8));
    o.write(reinterpret_cast<const char*>(bits.data()), static_cast<std::streamsize>(bits.size()));
    put<std::uint64_t>(o, s.a.size());
    for (double v : s.a) put<double>(o, v);
}

RCSnapshot load_rc_state(const std::string& path)
{
    auto in = open_in(path, true);
    check_magic(in, rc_magic);
    RCSnapshot s;
    s.shape = get_shape(in);
    Region r(s.shape);
    auto ne = get<std::uint64_t>(in);
    if (ne < r.closed_edge_count() || ne > r.closed_edge_count() + r.size())
        throw std::runtime_error("snapshot: edge count does not match the region header");
    std::vector<std::uint8_t> bits((ne + 7) / 8);
    if (!in.read(reinterpret_cast<char*>(bits.data()), static_cast<std::streamsize>(bits.size())))
        throw std::runtime_error("snapshot truncated");
    s.state.omega.resize(ne);
    for (std::size_t e = 0; e < ne; ++e) s.state.omega[e] = (bits[e / 8] >> (e % 8)) & 1u;
    auto na = get<std::uint64_t>(in);
    if (na != r.closed_size()) throw std::runtime_error("snapshot: field size does not match the region header");
    s.state.a.resize(na);
    for (auto& v : s.state.a) v = get<double>(in);
    return s;
}

}  // namespace phi4
