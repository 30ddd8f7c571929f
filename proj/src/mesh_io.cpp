#include "resist/mesh_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace resist {

std::string format_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

TriSurface triangulate(const Polytope& P) {
    TriSurface S;
    S.vertices = P.vertices;
    for (const Facet& f : P.facets)
        for (size_t k = 1; k + 1 < f.loop.size(); ++k)
            S.triangles.push_back({f.loop[0], f.loop[k], f.loop[k + 1]});
    return S;
}

void write_off(const std::string& path, const TriSurface& S) {
    std::ofstream os(path);
    require(os.good(), ErrorKind::IoError, "cannot open for writing: " + path);
    os << "OFF\n" << S.vertices.size() << ' ' << S.triangles.size() << " 0\n";
    for (const Vec3& v : S.vertices)
        os << format_double(v.x()) << ' ' << format_double(v.y()) << ' ' << format_double(v.z())
           << '\n';
    for (const auto& t : S.triangles) os << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
    require(os.good(), ErrorKind::IoError, "write failed: " + path);
}

void write_obj(const std::string& path, const TriSurface& S) {
    std::ofstream os(path);
    require(os.good(), ErrorKind::IoError, "cannot open for writing: " + path);
    for (const Vec3& v : S.vertices)
        os << "v " << format_double(v.x()) << ' ' << format_double(v.y()) << ' '
           << format_double(v.z()) << '\n';
    for (const auto& t : S.triangles)
        os << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
    require(os.good(), ErrorKind::IoError, "write failed: " + path);
}

namespace {

// Strips comments, returns whitespace tokens.
std::vector<std::string> tokens_of(std::istream& is, char comment) {
    std::vector<std::string> toks;
    std::string line;
    while (std::getline(is, line)) {
        if (auto pos = line.find(comment); pos != std::string::npos) line.resize(pos);
        std::istringstream ls(line);
        std::string t;
        while (ls >> t) toks.push_back(t);
    }
    return toks;
}

void fan_face(TriSurface& S, const std::vector<int>& loop) {
    require(loop.size() >= 3, ErrorKind::IoError, "mesh face with fewer than three vertices");
    for (size_t k = 1; k + 1 < loop.size(); ++k)
        S.triangles.push_back({loop[0], static_cast<int>(loop[k]), static_cast<int>(loop[k + 1])});
}

}  // namespace

TriSurface read_off(const std::string& path) {
    std::ifstream is(path);
    require(is.good(), ErrorKind::IoError, "cannot open: " + path);
    auto toks = tokens_of(is, '#');
    size_t at = 0;
    auto next = [&]() -> const std::string& {
        require(at < toks.size(), ErrorKind::IoError, "truncated OFF file: " + path);
        return toks[at++];
    };
    require(!toks.empty() && toks[0] == "OFF", ErrorKind::IoError, "missing OFF header: " + path);
    ++at;
    const long nv = std::stol(next());
    const long nf = std::stol(next());
    next();  // edge count, ignored
    TriSurface S;
    for (long i = 0; i < nv; ++i) {
        const double x = std::stod(next()), y = std::stod(next()), z = std::stod(next());
        S.vertices.push_back(Vec3(x, y, z));
    }
    for (long i = 0; i < nf; ++i) {
        const long k = std::stol(next());
        std::vector<int> loop;
        for (long j = 0; j < k; ++j) {
            const long v = std::stol(next());
            require(v >= 0 && v < nv, ErrorKind::IoError, "OFF face index out of range: " + path);
            loop.push_back(static_cast<int>(v));
        }
        fan_face(S, loop);
    }
    return S;
}

TriSurface read_obj(const std::string& path) {
    std::ifstream is(path);
    require(is.good(), ErrorKind::IoError, "cannot open: " + path);
    TriSurface S;
    std::string line;
    while (std::getline(is, line)) {
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag)) continue;
        if (tag == "v") {
            double x, y, z;
            require(static_cast<bool>(ls >> x >> y >> z), ErrorKind::IoError,
                    "bad OBJ vertex line: " + path);
            S.vertices.push_back(Vec3(x, y, z));
        } else if (tag == "f") {
            std::vector<int> loop;
            std::string ref;
            while (ls >> ref) {
                // "i", "i/j", "i/j/k" forms; only the vertex index matters.
                const long v = std::stol(ref.substr(0, ref.find('/')));
                require(v >= 1 && v <= static_cast<long>(S.vertices.size()), ErrorKind::IoError,
                        "OBJ face index out of range: " + path);
                loop.push_back(static_cast<int>(v - 1));
            }
            fan_face(S, loop);
        }
    }
    return S;
}

void write_body(const std::string& path, const Polytope& P) {
    const bool obj = path.size() >= 4 && path.substr(path.size() - 4) == ".obj";
    if (obj)
        write_obj(path, triangulate(P));
    else
        write_off(path, triangulate(P));
}

Polytope read_body(const std::string& path, const Tolerances& tol) {
    const bool obj = path.size() >= 4 && path.substr(path.size() - 4) == ".obj";
    const TriSurface S = obj ? read_obj(path) : read_off(path);
    return hull3d(S.vertices, tol);
}

}  // namespace resist
