#include "resist/pressure_law.hpp"

#include "json.hpp"

#include <cmath>
#include <fstream>
#include <memory>
#include <vector>

namespace resist {

PressureLaw classical_law() {
    PressureLaw law;
    law.name = "classical";
    law.p = [](const Vec3& n) {
        const double c = std::max(n.z(), 0.0);
        return c * c;
    };
    law.f = [](const Vec3& n) {
        const double c = std::max(n.z(), 0.0);
        return c * c * c;
    };
    law.g = [](double X, double Y) { return 1.0 / (1.0 + X * X + Y * Y); };
    return law;
}

PressureLaw area_law() {
    PressureLaw law;
    law.name = "area";
    law.p = [](const Vec3& n) { return 1.0 / n.z(); };
    law.f = [](const Vec3&) { return 1.0; };
    law.g = [](double X, double Y) { return std::sqrt(1.0 + X * X + Y * Y); };
    return law;
}

namespace {

struct Table {
    int nt = 0, np = 0;
    std::vector<double> v;  // theta-major

    double at(int it, int ip) const { return v[static_cast<size_t>(it) * np + (ip % np + np) % np]; }

    double interpolate(double theta, double phi) const {
        const double pi = std::acos(-1.0);
        const double ft = std::clamp(theta, 0.0, pi) / pi * (nt - 1);
        int it = std::min(static_cast<int>(ft), nt - 2);
        const double wt = ft - it;
        double fp = phi / (2.0 * pi) * np;
        fp -= std::floor(fp / np) * np;
        int ip = static_cast<int>(fp);
        const double wp = fp - ip;
        return (1 - wt) * ((1 - wp) * at(it, ip) + wp * at(it, ip + 1)) +
               wt * ((1 - wp) * at(it + 1, ip) + wp * at(it + 1, ip + 1));
    }
};

}  // namespace

PressureLaw load_tabulated_law(const std::string& json_path) {
    std::ifstream is(json_path);
    require(is.good(), ErrorKind::IoError, "cannot open law file: " + json_path);
    nlohmann::json j;
    try {
        is >> j;
    } catch (const std::exception& e) {
        fail(ErrorKind::ConfigError, "law file is not valid JSON: " + std::string(e.what()));
    }
    require(j.contains("name") && j.contains("theta_samples") && j.contains("phi_samples") &&
                j.contains("p"),
            ErrorKind::ConfigError, "law file needs name, theta_samples, phi_samples, p");
    auto table = std::make_shared<Table>();
    table->nt = j["theta_samples"].get<int>();
    table->np = j["phi_samples"].get<int>();
    require(table->nt >= 2 && table->np >= 3, ErrorKind::ConfigError,
            "law table too small (theta_samples >= 2, phi_samples >= 3)");
    table->v = j["p"].get<std::vector<double>>();
    require(table->v.size() == static_cast<size_t>(table->nt) * table->np, ErrorKind::ConfigError,
            "law table size does not match theta_samples * phi_samples");

    PressureLaw law;
    law.name = j["name"].get<std::string>();
    auto p_of = [table](const Vec3& n) {
        const Vec3 u = n.normalized();
        const double theta = std::acos(std::clamp(u.z(), -1.0, 1.0));
        double phi = std::atan2(u.y(), u.x());
        if (phi < 0) phi += 2.0 * std::acos(-1.0);
        return table->interpolate(theta, phi);
    };
    law.p = p_of;
    law.f = [p_of](const Vec3& n) { return p_of(n) * n.normalized().z(); };
    law.g = [p_of](double X, double Y) {
        const Vec3 n = Vec3(-X, -Y, 1.0) / std::sqrt(1.0 + X * X + Y * Y);
        return p_of(n);
    };
    return law;
}

PressureLaw law_by_name(const std::string& name_or_path) {
    if (name_or_path == "classical") return classical_law();
    if (name_or_path == "area") return area_law();
    if (name_or_path.size() > 5 &&
        name_or_path.substr(name_or_path.size() - 5) == ".json")
        return load_tabulated_law(name_or_path);
    fail(ErrorKind::ConfigError, "unknown pressure law: " + name_or_path);
}

}  // namespace resist
