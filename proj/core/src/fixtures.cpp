#include "anisomin/fixtures.hpp"

#include <charconv>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include <Eigen/LU>

#include "anisomin/error.hpp"

namespace anisomin {

namespace {

using cplx = std::complex<double>;

class PlaneChart final : public Chart {
public:
    ChartJet jet(double u, double v) const override {
        ChartJet j;
        j.x = {u, v, 0.0};
        j.xu = Vec3::UnitX();
        j.xv = Vec3::UnitY();
        return j;
    }
};

class SphereChart final : public Chart {
public:
    ChartJet jet(double u, double v) const override {
        const double cu = std::cos(u), su = std::sin(u), cv = std::cos(v), sv = std::sin(v);
        ChartJet j;
        j.x = {sv * cu, sv * su, cv};
        j.xu = {-sv * su, sv * cu, 0.0};
        j.xv = {cv * cu, cv * su, -sv};
        j.xuu = {-sv * cu, -sv * su, 0.0};
        j.xuv = {-cv * su, cv * cu, 0.0};
        j.xvv = {-sv * cu, -sv * su, -cv};
        return j;
    }
};

class CatenoidChart final : public Chart {
public:
    explicit CatenoidChart(const Mat3& m = Mat3::Identity()) : m_(m) {}

    ChartJet jet(double u, double v) const override {
        const double cu = std::cos(u), su = std::sin(u), ch = std::cosh(v), sh = std::sinh(v);
        ChartJet j;
        j.x = m_ * Vec3(ch * cu, ch * su, v);
        j.xu = m_ * Vec3(-ch * su, ch * cu, 0.0);
        j.xv = m_ * Vec3(sh * cu, sh * su, 1.0);
        j.xuu = m_ * Vec3(-ch * cu, -ch * su, 0.0);
        j.xuv = m_ * Vec3(-sh * su, sh * cu, 0.0);
        j.xvv = m_ * Vec3(ch * cu, ch * su, 0.0);
        return j;
    }

private:
    Mat3 m_;
};

// X = Re F(z) with F' = (1 - z^2k, -i (1 + z^2k), 2 z^k).
class BranchedEnneperChart final : public Chart {
public:
    explicit BranchedEnneperChart(int k) : k_(k) {}

    ChartJet jet(double u, double v) const override {
        const cplx z(u, v);
        const cplx i(0.0, 1.0);
        const double k = k_;
        const cplx z2k = std::pow(z, 2 * k_);
        const cplx zk = std::pow(z, k_);
        const cplx z2k1 = z2k * z;
        const cplx zk1 = zk * z;
        const cplx f[3] = {z - z2k1 / (2.0 * k + 1.0), -i * (z + z2k1 / (2.0 * k + 1.0)), 2.0 * zk1 / (k + 1.0)};
        const cplx fp[3] = {1.0 - z2k, -i * (1.0 + z2k), 2.0 * zk};
        const cplx z2km1 = k_ >= 1 ? std::pow(z, 2 * k_ - 1) : cplx(0.0);
        const cplx zkm1 = std::pow(z, k_ - 1);
        const cplx fpp[3] = {-2.0 * k * z2km1, -i * 2.0 * k * z2km1, 2.0 * k * zkm1};
        ChartJet j;
        for (int a = 0; a < 3; ++a) {
            j.x(a) = f[a].real();
            j.xu(a) = fp[a].real();
            j.xv(a) = (i * fp[a]).real();
            j.xuu(a) = fpp[a].real();
            j.xuv(a) = (i * fpp[a]).real();
            j.xvv(a) = -fpp[a].real();
        }
        return j;
    }

private:
    int k_;
};

Vec3 axis_rounded(const Vec3& n) {
    Eigen::Index a = 0;
    n.cwiseAbs().maxCoeff(&a);
    return Vec3::Unit(a) * (n(a) > 0.0 ? 1.0 : -1.0);
}

std::vector<double> parse_numbers(std::string_view text) {
    std::vector<double> out;
    if (text.empty()) return out;
    std::size_t pos = 0;
    while (true) {
        const std::size_t comma = text.find(',', pos);
        const std::string_view tok =
            text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (ec != std::errc() || ptr != tok.data() + tok.size() || tok.empty()) {
            throw Error(ErrorCode::InvalidArgument, "bad number '" + std::string(tok) + "' in fixture");
        }
        out.push_back(v);
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return out;
}

std::string fmt(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

}  // namespace

SurfacePatch plane_patch(int grid, double length, double width) {
    PatchTopology topo;
    topo.name = (length == 1.0 && width == 1.0) ? "plane" : "plane:" + fmt(length) + "," + fmt(width);
    topo.planar = true;
    topo.side_end = {0, 0, 0, 0};
    topo.end_branch_orders = {0};
    topo.end_normals = {Vec3::UnitZ()};
    return SurfacePatch(std::make_shared<PlaneChart>(), {0.0, length, 0.0, width}, grid, grid, false, 1, topo);
}

SurfacePatch sphere_patch(int grid) {
    PatchTopology topo;
    topo.name = "sphere";
    constexpr double pole_gap = 1e-3;
    return SurfacePatch(std::make_shared<SphereChart>(), {0.0, 2.0 * kPi, pole_gap, kPi - pole_gap}, grid, grid,
                        true, -1, topo);
}

SurfacePatch catenoid_patch(double V, int grid) {
    if (!(V > 0.0 && V <= 4.0)) throw Error(ErrorCode::InvalidArgument, "catenoid: V must lie in (0, 4]");
    PatchTopology topo;
    topo.name = "catenoid:" + fmt(V);
    topo.side_end = {-1, -1, 0, 1};
    topo.end_branch_orders = {0, 0};
    topo.end_normals = {Vec3::UnitZ(), -Vec3::UnitZ()};
    return SurfacePatch(std::make_shared<CatenoidChart>(), {0.0, 2.0 * kPi, -V, V}, grid, grid, true, 1, topo);
}

SurfacePatch sheared_catenoid_patch(const Mat3& M, double V, int grid) {
    if (!(V > 0.0 && V <= 4.0)) throw Error(ErrorCode::InvalidArgument, "sheared_catenoid: V must lie in (0, 4]");
    const double det = M.determinant();
    if (!(std::abs(det) >= 1e-8)) throw Error(ErrorCode::SingularShear, "|det M| < 1e-8");
    PatchTopology topo;
    topo.name = "sheared_catenoid:" + fmt(V);
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) topo.name += "," + fmt(M(r, c));
    topo.side_end = {-1, -1, 0, 1};
    topo.end_branch_orders = {0, 0};
    const Mat3 cof = M.inverse().transpose();
    topo.end_normals = {(cof * Vec3::UnitZ()).normalized(), (cof * -Vec3::UnitZ()).normalized()};
    return SurfacePatch(std::make_shared<CatenoidChart>(M), {0.0, 2.0 * kPi, -V, V}, grid, grid, true,
                        det > 0.0 ? 1 : -1, topo);
}

SurfacePatch branched_enneper_patch(double R, int k, int grid) {
    if (!(R > 0.0)) throw Error(ErrorCode::InvalidArgument, "enneper: R must be positive");
    if (k < 1 || k > 6) throw Error(ErrorCode::InvalidArgument, "branched_enneper: k must lie in [1, 6]");
    PatchTopology topo;
    topo.name = k == 1 ? "enneper:" + fmt(R) : "branched_enneper:" + fmt(R) + "," + std::to_string(k);
    topo.side_end = {0, 0, 0, 0};
    topo.end_branch_orders = {k - 1};
    auto chart = std::make_shared<BranchedEnneperChart>(k);
    const ChartJet far = chart->jet(1e3, 0.0);
    topo.end_normals = {axis_rounded(far.xu.cross(far.xv).normalized())};
    return SurfacePatch(chart, {-R, R, -R, R}, grid, grid, false, 1, topo);
}

SurfacePatch enneper_patch(double R, int grid) {
    if (!(R > 0.0 && R <= 1.5)) throw Error(ErrorCode::InvalidArgument, "enneper: R must lie in (0, 1.5]");
    return branched_enneper_patch(R, 1, grid);
}

SurfacePatch make_fixture(std::string_view text, int grid) {
    const std::size_t colon = text.find(':');
    const std::string_view head = text.substr(0, colon);
    const std::vector<double> args =
        colon == std::string_view::npos ? std::vector<double>{} : parse_numbers(text.substr(colon + 1));
    auto need = [&](std::size_t n) {
        if (args.size() != n) {
            throw Error(ErrorCode::InvalidArgument,
                        std::string(head) + " expects " + std::to_string(n) + " parameter(s)");
        }
    };
    if (head == "plane") {
        if (args.empty()) return plane_patch(grid);
        need(2);
        return plane_patch(grid, args[0], args[1]);
    }
    if (head == "sphere") {
        need(0);
        return sphere_patch(grid);
    }
    if (head == "catenoid") {
        need(1);
        return catenoid_patch(args[0], grid);
    }
    if (head == "enneper") {
        need(1);
        return enneper_patch(args[0], grid);
    }
    if (head == "sheared_catenoid") {
        need(10);
        Mat3 m;
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) m(r, c) = args[1 + 3 * r + c];
        return sheared_catenoid_patch(m, args[0], grid);
    }
    if (head == "branched_enneper") {
        need(2);
        if (args[1] != std::floor(args[1])) throw Error(ErrorCode::InvalidArgument, "k must be an integer");
        return branched_enneper_patch(args[0], static_cast<int>(args[1]), grid);
    }
    throw Error(ErrorCode::UnknownFixture, "unknown fixture '" + std::string(text) + "'");
}

}  // namespace anisomin
