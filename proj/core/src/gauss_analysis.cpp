#include "anisomin/gauss_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>

#include <Eigen/LU>

#include "anisomin/error.hpp"

namespace anisomin {

namespace {

double grid_h(const SurfacePatch& p) { return std::max(p.hu(), p.hv()); }

// Parameter distance, wrapping u on periodic patches.
double param_distance(const SurfacePatch& p, const Vec2& a, const Vec2& b) {
    double du = std::abs(a(0) - b(0));
    if (p.periodic_u()) {
        const double period = p.domain().u1 - p.domain().u0;
        du = std::fmod(du, period);
        du = std::min(du, period - du);
    }
    return std::hypot(du, a(1) - b(1));
}

double wrap_u(const SurfacePatch& p, double u) {
    if (!p.periodic_u()) return u;
    const double period = p.domain().u1 - p.domain().u0;
    return p.domain().u0 + std::fmod(std::fmod(u - p.domain().u0, period) + period, period);
}

}  // namespace

double gauss_curvature_at(const SurfacePatch& patch, double u, double v) {
    const ChartJet j = patch.jet(u, v);
    const LocalFrame f = local_frame(j, patch.orientation());
    Mat2 h;
    h(0, 0) = j.xuu.dot(f.nu);
    h(0, 1) = h(1, 0) = j.xuv.dot(f.nu);
    h(1, 1) = j.xvv.dot(f.nu);
    return h.determinant() / f.metric.determinant();
}

int branch_order(const SurfacePatch& patch, const CriticalPoint& point, int samples) {
    const double radius = point.detection_radius > 0.0 ? point.detection_radius : 3.0 * grid_h(patch);
    const Vec3 n0 = patch.normal(point.location(0), point.location(1));
    const auto [e1, e2] = tangent_frame(n0);
    for (int attempt = 0; attempt < 2; ++attempt, samples *= 2) {
        double total = 0.0, prev = 0.0, first = 0.0;
        bool ok = true;
        for (int s = 0; s <= samples && ok; ++s) {
            const double t = 2.0 * kPi * (s % samples) / samples;
            const Vec3 n = patch.normal(point.location(0) + radius * std::cos(t), point.location(1) + radius * std::sin(t));
            const double d = 1.0 + n.dot(n0);
            if (d < 1e-12) throw Error(ErrorCode::AmbiguousWinding, "circle image reaches the projection pole");
            const double angle = std::atan2(n.dot(e2) / d, n.dot(e1) / d);
            if (s == 0) {
                first = prev = angle;
                continue;
            }
            double step = angle - prev;
            step -= 2.0 * kPi * std::round(step / (2.0 * kPi));
            if (std::abs(step) > 0.5 * kPi) ok = false;
            total += step;
            prev = angle;
        }
        (void)first;
        if (ok) return static_cast<int>(std::abs(std::lround(total / (2.0 * kPi)))) - 1;
    }
    throw Error(ErrorCode::AmbiguousWinding, "angular steps above pi/2 after refinement");
}

CriticalSet critical_set(const CurvatureField& field, double flat_tol) {
    const SurfacePatch& p = *field.patch;
    double kmax = 0.0;
    for (const auto& n : field.nodes) kmax = std::max(kmax, std::abs(n.K_sigma));
    if (kmax <= 1e-14 * field.curvature_scale * field.curvature_scale) {
        throw Error(ErrorCode::NonDiscreteCriticalSet, "Gauss curvature vanishes on the whole patch");
    }
    CriticalSet out;
    out.flat_tol = flat_tol > 0.0 ? flat_tol : 1e-5 * kmax;
    const int nu = p.nu(), nv = p.nv();
    std::vector<char> seen(field.nodes.size(), 0);
    auto flat = [&](int i, int j) { return std::abs(field.nodes[static_cast<std::size_t>(p.node(i, j))].K_sigma) < out.flat_tol; };
    const double h = grid_h(p);

    for (int j0 = 0; j0 < nv; ++j0) {
        for (int i0 = 0; i0 < nu; ++i0) {
            if (seen[static_cast<std::size_t>(p.node(i0, j0))] || !flat(i0, j0)) continue;
            // Breadth-first search over unwrapped column indices.
            std::deque<std::pair<int, int>> queue{{i0, j0}};
            std::vector<std::pair<int, int>> members;
            seen[static_cast<std::size_t>(p.node(i0, j0))] = 1;
            bool touches_side = false;
            while (!queue.empty()) {
                const auto [iu, j] = queue.front();
                queue.pop_front();
                members.emplace_back(iu, j);
                const int i = ((iu % nu) + nu) % nu;
                touches_side = touches_side || p.on_boundary(i, j);
                for (int dj = -1; dj <= 1; ++dj) {
                    for (int di = -1; di <= 1; ++di) {
                        const int jj = j + dj;
                        int ii = i + di;
                        if (jj < 0 || jj >= nv) continue;
                        if (ii < 0 || ii >= nu) {
                            if (!p.periodic_u()) continue;
                            ii = (ii + nu) % nu;
                        }
                        const std::size_t k = static_cast<std::size_t>(p.node(ii, jj));
                        if (seen[k] || !flat(ii, jj)) continue;
                        seen[k] = 1;
                        queue.emplace_back(iu + di, jj);
                    }
                }
            }
            int imin = members[0].first, imax = imin, jmin = members[0].second, jmax = jmin;
            Vec2 centroid = Vec2::Zero();
            for (const auto& [iu, j] : members) {
                imin = std::min(imin, iu);
                imax = std::max(imax, iu);
                jmin = std::min(jmin, j);
                jmax = std::max(jmax, j);
                centroid += Vec2(p.domain().u0 + iu * p.hu(), p.v_at(j));
            }
            if (touches_side) {
                ++out.boundary_clusters;
                continue;
            }
            if (std::max(imax - imin, jmax - jmin) >= 5) {
                throw Error(ErrorCode::NonDiscreteCriticalSet,
                            "flat cluster of " + std::to_string(members.size()) + " nodes is not isolated");
            }
            centroid /= static_cast<double>(members.size());
            centroid(0) = wrap_u(p, centroid(0));
            CriticalPoint cp;
            cp.location = centroid;
            cp.nu = p.normal(centroid(0), centroid(1));
            double radius = std::max(3.0 * h, 0.5 * h * std::max(imax - imin, jmax - jmin) + 2.0 * h);
            for (int grow = 0; grow < 6; ++grow) {
                bool clear = true;
                for (int s = 0; s < 64 && clear; ++s) {
                    const double t = 2.0 * kPi * s / 64;
                    clear = std::abs(gauss_curvature_at(p, centroid(0) + radius * std::cos(t),
                                                        centroid(1) + radius * std::sin(t))) >= out.flat_tol;
                }
                if (clear) break;
                radius *= 1.5;
            }
            cp.detection_radius = radius;
            cp.branch_order = branch_order(p, cp);
            out.points.push_back(cp);
        }
    }

    // A zero of K between nodes leaves no flat node behind; look for interior
    // local minima of |K| and polish them off the grid.
    auto abs_k = [&](int i, int j) { return std::abs(field.nodes[static_cast<std::size_t>(p.node(i, j))].K_sigma); };
    for (int j0 = 2; j0 < nv - 2; ++j0) {
        for (int i0 = 0; i0 < nu; ++i0) {
            if (!p.periodic_u() && (i0 < 2 || i0 >= nu - 2)) continue;
            const double k0 = abs_k(i0, j0);
            if (k0 >= 1e-2 * kmax) continue;
            bool minimum = true;
            for (int dj = -1; dj <= 1 && minimum; ++dj) {
                for (int di = -1; di <= 1 && minimum; ++di) {
                    if (di == 0 && dj == 0) continue;
                    minimum = k0 <= abs_k((i0 + di + nu) % nu, j0 + dj);
                }
            }
            if (!minimum) continue;
            const Vec2 start(p.u_at(i0), p.v_at(j0));
            bool known = false;
            for (const auto& q : out.points) {
                Vec2 d = q.location - start;
                if (p.periodic_u()) d(0) = std::remainder(d(0), p.domain().u1 - p.domain().u0);
                known = known || d.norm() < 3.0 * h;
            }
            if (known) continue;

            Vec2 x = start;
            double fx = k0;
            for (double step = 0.5 * h; step > 1e-7 * h;) {
                bool moved = false;
                for (const Vec2& dir : {Vec2(1, 0), Vec2(-1, 0), Vec2(0, 1), Vec2(0, -1)}) {
                    const Vec2 y = x + step * dir;
                    if ((y - start).norm() > 1.5 * h) continue;
                    const double fy = std::abs(gauss_curvature_at(p, y(0), y(1)));
                    if (fy < fx) {
                        x = y;
                        fx = fy;
                        moved = true;
                        break;
                    }
                }
                if (!moved) step *= 0.5;
            }
            if (fx >= out.flat_tol) continue;
            CriticalPoint cp;
            cp.location = Vec2(wrap_u(p, x(0)), x(1));
            cp.nu = p.normal(cp.location(0), cp.location(1));
            cp.detection_radius = 3.0 * h;
            cp.branch_order = branch_order(p, cp);
            out.points.push_back(cp);
        }
    }
    return out;
}

Degrees degrees(const CurvatureField& field, const WulffMesh& wulff) {
    Degrees d;
    for (const auto& n : field.nodes) {
        d.total_curvature += -n.K_sigma * n.area_weight;
        d.total_gamma_curvature += -n.K_gamma * n.area_weight;
    }
    d.wulff_area = wulff.area;
    d.raw_nu = d.total_curvature / (4.0 * kPi);
    d.raw_nu_gamma = d.total_gamma_curvature / wulff.area;
    d.deg_nu = static_cast<int>(std::lround(d.raw_nu));
    d.deg_nu_gamma = static_cast<int>(std::lround(d.raw_nu_gamma));
    d.residue_nu = std::abs(d.raw_nu - d.deg_nu);
    d.residue_nu_gamma = std::abs(d.raw_nu_gamma - d.deg_nu_gamma);
    d.orientation_reversed = d.raw_nu < 0.0;
    return d;
}

namespace {

std::vector<double> phi_values(const SurfacePatch& p, const Vec3& axis, const std::vector<CurvatureNode>* nodes) {
    std::vector<double> phi(static_cast<std::size_t>(p.node_count()));
    for (int j = 0; j < p.nv(); ++j) {
        for (int i = 0; i < p.nu(); ++i) {
            const std::size_t k = static_cast<std::size_t>(p.node(i, j));
            const Vec3 n = nodes ? (*nodes)[k].nu : p.normal(p.u_at(i), p.v_at(j));
            phi[k] = n.dot(axis);
        }
    }
    double big = 0.0;
    for (double v : phi) big = std::max(big, std::abs(v));
    for (double& v : phi)
        if (std::abs(v) < 1e-12 * big) v = 0.0;
    return phi;
}

int count_sign_domains(const SurfacePatch& p, const std::vector<double>& phi) {
    const int nu = p.nu(), nv = p.nv();
    std::vector<int> label(phi.size(), -1);
    int count = 0;
    for (int start = 0; start < p.node_count(); ++start) {
        // Nodes exactly on the nodal set belong to no domain.
        if (label[static_cast<std::size_t>(start)] >= 0 || phi[static_cast<std::size_t>(start)] == 0.0) continue;
        const bool sign = phi[static_cast<std::size_t>(start)] > 0.0;
        std::deque<int> queue{start};
        label[static_cast<std::size_t>(start)] = count;
        while (!queue.empty()) {
            const int k = queue.front();
            queue.pop_front();
            const int i = k % nu, j = k / nu;
            const int nbr[4][2] = {{i + 1, j}, {i - 1, j}, {i, j + 1}, {i, j - 1}};
            for (const auto& q : nbr) {
                int ii = q[0];
                const int jj = q[1];
                if (jj < 0 || jj >= nv) continue;
                if (ii < 0 || ii >= nu) {
                    if (!p.periodic_u()) continue;
                    ii = (ii + nu) % nu;
                }
                const int kk = p.node(ii, jj);
                const double f = phi[static_cast<std::size_t>(kk)];
                if (label[static_cast<std::size_t>(kk)] >= 0 || f == 0.0 || (f > 0.0) != sign) continue;
                label[static_cast<std::size_t>(kk)] = count;
                queue.push_back(kk);
            }
        }
        ++count;
    }
    return count;
}

struct Crossing {
    Vec2 uv;
    int side = -1;  // Side index when the crossing lies on a non-periodic side
};

}  // namespace

int nodal_domains(const SurfacePatch& patch, const Vec3& axis) {
    return count_sign_domains(patch, phi_values(patch, axis, nullptr));
}

Pseudograph pseudograph_extract(const SurfacePatch& patch, const IntegrandSpec& spec, const Vec3& axis, int genus,
                                const PseudographOptions& options) {
    if (std::abs(axis.norm() - 1.0) > 1e-9) throw Error(ErrorCode::InvalidArgument, "axis must be a unit vector");
    const SurfacePatch& p = patch;
    const CurvatureField field = curvature_field(patch, spec);
    Pseudograph pg;
    pg.axis = axis;
    pg.genus = genus;

    const std::vector<double> phi = phi_values(p, axis, &field.nodes);
    const int nu = p.nu(), nv = p.nv();
    auto at = [&](int i, int j) { return phi[static_cast<std::size_t>(p.node(((i % nu) + nu) % nu, j))]; };

    double grad_max = 0.0;
    for (int j = 0; j < nv; ++j) {
        for (int i = 0; i < nu; ++i) {
            const bool has_l = p.periodic_u() || i > 0, has_r = p.periodic_u() || i + 1 < nu;
            const double du = has_l && has_r ? (at(i + 1, j) - at(i - 1, j)) / (2 * p.hu())
                              : has_r        ? (at(i + 1, j) - at(i, j)) / p.hu()
                                             : (at(i, j) - at(i - 1, j)) / p.hu();
            const double dv = j > 0 && j + 1 < nv ? (at(i, j + 1) - at(i, j - 1)) / (2 * p.hv())
                              : j + 1 < nv        ? (at(i, j + 1) - at(i, j)) / p.hv()
                                                  : (at(i, j) - at(i, j - 1)) / p.hv();
            grad_max = std::max(grad_max, std::hypot(du, dv));
        }
    }
    pg.band_tol = options.band_tol > 0.0 ? options.band_tol : std::max(2.0 * grid_h(p) * grad_max, 1e-12);
    std::size_t in_band = 0;
    for (double v : phi) in_band += std::abs(v) < pg.band_tol ? 1 : 0;
    if (in_band > phi.size() / 5) {
        throw Error(ErrorCode::GrazingCircle, std::to_string(in_band) + " of " + std::to_string(phi.size()) +
                                                  " nodes lie in the nodal band");
    }

    // Zero crossings on grid edges. Edge id 2k: (i,j)-(i+1,j); 2k+1: (i,j)-(i,j+1).
    std::map<long, Crossing> crossings;
    auto edge_crossing = [&](int i, int j, bool along_u) -> long {
        const int i2 = along_u ? i + 1 : i, j2 = along_u ? j : j + 1;
        const double a = at(i, j), b = at(i2, j2);
        if ((a >= 0.0) == (b >= 0.0)) return -1;
        const long id = 2L * p.node(i, j) + (along_u ? 0 : 1);
        if (!crossings.count(id)) {
            const double t = a / (a - b);
            Crossing c;
            c.uv = Vec2(p.u_at(i) + (along_u ? t * p.hu() : 0.0), p.v_at(j) + (along_u ? 0.0 : t * p.hv()));
            c.uv(0) = wrap_u(p, c.uv(0));
            if (along_u && j == 0) c.side = static_cast<int>(Side::VMin);
            if (along_u && j == nv - 1) c.side = static_cast<int>(Side::VMax);
            if (!along_u && !p.periodic_u() && i == 0) c.side = static_cast<int>(Side::UMin);
            if (!along_u && !p.periodic_u() && i == nu - 1) c.side = static_cast<int>(Side::UMax);
            crossings[id] = c;
        }
        return id;
    };

    std::map<long, std::vector<long>> links;
    auto link = [&](long a, long b) {
        links[a].push_back(b);
        links[b].push_back(a);
    };
    const int cells_u = p.periodic_u() ? nu : nu - 1;
    for (int j = 0; j + 1 < nv; ++j) {
        for (int i = 0; i < cells_u; ++i) {
            const int ip = (i + 1) % nu;
            const long bottom = edge_crossing(i, j, true);
            const long top = edge_crossing(i, j + 1, true);
            const long left = edge_crossing(i, j, false);
            const long right = edge_crossing(ip, j, false);
            std::vector<long> hits;
            for (long e : {bottom, right, top, left})
                if (e >= 0) hits.push_back(e);
            if (hits.size() == 2) {
                link(hits[0], hits[1]);
            } else if (hits.size() == 4) {
                const double centre = 0.25 * (at(i, j) + at(i + 1, j) + at(i + 1, j + 1) + at(i, j + 1));
                if ((centre >= 0.0) == (at(i, j) >= 0.0)) {
                    link(bottom, right);
                    link(top, left);
                } else {
                    link(bottom, left);
                    link(right, top);
                }
            }
        }
    }
    // Crossings on the last row/column edges that no cell visited still count.
    for (const auto& [id, c] : crossings) {
        pg.nodal_points.push_back(c.uv);
        links[id];
    }

    // Critical points that lie on the nodal set become vertices.
    CriticalSet crit;
    try {
        crit = critical_set(field, options.flat_tol);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::NonDiscreteCriticalSet) throw;
        pg.degenerate = true;
    }
    std::vector<int> disk_vertex;
    std::vector<CriticalPoint> disks;
    for (const auto& cp : crit.points) {
        if (std::abs(cp.nu.dot(axis)) < pg.band_tol) {
            PseudographVertex v;
            v.kind = PseudographVertex::Kind::Critical;
            v.uv = cp.location;
            v.branch_order = cp.branch_order;
            disk_vertex.push_back(static_cast<int>(pg.vertices.size()));
            disks.push_back(cp);
            pg.vertices.push_back(v);
        }
    }
    auto inside_disk = [&](const Vec2& uv) -> int {
        for (std::size_t d = 0; d < disks.size(); ++d)
            if (param_distance(p, uv, disks[d].location) < disks[d].detection_radius) return static_cast<int>(d);
        return -1;
    };
    std::map<int, int> end_vertex;
    const PatchTopology& topo = p.topology();
    auto endpoint_vertex = [&](const Crossing& c) -> int {
        const int end = c.side >= 0 ? topo.side_end[static_cast<std::size_t>(c.side)] : -1;
        if (end >= 0) {
            auto it = end_vertex.find(end);
            if (it != end_vertex.end()) return it->second;
            PseudographVertex v;
            v.kind = PseudographVertex::Kind::End;
            v.uv = c.uv;
            v.end = end;
            const bool on_circle = static_cast<std::size_t>(end) < topo.end_normals.size() &&
                                   std::abs(topo.end_normals[static_cast<std::size_t>(end)].dot(axis)) < 1e-6;
            if (on_circle && static_cast<std::size_t>(end) < topo.end_branch_orders.size()) {
                v.branch_order = topo.end_branch_orders[static_cast<std::size_t>(end)];
            }
            pg.vertices.push_back(v);
            end_vertex[end] = static_cast<int>(pg.vertices.size()) - 1;
            return end_vertex[end];
        }
        PseudographVertex v;
        v.kind = PseudographVertex::Kind::Boundary;
        v.uv = c.uv;
        pg.vertices.push_back(v);
        return static_cast<int>(pg.vertices.size()) - 1;
    };

    // Split a traced chain into edges between disks and sides.
    auto emit = [&](const std::vector<long>& chain, bool closed) {
        std::vector<int> disk_of(chain.size());
        bool any_inside = false;
        for (std::size_t a = 0; a < chain.size(); ++a) {
            disk_of[a] = inside_disk(crossings[chain[a]].uv);
            any_inside = any_inside || disk_of[a] >= 0;
        }
        if (closed && !any_inside) {
            PseudographVertex v;
            v.kind = PseudographVertex::Kind::Artificial;
            v.uv = crossings[chain.front()].uv;
            pg.vertices.push_back(v);
            PseudographEdge e;
            e.a = e.b = static_cast<int>(pg.vertices.size()) - 1;
            e.closed = true;
            for (long id : chain) e.polyline.push_back(crossings[id].uv);
            pg.edges.push_back(std::move(e));
            return;
        }
        std::vector<long> seq = chain;
        std::vector<int> dseq = disk_of;
        if (closed) {
            // Start inside a disk so every run is bounded by disks.
            const auto first = std::find_if(dseq.begin(), dseq.end(), [](int d) { return d >= 0; });
            const std::size_t off = static_cast<std::size_t>(first - dseq.begin());
            std::rotate(seq.begin(), seq.begin() + static_cast<long>(off), seq.end());
            std::rotate(dseq.begin(), dseq.begin() + static_cast<long>(off), dseq.end());
            seq.push_back(seq.front());
            dseq.push_back(dseq.front());
        }
        std::size_t a = 0;
        while (a < seq.size()) {
            if (dseq[a] >= 0) {
                ++a;
                continue;
            }
            std::size_t b = a;
            while (b + 1 < seq.size() && dseq[b + 1] < 0) ++b;
            PseudographEdge e;
            for (std::size_t c = a; c <= b; ++c) e.polyline.push_back(crossings[seq[c]].uv);
            e.a = a > 0 ? disk_vertex[static_cast<std::size_t>(dseq[a - 1])] : endpoint_vertex(crossings[seq[a]]);
            e.b = b + 1 < seq.size() ? disk_vertex[static_cast<std::size_t>(dseq[b + 1])] : endpoint_vertex(crossings[seq[b]]);
            pg.edges.push_back(std::move(e));
            a = b + 1;
        }
    };

    std::map<long, char> used;
    auto trace = [&](long start) {
        std::vector<long> chain{start};
        used[start] = 1;
        long prev = -1, cur = start;
        while (true) {
            long next = -1;
            for (long n : links[cur])
                if (n != prev && !used[n]) {
                    next = n;
                    break;
                }
            if (next < 0) break;
            used[next] = 1;
            chain.push_back(next);
            prev = cur;
            cur = next;
        }
        return chain;
    };
    for (const auto& [id, nbrs] : links) {
        if (!used[id] && nbrs.size() < 2) emit(trace(id), false);
    }
    for (const auto& [id, nbrs] : links) {
        if (!used[id]) emit(trace(id), true);
    }

    pg.n_components_complement = count_sign_domains(p, phi);
    if (crossings.empty()) pg.degenerate = true;
    return pg;
}

int index_lower_bound(const Pseudograph& pg) {
    int b = 0;
    for (const auto& v : pg.vertices) b += v.branch_order;
    return b + 1 - 2 * pg.genus;
}

double riemann_hurwitz_defect(int euler_characteristic, int deg_nu, const std::vector<int>& branch_orders) {
    double b = 0.0;
    for (int x : branch_orders) b += x;
    return euler_characteristic - 2.0 * deg_nu + b;
}

EulerCount euler_inequality_check(const Pseudograph& pg) {
    EulerCount c;
    c.v = static_cast<int>(pg.vertices.size());
    c.e = static_cast<int>(pg.edges.size());
    c.n = pg.n_components_complement;
    c.slack = (c.v - c.e + c.n) - (2 - 2 * pg.genus);
    c.degenerate = pg.degenerate;
    return c;
}

GaussReport gauss_report(const SurfacePatch& patch, const IntegrandSpec& spec, const std::vector<Vec3>& axes,
                         int genus, const PseudographOptions& options) {
    const CurvatureField field = curvature_field(patch, spec);
    GaussReport r;
    r.degrees = degrees(field, wulff_mesh(spec, 5));
    r.end_branch_orders = patch.topology().end_branch_orders;
    r.upper_chain.deg_nu_gamma = r.degrees.deg_nu_gamma;
    r.upper_chain.c_prime = anisotropy_constants(spec).c_prime_gamma;

    CriticalSet cs;
    try {
        cs = critical_set(field, options.flat_tol);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::NonDiscreteCriticalSet) throw;
        r.degenerate = true;
        return r;
    }
    r.branch_points = cs.points;
    r.boundary_clusters = cs.boundary_clusters;
    std::vector<int> orders = r.end_branch_orders;
    for (const auto& p : cs.points) orders.push_back(p.branch_order);
    r.rh_defect = riemann_hurwitz_defect(patch.topology().euler_characteristic, r.degrees.deg_nu, orders);

    for (const Vec3& axis : axes) {
        r.pseudographs.push_back(pseudograph_extract(patch, spec, axis, genus, options));
        r.lower_bounds.push_back(index_lower_bound(r.pseudographs.back()));
        r.lower_bound = std::max(r.lower_bound, r.lower_bounds.back());
        r.degenerate = r.degenerate || r.pseudographs.back().degenerate;
    }
    return r;
}

}  // namespace anisomin
