#include "analysis.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

namespace boojum {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kFourPi = 4.0 * std::numbers::pi;
constexpr double kResidueTol = 0.2;

// Signed solid angle of the spherical triangle spanned by unit vectors.
double signed_solid_angle(const Vec3& a, const Vec3& b, const Vec3& c) {
    const double num = triple(a, b, c);
    const double den = 1.0 + a.dot(b) + b.dot(c) + c.dot(a);
    return 2.0 * std::atan2(num, den);
}

struct TetImage {
    double area = 0.0;
    bool degenerate = false; // an antipodal image pair breaks the closure
};

TetImage tet_image_area(const S2Field& u, const std::array<int, 4>& tet) {
    const Vec3 w[4] = {u[tet[0]].normalized(), u[tet[1]].normalized(),
                       u[tet[2]].normalized(), u[tet[3]].normalized()};
    TetImage out;
    for (int i = 0; i < 4; ++i) {
        for (int j = i + 1; j < 4; ++j) {
            if (w[i].dot(w[j]) < -1.0 + 1e-12) out.degenerate = true;
        }
    }
    out.area = signed_solid_angle(w[1], w[2], w[3]) +
               signed_solid_angle(w[0], w[3], w[2]) +
               signed_solid_angle(w[0], w[1], w[3]) +
               signed_solid_angle(w[0], w[2], w[1]);
    return out;
}

// Minimal rotation carrying the unit vector a onto b, applied to v.
Vec3 rotate_between(const Vec3& a, const Vec3& b, const Vec3& v) {
    const Vec3 axis = a.cross(b);
    const double s = axis.norm();
    const double c = a.dot(b);
    if (s < 1e-15) {
        if (c > 0.0) return v;
        // Antipodal normals cannot occur between neighboring mesh vertices.
        return -v;
    }
    const Vec3 n = axis / s;
    const double ang = std::atan2(s, c);
    const double cs = std::cos(ang), sn = std::sin(ang);
    return v * cs + n.cross(v) * sn + n * (n.dot(v) * (1.0 - cs));
}

// Turning of u relative to parallel transport along the directed edge a -> b,
// measured in the tangent plane at b.
double edge_turning(const S2Field& u, const BallMesh& mesh, int a, int b) {
    const Vec3& nu_a = mesh.vertex_normal[a];
    const Vec3& nu_b = mesh.vertex_normal[b];
    Vec3 t = rotate_between(nu_a, nu_b, u[a]);
    t -= nu_b * t.dot(nu_b);
    Vec3 ub = u[b] - nu_b * u[b].dot(nu_b);
    const double tn = t.norm(), un = ub.norm();
    if (tn < 1e-14 || un < 1e-14) return 0.0;
    t = t / tn;
    ub = ub / un;
    return std::atan2(nu_b.dot(t.cross(ub)), t.dot(ub));
}

// Surface Dirichlet density lumped at boundary vertices; peaks at defects.
std::vector<double> boundary_dirichlet_density(const S2Field& u,
                                               const BallMesh& mesh) {
    std::vector<double> rho(mesh.vertex_count(), 0.0);
    for (const auto& f : mesh.boundary_tris) {
        const Vec3 e1 = mesh.vertices[f[1]] - mesh.vertices[f[0]];
        const Vec3 e2 = mesh.vertices[f[2]] - mesh.vertices[f[0]];
        const Vec3 d1 = u[f[1]] - u[f[0]];
        const Vec3 d2 = u[f[2]] - u[f[0]];
        const double g11 = e1.dot(e1), g12 = e1.dot(e2), g22 = e2.dot(e2);
        const double det = g11 * g22 - g12 * g12;
        if (det <= 0.0) continue;
        // |grad_s u|^2 of the linear interpolant on the flat triangle.
        const double dir2 = (g22 * d1.dot(d1) - 2.0 * g12 * d1.dot(d2) +
                             g11 * d2.dot(d2)) / det;
        const double area = 0.5 * std::sqrt(det);
        const double share = area * dir2 / 3.0;
        rho[f[0]] += share;
        rho[f[1]] += share;
        rho[f[2]] += share;
    }
    return rho;
}

// Shortest mesh edge incident to the vertex; radial edges count, so deep
// radial refinement legitimately shrinks the admissible fit radius.
double local_edge_length(const BallMesh& mesh, int vertex) {
    double shortest = 1e300;
    for (const auto& tet : mesh.tets) {
        for (int i = 0; i < 4; ++i) {
            if (tet[i] != vertex) continue;
            for (int j = 0; j < 4; ++j) {
                if (j == i) continue;
                shortest = std::min(
                    shortest, (mesh.vertices[tet[j]] - mesh.vertices[tet[i]]).norm());
            }
        }
    }
    if (shortest == 1e300) {
        throw InvalidParameter("vertex " + std::to_string(vertex) +
                               " belongs to no tet");
    }
    return shortest;
}

} // namespace

std::vector<InteriorDefect> detect_interior_defects(const S2Field& u,
                                                    const BallMesh& mesh) {
    if (u.size() != static_cast<size_t>(mesh.vertex_count())) {
        throw InvalidParameter("detect_interior_defects: field size mismatch");
    }
    std::vector<InteriorDefect> out;
    for (int t = 0; t < mesh.tet_count(); ++t) {
        const TetImage image = tet_image_area(u, mesh.tets[t]);
        const double raw = image.area / kFourPi;
        const int deg = static_cast<int>(std::lround(raw));
        const double residue = std::abs(raw - deg);
        const bool unresolved = image.degenerate || residue >= kResidueTol;
        if (deg == 0 && !unresolved) continue;
        InteriorDefect d;
        d.tet = t;
        const auto& tet = mesh.tets[t];
        d.centroid = (mesh.vertices[tet[0]] + mesh.vertices[tet[1]] +
                      mesh.vertices[tet[2]] + mesh.vertices[tet[3]]) * 0.25;
        d.degree = deg;
        d.residue = residue;
        d.unresolved = unresolved;
        out.push_back(d);
    }
    return out;
}

int shell_restriction_degree(const S2Field& u, const BallMesh& mesh, int layer) {
    if (layer < 1 || layer > mesh.radial_layers) {
        throw InvalidParameter("shell_restriction_degree: layer out of range");
    }
    double area = 0.0;
    for (const auto& f : mesh.boundary_tris) {
        // Boundary triangles are stored on the outermost shell; remap the
        // surface connectivity onto the requested shell.
        const int ns = mesh.surface_vertex_count();
        auto on_shell = [&](int outer_id) {
            const int s = (outer_id - 1) % ns;
            return mesh.shell_vertex(layer, s);
        };
        area += signed_solid_angle(u[on_shell(f[0])].normalized(),
                                   u[on_shell(f[1])].normalized(),
                                   u[on_shell(f[2])].normalized());
    }
    return static_cast<int>(std::lround(area / kFourPi));
}

BoundaryScan detect_boundary_defects(const S2Field& u, const BallMesh& mesh) {
    if (u.size() != static_cast<size_t>(mesh.vertex_count())) {
        throw InvalidParameter("detect_boundary_defects: field size mismatch");
    }
    if (max_tangent_residual(u, mesh) > 1e-6) {
        throw InvalidParameter(
            "detect_boundary_defects: field is not tangential on the boundary");
    }

    const std::vector<double> rho = boundary_dirichlet_density(u, mesh);
    std::map<int, int> per_vertex;
    BoundaryScan scan;
    for (const auto& f : mesh.boundary_tris) {
        const double w = edge_turning(u, mesh, f[0], f[1]) +
                         edge_turning(u, mesh, f[1], f[2]) +
                         edge_turning(u, mesh, f[2], f[0]);
        const double enclosed = signed_solid_angle(mesh.vertex_normal[f[0]],
                                                   mesh.vertex_normal[f[1]],
                                                   mesh.vertex_normal[f[2]]);
        const double raw = (w + enclosed) / kTwoPi;
        const int idx = static_cast<int>(std::lround(raw));
        if (std::abs(raw - idx) >= kResidueTol) ++scan.unresolved;
        scan.index_sum += idx;
        if (idx == 0) continue;
        // Localize to the corner with the highest Dirichlet density.
        int best = f[0];
        for (const int v : {f[1], f[2]}) {
            if (rho[v] > rho[best] || (rho[v] == rho[best] && v < best)) best = v;
        }
        per_vertex[best] += idx;
    }
    scan.consistent = scan.index_sum == 2;
    for (const auto& [v, idx] : per_vertex) {
        if (idx == 0) continue;
        BoundaryDefect d;
        d.vertex = v;
        d.position = mesh.vertices[v];
        d.index = idx;
        scan.defects.push_back(d);
    }
    return scan;
}

TangentFit tangent_map_fit(const S2Field& u, const BallMesh& mesh,
                           int boojum_vertex, double r_fit) {
    if (boojum_vertex < 0 || boojum_vertex >= mesh.vertex_count() ||
        !mesh.is_boundary[boojum_vertex]) {
        throw InvalidParameter("tangent_map_fit: boojum must be a boundary vertex");
    }
    const double h = local_edge_length(mesh, boojum_vertex);
    if (!(r_fit > 3.0 * h)) {
        std::ostringstream os;
        os << "tangent_map_fit: r_fit = " << r_fit
           << " must exceed three local edge lengths (" << 3.0 * h << ")";
        throw InvalidParameter(os.str());
    }

    // Frame with the inward normal as third axis; the ball maps into the
    // upper half space with the boojum at the origin.
    const Vec3 nu = mesh.vertex_normal[boojum_vertex];
    const Vec3 n_in = -nu;
    const Vec3 seed = std::abs(nu.z) < 0.9 ? Vec3{0, 0, 1} : Vec3{1, 0, 0};
    const Vec3 t1 = nu.cross(seed).normalized();
    const Vec3 t2 = n_in.cross(t1);

    const Vec3 b = mesh.vertices[boojum_vertex];
    double e_plus = 0.0, e_minus = 0.0;
    int samples = 0;
    for (int v = 0; v < mesh.vertex_count(); ++v) {
        const Vec3 d = mesh.vertices[v] - b;
        const double r = d.norm();
        if (r < 1e-14 || r > r_fit) continue;
        const Vec3 y = Vec3{t1.dot(d), t2.dot(d), n_in.dot(d)} / r;
        const Vec3 w{t1.dot(u[v]), t2.dot(u[v]), n_in.dot(u[v])};
        e_plus += (w - y).norm2();
        e_minus += (w + y).norm2();
        ++samples;
    }
    if (samples < 20) {
        throw NumericalError("tangent_map_fit: insufficient resolution (" +
                             std::to_string(samples) + " samples)");
    }
    TangentFit fit;
    fit.samples = samples;
    if (e_plus <= e_minus) {
        fit.sign = 1;
        fit.fit_error = e_plus / samples;
    } else {
        fit.sign = -1;
        fit.fit_error = e_minus / samples;
    }
    return fit;
}

MonotonicityProfile monotonicity_profile(const S2Field& u, const BallMesh& mesh,
                                         int center_vertex,
                                         const std::vector<double>& radii) {
    if (center_vertex < 0 || center_vertex >= mesh.vertex_count() ||
        !mesh.is_boundary[center_vertex]) {
        throw InvalidParameter("monotonicity_profile: center must be a boundary vertex");
    }
    for (size_t i = 0; i < radii.size(); ++i) {
        if (!(radii[i] > 0.0) || radii[i] > 1.0) {
            throw InvalidParameter("monotonicity_profile: radii must lie in (0,1]");
        }
        if (i > 0 && !(radii[i] > radii[i - 1])) {
            throw InvalidParameter("monotonicity_profile: radii must be increasing");
        }
    }
    const Vec3 center = mesh.vertices[center_vertex];

    std::vector<std::pair<double, double>> contrib; // (distance, vol |grad u|^2)
    contrib.reserve(mesh.tet_count());
    for (int t = 0; t < mesh.tet_count(); ++t) {
        const auto& tet = mesh.tets[t];
        const Vec3 centroid = (mesh.vertices[tet[0]] + mesh.vertices[tet[1]] +
                               mesh.vertices[tet[2]] + mesh.vertices[tet[3]]) * 0.25;
        const auto& basis = mesh.grad_basis[t];
        Vec3 d0, d1, d2;
        for (int i = 0; i < 4; ++i) {
            d0 += u[tet[i]] * basis[i].x;
            d1 += u[tet[i]] * basis[i].y;
            d2 += u[tet[i]] * basis[i].z;
        }
        const double e = mesh.tet_volume[t] * (d0.norm2() + d1.norm2() + d2.norm2());
        contrib.emplace_back((centroid - center).norm(), e);
    }
    std::sort(contrib.begin(), contrib.end());

    MonotonicityProfile profile;
    profile.center_vertex = center_vertex;
    profile.radii = radii;
    profile.values.reserve(radii.size());
    size_t pos = 0;
    double acc = 0.0;
    for (const double r : radii) {
        while (pos < contrib.size() && contrib[pos].first <= r) {
            acc += contrib[pos].second;
            ++pos;
        }
        profile.values.push_back(acc / r);
    }
    for (size_t i = 0; i + 1 < profile.values.size(); ++i) {
        profile.violation =
            std::max(profile.violation, profile.values[i] - profile.values[i + 1]);
    }
    return profile;
}

DefectReport parity_and_report(const S2Field& u, const BallMesh& mesh,
                               double fit_radius) {
    DefectReport report;
    report.interior = detect_interior_defects(u, mesh);
    BoundaryScan scan = detect_boundary_defects(u, mesh);
    report.boundary = std::move(scan.defects);
    report.index_sum = scan.index_sum;
    report.index_consistent = scan.consistent;
    report.unresolved_boundary = scan.unresolved;
    for (const auto& d : report.interior) {
        if (d.unresolved) ++report.unresolved_interior;
    }
    report.n_int = 0;
    for (const auto& d : report.interior) {
        if (d.degree != 0) ++report.n_int;
    }
    report.n_bdy = static_cast<int>(report.boundary.size());
    report.n_int_even = report.n_int % 2 == 0;
    report.n_bdy_even = report.n_bdy % 2 == 0;

    if (fit_radius > 0.0) {
        for (auto& d : report.boundary) {
            try {
                const TangentFit fit = tangent_map_fit(u, mesh, d.vertex, fit_radius);
                d.tangent_sign = fit.sign;
                d.fit_error = fit.fit_error;
            } catch (const Error&) {
                d.tangent_sign = 0;
                d.fit_error = -1.0;
            }
        }
    }
    return report;
}

std::string DefectReport::to_json() const {
    nlohmann::json j;
    j["interior"] = nlohmann::json::array();
    for (const auto& d : interior) {
        j["interior"].push_back({{"tet", d.tet},
                                 {"centroid", {d.centroid.x, d.centroid.y, d.centroid.z}},
                                 {"degree", d.degree},
                                 {"residue", d.residue},
                                 {"unresolved", d.unresolved}});
    }
    j["boundary"] = nlohmann::json::array();
    for (const auto& d : boundary) {
        nlohmann::json e = {{"vertex", d.vertex},
                            {"position", {d.position.x, d.position.y, d.position.z}},
                            {"index", d.index}};
        if (d.tangent_sign == 0) {
            e["tangent_sign"] = "unfit";
        } else {
            e["tangent_sign"] = d.tangent_sign > 0 ? "+1" : "-1";
            e["fit_error"] = d.fit_error;
        }
        j["boundary"].push_back(e);
    }
    j["n_int"] = n_int;
    j["n_bdy"] = n_bdy;
    j["n_int_even"] = n_int_even;
    j["n_bdy_even"] = n_bdy_even;
    j["index_sum"] = index_sum;
    j["index_consistent"] = index_consistent;
    j["unresolved_interior"] = unresolved_interior;
    j["unresolved_boundary"] = unresolved_boundary;
    return j.dump(2) + "\n";
}

} // namespace boojum
