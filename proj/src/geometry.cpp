#include "hpng/geometry.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "hpng/errors.hpp"

namespace hpng {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

void HPolytope::add_row(const Vec& a, double rhs) {
    if (a.size() != A.cols()) throw DimensionError("row length does not match polytope dimension");
    A.conservativeResize(A.rows() + 1, Eigen::NoChange);
    b.conservativeResize(b.size() + 1);
    A.row(A.rows() - 1) = a.transpose();
    b(b.size() - 1) = rhs;
}

void HPolytope::canonicalize() {
    const double tol = tolerances().eps;
    std::vector<std::pair<Vec, double>> keep;
    bool violated = false;
    for (int i = 0; i < rows(); ++i) {
        Vec a = A.row(i).transpose();
        double rhs = b(i);
        const double nrm = a.norm();
        if (nrm <= 1e-12) {
            if (rhs < -tol) violated = true;
            continue;
        }
        a /= nrm;
        rhs /= nrm;
        bool merged = false;
        for (auto& [ka, kb] : keep)
            if ((ka - a).lpNorm<Eigen::Infinity>() <= 1e-9) {
                kb = std::min(kb, rhs);
                merged = true;
                break;
            }
        if (!merged) keep.emplace_back(std::move(a), rhs);
    }
    if (violated) keep.emplace_back(Vec::Zero(dim()), -1.0);
    HPolytope out(dim());
    out.A.resize(long(keep.size()), dim());
    out.b.resize(long(keep.size()));
    for (std::size_t i = 0; i < keep.size(); ++i) {
        out.A.row(long(i)) = keep[i].first.transpose();
        out.b(long(i)) = keep[i].second;
    }
    *this = std::move(out);
}

bool contains(const HPolytope& P, const Vec& x, double tol) {
    if (x.size() != P.dim()) throw DimensionError("point dimension does not match polytope");
    for (int i = 0; i < P.rows(); ++i)
        if (P.A.row(i).dot(x) > P.b(i) + tol) return false;
    return true;
}

namespace {

struct Bits {
    std::vector<std::uint64_t> w;
    explicit Bits(std::size_t n = 0) : w((n + 63) / 64, 0) {}
    void set(std::size_t i) { w[i / 64] |= std::uint64_t(1) << (i % 64); }
    Bits operator&(const Bits& o) const {
        Bits r = *this;
        for (std::size_t i = 0; i < w.size(); ++i) r.w[i] &= o.w[i];
        return r;
    }
    int count() const {
        int c = 0;
        for (auto v : w) c += std::popcount(v);
        return c;
    }
    bool subset_of(const Bits& o) const {
        for (std::size_t i = 0; i < w.size(); ++i)
            if (w[i] & ~o.w[i]) return false;
        return true;
    }
};

struct Ray {
    Vec v;
    Bits zero;
};

// Extreme rays of the pointed cone {y | R y >= 0}; rows of R have unit norm.
std::vector<Vec> extreme_rays(const Mat& R) {
    const int D = int(R.cols());
    const int m = int(R.rows());
    const double tol = 1e-9;
    std::vector<int> basis;
    Mat Q(D, 0);
    std::vector<char> used(m, 0);
    for (int i = 0; i < m && int(basis.size()) < D; ++i) {
        Vec r = R.row(i).transpose();
        Vec res = r - Q * (Q.transpose() * r);
        if (res.norm() > 1e-9) {
            Q.conservativeResize(Eigen::NoChange, Q.cols() + 1);
            Q.col(Q.cols() - 1) = res.normalized();
            basis.push_back(i);
            used[i] = 1;
        }
    }
    if (int(basis.size()) < D) throw GeometryError("cone is not pointed (unbounded or lower-dimensional input)");
    Mat M(D, D);
    for (int j = 0; j < D; ++j) M.row(j) = R.row(basis[j]);
    const Mat inv = M.fullPivLu().inverse();
    std::vector<Ray> rays;
    for (int j = 0; j < D; ++j) {
        Ray r{inv.col(j).normalized(), Bits(std::size_t(m))};
        for (int k = 0; k < D; ++k)
            if (k != j) r.zero.set(std::size_t(basis[k]));
        rays.push_back(std::move(r));
    }
    for (int i = 0; i < m; ++i) {
        if (used[i]) continue;
        const Vec row = R.row(i).transpose();
        std::vector<double> val(rays.size());
        std::vector<int> pos, zer, neg;
        for (std::size_t k = 0; k < rays.size(); ++k) {
            val[k] = row.dot(rays[k].v);
            if (val[k] > tol) pos.push_back(int(k));
            else if (val[k] < -tol) neg.push_back(int(k));
            else zer.push_back(int(k));
        }
        for (int k : zer) rays[k].zero.set(std::size_t(i));
        if (neg.empty()) continue;
        std::vector<Ray> next;
        for (int p : pos) next.push_back(rays[p]);
        for (int z : zer) next.push_back(rays[z]);
        for (int p : pos)
            for (int q : neg) {
                Bits common = rays[p].zero & rays[q].zero;
                if (common.count() < D - 2) continue;
                bool adjacent = true;
                for (std::size_t k = 0; k < rays.size() && adjacent; ++k) {
                    if (int(k) == p || int(k) == q) continue;
                    if (common.subset_of(rays[k].zero)) adjacent = false;
                }
                if (!adjacent) continue;
                Ray r{(val[p] * rays[q].v - val[q] * rays[p].v).normalized(), common};
                r.zero.set(std::size_t(i));
                next.push_back(std::move(r));
            }
        rays = std::move(next);
        if (rays.empty()) break;
    }
    std::vector<Vec> out;
    for (auto& r : rays) out.push_back(std::move(r.v));
    return out;
}

void push_unique(std::vector<Vec>& pts, const Vec& v) {
    const double tol = tolerances().geom;
    for (const auto& p : pts)
        if ((p - v).lpNorm<Eigen::Infinity>() <= tol * (1.0 + v.lpNorm<Eigen::Infinity>())) return;
    pts.push_back(v);
}

}  // namespace

std::vector<Vec> vertex_enumeration(const HPolytope& Pin) {
    HPolytope P = Pin;
    P.canonicalize();
    const int d = P.dim();
    if (d == 0) {
        for (int i = 0; i < P.rows(); ++i)
            if (P.b(i) < -tolerances().eps) return {};
        return {Vec(0)};
    }
    Mat R(P.rows() + 1, d + 1);
    for (int i = 0; i < P.rows(); ++i) {
        R(i, 0) = P.b(i);
        R.row(i).tail(d) = -P.A.row(i);
        R.row(i).normalize();
    }
    R.row(P.rows()).setZero();
    R(P.rows(), 0) = 1.0;
    const auto rays = extreme_rays(R);
    std::vector<Vec> verts;
    bool recession = false;
    for (const auto& r : rays) {
        if (r(0) > 1e-9) push_unique(verts, r.tail(d) / r(0));
        else recession = true;
    }
    if (recession && !verts.empty()) throw GeometryError("polytope is unbounded");
    return verts;
}

HPolytope convex_hull(const std::vector<Vec>& pointsIn) {
    if (pointsIn.empty()) throw GeometryError("hull of no points");
    const int d = int(pointsIn.front().size());
    std::vector<Vec> pts;
    for (const auto& p : pointsIn) push_unique(pts, p);
    Mat R(long(pts.size()), d + 1);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        R(long(i), 0) = 1.0;
        R.row(long(i)).tail(d) = -pts[i].transpose();
        R.row(long(i)).normalize();
    }
    HPolytope H(d);
    for (const auto& r : extreme_rays(R)) {
        const Vec a = r.tail(d);
        const double nrm = a.norm();
        if (nrm <= 1e-9) continue;
        H.add_row(a / nrm, r(0) / nrm);
    }
    H.canonicalize();
    return H;
}

HPolytope project_out(const HPolytope& P, int j) {
    const double tol = 1e-12;
    const int d = P.dim();
    std::vector<int> pos, neg, zer;
    for (int i = 0; i < P.rows(); ++i) {
        const double a = P.A(i, j);
        if (a > tol) pos.push_back(i);
        else if (a < -tol) neg.push_back(i);
        else zer.push_back(i);
    }
    auto drop = [&](const Vec& row) {
        Vec r(d - 1);
        for (int k = 0, o = 0; k < d; ++k)
            if (k != j) r(o++) = row(k);
        return r;
    };
    HPolytope out(d - 1);
    for (int i : zer) out.add_row(drop(P.A.row(i).transpose()), P.b(i));
    for (int p : pos)
        for (int q : neg) {
            const double ap = P.A(p, j), aq = -P.A(q, j);
            const Vec row = aq * P.A.row(p).transpose() + ap * P.A.row(q).transpose();
            out.add_row(drop(row), aq * P.b(p) + ap * P.b(q));
        }
    out.canonicalize();
    return out;
}

namespace {

int affine_rank(const std::vector<Vec>& pts) {
    if (pts.size() < 2) return 0;
    Mat M(pts.front().size(), long(pts.size()) - 1);
    for (std::size_t i = 1; i < pts.size(); ++i) M.col(long(i) - 1) = pts[i] - pts[0];
    Eigen::JacobiSVD<Mat> svd(M);
    const auto& s = svd.singularValues();
    int r = 0;
    for (int i = 0; i < s.size(); ++i)
        if (s(i) > 1e-9 * std::max(1.0, s(0))) ++r;
    return r;
}

// Cone triangulation from the first point over the facets not containing it.
std::vector<std::vector<int>> pull(const std::vector<Vec>& pts) {
    const int k = int(pts.front().size());
    const int n = int(pts.size());
    if (n == k + 1) {
        std::vector<int> all(n);
        for (int i = 0; i < n; ++i) all[i] = i;
        return {all};
    }
    if (k == 1) {
        int lo = 0, hi = 0;
        for (int i = 1; i < n; ++i) {
            if (pts[i](0) < pts[lo](0)) lo = i;
            if (pts[i](0) > pts[hi](0)) hi = i;
        }
        return {{lo, hi}};
    }
    const double tol = 1e-7;
    const HPolytope hull = convex_hull(pts);
    std::vector<std::vector<int>> out;
    for (int f = 0; f < hull.rows(); ++f) {
        const Vec a = hull.A.row(f).transpose();
        const double beta = hull.b(f);
        if (std::abs(a.dot(pts[0]) - beta) <= tol) continue;
        std::vector<int> tight;
        for (int i = 0; i < n; ++i)
            if (std::abs(a.dot(pts[i]) - beta) <= tol) tight.push_back(i);
        if (int(tight.size()) < k) continue;
        // Orthonormal coordinates inside the facet hyperplane.
        Eigen::HouseholderQR<Mat> qr(a);
        const Mat Qf = qr.householderQ();
        const Mat B = Qf.rightCols(k - 1);
        std::vector<Vec> sub;
        for (int i : tight) sub.push_back(B.transpose() * (pts[i] - pts[tight[0]]));
        if (affine_rank(sub) < k - 1) continue;
        for (auto s : pull(sub)) {
            std::vector<int> simplex{0};
            for (int idx : s) simplex.push_back(tight[idx]);
            out.push_back(std::move(simplex));
        }
    }
    return out;
}

double det_volume(const std::vector<Vec>& pts, const std::vector<int>& idx) {
    const int d = int(pts.front().size());
    Mat A(d, d);
    for (int j = 0; j < d; ++j) A.col(j) = pts[idx[j + 1]] - pts[idx[0]];
    return std::abs(A.determinant());
}

}  // namespace

std::vector<std::vector<int>> triangulate_points(const std::vector<Vec>& points) {
    if (points.empty()) return {};
    const int d = int(points.front().size());
    const int n = int(points.size());
    if (n < d + 1 || d == 0) return {};
    Vec c = Vec::Zero(d);
    for (const auto& p : points) c += p;
    c /= n;
    double scale = 0.0;
    for (const auto& p : points) scale = std::max(scale, (p - c).lpNorm<Eigen::Infinity>());
    if (scale <= 0) return {};
    std::vector<Vec> q;
    for (const auto& p : points) q.push_back((p - c) / scale);
    if (affine_rank(q) < d) return {};

    std::vector<std::vector<int>> cells;
    std::vector<Vec> lifted;
    for (const auto& p : q) {
        Vec l(d + 1);
        l.head(d) = p;
        l(d) = p.squaredNorm();
        lifted.push_back(l);
    }
    if (n == d + 1) {
        std::vector<int> all(n);
        for (int i = 0; i < n; ++i) all[i] = i;
        cells.push_back(all);
    } else if (affine_rank(lifted) < d + 1) {
        cells = pull(q);  // all points co-spherical: a single cell
    } else {
        const HPolytope hull = convex_hull(lifted);
        for (int f = 0; f < hull.rows(); ++f) {
            if (hull.A(f, d) >= -1e-9) continue;  // upper or vertical facet
            const Vec a = hull.A.row(f).transpose();
            std::vector<int> tight;
            for (int i = 0; i < n; ++i)
                if (std::abs(a.dot(lifted[i]) - hull.b(f)) <= 1e-7) tight.push_back(i);
            if (int(tight.size()) == d + 1) {
                cells.push_back(tight);
                continue;
            }
            std::vector<Vec> sub;
            for (int i : tight) sub.push_back(q[i]);
            for (auto s : pull(sub)) {
                std::vector<int> mapped;
                for (int idx : s) mapped.push_back(tight[idx]);
                cells.push_back(std::move(mapped));
            }
        }
    }
    std::vector<std::vector<int>> out;
    for (auto& cell : cells)
        if (det_volume(q, cell) > 1e-12) out.push_back(std::move(cell));
    return out;
}

std::vector<Simplex> triangulate(const HPolytope& P) {
    const auto verts = vertex_enumeration(P);
    std::vector<Simplex> out;
    for (const auto& idx : triangulate_points(verts)) {
        Simplex s;
        for (int i : idx) s.vertices.push_back(verts[i]);
        out.push_back(std::move(s));
    }
    return out;
}

AffineMap simplex_affine_map(const Simplex& s) {
    const int n = int(s.vertices.size()) - 1;
    if (n < 0) throw GeometryError("simplex without vertices");
    AffineMap m;
    m.v0 = s.vertices[0];
    m.A.resize(n, n);
    for (int j = 0; j < n; ++j) m.A.col(j) = s.vertices[j + 1] - s.vertices[0];
    m.det = n == 0 ? 1.0 : m.A.determinant();
    m.absDet = std::abs(m.det);
    if (m.absDet <= tolerances().vol) throw GeometryError("degenerate simplex");
    return m;
}

double simplex_volume(const Simplex& s) {
    const int n = int(s.vertices.size()) - 1;
    Mat A(n, n);
    for (int j = 0; j < n; ++j) A.col(j) = s.vertices[j + 1] - s.vertices[0];
    double fact = 1.0;
    for (int k = 2; k <= n; ++k) fact *= k;
    return std::abs(A.determinant()) / fact;
}

Estimate probability_over_simplex(const Simplex& s, const Density& density, const McConfig& cfg,
                                  std::uint64_t stream, bool sortedSampling) {
    const AffineMap map = simplex_affine_map(s);
    const int n = int(map.A.rows());
    double fact = 1.0;
    for (int k = 2; k <= n; ++k) fact *= k;
    const double vol = map.absDet / fact;
    if (!sortedSampling) {
        Integrand f = [&](std::span<const double> y) {
            double sum = 0.0;
            for (double v : y) sum += v;
            if (sum > 1.0) return 0.0;
            const Vec x = map.A * Eigen::Map<const Vec>(y.data(), n) + map.v0;
            return density(std::span<const double>(x.data(), std::size_t(n))) * map.absDet;
        };
        return integrate(f, IntervalBox(std::size_t(n), {0.0, 1.0}), cfg, stream);
    }
    CounterRng rng(cfg.seed, stream);
    std::vector<Estimate> its;
    std::vector<double> u(std::size_t(n) + 1);
    Vec y(n), x(n);
    std::size_t skipped = 0;
    for (int it = 0; it < cfg.iterations; ++it) {
        double sum = 0.0, sumsq = 0.0;
        std::size_t used = 0;
        for (std::size_t i = 0; i < cfg.samples; ++i) {
            for (int k = 0; k < n; ++k) u[k] = rng.uniform();
            std::sort(u.begin(), u.begin() + n);
            double prev = 0.0;
            for (int k = 0; k < n; ++k) {
                y(k) = u[k] - prev;
                prev = u[k];
            }
            x = map.A * y + map.v0;
            const double f = density(std::span<const double>(x.data(), std::size_t(n)));
            if (!std::isfinite(f)) {
                ++skipped;
                continue;
            }
            sum += f;
            sumsq += f * f;
            ++used;
        }
        Estimate e;
        if (used > 0) {
            const double mean = sum / double(used);
            const double var = std::max(0.0, sumsq / double(used) - mean * mean);
            e.value = vol * mean;
            e.sigma = vol * std::sqrt(var / double(used));
        }
        e.evaluations = cfg.samples;
        its.push_back(e);
    }
    Estimate r = combine_iterations(its);
    r.skipped = skipped;
    return r;
}

IntervalBox bounding_box(const HPolytope& P) {
    const auto verts = vertex_enumeration(P);
    if (verts.empty()) return {};
    const int d = P.dim();
    IntervalBox box(std::size_t(d), {std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()});
    for (const auto& v : verts)
        for (int k = 0; k < d; ++k) {
            box[k].first = std::min(box[k].first, v(k));
            box[k].second = std::max(box[k].second, v(k));
        }
    return box;
}

Estimate probability_over_region_direct(const HPolytope& P, const Density& density, const McConfig& cfg,
                                        std::uint64_t stream) {
    const IntervalBox bb = bounding_box(P);
    if (bb.empty()) return {};
    for (const auto& [lo, hi] : bb)
        if (!(hi - lo > tolerances().geom)) return {};
    const int d = P.dim();
    Integrand f = [&, d](std::span<const double> x) {
        const Eigen::Map<const Vec> v(x.data(), d);
        if (!contains(P, v, 0.0)) return 0.0;
        return density(x);
    };
    return integrate(f, bb, cfg, stream);
}

bool full_dimensional(const HPolytope& P) {
    const auto verts = vertex_enumeration(P);
    if (P.dim() == 0) return !verts.empty();
    return int(verts.size()) > P.dim() && affine_rank(verts) == P.dim();
}

double volume(const HPolytope& P) {
    double v = 0.0;
    for (const auto& s : triangulate(P)) v += simplex_volume(s);
    return v;
}

}  // namespace hpng
