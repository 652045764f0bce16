#include "champagne/builder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "champagne/errors.hpp"
#include "champagne/philox.hpp"
#include "champagne/point_grid.hpp"
#include "champagne/potential.hpp"
#include "champagne/sphere_nets.hpp"

namespace champagne {

namespace {

constexpr double kPi = std::numbers::pi;
const double kLogHundredth = std::log(0.01);

std::string num(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

ShellRecord place_shell(ChampagneConfig& cfg, const ShellParams& sp, const Vec3& center, double scale,
                        std::int32_t cluster, std::uint64_t seed, const BuildOptions& opt) {
    const int d = cfg.d;
    const SphereNet net = build_net(center, scale * sp.R, scale * sp.a, d, seed, opt.net_cap);
    if (cfg.bubbles.size() + net.points.size() > opt.max_bubbles)
        throw Infeasible("configuration needs more than " + std::to_string(opt.max_bubbles) + " bubbles");
    ShellRecord rec;
    rec.cluster = cluster;
    rec.k = sp.k;
    rec.count = net.points.size();
    rec.R = scale * sp.R;
    rec.sep = scale * sp.a;
    rec.alpha = sp.alpha;
    rec.m = sp.m;
    rec.log_r = std::log(scale) + sp.log_r;
    rec.first_bubble = cfg.bubbles.size();
    const double radius = std::exp(rec.log_r);
    std::int64_t i = 0;
    for (const auto& p : net.points)
        cfg.bubbles.push_back({p, radius, rec.log_r, static_cast<std::int32_t>(sp.k), cluster, i++});
    cfg.shells.push_back(rec);
    return rec;
}

long resolve_k2(const Schedule& s, const BuildOptions& opt) {
    const long k1 = compute_k1(s);
    const long k2 = opt.k2.value_or(k1);
    if (k2 < k1) throw DomainError("k2=" + std::to_string(k2) + " is below k1=" + std::to_string(k1));
    return k2;
}

void run_audit(const ChampagneConfig& cfg, const BuildOptions& opt) {
    if (!opt.audit) return;
    if (auto hit = find_overlap(cfg.bubbles))
        throw DisjointnessViolation("bubbles " + std::to_string(hit->first) + " and " + std::to_string(hit->second) +
                                    " intersect");
}

}  // namespace

double log_radius_ratio(const Schedule& s, long k) {
    const ShellLogs L = shell_logs(s, k);
    const double log_r = log_radius_from_alpha(L.log_a, L.log_alpha, s.d);
    return log_r - L.log_a;
}

long compute_k1(const Schedule& s, long horizon) {
    long last_bad = s.k0 - 1;
    long k = s.k0;
    for (; k <= horizon; ++k) {
        double ratio;
        try {
            ratio = log_radius_ratio(s, k);
        } catch (const OverflowError&) {
            break;  // the ratio only shrinks further; the analytic flag covers the rest
        }
        if (!(ratio < kLogHundredth - 1e-12)) last_bad = k;
    }
    if (last_bad >= horizon) throw HorizonExceeded("r_k < a_k/100 not reached below k=" + std::to_string(horizon));
    return last_bad + 1;
}

ChampagneConfig build_ball_config(const Schedule& s, const CapacityWeight& w, long k_lo, long k_hi, int d,
                                  std::uint64_t seed, const BuildOptions& opt) {
    if (d != s.d) throw DomainError("schedule dimension does not match d");
    if (d != 2 && d != 3) throw DomainError("configs are built for d in {2, 3}");
    if (k_hi < k_lo) throw DomainError("empty shell range");
    const long k2 = resolve_k2(s, opt);
    const long need = std::max({s.k0, compute_k1(s), k2});
    if (k_lo < need) throw DomainError("k_lo must be at least max(k0, k1, k2) = " + std::to_string(need));

    ChampagneConfig cfg;
    cfg.construction = "ball";
    cfg.d = d;
    cfg.domain = Domain::unit_ball(d);
    cfg.schedule = s;
    cfg.weight = w.capped_for(s, k2);
    cfg.k_lo = k_lo;
    cfg.k_hi = k_hi;
    cfg.seed = seed;
    double expected = 0;
    for (long k = k_lo; k <= k_hi; ++k) {
        const double R = 1.0 - shell_tail(s, k);
        expected += net_count_estimate(R, std::exp(shell_logs(s, k).log_a), d);
    }
    if (expected > static_cast<double>(opt.max_bubbles))
        throw Infeasible("configuration needs about " + num(expected) + " bubbles, cap is " +
                         std::to_string(opt.max_bubbles));
    for (long k = k_lo; k <= k_hi; ++k)
        place_shell(cfg, shell_params(s, k, k2), {}, 1.0, -1, mix_seed(seed, static_cast<std::uint64_t>(k)), opt);
    cfg.capacity_sum = config_capacity(cfg, cfg.weight);
    run_audit(cfg, opt);
    return cfg;
}

CorollaryPlan plan_corollary(double r, double R, double gamma, double delta_y, const Schedule& s,
                             const CapacityWeight& w, double c_eff, const BuildOptions& opt) {
    if (!(r > 0 && r < R)) throw DomainError("y-ball needs 0 < r < R");
    if (!(gamma >= 0 && gamma < 1)) throw DomainError("gamma must lie in [0, 1)");
    if (!(c_eff > 0)) throw DomainError("c_eff must be positive");
    if (!(delta_y > 0)) throw DomainError("delta_y must be positive");
    const int d = s.d;
    const long k2 = resolve_k2(s, opt);
    const double target = std::log1p(-gamma);
    const double log_scale = std::log(R);
    for (long kp = k2; kp <= k2 + opt.k_search_horizon; ++kp) {
        if (!(1.0 - shell_tail(s, kp) > r / R)) continue;
        CorollaryPlan plan;
        plan.k_first = kp;
        long kpp = kp;
        double sum = 0;
        double cap = 0;
        double count_total = 0;
        while (sum > target) {
            if (kpp - kp > opt.k_search_horizon) throw Infeasible("product bound not reached within the shell horizon");
            const ShellLogs L = shell_logs(s, kpp);
            const double ca = c_eff * std::exp(L.log_alpha);
            if (!(ca < 1)) throw Infeasible("c_eff * alpha_k >= 1 at k=" + std::to_string(kpp));
            sum += std::exp(L.log_m) * std::log1p(-ca);
            const double Rk = 1.0 - shell_tail(s, kpp);
            const double count = net_count_estimate(Rk, std::exp(L.log_a), d);
            const double log_r = log_scale + log_radius_from_alpha(L.log_a, L.log_alpha, d);
            const double log_phi = log_phi_from_log_radius(log_r, d);
            cap += count * std::exp(log_phi) * w.from_log(log_phi);
            count_total += count;
            ++kpp;
        }
        plan.k_last = kpp;
        plan.log_product = sum;
        plan.capacity = cap;
        plan.bubble_estimate = static_cast<std::uint64_t>(std::min(count_total, 1.8e19));
        if (cap < delta_y) return plan;
    }
    throw Infeasible("no shell window with R_k' > r/R fits the capacity budget " + num(delta_y));
}

namespace {

Cluster place_cluster(ChampagneConfig& cfg, const CorollaryPlan& plan, const Vec3& y, double r, double R,
                      double delta_y, std::int32_t level, std::uint64_t seed, const BuildOptions& opt) {
    const long k2 = resolve_k2(cfg.schedule, opt);
    Cluster c;
    c.id = static_cast<std::int32_t>(cfg.clusters.size());
    c.level = level;
    c.y = y;
    c.R_outer = R;
    c.r_inner = r;
    c.delta_y = delta_y;
    c.k_first = plan.k_first;
    c.k_last = plan.k_last;
    const std::uint64_t cseed = mix_seed(seed, static_cast<std::uint64_t>(c.id));
    for (long k = plan.k_first; k < plan.k_last; ++k) {
        const ShellRecord rec = place_shell(cfg, shell_params(cfg.schedule, k, k2), y, R, c.id,
                                            mix_seed(cseed, static_cast<std::uint64_t>(k)), opt);
        c.capacity += shell_capacity_term(rec, cfg.weight, cfg.d);
    }
    if (!(c.capacity < delta_y))
        throw Infeasible("cluster capacity " + num(c.capacity) + " exceeds its budget " + num(delta_y));
    cfg.clusters.push_back(c);
    return c;
}

}  // namespace

ChampagneConfig build_corollary_config(const Vec3& y, double r, double R, double gamma, double delta_y,
                                       const Schedule& s, const CapacityWeight& w, double c_eff,
                                       std::uint64_t seed, const BuildOptions& opt) {
    const CorollaryPlan plan = plan_corollary(r, R, gamma, delta_y, s, w, c_eff, opt);
    if (static_cast<double>(plan.bubble_estimate) > static_cast<double>(opt.max_bubbles))
        throw Infeasible("y-ball construction needs about " + std::to_string(plan.bubble_estimate) + " bubbles");
    ChampagneConfig cfg;
    cfg.construction = "corollary";
    cfg.d = s.d;
    cfg.domain = Domain::ball(s.d, y, R);
    cfg.schedule = s;
    cfg.weight = w;
    cfg.k_lo = plan.k_first;
    cfg.k_hi = plan.k_last - 1;
    cfg.seed = seed;
    cfg.c_eff = c_eff;
    cfg.delta = delta_y;
    place_cluster(cfg, plan, y, r, R, delta_y, 0, seed, opt);
    cfg.capacity_sum = config_capacity(cfg, w);
    run_audit(cfg, opt);
    return cfg;
}

Exhaustion auto_exhaustion(const Domain& dom, int levels) {
    if (levels < 1) throw DomainError("exhaustion needs at least one level");
    double inner = 0;
    if (dom.kind == DomainKind::Box) {
        inner = std::numeric_limits<double>::infinity();
        for (int a = 0; a < dom.d; ++a) inner = std::min(inner, 0.5 * (dom.hi[a] - dom.lo[a]));
    } else {
        for (const auto& b : dom.balls) inner = std::max(inner, b.radius);
    }
    Exhaustion ex;
    for (int n = 1; n <= levels; ++n) ex.shrink.push_back(inner * (levels + 1 - n) / (levels + 1));
    return ex;
}

std::vector<double> exhaustion_scales(const Exhaustion& ex) {
    const auto L = ex.shrink.size();
    if (L == 0) throw DomainError("exhaustion has no levels");
    std::vector<double> b;
    for (std::size_t i = 0; i < L; ++i) {
        const double s = ex.shrink[i];
        const double next = i + 1 < L ? ex.shrink[i + 1] : 0.0;
        const double prev = i > 0 ? ex.shrink[i - 1] : std::numeric_limits<double>::infinity();
        const double gap = std::min(prev - s, s - next);
        const double v = std::min(1.0 / static_cast<double>(i + 1), 0.5 * gap);
        if (!(v > 0)) throw Infeasible("exhaustion levels " + std::to_string(i + 1) + " touch (b_n <= 0)");
        b.push_back(v);
    }
    return b;
}

std::vector<Vec3> boundary_net(const Domain& D, double b, std::uint64_t seed) {
    if (!(b > 0)) throw DomainError("boundary net scale must be positive");
    const int d = D.d;
    const bool single = D.kind != DomainKind::Box && D.balls.size() == 1;
    if (single && 1.5 * b < 2 * D.balls[0].radius) {
        return build_net(D.balls[0].center, D.balls[0].radius, 1.5 * b, d, seed).points;
    }
    const double thr = 0.35 * b;
    std::vector<Vec3> cand;
    if (D.kind == DomainKind::Box) {
        if (d == 2) {
            const double h = 0.15 * b;
            const Vec3 corners[4] = {{D.lo.x, D.lo.y, 0}, {D.hi.x, D.lo.y, 0}, {D.hi.x, D.hi.y, 0}, {D.lo.x, D.hi.y, 0}};
            for (int e = 0; e < 4; ++e) {
                const Vec3 a = corners[e], c = corners[(e + 1) % 4];
                const auto n = static_cast<int>(std::ceil(distance(a, c) / h));
                for (int i = 0; i <= n; ++i) cand.push_back(a + (c - a) * (static_cast<double>(i) / n));
            }
        } else {
            const double h = 0.1 * b;
            for (int axis = 0; axis < 3; ++axis)
                for (int side = 0; side < 2; ++side) {
                    const int u = (axis + 1) % 3, v = (axis + 2) % 3;
                    const auto nu = static_cast<int>(std::ceil((D.hi[u] - D.lo[u]) / h));
                    const auto nv = static_cast<int>(std::ceil((D.hi[v] - D.lo[v]) / h));
                    for (int i = 0; i <= nu; ++i)
                        for (int j = 0; j <= nv; ++j) {
                            Vec3 p;
                            p[axis] = side == 0 ? D.lo[axis] : D.hi[axis];
                            p[u] = D.lo[u] + (D.hi[u] - D.lo[u]) * i / nu;
                            p[v] = D.lo[v] + (D.hi[v] - D.lo[v]) * j / nv;
                            cand.push_back(p);
                        }
                }
        }
    } else {
        const double h = d == 2 ? 0.15 * b : 0.1 * b;
        auto outside_others = [&](const Vec3& p, std::size_t i, std::size_t j) {
            for (std::size_t q = 0; q < D.balls.size(); ++q) {
                if (q == i || q == j) continue;
                if (distance(p, D.balls[q].center) < D.balls[q].radius * (1 - 1e-12)) return false;
            }
            return true;
        };
        const double golden = kPi * (3.0 - std::sqrt(5.0));
        for (std::size_t i = 0; i < D.balls.size(); ++i) {
            const auto& B = D.balls[i];
            if (d == 2) {
                const auto n = static_cast<std::size_t>(std::ceil(2 * kPi * B.radius / h));
                for (std::size_t t = 0; t < n; ++t) {
                    const double th = 2 * kPi * static_cast<double>(t) / static_cast<double>(n);
                    const Vec3 p = B.center + Vec3{B.radius * std::cos(th), B.radius * std::sin(th), 0};
                    if (outside_others(p, i, i)) cand.push_back(p);
                }
            } else {
                const auto n = static_cast<std::size_t>(std::ceil(4 * kPi * B.radius * B.radius / (h * h)));
                for (std::size_t t = 0; t < n; ++t) {
                    const double z = 1.0 - (2.0 * static_cast<double>(t) + 1.0) / static_cast<double>(n);
                    const double rho = std::sqrt(std::max(0.0, 1 - z * z));
                    const double th = golden * static_cast<double>(t);
                    const Vec3 p = B.center + Vec3{rho * std::cos(th), rho * std::sin(th), z} * B.radius;
                    if (outside_others(p, i, i)) cand.push_back(p);
                }
            }
        }
        // seams where two spheres meet
        for (std::size_t i = 0; i < D.balls.size(); ++i)
            for (std::size_t j = i + 1; j < D.balls.size(); ++j) {
                const auto& A = D.balls[i];
                const auto& B = D.balls[j];
                const Vec3 dv = B.center - A.center;
                const double L = norm(dv);
                if (!(L < A.radius + B.radius) || !(L > std::abs(A.radius - B.radius))) continue;
                const double x = (L * L + A.radius * A.radius - B.radius * B.radius) / (2 * L);
                const double rho = std::sqrt(std::max(0.0, A.radius * A.radius - x * x));
                const Vec3 e = dv * (1.0 / L);
                const Vec3 mid = A.center + e * x;
                // two unit vectors orthogonal to e
                Vec3 f = std::abs(e.x) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
                f = f - e * dot(f, e);
                f = f * (1.0 / norm(f));
                const Vec3 g{e.y * f.z - e.z * f.y, e.z * f.x - e.x * f.z, e.x * f.y - e.y * f.x};
                if (d == 2) {
                    const Vec3 n2{-e.y, e.x, 0};
                    for (double sgn : {1.0, -1.0}) {
                        const Vec3 p = mid + n2 * (sgn * rho);
                        if (outside_others(p, i, j)) cand.push_back(p);
                    }
                } else {
                    const auto n = static_cast<std::size_t>(std::ceil(2 * kPi * rho / h)) + 1;
                    for (std::size_t t = 0; t < n; ++t) {
                        const double th = 2 * kPi * static_cast<double>(t) / static_cast<double>(n);
                        const Vec3 p = mid + (f * std::cos(th) + g * std::sin(th)) * rho;
                        if (outside_others(p, i, j)) cand.push_back(p);
                    }
                }
            }
    }
    PointGrid grid(thr, d);
    for (const auto& p : cand)
        if (!grid.any_within(p, thr)) grid.insert(p);
    return grid.points();
}

NetAudit audit_boundary_net(const Domain& D, const std::vector<Vec3>& Y, double b, std::size_t samples,
                            std::uint64_t seed) {
    NetAudit a;
    PointGrid grid(0.5 * b, D.d);
    for (const auto& y : Y) grid.insert(y);
    PhiloxStream rng(seed, 0x62646e79ull);
    for (std::size_t i = 0; i < samples; ++i)
        a.max_nearest = std::max(a.max_nearest, grid.nearest_distance(sample_boundary(D, rng)));
    a.min_pairwise = grid.min_pairwise_distance();
    a.pass = !Y.empty() && a.max_nearest < 0.5 * b && a.min_pairwise >= b / 3.0;
    return a;
}

ChampagneConfig build_general_config(const Domain& dom, const Exhaustion& ex, double delta, const Schedule& s,
                                     const CapacityWeight& w, double c_eff, std::uint64_t seed,
                                     const BuildOptions& opt) {
    if (dom.d != s.d) throw DomainError("schedule dimension does not match the domain");
    if (!dom.connected()) throw DomainError("domain is not connected");
    if (!(delta > 0)) throw DomainError("delta must be positive");
    for (std::size_t i = 0; i < ex.shrink.size(); ++i) {
        if (!(ex.shrink[i] > 0)) throw DomainError("shrink amounts must be positive");
        if (i > 0 && !(ex.shrink[i] < ex.shrink[i - 1])) throw DomainError("shrink amounts must decrease");
    }
    const std::vector<double> b = exhaustion_scales(ex);
    ChampagneConfig cfg;
    cfg.construction = "general";
    cfg.d = dom.d;
    cfg.domain = dom;
    cfg.schedule = s;
    cfg.weight = w;
    cfg.seed = seed;
    cfg.c_eff = c_eff;
    cfg.delta = delta;
    cfg.k_lo = std::numeric_limits<long>::max();
    cfg.k_hi = 0;

    struct LevelPlan {
        std::vector<Vec3> Y;
        CorollaryPlan plan;
        double delta_y;
    };
    std::vector<LevelPlan> plans;
    double total = 0;
    for (std::size_t i = 0; i < b.size(); ++i) {
        const int n = static_cast<int>(i + 1);
        const Domain V = dom.shrink(ex.shrink[i]);
        LevelPlan lp;
        lp.Y = boundary_net(V, b[i], mix_seed(seed, 0x4c00ull + i));
        const NetAudit audit = audit_boundary_net(V, lp.Y, b[i], 4000, mix_seed(seed, 0x4100ull + i));
        if (!audit.pass)
            throw Error("boundary net for level " + std::to_string(n) + " fails its audit (max nearest " +
                        num(audit.max_nearest / b[i]) + " b, min pairwise " + num(audit.min_pairwise / b[i]) + " b)");
        lp.delta_y = delta / (static_cast<double>(lp.Y.size()) * std::ldexp(1.0, n));
        lp.plan = plan_corollary(b[i] / 7, b[i] / 6, 0.5, lp.delta_y, s, w, c_eff, opt);
        total += static_cast<double>(lp.plan.bubble_estimate) * static_cast<double>(lp.Y.size());
        plans.push_back(std::move(lp));
    }
    if (total > static_cast<double>(opt.max_bubbles))
        throw Infeasible("general construction needs about " + num(total) + " bubbles, cap is " +
                         std::to_string(opt.max_bubbles));
    cfg.bubbles.reserve(static_cast<std::size_t>(total * 1.01) + 16);
    for (std::size_t i = 0; i < plans.size(); ++i) {
        const int n = static_cast<int>(i + 1);
        const auto& lp = plans[i];
        LevelRecord rec;
        rec.n = n;
        rec.shrink = ex.shrink[i];
        rec.b = b[i];
        rec.y_count = lp.Y.size();
        rec.delta_y = lp.delta_y;
        for (const auto& y : lp.Y) {
            place_cluster(cfg, lp.plan, y, b[i] / 7, b[i] / 6, lp.delta_y, n, seed, opt);
        }
        rec.delta_level = lp.delta_y * static_cast<double>(lp.Y.size());
        cfg.levels.push_back(rec);
        cfg.k_lo = std::min(cfg.k_lo, lp.plan.k_first);
        cfg.k_hi = std::max(cfg.k_hi, lp.plan.k_last - 1);
    }
    cfg.capacity_sum = config_capacity(cfg, w);
    run_audit(cfg, opt);
    return cfg;
}

std::optional<std::pair<std::size_t, std::size_t>> find_overlap(const std::vector<Bubble>& bubbles) {
    const ObstacleIndex index(bubbles);
    for (std::size_t i = 0; i < bubbles.size(); ++i) {
        const GapQuery q = index.query_excluding(bubbles[i].center, static_cast<std::int64_t>(i));
        if (q.id >= 0 && !(q.gap > bubbles[i].radius)) return std::make_pair(i, static_cast<std::size_t>(q.id));
    }
    return std::nullopt;
}

std::optional<std::pair<std::size_t, std::size_t>> find_overlap_brute(const std::vector<Bubble>& bubbles) {
    for (std::size_t i = 0; i < bubbles.size(); ++i)
        for (std::size_t j = i + 1; j < bubbles.size(); ++j)
            if (!(distance(bubbles[i].center, bubbles[j].center) > bubbles[i].radius + bubbles[j].radius))
                return std::make_pair(i, j);
    return std::nullopt;
}

double max_radius_to_gap(const ChampagneConfig& cfg) {
    double m = 0;
    for (const auto& b : cfg.bubbles) {
        const double g = cfg.domain.boundary_gap(b.center);
        if (!(g > 0)) return std::numeric_limits<double>::infinity();
        m = std::max(m, b.radius / g);
    }
    return m;
}

double shell_capacity_term(const ShellRecord& sh, const CapacityWeight& w, int d) {
    const double log_phi = log_phi_from_log_radius(sh.log_r, d);
    return static_cast<double>(sh.count) * std::exp(log_phi) * w.from_log(log_phi);
}

double config_capacity(const ChampagneConfig& cfg, const CapacityWeight& w) {
    double sum = 0;
    for (const auto& sh : cfg.shells) sum += shell_capacity_term(sh, w, cfg.d);
    return sum;
}

Calibration calibrate_c_eff(const Schedule& s, long k_first, int shells, std::size_t z_samples,
                            std::uint64_t trials, std::uint64_t seed, const WosParams& p) {
    if (shells < 1) throw DomainError("calibration needs at least one shell");
    BuildOptions opt;
    opt.k2 = std::max(k_first, compute_k1(s));
    opt.audit = false;
    const ChampagneConfig cfg =
        build_ball_config(s, CapacityWeight::power(1.0), k_first, k_first + shells - 1, s.d, seed, opt);
    Calibration cal;
    cal.c_eff = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < cfg.shells.size(); ++i) {
        const auto& sh = cfg.shells[i];
        std::vector<long> js{0, static_cast<long>(sh.m / 2), static_cast<long>(sh.m) - 1};
        std::sort(js.begin(), js.end());
        js.erase(std::unique(js.begin(), js.end()), js.end());
        for (long j : js) {
            const auto est = shell_gamma_estimate(cfg, i, j, z_samples, trials,
                                                  mix_seed(seed, static_cast<std::uint64_t>(sh.k * 1000 + j)), p);
            const double ratio = est.min_lower / sh.alpha;
            cal.rows.push_back({sh.k, j, sh.alpha, est.min_p, est.min_lower, ratio});
            cal.c_eff = std::min(cal.c_eff, ratio);
        }
    }
    return cal;
}

}  // namespace champagne
