#include "champagne/wos_engine.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <istream>
#include <sstream>
#include <thread>

#include "champagne/errors.hpp"
#include "champagne/philox.hpp"
#include "champagne/potential.hpp"

namespace champagne {

namespace {

constexpr double kTinyRatio = 1e-4;   // annulus jump when r/s is below this
constexpr double kTinyRadius = 1e-12; // relative to the domain diameter
const double kLogTinyRatio = std::log(kTinyRatio);

// Exit point on |w - c| = D for a walker at offset u (|u| = s) from c,
// conditioned on missing the inner ball. Proposal is uniform; the target
// density relative to uniform is (P(y) - p) / (1 - p) where P is the ball
// Poisson kernel ratio.
Vec3 sample_annulus_exit(PhiloxStream& rng, const Vec3& u, double s, double D, double p, int d) {
    const double D2 = D * D, s2 = s * s;
    const double near = D - s;
    const double pmax = d == 2 ? (D2 - s2) / (near * near) : D * (D2 - s2) / (near * near * near);
    for (;;) {
        const Vec3 y = uniform_direction(rng, d) * D;
        const Vec3 diff = y - u;
        const double q2 = dot(diff, diff);
        const double ratio = d == 2 ? (D2 - s2) / q2 : D * (D2 - s2) / (q2 * std::sqrt(q2));
        const double accept = std::max(0.0, ratio - p) / (pmax - p);
        if (rng.uniform() < accept) return y;
    }
}

}  // namespace

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("CHAMPAGNE_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

WosEngine::WosEngine(const Domain& domain, const std::vector<Bubble>& bubbles)
    : domain_(domain), index_(bubbles), scale_(domain.diameter()) {
    center_.reserve(bubbles.size());
    radius_.reserve(bubbles.size());
    log_radius_.reserve(bubbles.size());
    for (const auto& b : bubbles) {
        center_.push_back(b.center);
        radius_.push_back(b.radius);
        log_radius_.push_back(b.log_radius);
    }
}

NearestGap WosEngine::nearest_gap(const Vec3& z) const {
    const double gb = domain_.boundary_gap(z);
    if (!(gb > 0)) throw DomainError("point is outside the domain");
    const GapQuery q = index_.query(z);
    if (q.id >= 0 && q.gap <= 0) throw InsideObstacle("point lies in bubble " + std::to_string(q.id));
    if (q.id >= 0 && q.gap < gb) return {q.gap, Limiter::Bubble, q.id};
    return {gb, Limiter::DomainBoundary, -1};
}

bool WosEngine::inside_bubble(const Vec3& z) const {
    const GapQuery q = index_.query(z);
    return q.id >= 0 && q.gap <= 0;
}

TrialResult WosEngine::trial(const Vec3& z0, const WosParams& p, std::uint64_t seed, std::uint64_t trial_index) const {
    PhiloxStream rng(seed, trial_index);
    const int d = domain_.d;
    const double eps_b = p.eps_boundary > 0 ? p.eps_boundary : 1e-6 * scale_;
    Vec3 z = z0;
    TrialResult res;
    for (std::uint64_t step = 0; step < p.max_steps; ++step) {
        res.steps = step;
        const double gb = domain_.boundary_gap(z);
        if (gb <= eps_b) {
            res.outcome = Outcome::HitBoundary;
            return res;
        }
        const GapQuery q = index_.query(z);
        double rho = gb;
        if (q.id >= 0) {
            const auto id = static_cast<std::size_t>(q.id);
            const double r = radius_[id];
            if (q.gap <= p.eps_obstacle * r || q.gap <= 0) {
                res.outcome = Outcome::HitObstacle;
                res.bubble = q.id;
                return res;
            }
            const Vec3 u = z - center_[id];
            const double s = norm(u);
            const double lr = log_radius_[id];
            if (lr - std::log(s) <= kLogTinyRatio) {
                const double clear = std::min(q.second, gb);
                if (p.annulus_jump && s <= clear / 4) {
                    const double D = clear / 2;
                    const double hit = annulus_hit_prob_log(lr, std::log(D), std::log(s), d);
                    if (rng.uniform() < hit) {
                        res.outcome = Outcome::HitObstacle;
                        res.bubble = q.id;
                        return res;
                    }
                    z = center_[id] + sample_annulus_exit(rng, u, s, D, hit, d);
                    continue;
                }
            } else if (r < kTinyRadius * scale_) {
                // within 1e4 radii of a bubble below floating-point geometry
                res.outcome = Outcome::HitObstacle;
                res.bubble = q.id;
                return res;
            }
            rho = std::min(rho, q.gap);
        }
        z += uniform_direction(rng, d) * rho;
    }
    res.steps = p.max_steps;
    res.outcome = Outcome::Timeout;
    return res;
}

HitEstimate WosEngine::hit_probability(const Vec3& z0, std::uint64_t trials, const WosParams& p,
                                       std::uint64_t seed) const {
    if (trials == 0) throw DomainError("trials must be positive");
    if (!(domain_.boundary_gap(z0) > 0)) throw DomainError("start point is outside the domain");
    HitEstimate est;
    est.start = z0;
    est.d = domain_.d;
    est.trials = trials;
    est.seed = seed;
    if (inside_bubble(z0)) {
        est.hits_obstacle = trials;
        est.p_hat = 1.0;
        return est;
    }

    constexpr std::uint64_t kBlock = 256;
    const std::uint64_t blocks = (trials + kBlock - 1) / kBlock;
    struct Tally {
        std::uint64_t hit = 0, bnd = 0, tmo = 0, steps = 0;
    };
    std::vector<Tally> tallies(blocks);
    std::atomic<std::uint64_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::uint64_t b = next.fetch_add(1);
            if (b >= blocks) return;
            Tally t;
            const std::uint64_t end = std::min(trials, (b + 1) * kBlock);
            for (std::uint64_t i = b * kBlock; i < end; ++i) {
                const TrialResult r = trial(z0, p, seed, i);
                t.steps += r.steps;
                if (r.outcome == Outcome::HitObstacle)
                    ++t.hit;
                else if (r.outcome == Outcome::HitBoundary)
                    ++t.bnd;
                else
                    ++t.tmo;
            }
            tallies[b] = t;
        }
    };
    const int nthreads = std::min<std::uint64_t>(resolve_threads(p.threads), blocks);
    if (nthreads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    for (const auto& t : tallies) {
        est.hits_obstacle += t.hit;
        est.hits_boundary += t.bnd;
        est.timeouts += t.tmo;
        est.steps += t.steps;
    }
    const std::uint64_t n = trials - est.timeouts;
    if (n > 0) {
        est.p_hat = static_cast<double>(est.hits_obstacle) / static_cast<double>(n);
        est.ci_halfwidth_3sigma = 3.0 * std::sqrt(est.p_hat * (1.0 - est.p_hat) / static_cast<double>(n));
    }
    est.flagged = static_cast<double>(est.timeouts) > p.timeout_cap * static_cast<double>(trials);
    return est;
}

std::size_t find_shell(const ChampagneConfig& cfg, long k, std::int32_t cluster) {
    for (std::size_t i = 0; i < cfg.shells.size(); ++i)
        if (cfg.shells[i].k == k && cfg.shells[i].cluster == cluster) return i;
    throw DomainError("shell " + std::to_string(k) + " is not present in the config");
}

ShellGammaResult shell_gamma_estimate(const ChampagneConfig& cfg, std::size_t shell_record, long j,
                                      std::size_t z_samples, std::uint64_t trials, std::uint64_t seed,
                                      const WosParams& p) {
    if (shell_record >= cfg.shells.size()) throw DomainError("shell record out of range");
    const ShellRecord& sh = cfg.shells[shell_record];
    if (j < 0 || static_cast<std::uint64_t>(j) >= std::max<std::uint64_t>(sh.m, 1))
        throw DomainError("intermediate index j must satisfy 0 <= j < m_k");
    if (z_samples == 0) throw DomainError("z_samples must be positive");
    const Vec3 center = sh.cluster >= 0 ? cfg.clusters.at(static_cast<std::size_t>(sh.cluster)).y : Vec3{};
    ShellGammaResult out;
    out.k = sh.k;
    out.j = j;
    out.alpha = sh.alpha;
    out.rho_n = sh.R + static_cast<double>(j) * sh.sep;
    out.rho_next = sh.R + static_cast<double>(j + 1) * sh.sep;
    const auto first = cfg.bubbles.begin() + static_cast<std::ptrdiff_t>(sh.first_bubble);
    std::vector<Bubble> shell(first, first + static_cast<std::ptrdiff_t>(sh.count));
    const WosEngine engine(Domain::ball(cfg.d, center, out.rho_next), shell);
    PhiloxStream pick(seed, 0x7a7a7aull);
    for (std::size_t i = 0; i < z_samples; ++i) {
        const double u1 = pick.uniform(), u2 = pick.uniform();
        const Vec3 z = sphere_point(center, out.rho_n, cfg.d, u1, u2);
        const HitEstimate e = engine.hit_probability(z, trials, p, mix_seed(seed, i));
        out.min_p = std::min(out.min_p, e.p_hat);
        out.min_lower = std::min(out.min_lower, e.p_hat - e.ci_halfwidth_3sigma);
        out.points.push_back(e);
    }
    return out;
}

namespace {
std::string num17(double v) {
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, r.ptr);
}
}  // namespace

std::string estimate_csv_header(int d) {
    std::string h;
    for (int i = 0; i < d; ++i) h += "x" + std::to_string(i) + ",";
    return h + "trials,hits_obstacle,hits_boundary,timeouts,p_hat,ci3sigma,seed";
}

std::string estimate_csv_row(const HitEstimate& e) {
    std::string row;
    for (int i = 0; i < e.d; ++i) row += num17(e.start[static_cast<std::size_t>(i)]) + ",";
    row += std::to_string(e.trials) + "," + std::to_string(e.hits_obstacle) + "," + std::to_string(e.hits_boundary) +
           "," + std::to_string(e.timeouts) + "," + num17(e.p_hat) + "," + num17(e.ci_halfwidth_3sigma) + "," +
           std::to_string(e.seed);
    return row;
}

std::vector<HitEstimate> read_estimates_csv(std::istream& in) {
    std::vector<HitEstimate> out;
    std::string line;
    int d = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) f.push_back(cell);
        if (d == 0) {
            if (f.empty() || f[0] != "x0") throw DomainError("results CSV is missing its header");
            d = static_cast<int>(f.size()) - 7;
            if (d < 2 || d > 3) throw DomainError("results CSV has an unexpected column count");
            continue;
        }
        if (static_cast<int>(f.size()) != d + 7) throw DomainError("results CSV row has the wrong width");
        HitEstimate e;
        e.d = d;
        for (int i = 0; i < d; ++i) e.start[static_cast<std::size_t>(i)] = std::stod(f[static_cast<std::size_t>(i)]);
        auto at = [&](int off) { return f[static_cast<std::size_t>(d + off)]; };
        e.trials = std::stoull(at(0));
        e.hits_obstacle = std::stoull(at(1));
        e.hits_boundary = std::stoull(at(2));
        e.timeouts = std::stoull(at(3));
        e.p_hat = std::stod(at(4));
        e.ci_halfwidth_3sigma = std::stod(at(5));
        e.seed = std::stoull(at(6));
        out.push_back(e);
    }
    return out;
}

}  // namespace champagne
