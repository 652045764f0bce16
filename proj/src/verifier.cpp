#include "champagne/verifier.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "champagne/builder.hpp"
#include "champagne/errors.hpp"
#include "champagne/philox.hpp"
#include "champagne/potential.hpp"
#include "champagne/sphere_nets.hpp"
#include "json.hpp"

namespace champagne {

namespace {

using json = nlohmann::json;

std::string num17(double v) {
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, r.ptr);
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

double log_term(double log_phi, const CapacityWeight& w) {
    const double f = w.from_log(log_phi);
    return log_phi + std::log(f);
}

// Upper bound on #X_k a_k^{d-1} / R^{d-1}, used in (k-est) form for the tail.
double count_constant(int d) { return d == 2 ? net_count_bounds(2).hi : net_count_bounds(d).hi; }

}  // namespace

double capacity_sum(const ChampagneConfig& cfg, const CapacityWeight& w) {
    long double sum = 0.0L;
    for (const auto& b : cfg.bubbles) {
        const double lp = log_phi_from_log_radius(b.log_radius, cfg.d);
        sum += std::exp(log_term(lp, w));
    }
    return static_cast<double>(sum);
}

CapacityWeight theorem1_weight(int d, int n) {
    return d == 2 ? CapacityWeight::theorem_one_d2(n) : CapacityWeight::theorem_one_d3(n, d);
}

double theorem1_sum(const ChampagneConfig& cfg, int n) {
    if (n < 1) throw DomainError("theorem sums need n >= 1");
    long double sum = 0.0L;
    for (const auto& b : cfg.bubbles) {
        const double L = -b.log_radius;  // log 1/r
        if (!(L > 0)) throw DomainError("bubble radius must be below 1");
        if (cfg.d == 2) {
            // (log 1/r)^-1 (log^(n+1) 1/r)^-1, with log^(n+1) 1/r = log^(n) L
            const double v = iterated_log(n, L);
            if (!(v > 0)) throw DomainError("radius too large for the iterated logarithm");
            sum += 1.0L / (static_cast<long double>(L) * v);
        } else {
            // r^{d-2} (log^(n) 1/r)^-1, with log^(n) 1/r = log^(n-1) L
            const double v = n == 1 ? L : iterated_log(n - 1, L);
            if (!(v > 0)) throw DomainError("radius too large for the iterated logarithm");
            sum += std::exp((cfg.d - 2) * b.log_radius) / static_cast<long double>(v);
        }
    }
    return static_cast<double>(sum);
}

double product_lower_bound(const std::vector<double>& gammas) {
    double s = 0.0;
    for (double g : gammas) {
        if (!(g >= 0 && g < 1)) throw DomainError("gamma values must lie in [0, 1)");
        s += std::log1p(-g);
    }
    return -std::expm1(s);
}

double kest_ratio(const ChampagneConfig& cfg, const CapacityWeight& w, std::size_t shell_record) {
    if (shell_record >= cfg.shells.size()) throw DomainError("shell record out of range");
    const ShellRecord& sh = cfg.shells[shell_record];
    const ShellLogs L = shell_logs(cfg.schedule, sh.k);
    const double lp = log_phi_from_log_radius(sh.log_r, cfg.d);
    const double num = std::log(static_cast<double>(sh.count)) + log_term(lp, w);
    const double den = L.log_beta + std::log(w.from_log((cfg.d - 1) * L.log_alpha));
    return std::exp(num - den);
}

namespace {

double log_shell_term_at(const Schedule& s, const CapacityWeight& w, long k, double R) {
    const ShellLogs L = shell_logs(s, k);
    if (!std::isfinite(L.log_a) || !std::isfinite(L.log_alpha)) throw OverflowError("shell logs overflow at k=" + std::to_string(k));
    const int d = s.d;
    // count * phi = (count a^{d-1}) * alpha / a = (count a^{d-1}) * beta; the
    // grouping avoids cancelling two huge logarithms.
    double log_count_area;
    if (d == 2) {
        const double lr = std::log(R) - L.log_a;
        // exact ceiling while it matters, otherwise the leading term
        log_count_area = lr < 40 ? std::log(net_count_estimate(R, std::exp(L.log_a), 2)) + L.log_a
                                 : std::log(6 * std::acos(-1.0) * R);
    } else {
        log_count_area = log_net_count_upper(1.0, 0.0, d);
    }
    const double lp = (d - 2) * L.log_a + L.log_alpha;
    return log_count_area + L.log_beta + std::log(w.from_log(lp));
}

}  // namespace

double log_shell_term(const Schedule& s, const CapacityWeight& w, long k) {
    return log_shell_term_at(s, w, k, s.d == 2 ? 1.0 - shell_tail(s, k) : 1.0);
}

DeltaResult delta_total(const Schedule& s, const CapacityWeight& w, long k_lo, long horizon) {
    DeltaResult r;
    r.k_lo = k_lo;
    const CapacityWeight wc = w.capped_for(s, k_lo);
    long double sum = 0.0L;
    long last = k_lo - 1;
    double R = s.d == 2 ? 1.0 - shell_tail(s, k_lo) : 1.0;
    for (long k = k_lo; k <= k_lo + horizon; ++k) {
        double lt;
        try {
            lt = log_shell_term_at(s, wc, k, R);
            if (s.d == 2) R += shell_step(s, k);
        } catch (const OverflowError&) {
            break;
        } catch (const DomainError&) {
            break;
        }
        if (!std::isfinite(lt)) break;
        sum += std::exp(lt);
        last = k;
    }
    if (last < k_lo) throw OverflowError("no representable shell at k=" + std::to_string(k_lo));
    r.k_hi = last;
    r.partial = static_cast<double>(sum);
    const auto env = weight_tail_envelope(s, wc, last);
    if (!env) throw Infeasible("no analytic tail bound for " + s.name() + " with " + w.name());
    r.tail_bound = count_constant(s.d) * *env;
    return r;
}

DeltaResult find_k_lo_for_delta(const Schedule& s, const CapacityWeight& w, double delta, long horizon) {
    if (!(delta > 0)) throw DomainError("delta must be positive");
    long lo = std::max(s.k0, compute_k1(s));
    DeltaResult first = delta_total(s, w, lo, horizon);
    if (first.total() < delta) {
        first.delta = delta;
        return first;
    }
    // doubling, then bisection on the first passing k_lo
    long hi = lo;
    DeltaResult at_hi = first;
    while (!(at_hi.total() < delta)) {
        lo = hi;
        if (hi > std::numeric_limits<long>::max() / 4) throw Infeasible("delta not reached");
        hi *= 2;
        at_hi = delta_total(s, w, hi, horizon);
    }
    while (hi - lo > 1) {
        const long mid = lo + (hi - lo) / 2;
        DeltaResult m = delta_total(s, w, mid, horizon);
        if (m.total() < delta) {
            hi = mid;
            at_hi = m;
        } else {
            lo = mid;
        }
    }
    at_hi.delta = delta;
    return at_hi;
}

CertificateReport unavoidability_certificate(const std::vector<double>& gamma_hat,
                                             const std::vector<double>& gamma_sigma, const HitEstimate& global) {
    if (gamma_sigma.size() != gamma_hat.size()) throw DomainError("gamma and sigma lists differ in length");
    CertificateReport c;
    double log_prod = 0;
    for (double g : gamma_hat) {
        const double gc = std::clamp(g, 0.0, 1.0 - 1e-15);
        log_prod += std::log1p(-gc);
        c.gamma_partial_sum += gc;
        c.trajectory.push_back(-std::expm1(log_prod));
    }
    c.bound = -std::expm1(log_prod);
    // dB/dgamma_j = prod_{i != j} (1 - gamma_i)
    double var = 0;
    for (std::size_t j = 0; j < gamma_hat.size(); ++j) {
        const double gc = std::clamp(gamma_hat[j], 0.0, 1.0 - 1e-15);
        const double dj = (1.0 - c.bound) / (1.0 - gc);
        var += dj * dj * gamma_sigma[j] * gamma_sigma[j];
    }
    const double sp = global.sigma();
    c.sigma_combined = std::sqrt(var + sp * sp);
    c.extrapolated = -std::expm1(-c.gamma_partial_sum);
    c.p_hat = global.p_hat;
    c.pass = c.p_hat >= c.bound - 3.0 * c.sigma_combined;
    return c;
}

bool VerificationReport::pass() const {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return !certificate || certificate->pass;
}

std::string VerificationReport::to_json() const {
    json j;
    j["construction"] = construction;
    j["weight"] = weight;
    j["capacity_total"] = capacity_total;
    j["kest_max"] = kest_max;
    j["kest_min"] = kest_min;
    json rows = json::array();
    for (const auto& r : this->rows) {
        json o{{"cluster", r.cluster}, {"k", r.k},         {"count", r.count},
               {"phi_r", r.phi_r},     {"cap_term", r.cap_term}, {"kest_ratio", r.kest}};
        o["gamma_hat"] = r.gamma_hat ? json(*r.gamma_hat) : json(nullptr);
        o["cum_bound"] = r.cum_bound ? json(*r.cum_bound) : json(nullptr);
        rows.push_back(o);
    }
    j["shells"] = rows;
    json cj = json::array();
    for (const auto& c : checks) cj.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    j["checks"] = cj;
    if (certificate) {
        const auto& c = *certificate;
        j["certificate"] = {{"bound", c.bound},
                            {"sigma_combined", c.sigma_combined},
                            {"gamma_partial_sum", c.gamma_partial_sum},
                            {"extrapolated_bound", c.extrapolated},
                            {"p_hat", c.p_hat},
                            {"trajectory", c.trajectory},
                            {"pass", c.pass}};
    }
    j["pass"] = pass();
    return j.dump(2);
}

std::string VerificationReport::to_csv() const {
    std::string out = "k,count,phi_r,cap_term,kest_ratio,gamma_hat,cum_bound\n";
    for (const auto& r : rows) {
        out += std::to_string(r.k) + "," + std::to_string(r.count) + "," + num17(r.phi_r) + "," + num17(r.cap_term) +
               "," + num17(r.kest) + "," + (r.gamma_hat ? num17(*r.gamma_hat) : "") + "," +
               (r.cum_bound ? num17(*r.cum_bound) : "") + "\n";
    }
    return out;
}

std::string VerificationReport::to_table() const {
    std::ostringstream os;
    char line[256];
    os << "construction " << construction << ", weight " << weight << "\n";
    std::snprintf(line, sizeof line, "%8s %8s %12s %14s %14s %12s %12s %12s\n", "cluster", "k", "count", "phi(r_k)",
                  "cap term", "kest ratio", "gamma_hat", "cum bound");
    os << line;
    for (const auto& r : rows) {
        std::snprintf(line, sizeof line, "%8d %8ld %12llu %14.6e %14.6e %12.5g %12s %12s\n", r.cluster, r.k,
                      static_cast<unsigned long long>(r.count), r.phi_r, r.cap_term, r.kest,
                      r.gamma_hat ? fmt(*r.gamma_hat).c_str() : "-", r.cum_bound ? fmt(*r.cum_bound).c_str() : "-");
        os << line;
    }
    std::snprintf(line, sizeof line, "capacity total %.10g; kest ratio range [%.5g, %.5g]\n", capacity_total, kest_min,
                  kest_max);
    os << line;
    for (const auto& c : checks) os << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << c.detail << "\n";
    if (certificate) {
        const auto& c = *certificate;
        std::snprintf(line, sizeof line,
                      "certificate: p_hat %.6g vs bound %.6g (3 sigma %.3g), sum gamma_hat %.6g, "
                      "extrapolated 1-exp(-sum) %.6g: %s\n",
                      c.p_hat, c.bound, 3 * c.sigma_combined, c.gamma_partial_sum, c.extrapolated,
                      c.pass ? "PASS" : "FAIL");
        os << line;
    }
    return os.str();
}

VerificationReport verify_config(const ChampagneConfig& cfg, const CapacityWeight& w, const VerifyOptions& opt) {
    VerificationReport rep;
    rep.construction = cfg.construction;
    rep.weight = w.name();
    rep.kest_min = std::numeric_limits<double>::infinity();
    rep.kest_max = 0;
    long double total = 0.0L;
    bool identity_ok = true, ratio_ok = true;
    double worst_identity = 0;
    std::string ratio_detail;
    for (std::size_t i = 0; i < cfg.shells.size(); ++i) {
        const ShellRecord& sh = cfg.shells[i];
        ShellRow row;
        row.cluster = sh.cluster;
        row.k = sh.k;
        row.count = sh.count;
        const double lp = log_phi_from_log_radius(sh.log_r, cfg.d);
        row.phi_r = std::exp(lp);
        row.cap_term = static_cast<double>(sh.count) * std::exp(log_term(lp, w));
        total += row.cap_term;
        if (sh.count > 0) {
            row.kest = kest_ratio(cfg, w, i);
            rep.kest_min = std::min(rep.kest_min, row.kest);
            rep.kest_max = std::max(rep.kest_max, row.kest);
        }
        if (sh.cluster < 0) {
            // phi(r_k) = a_k^{d-2} alpha_k and r_k < a_k / 100 on unscaled shells
            const ShellLogs L = shell_logs(cfg.schedule, sh.k);
            const double expect = (cfg.d - 2) * L.log_a + L.log_alpha;
            const double rel = std::abs(std::expm1(lp - expect));
            worst_identity = std::max(worst_identity, rel);
            if (!(rel <= 1e-12)) identity_ok = false;
            if (!(sh.log_r < std::log(sh.sep / 100.0))) {
                ratio_ok = false;
                if (ratio_detail.empty()) ratio_detail = "r_k >= a_k/100 at k=" + std::to_string(sh.k);
            }
        }
        rep.rows.push_back(row);
    }
    if (cfg.shells.empty()) rep.kest_min = 0;
    rep.capacity_total = static_cast<double>(total);

    auto add = [&](std::string name, bool pass, std::string detail) {
        rep.checks.push_back({std::move(name), pass, std::move(detail)});
    };
    const double per_bubble = capacity_sum(cfg, w);
    const double rel = rep.capacity_total == 0 ? std::abs(per_bubble)
                                                : std::abs(per_bubble - rep.capacity_total) / rep.capacity_total;
    add("capacity_total_consistent", rel <= 1e-12,
        "per-bubble sum " + fmt(per_bubble) + " vs shell table " + fmt(rep.capacity_total));
    add("phi_identity", identity_ok, "max relative error " + fmt(worst_identity));
    add("radius_ratio", ratio_ok, ratio_detail.empty() ? "r_k < a_k/100 on every shell" : ratio_detail);
    if (cfg.construction == "ball") {
        const double m = max_radius_to_gap(cfg);
        add("boundary_ratio", m <= 0.01, "sup r_x / dist(x, boundary) = " + fmt(m));
    }
    if (!cfg.levels.empty()) {
        bool ok = true;
        std::string detail;
        for (const auto& lv : cfg.levels) {
            const double want = cfg.delta / std::ldexp(1.0, lv.n);
            const double e = std::abs(lv.delta_level - want) / want;
            if (!(e <= 1e-12)) ok = false;
            detail += "level " + std::to_string(lv.n) + ": " + fmt(lv.delta_level) + " (delta/2^n " + fmt(want) + ") ";
        }
        add("delta_split", ok, detail);
    }
    if (opt.audit && cfg.bubbles.size() > 1) {
        const auto ov = find_overlap(cfg.bubbles);
        add("disjoint", !ov.has_value(),
            ov ? "bubbles " + std::to_string(ov->first) + " and " + std::to_string(ov->second) + " intersect"
               : "closed bubbles pairwise disjoint");
    }
    if (opt.delta) {
        add("capacity_below_delta", rep.capacity_total < *opt.delta,
            "capacity sum " + fmt(rep.capacity_total) + " vs delta " + fmt(*opt.delta));
    }
    if (opt.results) {
        if (opt.results->empty()) throw DomainError("certificate needs at least one global estimate");
        std::vector<double> g, sg;
        std::size_t shell_no = 0;
        for (std::size_t i = 0; i < cfg.shells.size(); ++i) {
            const ShellRecord& sh = cfg.shells[i];
            if (sh.count == 0) continue;
            const auto est = shell_gamma_estimate(cfg, i, 0, opt.gamma_samples, opt.gamma_trials,
                                                  mix_seed(opt.seed, 0x6700ull + shell_no++), opt.wos);
            double sigma = 0;
            for (const auto& p : est.points) sigma = std::max(sigma, p.sigma());
            // the minimum over j is estimated at j = 0 and used for all m_k balls of the shell
            for (std::uint64_t c = 0; c < std::max<std::uint64_t>(sh.m, 1) && c < 100000; ++c) {
                g.push_back(est.min_p);
                sg.push_back(sigma);
            }
            rep.rows[i].gamma_hat = est.min_p;
            rep.rows[i].cum_bound = product_lower_bound(g);
        }
        rep.certificate = unavoidability_certificate(g, sg, opt.results->front());
    }
    return rep;
}

int first_level_containing(const ChampagneConfig& cfg, const Vec3& z) {
    for (const auto& lv : cfg.levels) {
        if (cfg.domain.shrink(lv.shrink).boundary_gap(z) >= 0) return lv.n;
    }
    return static_cast<int>(cfg.levels.size()) + 1;
}

LevelGamma level_gamma_estimate(const ChampagneConfig& cfg, int n, std::size_t z_samples, std::uint64_t trials,
                                std::uint64_t seed, const WosParams& p) {
    if (n < 1 || n > static_cast<int>(cfg.levels.size())) throw DomainError("level out of range");
    if (z_samples == 0) throw DomainError("z_samples must be positive");
    const auto idx = static_cast<std::size_t>(n - 1);
    const Domain Vn = cfg.domain.shrink(cfg.levels[idx].shrink);
    const Domain Vnext = idx + 1 < cfg.levels.size() ? cfg.domain.shrink(cfg.levels[idx + 1].shrink) : cfg.domain;
    std::vector<Bubble> obstacles;
    for (const auto& b : cfg.bubbles) {
        if (b.group < 0) continue;
        if (cfg.clusters.at(static_cast<std::size_t>(b.group)).level == n) obstacles.push_back(b);
    }
    const WosEngine engine(Vnext, obstacles);
    PhiloxStream rng(seed, 0x6c76ull);
    LevelGamma out;
    out.n = n;
    for (std::size_t i = 0; i < z_samples; ++i) {
        const Vec3 z = sample_boundary(Vn, rng);
        const HitEstimate e = engine.hit_probability(z, trials, p, mix_seed(seed, i));
        out.min_p = std::min(out.min_p, e.p_hat);
        out.min_lower = std::min(out.min_lower, e.p_hat - e.ci_halfwidth_3sigma);
        out.points.push_back(e);
    }
    return out;
}

}  // namespace champagne
