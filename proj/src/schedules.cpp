#include "champagne/schedules.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

#include "champagne/errors.hpp"

namespace champagne {

namespace {

constexpr double kLn2 = std::numbers::ln2;
constexpr long kEulerMaclaurinStart = 100000;

std::string trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return std::string(s);
}

// Splits "family:key=value,key=value" into the family and a key/value map.
std::pair<std::string, std::map<std::string, std::string>> split_spec(std::string_view text) {
    const auto colon = text.find(':');
    std::string family = trim(text.substr(0, colon));
    std::map<std::string, std::string> kv;
    if (colon != std::string_view::npos) {
        std::string_view rest = text.substr(colon + 1);
        while (!rest.empty()) {
            const auto comma = rest.find(',');
            const std::string_view item = rest.substr(0, comma);
            const auto eq = item.find('=');
            if (eq == std::string_view::npos) throw DomainError("expected key=value in '" + std::string(text) + "'");
            kv[trim(item.substr(0, eq))] = trim(item.substr(eq + 1));
            if (comma == std::string_view::npos) break;
            rest.remove_prefix(comma + 1);
        }
    }
    return {family, kv};
}

long parse_long(const std::string& v, const std::string& what) {
    long out = 0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc() || res.ptr != v.data() + v.size()) throw DomainError("bad integer for " + what + ": " + v);
    return out;
}

double parse_double(const std::string& v, const std::string& what) {
    try {
        std::size_t pos = 0;
        const double out = std::stod(v, &pos);
        if (pos != v.size()) throw DomainError("bad number for " + what + ": " + v);
        return out;
    } catch (const std::logic_error&) {
        throw DomainError("bad number for " + what + ": " + v);
    }
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(10);
    os << v;
    return os.str();
}

void check_dimension(int d) {
    if (d < 2) throw DomainError("dimension must be >= 2, got " + std::to_string(d));
}

// Threshold T_n with log^(n)(x) > 0 iff x > T_n: T_1 = 1, T_{n+1} = e^{T_n}.
double iterated_log_threshold(int n) {
    double t = 1.0;
    for (int i = 1; i < n; ++i) t = std::exp(t);
    return t;
}

// log^(n) applied to exp(log_x), i.e. log^(n-1)(log_x). NaN-free: throws on <= 0.
double iterated_log_of_exp(int n, double log_x) {
    double v = log_x;
    for (int i = 1; i < n; ++i) {
        if (!(v > 0)) throw DomainError("iterated logarithm leaves the positive axis");
        v = std::log(v);
    }
    if (!(v > 0)) throw DomainError("iterated logarithm leaves the positive axis");
    return v;
}

}  // namespace

long default_k0(ScheduleKind kind) {
    return kind == ScheduleKind::OneBubble ? 8 : 3;
}

Schedule Schedule::one_bubble(int d, std::optional<long> k0) {
    check_dimension(d);
    Schedule s;
    s.kind = ScheduleKind::OneBubble;
    s.d = d;
    s.k0 = k0.value_or(default_k0(s.kind));
    return s;
}

Schedule Schedule::power_law(int d, int M, double eps, std::optional<long> k0) {
    check_dimension(d);
    if (M < 1) throw DomainError("power-law needs M >= 1");
    if (!(eps > 0)) throw DomainError("power-law needs eps > 0");
    Schedule s;
    s.kind = ScheduleKind::PowerLaw;
    s.d = d;
    s.power_m = M;
    s.power_eps = eps;
    s.k0 = k0.value_or(default_k0(s.kind));
    return s;
}

Schedule Schedule::tower(int d, int n, std::optional<long> k0) {
    check_dimension(d);
    if (n < 0) throw DomainError("tower needs n >= 0");
    Schedule s;
    s.kind = ScheduleKind::Tower;
    s.d = d;
    s.tower_n = n;
    s.k0 = k0.value_or(default_k0(s.kind));
    return s;
}

Schedule Schedule::parse(std::string_view text, int d, std::optional<long> k0) {
    auto [family, kv] = split_spec(text);
    auto take = [&](const std::string& key) {
        auto it = kv.find(key);
        if (it == kv.end()) throw DomainError("schedule '" + std::string(text) + "' is missing " + key);
        std::string v = it->second;
        kv.erase(it);
        return v;
    };
    Schedule s;
    if (family == "one-bubble") {
        s = one_bubble(d, k0);
    } else if (family == "power-law") {
        const long M = parse_long(take("M"), "M");
        const double eps = parse_double(take("eps"), "eps");
        s = power_law(d, static_cast<int>(M), eps, k0);
    } else if (family == "tower") {
        s = tower(d, static_cast<int>(parse_long(take("n"), "n")), k0);
    } else {
        throw DomainError("unknown schedule '" + family + "'");
    }
    if (!kv.empty()) throw DomainError("unknown schedule parameter '" + kv.begin()->first + "'");
    return s;
}

std::string Schedule::name() const {
    switch (kind) {
        case ScheduleKind::OneBubble:
            return "one-bubble";
        case ScheduleKind::PowerLaw:
            return "power-law:M=" + std::to_string(power_m) + ",eps=" + fmt(power_eps);
        case ScheduleKind::Tower:
            return "tower:n=" + std::to_string(tower_n);
    }
    return {};
}

double tower_real(int n, double k) {
    double v = k;
    for (int i = 0; i < n; ++i) {
        if (v >= 1024.0) return std::numeric_limits<double>::infinity();
        v = std::exp2(v);
    }
    return v;
}

std::uint64_t tower(int n, std::uint64_t k) {
    if (n < 0) throw DomainError("tower needs n >= 0");
    if (k < 1) throw DomainError("tower needs k >= 1");
    std::uint64_t v = k;
    for (int i = 0; i < n; ++i) {
        if (v >= 64) throw OverflowError("p_" + std::to_string(n) + "(" + std::to_string(k) + ") exceeds 64 bits");
        v = std::uint64_t{1} << v;
    }
    return v;
}

double iterated_log(int n, double t) {
    if (n < 1) throw DomainError("iterated_log needs n >= 1");
    double v = t;
    for (int i = 0; i < n; ++i) {
        if (!(v > 0)) throw DomainError("iterated_log argument leaves the positive axis");
        v = std::log(v);
    }
    return v;
}

ShellLogs shell_logs(const Schedule& s, long k) {
    if (k < 1) throw DomainError("shell index must be positive");
    const double lk = std::log(static_cast<double>(k));
    ShellLogs out;
    out.k = k;
    switch (s.kind) {
        case ScheduleKind::OneBubble:
            if (k < 2) throw DomainError("one-bubble needs k >= 2");
            out.log_m = 0.0;
            out.log_alpha = -lk;
            out.log_beta = 2.0 * std::log(lk);
            break;
        case ScheduleKind::PowerLaw:
            out.log_m = s.power_m * lk;
            out.log_alpha = -(s.power_m + 1) * lk;
            out.log_beta = lk;
            break;
        case ScheduleKind::Tower: {
            if (s.tower_n == 0) {
                out.log_m = lk;
            } else {
                const double prev = tower_real(s.tower_n - 1, static_cast<double>(k));
                out.log_m = kLn2 * prev;
                if (!std::isfinite(out.log_m))
                    throw OverflowError("log m_k overflows for " + s.name() + " at k=" + std::to_string(k));
            }
            out.log_alpha = -(lk + out.log_m);
            out.log_beta = lk;
            break;
        }
    }
    out.log_a = out.log_alpha - out.log_beta;
    return out;
}

double shell_step(const Schedule& s, long k) {
    const double x = static_cast<double>(k);
    if (s.kind == ScheduleKind::OneBubble) {
        const double l = std::log(x);
        return 1.0 / (x * l * l);
    }
    // m_k alpha_k / beta_k = 1/k^2 for tower and power-law families.
    return 1.0 / (x * x);
}

namespace {

// suffix[k] = sum_{k <= j < kEulerMaclaurinStart} m_j a_j
std::vector<long double> step_suffix(const Schedule& s) {
    std::vector<long double> out(static_cast<std::size_t>(kEulerMaclaurinStart) + 1, 0.0L);
    for (long j = kEulerMaclaurinStart - 1; j >= 2; --j)
        out[static_cast<std::size_t>(j)] = out[static_cast<std::size_t>(j) + 1] + shell_step(s, j);
    return out;
}

}  // namespace

double shell_tail(const Schedule& s, long k) {
    if (k < 2) throw DomainError("shell tail needs k >= 2");
    const long K = std::max(k, kEulerMaclaurinStart);
    // suffix sums of the explicit part, shared by every schedule of a family
    static const std::vector<long double> one_bubble_suffix = step_suffix(Schedule::one_bubble(2));
    static const std::vector<long double> inverse_square_suffix = step_suffix(Schedule::tower(2, 1));
    const long double sum =
        k >= K ? 0.0L
               : (s.kind == ScheduleKind::OneBubble ? one_bubble_suffix : inverse_square_suffix)[static_cast<std::size_t>(k)];
    // Euler-Maclaurin remainder at K: integral + t/2 - t'/12 + t'''/720.
    const double x = static_cast<double>(K);
    long double rem = 0.0L;
    if (s.kind == ScheduleKind::OneBubble) {
        const double l = std::log(x);
        const double t = 1.0 / (x * l * l);
        const double dt = -(l + 2.0) / (x * x * l * l * l);
        rem = 1.0 / l + t / 2.0 - dt / 12.0;
    } else {
        rem = 1.0 / x + 1.0 / (2.0 * x * x) + 1.0 / (6.0 * x * x * x) - 1.0 / (30.0 * x * x * x * x * x);
    }
    return static_cast<double>(sum + rem);
}

double log_radius_from_alpha(double log_a, double log_alpha, int d) {
    check_dimension(d);
    if (d == 2) return -std::exp(-log_alpha);
    return log_a + log_alpha / (d - 2);
}

double radius_from_alpha(double a, double alpha, int d, long shell) {
    check_dimension(d);
    if (!(a > 0 && a < 1)) throw DomainError("radius_from_alpha needs a in (0,1)");
    if (!(alpha > 0 && alpha < 1)) throw DomainError("radius_from_alpha needs alpha in (0,1)");
    const double r = d == 2 ? std::exp(-1.0 / alpha) : a * std::pow(alpha, 1.0 / (d - 2));
    if (!(r > std::numeric_limits<double>::min()))
        throw UnderflowRadius(shell, log_radius_from_alpha(std::log(a), std::log(alpha), d));
    return r;
}

namespace {

std::uint64_t exact_m(const Schedule& s, long k) {
    switch (s.kind) {
        case ScheduleKind::OneBubble:
            return 1;
        case ScheduleKind::PowerLaw: {
            std::uint64_t m = 1;
            for (int i = 0; i < s.power_m; ++i) {
                if (m > std::numeric_limits<std::uint64_t>::max() / static_cast<std::uint64_t>(k))
                    throw OverflowError("m_k does not fit 64 bits for " + s.name() + " at k=" + std::to_string(k));
                m *= static_cast<std::uint64_t>(k);
            }
            return m;
        }
        case ScheduleKind::Tower:
            return tower(s.tower_n, static_cast<std::uint64_t>(k));
    }
    return 0;
}

}  // namespace

ShellParams shell_params(const Schedule& s, long k, std::optional<long> k2) {
    if (k < s.k0) throw DomainError("shell k=" + std::to_string(k) + " is below k0=" + std::to_string(s.k0));
    const double tail0 = shell_tail(s, s.k0);
    if (!(tail0 < 0.5))
        throw DomainError("tail sum at k0=" + std::to_string(s.k0) + " is " + fmt(tail0) + " >= 1/2, so R_k0 <= 1/2");

    ShellParams p;
    p.k = k;
    p.logs = shell_logs(s, k);
    p.m = exact_m(s, k);
    p.alpha = std::exp(p.logs.log_alpha);
    p.beta = std::exp(p.logs.log_beta);
    if (s.kind != ScheduleKind::OneBubble) p.beta = static_cast<double>(k);
    p.a = std::exp(p.logs.log_a);
    p.R = 1.0 - shell_tail(s, k);
    p.log_r = log_radius_from_alpha(p.logs.log_a, p.logs.log_alpha, s.d);
    p.r = std::exp(p.log_r);
    p.log_phi_r = (s.d - 2) * p.logs.log_a + p.logs.log_alpha;

    const long base = k2.value_or(s.k0);
    if (k >= base) {
        std::uint64_t M = static_cast<std::uint64_t>(base);
        for (long i = base; i < k; ++i) {
            const std::uint64_t mi = exact_m(s, i);
            if (M > std::numeric_limits<std::uint64_t>::max() - mi) throw OverflowError("M_k exceeds 64 bits");
            M += mi;
        }
        p.M = M;
    }
    return p;
}

// ---------------------------------------------------------------- weights

CapacityWeight CapacityWeight::power(double eps) {
    if (!(eps > 0)) throw DomainError("power weight needs eps > 0");
    CapacityWeight w;
    w.kind = WeightKind::PowerEps;
    w.eps = eps;
    w.log_domain_cap = std::numeric_limits<double>::infinity();
    return w;
}

CapacityWeight CapacityWeight::iter_log_cubed(int n) {
    if (n < 1) throw DomainError("iterlog3 weight needs n >= 1");
    CapacityWeight w;
    w.kind = WeightKind::InvIterLogCubed;
    w.n = n;
    w.log_domain_cap = -std::log(iterated_log_threshold(n));
    return w;
}

CapacityWeight CapacityWeight::theorem_one_d2(int n) {
    CapacityWeight w = iter_log_cubed(n);
    w.kind = WeightKind::TheoremOneD2;
    return w;
}

CapacityWeight CapacityWeight::theorem_one_d3(int n, int dim) {
    if (dim < 3) throw DomainError("thm1-d3 weight needs dim >= 3");
    CapacityWeight w = iter_log_cubed(n);
    w.kind = WeightKind::TheoremOneD3;
    w.dim = dim;
    w.log_domain_cap = -(dim - 2.0) * std::log(iterated_log_threshold(n));
    return w;
}

CapacityWeight CapacityWeight::parse(std::string_view text) {
    auto [family, kv] = split_spec(text);
    auto get = [&](const std::string& key) -> std::optional<std::string> {
        auto it = kv.find(key);
        if (it == kv.end()) return std::nullopt;
        std::string v = it->second;
        kv.erase(it);
        return v;
    };
    CapacityWeight w;
    if (family == "power") {
        auto e = get("eps");
        if (!e) throw DomainError("power weight needs eps=<real>");
        w = power(parse_double(*e, "eps"));
    } else if (family == "iterlog3" || family == "thm1-d2" || family == "thm1-d3") {
        auto n = get("n");
        if (!n) throw DomainError(family + " weight needs n=<int>");
        const int nn = static_cast<int>(parse_long(*n, "n"));
        if (family == "iterlog3") {
            w = iter_log_cubed(nn);
        } else if (family == "thm1-d2") {
            w = theorem_one_d2(nn);
        } else {
            auto dd = get("d");
            w = theorem_one_d3(nn, dd ? static_cast<int>(parse_long(*dd, "d")) : 3);
        }
    } else {
        throw DomainError("unknown weight '" + family + "'");
    }
    if (!kv.empty()) throw DomainError("unknown weight parameter '" + kv.begin()->first + "'");
    return w;
}

double CapacityWeight::domain_cap() const { return std::exp(log_domain_cap); }

std::string CapacityWeight::name() const {
    switch (kind) {
        case WeightKind::PowerEps:
            return "power:eps=" + fmt(eps);
        case WeightKind::InvIterLogCubed:
            return "iterlog3:n=" + std::to_string(n);
        case WeightKind::TheoremOneD2:
            return "thm1-d2:n=" + std::to_string(n);
        case WeightKind::TheoremOneD3:
            return "thm1-d3:n=" + std::to_string(n) + (dim != 3 ? ",d=" + std::to_string(dim) : "");
    }
    return {};
}

CapacityWeight CapacityWeight::capped_for(const Schedule& s, long k2) const {
    CapacityWeight w = *this;
    w.log_domain_cap = std::min(log_domain_cap, (1.0 - s.d) * shell_logs(s, k2).log_m);
    return w;
}

double CapacityWeight::from_log(double log_t) const {
    if (!(log_t <= log_domain_cap))
        throw DomainError("capacity weight " + name() + " evaluated above its domain cap");
    switch (kind) {
        case WeightKind::PowerEps:
            return std::exp(eps * log_t);
        case WeightKind::InvIterLogCubed: {
            const double v = iterated_log_of_exp(n, -log_t);
            return 1.0 / (v * v * v);
        }
        case WeightKind::TheoremOneD2:
            return 1.0 / iterated_log_of_exp(n, -log_t);
        case WeightKind::TheoremOneD3:
            return 1.0 / iterated_log_of_exp(n, -log_t / (dim - 2));
    }
    return 0.0;
}

double CapacityWeight::operator()(double t) const {
    if (!(t > 0) || std::log(t) > log_domain_cap)
        throw DomainError("capacity weight " + name() + " needs t in (0, " + fmt(domain_cap()) + "]");
    return from_log(std::log(t));
}

double capacity_f(const CapacityWeight& w, double t) { return w(t); }

// ---------------------------------------------------------------- validation

bool ValidationReport::pass() const {
    return std::all_of(constraints.begin(), constraints.end(), [](const ConstraintResult& c) { return c.pass; });
}

const ConstraintResult* ValidationReport::first_failure() const {
    for (const auto& c : constraints)
        if (!c.pass) return &c;
    return nullptr;
}

std::optional<double> weight_tail_envelope(const Schedule& s, const CapacityWeight& w, long K) {
    if (K < 2) return std::nullopt;
    const int d = s.d;
    const double Kd = static_cast<double>(K);
    if (w.kind == WeightKind::PowerEps) {
        const double e = w.eps * (d - 1);
        switch (s.kind) {
            case ScheduleKind::OneBubble: {
                // (log k)^2 k^-e, decreasing for k > exp(2/e)
                if (!(e > 1)) return std::nullopt;
                const long start = std::max(K, static_cast<long>(std::ceil(std::exp(2.0 / e))));
                double sum = 0.0;
                for (long k = K + 1; k <= start; ++k) {
                    const double l = std::log(static_cast<double>(k));
                    sum += l * l * std::pow(static_cast<double>(k), -e);
                }
                const double A = static_cast<double>(start);
                const double q = e - 1.0;
                const double lA = std::log(A);
                sum += std::pow(A, -q) * (lA * lA / q + 2.0 * lA / (q * q) + 2.0 / (q * q * q));
                return sum;
            }
            case ScheduleKind::PowerLaw:
            case ScheduleKind::Tower: {
                if (s.kind == ScheduleKind::Tower && s.tower_n >= 1) {
                    // k (k p_n(k))^-e <= k 2^{-k e}
                    const double q = std::exp2(-e);
                    return std::pow(q, Kd + 1) * ((Kd + 1) - Kd * q) / ((1 - q) * (1 - q));
                }
                const double growth = s.kind == ScheduleKind::PowerLaw ? s.power_m + 1.0 : 2.0;
                const double p = growth * e - 1.0;
                if (!(p > 1)) return std::nullopt;
                return std::pow(Kd, 1.0 - p) / (p - 1.0);
            }
        }
    }
    if (w.kind == WeightKind::InvIterLogCubed && s.kind == ScheduleKind::Tower && s.tower_n >= 1 && w.n <= s.tower_n) {
        // log^(n') of alpha_k^{1-d} >= log^(n) p_n(k) >= k log 2 - 1/2 for k >= 3
        const double c = kLn2 - 0.5 / std::max(Kd + 1.0, 3.0);
        return 1.0 / (c * c * c * Kd);
    }
    if ((w.kind == WeightKind::TheoremOneD2 || w.kind == WeightKind::TheoremOneD3) && s.kind == ScheduleKind::Tower &&
        s.tower_n >= w.n + 1) {
        // log^(n) p_N(k) >= log^(n) p_{n+1}(k) >= 2^k e^{-1/2}, so the terms are below sqrt(e) k 2^-k
        return std::exp(0.5) * (Kd + 2.0) * std::exp2(-Kd);
    }
    return std::nullopt;
}

ValidationReport validate_schedule(const Schedule& s, const CapacityWeight& w, long k_horizon, std::optional<long> k2) {
    ValidationReport report;
    auto add = [&](std::string name, bool pass, std::string evidence) {
        report.constraints.push_back({std::move(name), pass, std::move(evidence)});
    };
    const long k0 = s.k0;
    const long H = std::max(k_horizon, k0);
    const double tol = 1e-12;

    if (s.kind == ScheduleKind::OneBubble && k0 < 2) {
        add("k0_range", false, "one-bubble needs k0 >= 2, got " + std::to_string(k0));
        return report;
    }
    if (k0 < 1) {
        add("k0_range", false, "k0 must be positive");
        return report;
    }
    add("k0_range", true, "k0=" + std::to_string(k0));

    std::vector<ShellLogs> logs;
    long last = H;
    try {
        for (long k = k0; k <= H + 1; ++k) logs.push_back(shell_logs(s, k));
    } catch (const OverflowError&) {
        last = k0 + static_cast<long>(logs.size()) - 2;
    }
    if (logs.size() < 2) {
        add("representable", false, "sequence values overflow at k0");
        return report;
    }

    std::optional<long> bad_m, bad_alpha, bad_beta, bad_alpha_bound, beta_low, beta_high;
    for (std::size_t i = 0; i + 1 < logs.size(); ++i) {
        const auto& c = logs[i];
        const auto& n = logs[i + 1];
        if (!bad_m && n.log_m < c.log_m - tol) bad_m = c.k;
        if (!bad_alpha && n.log_alpha > c.log_alpha + tol) bad_alpha = c.k;
        if (!bad_beta && n.log_beta < c.log_beta - tol) bad_beta = c.k;
        const double lk = std::log(static_cast<double>(c.k));
        if (!bad_alpha_bound && c.log_alpha > -std::max(lk, c.log_m) + tol) bad_alpha_bound = c.k;
        if (!beta_low && c.log_beta < -tol) beta_low = c.k;
        if (!beta_high && c.log_beta > lk + tol) beta_high = c.k;
    }
    const std::string range = " over k=" + std::to_string(k0) + ".." + std::to_string(last);
    add("monotone_m", !bad_m, bad_m ? "m_k > m_{k+1} at k=" + std::to_string(*bad_m) : "m_k non-decreasing" + range);
    add("monotone_alpha", !bad_alpha,
        bad_alpha ? "alpha_{k+1} > alpha_k at k=" + std::to_string(*bad_alpha) : "alpha_k non-increasing" + range);
    add("monotone_beta", !bad_beta,
        bad_beta ? "beta_k > beta_{k+1} at k=" + std::to_string(*bad_beta) : "beta_k non-decreasing" + range);
    add("alpha_bound", !bad_alpha_bound,
        bad_alpha_bound ? "alpha_k > 1/max{k,m_k} at k=" + std::to_string(*bad_alpha_bound)
                        : "alpha_k <= 1/max{k,m_k}" + range);
    {
        std::string ev = "1 <= beta_k <= k" + range;
        if (beta_low) {
            ev = "beta_k < 1 at k=" + std::to_string(*beta_low) + " (beta=" + fmt(std::exp(logs[*beta_low - k0].log_beta)) + ")";
        } else if (beta_high) {
            ev = "beta_k > k at k=" + std::to_string(*beta_high);
        }
        add("beta_bounds", !beta_low && !beta_high, ev);
    }

    if (s.kind == ScheduleKind::PowerLaw) {
        const double need = 1.0 + 2.0 / ((s.d - 1) * s.power_eps);
        add("power_law_exponent", s.power_m > need,
            "M=" + std::to_string(s.power_m) + (s.power_m > need ? " > " : " <= ") + fmt(need));
    }

    const double tail = shell_tail(s, k0);
    add("tail_half", tail < 0.5,
        "sum_{k>=" + std::to_string(k0) + "} m_k alpha_k/beta_k = " + fmt(tail) + " (remainder error < 1e-13)" +
            (tail < 0.5 ? " < 1/2" : " >= 1/2"));

    {
        long double partial = 0.0L;
        for (std::size_t i = 0; i + 1 < logs.size(); ++i) partial += std::exp(logs[i].log_m + logs[i].log_alpha);
        add("divergence", s.divergence_certified(),
            "partial sum of m_k alpha_k to k=" + std::to_string(last) + " is " + fmt(static_cast<double>(partial)) +
                "; analytic: m_k alpha_k >= 1/k");
    }

    const long base = k2.value_or(k0);
    {
        bool ok = true;
        std::string ev;
        try {
            const CapacityWeight capped = w.capped_for(s, base);
            const ShellLogs lb = shell_logs(s, base);
            const double arg = (s.d - 1) * lb.log_alpha;
            const double v = capped.from_log(arg);
            ok = v > 0 && std::isfinite(v);
            ev = "f(alpha_k^{d-1}) defined for k >= " + std::to_string(base) + ", log cap=" + fmt(capped.log_domain_cap);
        } catch (const Error& e) {
            ok = false;
            ev = e.what();
        }
        add("weight_domain", ok, ev);
    }
    {
        const auto env = weight_tail_envelope(s, w, last);
        long double partial = 0.0L;
        bool ok = env.has_value();
        try {
            for (std::size_t i = 0; i + 1 < logs.size(); ++i) {
                if (logs[i].k < base) continue;
                partial += std::exp(logs[i].log_beta) * w.from_log((s.d - 1) * logs[i].log_alpha);
            }
        } catch (const Error&) {
            ok = false;
        }
        std::string ev = "sum_{k=" + std::to_string(base) + ".." + std::to_string(last) + "} beta_k f(alpha_k^{d-1}) = " +
                         fmt(static_cast<double>(partial));
        ev += env ? "; tail bound beyond horizon " + fmt(*env) : "; no closed-form tail bound for this pairing";
        add("weight_summable", ok, ev);
    }
    return report;
}

}  // namespace champagne
