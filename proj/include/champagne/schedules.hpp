#pragma once

// Sequence families (m_k, alpha_k, beta_k) that drive the bubble construction,
// the derived per-shell quantities, and the capacity weights f.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace champagne {

enum class ScheduleKind { OneBubble, PowerLaw, Tower };

struct Schedule {
    ScheduleKind kind = ScheduleKind::Tower;
    int power_m = 0;       // PowerLaw: m_k = k^M
    double power_eps = 0;  // PowerLaw: exponent of the paired weight t^eps
    int tower_n = 1;       // Tower: m_k = p_n(k)
    long k0 = 3;
    int d = 2;

    static Schedule one_bubble(int d, std::optional<long> k0 = {});
    static Schedule power_law(int d, int M, double eps, std::optional<long> k0 = {});
    static Schedule tower(int d, int n, std::optional<long> k0 = {});

    // "one-bubble", "power-law:M=<int>,eps=<real>", "tower:n=<int>"
    static Schedule parse(std::string_view text, int d, std::optional<long> k0 = {});
    std::string name() const;

    // Each built-in family has m_k alpha_k >= 1/k, so sum m_k alpha_k diverges.
    bool divergence_certified() const noexcept { return true; }
};

long default_k0(ScheduleKind kind);

// Natural logarithms of the sequence values at shell k. Never overflows for
// the shell ranges the verifier scans, unlike the integer m_k.
struct ShellLogs {
    long k = 0;
    double log_m = 0;
    double log_alpha = 0;
    double log_beta = 0;
    double log_a = 0;
};

ShellLogs shell_logs(const Schedule& s, long k);

// m_k a_k, the radial width of the k-th shell.
double shell_step(const Schedule& s, long k);

// sum_{j >= k} m_j a_j with absolute error below 1e-13.
double shell_tail(const Schedule& s, long k);

struct ShellParams {
    long k = 0;
    std::uint64_t m = 0;
    double alpha = 0;
    double beta = 0;
    double a = 0;
    double R = 0;
    double log_r = 0;   // authoritative; r may underflow to 0
    double r = 0;
    double log_phi_r = 0;  // log phi(r_k) = (d-2) log a_k + log alpha_k
    std::uint64_t M = 0;   // M_k = k2 + sum_{k2 <= i < k} m_i
    ShellLogs logs;
};

ShellParams shell_params(const Schedule& s, long k, std::optional<long> k2 = {});

// r from (def-r); throws UnderflowRadius when the radius is not representable.
double radius_from_alpha(double a, double alpha, int d, long shell = -1);
double log_radius_from_alpha(double log_a, double log_alpha, int d);

// p_0(k) = k, p_n(k) = 2^{p_{n-1}(k)}. Throws OverflowError beyond 64 bits.
std::uint64_t tower(int n, std::uint64_t k);
// p_n(k) as a double; +inf once it exceeds the double range.
double tower_real(int n, double k);

// log applied n times; DomainError if an intermediate value is <= 0.
double iterated_log(int n, double t);

enum class WeightKind { PowerEps, InvIterLogCubed, TheoremOneD2, TheoremOneD3 };

// Capacity weight f. PowerEps: t^eps. InvIterLogCubed(n): (log^(n) 1/t)^-3.
// TheoremOneD2(n): (log^(n) 1/t)^-1, so phi f(phi) is the plane summand of
// the iterated-log sum. TheoremOneD3(n): (log^(n) t^{-1/(dim-2)})^-1.
struct CapacityWeight {
    WeightKind kind = WeightKind::InvIterLogCubed;
    double eps = 1.0;
    int n = 1;
    int dim = 3;
    double log_domain_cap = 0.0;  // log of the largest admissible argument

    static CapacityWeight power(double eps);
    static CapacityWeight iter_log_cubed(int n);
    static CapacityWeight theorem_one_d2(int n);
    static CapacityWeight theorem_one_d3(int n, int dim = 3);
    // "power:eps=<real>", "iterlog3:n=<int>", "thm1-d2:n=<int>", "thm1-d3:n=<int>[,d=<int>]"
    static CapacityWeight parse(std::string_view text);
    std::string name() const;
    double domain_cap() const;

    // Same weight with domain_cap lowered to m_{k2}^{1-d}.
    CapacityWeight capped_for(const Schedule& s, long k2) const;

    double operator()(double t) const;
    // f(exp(log_t)); valid for arguments far below the double range.
    double from_log(double log_t) const;
};

double capacity_f(const CapacityWeight& w, double t);

struct ConstraintResult {
    std::string name;
    bool pass = false;
    std::string evidence;
};

struct ValidationReport {
    std::vector<ConstraintResult> constraints;
    bool pass() const;
    const ConstraintResult* first_failure() const;
};

ValidationReport validate_schedule(const Schedule& s, const CapacityWeight& w, long k_horizon,
                                   std::optional<long> k2 = {});

// Upper bound for sum_{k > K} beta_k f(alpha_k^{d-1}) for the built-in pairings
// (power-law with power weight, tower:n with iterlog3:n' for n' <= n,
// one-bubble with a power weight of exponent > 1/(d-1), tower:N with the
// theorem-one weights at n < N). Empty when no closed
// form is available.
std::optional<double> weight_tail_envelope(const Schedule& s, const CapacityWeight& w, long K);

}  // namespace champagne
