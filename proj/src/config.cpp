#include "champagne/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "champagne/errors.hpp"
#include "json.hpp"

namespace champagne {

using nlohmann::json;

namespace {

json vec_json(const Vec3& v, int d) {
    json a = json::array({v.x, v.y});
    if (d == 3) a.push_back(v.z);
    return a;
}

Vec3 vec_from(const json& a) {
    Vec3 v;
    for (std::size_t i = 0; i < a.size() && i < 3; ++i) v[i] = a[i].get<double>();
    return v;
}

json domain_json(const Domain& D) {
    json j{{"kind", D.kind_name()}};
    if (D.kind == DomainKind::Box) {
        j["lo"] = vec_json(D.lo, D.d);
        j["hi"] = vec_json(D.hi, D.d);
    } else {
        json balls = json::array();
        for (const auto& b : D.balls) balls.push_back({{"c", vec_json(b.center, D.d)}, {"R", b.radius}});
        j["balls"] = balls;
    }
    return j;
}

Domain domain_from(const json& j, int d) {
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "box") return Domain::box(d, vec_from(j.at("lo")), vec_from(j.at("hi")));
    std::vector<BallShape> balls;
    for (const auto& b : j.at("balls")) balls.push_back({vec_from(b.at("c")), b.at("R").get<double>()});
    if (kind == "unit-ball") return Domain::unit_ball(d);
    if (kind == "ball") return Domain::ball(d, balls.at(0).center, balls.at(0).radius);
    if (kind == "union-of-balls") {
        Domain D = Domain::union_of_balls(d, balls);
        return D;
    }
    throw DomainError("unknown domain kind '" + kind + "'");
}

ScheduleKind schedule_kind(const std::string& s) {
    if (s == "one-bubble") return ScheduleKind::OneBubble;
    if (s == "power-law") return ScheduleKind::PowerLaw;
    if (s == "tower") return ScheduleKind::Tower;
    throw DomainError("unknown schedule kind '" + s + "'");
}

const char* schedule_kind_name(ScheduleKind k) {
    switch (k) {
        case ScheduleKind::OneBubble: return "one-bubble";
        case ScheduleKind::PowerLaw: return "power-law";
        case ScheduleKind::Tower: return "tower";
    }
    return "?";
}

const char* weight_kind_name(WeightKind k) {
    switch (k) {
        case WeightKind::PowerEps: return "power";
        case WeightKind::InvIterLogCubed: return "iterlog3";
        case WeightKind::TheoremOneD2: return "thm1-d2";
        case WeightKind::TheoremOneD3: return "thm1-d3";
    }
    return "?";
}

WeightKind weight_kind(const std::string& s) {
    if (s == "power") return WeightKind::PowerEps;
    if (s == "iterlog3") return WeightKind::InvIterLogCubed;
    if (s == "thm1-d2") return WeightKind::TheoremOneD2;
    if (s == "thm1-d3") return WeightKind::TheoremOneD3;
    throw DomainError("unknown weight kind '" + s + "'");
}

}  // namespace

double ChampagneConfig::min_radius() const {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& b : bubbles)
        if (b.radius > 0) m = std::min(m, b.radius);
    return m;
}

ChampagneConfig make_annulus_config(int d, double r, double R) {
    if (!(r > 0 && r < R)) throw DomainError("annulus needs 0 < r < R");
    ChampagneConfig cfg;
    cfg.construction = "custom";
    cfg.d = d;
    cfg.domain = R == 1.0 ? Domain::unit_ball(d) : Domain::ball(d, {}, R);
    cfg.schedule = Schedule::tower(d, 1);
    cfg.weight = CapacityWeight::power(1.0);
    cfg.bubbles.push_back({{}, r, std::log(r), 0, -1, 0});
    return cfg;
}

std::string config_to_json(const ChampagneConfig& cfg, int indent) {
    json j;
    j["construction"] = cfg.construction;
    j["d"] = cfg.d;
    j["domain"] = domain_json(cfg.domain);
    const auto& s = cfg.schedule;
    j["schedule"] = {{"name", s.name()},   {"kind", schedule_kind_name(s.kind)}, {"M", s.power_m},
                     {"eps", s.power_eps}, {"n", s.tower_n},                     {"k0", s.k0}};
    const auto& w = cfg.weight;
    j["weight"] = {{"name", w.name()}, {"kind", weight_kind_name(w.kind)}, {"eps", w.eps},
                   {"n", w.n},         {"dim", w.dim},                     {"log_domain_cap", std::isfinite(w.log_domain_cap) ? json(w.log_domain_cap) : json(nullptr)}};
    j["k_range"] = {cfg.k_lo, cfg.k_hi};
    j["seed"] = cfg.seed;
    j["c_eff"] = cfg.c_eff;
    j["delta"] = cfg.delta;
    j["capacity_sum"] = cfg.capacity_sum;
    json shells = json::array();
    for (const auto& sh : cfg.shells)
        shells.push_back({{"cluster", sh.cluster}, {"k", sh.k},       {"count", sh.count}, {"R", sh.R},
                          {"sep", sh.sep},         {"alpha", sh.alpha}, {"m", sh.m},       {"log_r", sh.log_r},
                          {"first", sh.first_bubble}});
    j["shells"] = shells;
    json clusters = json::array();
    for (const auto& c : cfg.clusters)
        clusters.push_back({{"id", c.id},
                            {"level", c.level},
                            {"y", vec_json(c.y, cfg.d)},
                            {"R", c.R_outer},
                            {"r", c.r_inner},
                            {"delta_y", c.delta_y},
                            {"k_range", {c.k_first, c.k_last}},
                            {"capacity", c.capacity}});
    j["clusters"] = clusters;
    json levels = json::array();
    for (const auto& l : cfg.levels)
        levels.push_back({{"n", l.n},
                          {"shrink", l.shrink},
                          {"b", l.b},
                          {"y_count", l.y_count},
                          {"delta_y", l.delta_y},
                          {"delta_level", l.delta_level}});
    j["levels"] = levels;
    json bubbles = json::array();
    for (const auto& b : cfg.bubbles)
        bubbles.push_back({{"c", vec_json(b.center, cfg.d)},
                           {"r", b.radius},
                           {"log_r", b.log_radius},
                           {"k", b.shell_k},
                           {"i", b.net_index},
                           {"g", b.group}});
    j["bubbles"] = bubbles;
    return j.dump(indent);
}

ChampagneConfig config_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw DomainError(std::string("config is not valid JSON: ") + e.what());
    }
    try {
        ChampagneConfig cfg;
        cfg.construction = j.value("construction", std::string("custom"));
        cfg.d = j.at("d").get<int>();
        cfg.domain = domain_from(j.at("domain"), cfg.d);
        const auto& s = j.at("schedule");
        cfg.schedule.kind = schedule_kind(s.at("kind").get<std::string>());
        cfg.schedule.power_m = s.at("M").get<int>();
        cfg.schedule.power_eps = s.at("eps").get<double>();
        cfg.schedule.tower_n = s.at("n").get<int>();
        cfg.schedule.k0 = s.at("k0").get<long>();
        cfg.schedule.d = cfg.d;
        const auto& w = j.at("weight");
        cfg.weight.kind = weight_kind(w.at("kind").get<std::string>());
        cfg.weight.eps = w.at("eps").get<double>();
        cfg.weight.n = w.at("n").get<int>();
        cfg.weight.dim = w.at("dim").get<int>();
        {
            const auto& cap = w.at("log_domain_cap");
            // null stands for an unbounded weight domain
            cfg.weight.log_domain_cap = cap.is_null() ? std::numeric_limits<double>::infinity() : cap.get<double>();
        }
        cfg.k_lo = j.at("k_range").at(0).get<long>();
        cfg.k_hi = j.at("k_range").at(1).get<long>();
        cfg.seed = j.at("seed").get<std::uint64_t>();
        cfg.c_eff = j.value("c_eff", 0.0);
        cfg.delta = j.value("delta", 0.0);
        cfg.capacity_sum = j.value("capacity_sum", 0.0);
        for (const auto& sh : j.value("shells", json::array()))
            cfg.shells.push_back({sh.at("cluster").get<std::int32_t>(), sh.at("k").get<long>(),
                                  sh.at("count").get<std::uint64_t>(), sh.at("R").get<double>(),
                                  sh.at("sep").get<double>(), sh.at("alpha").get<double>(),
                                  sh.at("m").get<std::uint64_t>(), sh.at("log_r").get<double>(),
                                  sh.at("first").get<std::uint64_t>()});
        for (const auto& c : j.value("clusters", json::array()))
            cfg.clusters.push_back({c.at("id").get<std::int32_t>(), c.at("level").get<std::int32_t>(),
                                    vec_from(c.at("y")), c.at("R").get<double>(), c.at("r").get<double>(),
                                    c.at("delta_y").get<double>(), c.at("k_range").at(0).get<long>(),
                                    c.at("k_range").at(1).get<long>(), c.at("capacity").get<double>()});
        for (const auto& l : j.value("levels", json::array()))
            cfg.levels.push_back({l.at("n").get<int>(), l.at("shrink").get<double>(), l.at("b").get<double>(),
                                  l.at("y_count").get<std::uint64_t>(), l.at("delta_y").get<double>(),
                                  l.at("delta_level").get<double>()});
        const auto& bs = j.at("bubbles");
        cfg.bubbles.reserve(bs.size());
        for (const auto& b : bs)
            cfg.bubbles.push_back({vec_from(b.at("c")), b.at("r").get<double>(), b.at("log_r").get<double>(),
                                   b.at("k").get<std::int32_t>(), b.value("g", std::int32_t{-1}),
                                   b.at("i").get<std::int64_t>()});
        return cfg;
    } catch (const json::exception& e) {
        throw DomainError(std::string("malformed config: ") + e.what());
    }
}

void save_config(const ChampagneConfig& cfg, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DomainError("cannot write '" + path + "'");
    out << config_to_json(cfg) << '\n';
}

ChampagneConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DomainError("cannot read '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return config_from_json(ss.str());
}

}  // namespace champagne
