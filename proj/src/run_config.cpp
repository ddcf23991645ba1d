#include "machlimit/run_config.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace machlimit {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::map<std::string, std::string> parse_pairs(const std::string& text) {
    std::map<std::string, std::string> out;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        auto pos = line.find('=');
        if (pos == std::string::npos)
            throw std::runtime_error("config: expected key = value, got '" + line + "'");
        out[trim(line.substr(0, pos))] = trim(line.substr(pos + 1));
    }
    return out;
}

bool parse_bool(const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw std::runtime_error("config: bad boolean '" + v + "'");
}

std::vector<double> parse_list(const std::string& v) {
    std::vector<double> out;
    std::istringstream is(v);
    std::string item;
    while (std::getline(is, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(std::stod(item));
    }
    return out;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

RunConfig RunConfig::from_string(const std::string& text) {
    RunConfig cfg;
    auto pairs = parse_pairs(text);
    for (const auto& [key, value] : pairs) {
        if (key == "system") cfg.system = value;
        else if (key == "d") cfg.d = std::stoi(value);
        else if (key == "n") cfg.n = std::stoi(value);
        else if (key == "L") cfg.L = std::stod(value);
        else if (key == "eps") cfg.eps = std::stod(value);
        else if (key == "gamma") cfg.gamma = std::stod(value);
        else if (key == "mu") cfg.mu = std::stod(value);
        else if (key == "lambda") cfg.lambda = std::stod(value);
        else if (key == "dt") cfg.dt = std::stod(value);
        else if (key == "dt_over_eps") cfg.dt_over_eps = std::stod(value);
        else if (key == "t_end") cfg.t_end = std::stod(value);
        else if (key == "cfl") cfg.cfl = std::stod(value);
        else if (key == "sample_stride") cfg.sample_stride = std::stoi(value);
        else if (key == "seed") cfg.seed = std::stoull(value);
        else if (key == "nonlinear") cfg.nonlinear = parse_bool(value);
        else if (key == "positivity_floor") cfg.positivity_floor = std::stod(value);
        else if (key == "init") cfg.init = value;
        else if (key == "init_kmax") cfg.init_kmax = std::stoi(value);
        else if (key == "init_amp_a") cfg.init_amp_a = std::stod(value);
        else if (key == "init_amp_u") cfg.init_amp_u = std::stod(value);
        else if (key == "init_solenoidal") cfg.init_solenoidal = parse_bool(value);
        else if (key == "init_M") cfg.init_m = std::stod(value);
        else if (key == "init_phi_kmax") cfg.init_phi_kmax = std::stoi(value);
        else if (key == "q") cfg.q = std::stod(value);
        else if (key == "r") cfg.r = std::stod(value);
        else if (key == "alpha") cfg.alpha = std::stod(value);
        else if (key == "beta0") cfg.beta0 = std::stod(value);
        else if (key == "validate") cfg.validate = parse_bool(value);
        else if (key == "eps_list") cfg.eps_list = parse_list(value);
        else if (key == "wref_dt") cfg.wref_dt = std::stod(value);
        else if (key == "snapshot_stride") cfg.snapshot_stride = std::stoi(value);
        else throw std::runtime_error("config: unknown key '" + key + "'");
    }
    init_kind_from_string(cfg.init); // reject unknown init kinds early
    return cfg;
}

RunConfig RunConfig::from_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open config: " + path);
    std::ostringstream os;
    os << is.rdbuf();
    return from_string(os.str());
}

std::string RunConfig::to_text() const {
    std::ostringstream os;
    os << "system = " << system << '\n';
    os << "d = " << d << '\n';
    os << "n = " << n << '\n';
    os << "L = " << fmt(L) << '\n';
    os << "eps = " << fmt(eps) << '\n';
    os << "gamma = " << fmt(gamma) << '\n';
    os << "mu = " << fmt(mu) << '\n';
    os << "lambda = " << fmt(lambda) << '\n';
    os << "dt = " << fmt(dt) << '\n';
    os << "dt_over_eps = " << fmt(dt_over_eps) << '\n';
    os << "t_end = " << fmt(t_end) << '\n';
    os << "cfl = " << fmt(cfl) << '\n';
    os << "sample_stride = " << sample_stride << '\n';
    os << "seed = " << seed << '\n';
    os << "nonlinear = " << (nonlinear ? "true" : "false") << '\n';
    os << "positivity_floor = " << fmt(positivity_floor) << '\n';
    os << "init = " << init << '\n';
    os << "init_kmax = " << init_kmax << '\n';
    os << "init_amp_a = " << fmt(init_amp_a) << '\n';
    os << "init_amp_u = " << fmt(init_amp_u) << '\n';
    os << "init_solenoidal = " << (init_solenoidal ? "true" : "false") << '\n';
    os << "init_M = " << fmt(init_m) << '\n';
    os << "init_phi_kmax = " << init_phi_kmax << '\n';
    os << "q = " << fmt(q) << '\n';
    os << "r = " << fmt(r) << '\n';
    os << "alpha = " << fmt(alpha) << '\n';
    os << "beta0 = " << fmt(beta0) << '\n';
    os << "validate = " << (validate ? "true" : "false") << '\n';
    if (!eps_list.empty()) {
        os << "eps_list = ";
        for (std::size_t i = 0; i < eps_list.size(); ++i)
            os << (i ? "," : "") << fmt(eps_list[i]);
        os << '\n';
    }
    os << "wref_dt = " << fmt(wref_dt) << '\n';
    os << "snapshot_stride = " << snapshot_stride << '\n';
    return os.str();
}

InitParams RunConfig::init_params() const {
    InitParams p;
    p.kmax = init_kmax;
    p.amplitude_a = init_amp_a;
    p.amplitude_u = init_amp_u;
    p.solenoidal_u = init_solenoidal;
    p.oscillation_m = init_m;
    p.phi_kmax = init_phi_kmax;
    return p;
}

} // namespace machlimit
