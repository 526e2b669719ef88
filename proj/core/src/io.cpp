#include "sdl/io.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "sdl/errors.hpp"

namespace sdl {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

} // namespace

std::map<std::string, std::string> read_kv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file: " + path);
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string t = trim(line);
        if (t.empty()) continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw config_error(path + ":" + std::to_string(lineno) + ": expected key=value");
        const std::string key = trim(t.substr(0, eq));
        if (key.empty())
            throw config_error(path + ":" + std::to_string(lineno) + ": empty key");
        kv[key] = trim(t.substr(eq + 1));
    }
    return kv;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw config_error("cannot write file: " + path);
    out << content;
    if (!out) throw config_error("write failed: " + path);
}

std::string trajectory_csv(const std::vector<FlowStep>& steps) {
    std::ostringstream os;
    os << "step,E,F,total,H,residual_norm,dt\n";
    os.precision(12);
    for (const auto& s : steps) {
        os << s.step << ',' << s.E << ',' << s.F << ',' << s.total << ',';
        if (std::isnan(s.hopf))
            os << "";
        else
            os << s.hopf;
        os << ',' << s.grad_norm << ',' << s.dt << '\n';
    }
    return os.str();
}

} // namespace sdl
