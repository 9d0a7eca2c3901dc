#include "iso3bp/branch_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "iso3bp/errors.hpp"

namespace iso3bp {
namespace {

constexpr const char* kMagic = "iso3bp-branch";
constexpr int kVersion = 1;

std::string expect_keyword_line(std::istream& in, const std::string& key) {
    std::string line;
    if (!std::getline(in, line)) throw Error("branch file truncated before '" + key + "'");
    if (line.rfind(key, 0) != 0)
        throw Error("branch file: expected '" + key + "', got '" + line + "'");
    std::string rest = line.substr(key.size());
    if (!rest.empty() && rest.front() == ' ') rest.erase(0, 1);
    return rest;
}

double parse_double(const std::string& s, const std::string& what) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw Error("");
        return v;
    } catch (...) {
        throw Error("branch file: bad number for " + what + ": '" + s + "'");
    }
}

} // namespace

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string serialize_branch(const Branch& branch) {
    std::string out;
    out.reserve(64 * branch.points.size() + 256);
    out += kMagic;
    out += ' ';
    out += std::to_string(kVersion);
    out += '\n';
    out += "kind " + to_string(branch.kind) + '\n';
    out += "eps1 " + format_g17(branch.config.eps1) + '\n';
    out += "eps2 " + format_g17(branch.config.eps2) + '\n';
    out += "eps3 " + format_g17(branch.config.eps3) + '\n';
    out += "h " + format_g17(branch.config.h) + '\n';
    out += "k " + std::to_string(branch.config.k) + '\n';
    out += "orientation " + std::to_string(branch.config.orientation) + '\n';
    out += "termination " + to_string(branch.termination) + '\n';
    out += "detail " + branch.termination_detail + '\n';
    out += "points " + std::to_string(branch.points.size()) + '\n';
    char buf[160];
    for (const auto& pt : branch.points) {
        std::snprintf(buf, sizeof(buf), "%.17g %.17g %.17g %.17g %.17g %d\n", pt.tau, pt.a,
                      pt.b, pt.residual[0], pt.residual[1], pt.is_pillar ? 1 : 0);
        out += buf;
    }
    out += "end\n";
    return out;
}

Branch parse_branch(std::istream& in) {
    std::string header = expect_keyword_line(in, kMagic);
    if (header != std::to_string(kVersion))
        throw Error("branch file: unsupported version '" + header + "'");

    Branch branch;
    branch.kind = branch_kind_from_string(expect_keyword_line(in, "kind"));
    branch.config.eps1 = parse_double(expect_keyword_line(in, "eps1"), "eps1");
    branch.config.eps2 = parse_double(expect_keyword_line(in, "eps2"), "eps2");
    branch.config.eps3 = parse_double(expect_keyword_line(in, "eps3"), "eps3");
    branch.config.h = parse_double(expect_keyword_line(in, "h"), "h");
    branch.config.k = static_cast<int>(parse_double(expect_keyword_line(in, "k"), "k"));
    branch.config.orientation =
        static_cast<int>(parse_double(expect_keyword_line(in, "orientation"), "orientation"));
    branch.termination = termination_from_string(expect_keyword_line(in, "termination"));
    branch.termination_detail = expect_keyword_line(in, "detail");
    branch.h_final = branch.config.h;

    const std::size_t n =
        static_cast<std::size_t>(parse_double(expect_keyword_line(in, "points"), "points"));
    branch.points.reserve(n);
    std::string line;
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::getline(in, line)) throw Error("branch file: truncated point list");
        std::istringstream ls(line);
        CurvePoint pt;
        pt.kind = branch.kind;
        int pillar = 0;
        if (!(ls >> pt.tau >> pt.a >> pt.b >> pt.residual[0] >> pt.residual[1] >> pillar))
            throw Error("branch file: malformed point line: '" + line + "'");
        pt.is_pillar = pillar != 0;
        pt.min_r = 0; // not stored; recompute when needed
        branch.points.push_back(pt);
    }
    if (!std::getline(in, line) || line != "end")
        throw Error("branch file: missing 'end' marker");
    return branch;
}

Branch parse_branch_string(const std::string& text) {
    std::istringstream in(text);
    return parse_branch(in);
}

void write_branch_file(const Branch& branch, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open for writing: " + path);
    out << serialize_branch(branch);
    if (!out) throw Error("write failed: " + path);
}

Branch read_branch_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open: " + path);
    return parse_branch(in);
}

void write_state_csv(std::ostream& out, const std::vector<StateSample>& samples) {
    if (samples.empty()) throw Error("write_state_csv: no samples");
    const std::size_t n = samples.front().x.size();
    if (n != 5 && n != 15) throw Error("write_state_csv: rows must have 5 or 15 components");
    out << "t,F,R,Fdot,Rdot,Theta";
    if (n == 15)
        for (int i = 6; i <= 15; ++i) out << ",x" << i;
    out << '\n';
    for (const auto& s : samples) {
        if (s.x.size() != n) throw Error("write_state_csv: inconsistent row width");
        out << format_g17(s.t);
        for (double v : s.x) out << ',' << format_g17(v);
        out << '\n';
    }
}

std::vector<StateSample> read_state_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw Error("state csv: empty input");
    if (line.rfind("t,F,R,Fdot,Rdot,Theta", 0) != 0)
        throw Error("state csv: unexpected header: '" + line + "'");
    std::vector<StateSample> out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        StateSample s;
        std::istringstream ls(line);
        std::string cell;
        bool first = true;
        while (std::getline(ls, cell, ',')) {
            const double v = parse_double(cell, "csv cell");
            if (first) {
                s.t = v;
                first = false;
            } else {
                s.x.push_back(v);
            }
        }
        if (s.x.size() != 5 && s.x.size() != 15)
            throw Error("state csv: row with unexpected width");
        out.push_back(std::move(s));
    }
    if (out.empty()) throw Error("state csv: no data rows");
    return out;
}

} // namespace iso3bp
