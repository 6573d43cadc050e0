#include "fkpp/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace fkpp::io {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string bc_name(Bc bc) { return bc == Bc::dirichlet ? "dirichlet" : "neumann"; }

} // namespace

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_text_atomic(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw std::runtime_error("io: cannot open " + tmp.string());
        os << content;
        if (!os) throw std::runtime_error("io: write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

void write_profile_csv(const std::filesystem::path& path, const Grid& g, const Profile& u) {
    check_profile(g, u);
    std::string out = "x,u\n";
    for (int i = 0; i <= g.n; ++i) {
        out += format_double(g.x[i]);
        out += ',';
        out += format_double(u[i]);
        out += '\n';
    }
    write_text_atomic(path, out);
}

ProfileFile read_profile_csv(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("io: cannot open " + path.string());
    ProfileFile f;
    std::string line;
    std::getline(is, line); // header
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw std::runtime_error("io: malformed profile row in " + path.string());
        f.x.push_back(std::stod(line.substr(0, comma)));
        f.u.push_back(std::stod(line.substr(comma + 1)));
    }
    if (f.x.size() < 2) throw std::runtime_error("io: profile file too short: " + path.string());
    return f;
}

Profile resample(const ProfileFile& f, const Grid& g) {
    Profile u(g.size());
    const size_t m = f.x.size();
    size_t j = 0;
    for (int i = 0; i <= g.n; ++i) {
        const double x = g.x[i];
        while (j + 2 < m && f.x[j + 1] < x) ++j;
        const double x0 = f.x[j], x1 = f.x[j + 1];
        const double t = (x1 == x0) ? 0.0 : std::clamp((x - x0) / (x1 - x0), 0.0, 1.0);
        u[i] = (1.0 - t) * f.u[j] + t * f.u[j + 1];
    }
    return u;
}

void write_branch_csv(const std::filesystem::path& path, const Branch& b) {
    std::string out = "a,A,sigma_max,stable,peaks,is_fold\n";
    for (const BranchPoint& p : b.points) {
        out += format_double(p.a);
        out += ',';
        out += format_double(p.A);
        out += ',';
        if (p.sigma_max) out += format_double(*p.sigma_max);
        out += ',';
        if (p.stable) out += (*p.stable ? "1" : "0");
        out += ',';
        out += std::to_string(p.peaks);
        out += ',';
        out += (p.is_fold ? "1" : "0");
        out += '\n';
    }
    write_text_atomic(path, out);
}

void write_branch_meta_json(const std::filesystem::path& path, const Branch& b) {
    ordered_json j;
    j["D"] = b.params.D;
    j["bc"] = bc_name(b.params.bc);
    j["N"] = b.n;
    j["options"] = {{"ds_init", b.opts.ds_init},
                    {"ds_min", b.opts.ds_min},
                    {"ds_max", b.opts.ds_max},
                    {"grow", b.opts.grow},
                    {"shrink", b.opts.shrink},
                    {"a_stop", b.opts.a_stop},
                    {"max_points", b.opts.max_points},
                    {"direction", b.opts.direction},
                    {"stability_stride", b.opts.stability_stride}};
    j["points"] = b.points.size();
    j["newton_failures"] = b.newton_failures;
    j["stall_reason"] = b.stall_reason;
    ordered_json folds = ordered_json::array();
    for (const FoldInfo& f : b.folds) {
        ordered_json jf;
        jf["index"] = f.index;
        jf["a"] = f.a;
        jf["A"] = f.A;
        jf["s"] = f.s;
        if (f.sigma_max) jf["sigma_max"] = *f.sigma_max;
        folds.push_back(jf);
    }
    j["folds"] = folds;
    write_text_atomic(path, j.dump(2) + "\n");
}

void write_spectrum_csv(const std::filesystem::path& path,
                        const std::vector<std::pair<int, std::vector<double>>>& spectra) {
    size_t k = 0;
    for (const auto& [idx, vals] : spectra) k = std::max(k, vals.size());
    std::string out = "index";
    for (size_t i = 1; i <= k; ++i) out += ",sigma" + std::to_string(i);
    out += '\n';
    for (const auto& [idx, vals] : spectra) {
        out += std::to_string(idx);
        for (size_t i = 0; i < k; ++i) {
            out += ',';
            if (i < vals.size()) out += format_double(vals[i]);
        }
        out += '\n';
    }
    write_text_atomic(path, out);
}

void write_validation_report(const std::filesystem::path& path,
                             const std::vector<ValidationRecord>& records) {
    ordered_json j = ordered_json::array();
    for (const ValidationRecord& r : records) {
        ordered_json e;
        e["quantity"] = r.quantity;
        e["numeric"] = r.numeric;
        e["oracle"] = r.oracle;
        e["abs_err"] = r.abs_err;
        e["rel_err"] = r.rel_err;
        e["tolerance"] = r.tolerance;
        e["pass"] = r.pass;
        j.push_back(e);
    }
    write_text_atomic(path, j.dump(2) + "\n");
}

} // namespace fkpp::io
